"""Extremal and counterexample families, each returned only after it verifies itself."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import (
    ContainsKColinear,
    DiameterAtLeast,
    Family,
    check_helly,
)
from .geometry import (
    GeometryError,
    HalfSpace,
    HPolytope,
    VBody,
    add,
    dot,
    intersect,
    lp_solve,
    member,
    nullspace,
    scale,
    sub,
    vertices,
)
from .lattice import integer_points
from .norms import PolytopeNorm, rho_diameter, squared_norm


class ConstructionError(GeometryError):
    pass


def _halfspace_body(normal, offset) -> HPolytope:
    return HPolytope(len(normal), (HalfSpace(tuple(normal), offset),))


# ---------------------------------------------------------------------------
# kd half-spaces whose (kd-1)-subfamilies all have norm-diameter > 2


@dataclass
class MinkowskiReport:
    norm: str
    dim: int
    theta: Fraction
    shrinks: int
    bullets: dict  # facet index -> (contains others, singleton, d-1 escape)
    subset_size: int
    subsets: int
    subsets_above_2: int
    subset_values: list
    full_diameter: Fraction
    verified: bool

    def to_json(self) -> dict:
        return {
            "construction": "minkowski-tight",
            "norm": self.norm,
            "dim": self.dim,
            "theta": str(self.theta),
            "shrinks": self.shrinks,
            "bullets": {str(i): list(b) for i, b in self.bullets.items()},
            "subset_size": self.subset_size,
            "subsets": self.subsets,
            "subsets_above_2": self.subsets_above_2,
            "subset_values": [[list(ids), str(v)] for ids, v in self.subset_values],
            "full_diameter": str(self.full_diameter),
            "verified": self.verified,
        }


def facet_points(norm: PolytopeNorm) -> list:
    """Centroid of the vertices of each facet of the unit ball, facets ordered as facet_functional."""
    verts = vertices(norm.ball())
    out = []
    for i in range(norm.facet_count):
        v = norm.facet_functional(i)
        on = [p for p in verts if dot(p, v) == 1]
        if not on:
            raise ConstructionError(f"facet {i} has no vertices")
        n = len(on)
        out.append(tuple(sum(p[j] for p in on) / n for j in range(norm.dim)))
    return out


def _tilt_directions(v):
    # simplex directions t_1, ..., t_{d-1}, -sum t_j in the hyperplane orthogonal to v
    basis = nullspace([v], len(v))
    last = tuple(-sum(t[j] for t in basis) for j in range(len(v)))
    return basis + [last]


def _facet_halfspaces(v, x, theta):
    out = []
    for s in _tilt_directions(v):
        n = add(v, scale(theta, s))
        out.append(HalfSpace(n, dot(n, x)))
    return out


def _bullets(norm, i, cons, points):
    v = norm.facet_functional(i)
    x = points[i]
    d = norm.dim
    contains = all(c.contains(p) for c in cons for j, p in enumerate(points) if j != i)
    # the half-spaces meet the facet hyperplane only at x: every tangential coordinate is pinned
    on_facet = HPolytope(d, tuple(cons) + (HalfSpace(v, 1), HalfSpace(scale(-1, v), -1)))
    singleton = True
    for t in nullspace([v], d):
        hi = lp_solve(t, "max", on_facet)
        lo = lp_solve(t, "min", on_facet)
        if not (hi.optimal and lo.optimal and hi.optimum == lo.optimum == dot(t, x)):
            singleton = False
    escape = True
    for drop in range(len(cons)):
        rest = HPolytope(d, tuple(c for j, c in enumerate(cons) if j != drop))
        res = lp_solve(v, "max", rest)
        if res.optimal and res.optimum <= 1:
            escape = False
    return contains, singleton, escape


def gen_minkowski_tight(norm: PolytopeNorm, d: int | None = None, theta=Fraction(1, 2),
                        max_shrinks: int = 40, jobs: int | None = None) -> tuple[Family, MinkowskiReport]:
    """kd half-spaces, d per facet, tilted about a point of each facet.

    Every (kd-1)-subfamily has norm-diameter > 2 while the whole family lies
    inside the unit ball.  The tilt theta is halved until all per-facet
    properties and the diameter report verify.
    """
    d = norm.dim if d is None else d
    if d != norm.dim:
        raise ValueError("norm dimension does not match d")
    if d < 2:
        raise ValueError("the construction needs d >= 2")
    points = facet_points(norm)
    k = norm.facet_count
    theta = Fraction(theta)
    width = len(str(k))
    for shrinks in range(max_shrinks + 1):
        cons = {i: _facet_halfspaces(norm.facet_functional(i), points[i], theta) for i in range(k)}
        bullets = {i: _bullets(norm, i, cons[i], points) for i in range(k)}
        if all(all(b) for b in bullets.values()):
            members = tuple((f"L{i:0{width}d}h{j}", HPolytope(d, (c,)))
                            for i in range(k) for j, c in enumerate(cons[i]))
            family = Family(d, members)
            rep = check_helly(family, k * d - 1, DiameterAtLeast(norm, 2, strict=True), jobs=jobs)
            full = rho_diameter(family.bodies, norm).value
            if rep.alpha == 1 and full <= 2:
                values = []
                for drop_id, _ in family.sorted_members():
                    rest = [b for i, b in family.members if i != drop_id]
                    ev = DiameterAtLeast(norm, 2, strict=True).evaluate(rest)
                    values.append(((drop_id,), ev.value))
                report = MinkowskiReport(norm.name, d, theta, shrinks, bullets, k * d - 1, rep.total,
                                         rep.satisfying, values, full, True)
                return family, report
        theta /= 2
    raise ConstructionError(f"verification still failing after {max_shrinks} shrinks (theta={theta}); "
                            f"bullets={bullets}")


# ---------------------------------------------------------------------------
# d 2^d sets: every d 2^d - 1 of them hold 3 colinear integer points, all of them do not


@dataclass
class DiscreteReport:
    dim: int
    members: int
    subset_size: int
    subsets: int
    satisfying: int
    alpha: Fraction
    full_has_colinear: bool
    full_lattice_points: list
    membership_ok: bool
    verified: bool

    def to_json(self) -> dict:
        return {
            "construction": "discrete-tight",
            "dim": self.dim,
            "members": self.members,
            "subset_size": self.subset_size,
            "subsets": self.subsets,
            "satisfying": self.satisfying,
            "alpha": str(self.alpha),
            "full_has_3_colinear": self.full_has_colinear,
            "full_lattice_points": [list(p) for p in self.full_lattice_points],
            "membership_ok": self.membership_ok,
            "verified": self.verified,
        }


def discrete_sets(d: int) -> tuple[list, list]:
    """R (exactly one coordinate in {0, 3}, the rest in {1, 2}) and Q = {1, 2}^d."""
    R = [p for p in itertools.product(range(4), repeat=d) if sum(c in (0, 3) for c in p) == 1]
    Q = list(itertools.product((1, 2), repeat=d))
    return R, Q


def gen_discrete_tight(d: int, jobs: int | None = None) -> tuple[Family, DiscreteReport]:
    if d < 1:
        raise ValueError("d must be positive")
    R, Q = discrete_sets(d)
    members = []
    for x in R:
        pts = Q + [p for p in R if p != x]
        members.append(("omit_" + "_".join(str(c) for c in x), VBody(d, tuple(tuple(Fraction(c) for c in p) for p in pts))))
    family = Family(d, tuple(members))
    membership = all(
        all(member(p, body) for p in Q + [q for q in R if q != x]) and not member(x, body)
        for x, (_, body) in zip(R, members)
    )
    m = len(R) - 1
    if m >= 1:
        rep = check_helly(family, m, ContainsKColinear(3), jobs=jobs)
        total, sat, alpha, full = rep.total, rep.satisfying, rep.alpha, rep.conclusion
    else:
        total, sat, alpha, full = 0, 0, Fraction(1), ContainsKColinear(3).evaluate(family.bodies).holds
    lattice = integer_points(family.bodies)
    ok = membership and alpha == 1 and not full and sorted(lattice) == sorted(Q)
    report = DiscreteReport(d, len(R), m, total, sat, alpha, full, lattice, membership, ok)
    if not ok:
        raise ConstructionError(f"discrete construction failed verification: {report.to_json()}")
    return family, report


# ---------------------------------------------------------------------------
# tangent half-planes of the disk: every n of them have diameter >= 1, all of them < 1


def _tangent_diameter(angles, cap=100.0) -> float:
    """Euclidean diameter of the intersection of the disk's tangent half-planes at the given angles."""
    a = sorted(float(t) % (2 * math.pi) for t in angles)
    if len(a) < 3:
        return cap
    gaps = [(a[(i + 1) % len(a)] - a[i]) % (2 * math.pi) for i in range(len(a))]
    if max(gaps) >= math.pi - 1e-12:
        return cap
    verts = []
    for i in range(len(a)):
        t1, t2 = a[i], a[(i + 1) % len(a)]
        # intersection of <y, u(t1)> = 1 and <y, u(t2)> = 1
        mid, half = (t1 + gaps[i] / 2), gaps[i] / 2
        r = 1.0 / math.cos(half)
        verts.append((r * math.cos(mid), r * math.sin(mid)))
    best = 0.0
    for p, q in itertools.combinations(verts, 2):
        best = max(best, math.hypot(p[0] - q[0], p[1] - q[1]))
    return min(cap, best)


def estimate_s(n: int, cap: float = 100.0) -> float:
    """Numerical min over n tangent half-planes of the diameter of their intersection."""
    from scipy.optimize import minimize

    if n < 3:
        return cap
    start = [2 * math.pi * j / n for j in range(n)]
    best = _tangent_diameter(start, cap)
    # the first angle is fixed by rotational symmetry
    res = minimize(lambda t: _tangent_diameter([0.0, *t], cap), start[1:], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-13, "maxiter": 20000})
    return min(best, float(res.fun))


def rational_unit_point(phi: float, den: int = 10**4) -> tuple:
    """Rational point on the unit circle near angle phi, via t = tan(phi/2)."""
    t = Fraction(math.tan(phi / 2)).limit_denominator(den)
    q = 1 + t * t
    return ((1 - t * t) / q, 2 * t / q)


@dataclass
class NonpolytopeReport:
    n: int
    m_gon: int
    s_estimate: float
    s_used: Fraction
    epsilon: Fraction
    circumradius_sq: Fraction
    subsets: int
    satisfying: int
    full_diameter_sq: Fraction
    unscaled_diameter_sq: Fraction
    verified: bool
    flags: tuple = ("s_n estimated numerically",)

    def to_json(self) -> dict:
        return {
            "construction": "nonpolytope-demo",
            "n": self.n,
            "m_gon": self.m_gon,
            "s_estimate": self.s_estimate,
            "s_used": str(self.s_used),
            "epsilon": str(self.epsilon),
            "circumradius_sq": str(self.circumradius_sq),
            "subsets": self.subsets,
            "satisfying": self.satisfying,
            "full_diameter_sq": str(self.full_diameter_sq),
            "unscaled_diameter_sq": str(self.unscaled_diameter_sq),
            "verified": self.verified,
            "flags": list(self.flags),
        }


def gen_nonpolytope_demo(n: int, m_gon: int, offset: float = 0.1, jobs: int | None = None):
    """Scaled tangent half-planes of a near-regular polygon around the unit disk.

    Tangent points are rational points of the unit circle, so every emitted
    half-plane {y : <y, u> <= 1/s} is exactly tangent to the scaled disk.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m_gon < max(3, 3 * n):
        raise ValueError("m_gon must be at least 3n (and at least 3)")
    s_est = estimate_s(n)
    if not s_est > 2:
        raise ConstructionError(f"numerical s_n estimate {s_est} is not above 2")
    s = Fraction(s_est * (1 - 1e-9)).limit_denominator(10**9)
    if s > Fraction(s_est):
        s = Fraction(math.floor(s_est * 10**8), 10**8)
    eps = (s - 2) / 3
    normals = [rational_unit_point(2 * math.pi * j / m_gon + offset) for j in range(m_gon)]
    polygon = HPolytope(2, tuple(HalfSpace(u, 1) for u in normals))
    poly_verts = vertices(polygon)
    circum_sq = max(squared_norm(p) for p in poly_verts)
    if circum_sq > (1 + eps) ** 2:
        raise ConstructionError(f"polygon circumradius^2 {float(circum_sq)} exceeds (1+eps)^2; raise m_gon")
    width = len(str(m_gon))
    members = tuple((f"T{j:0{width}d}", _halfspace_body(u, 1 / s)) for j, u in enumerate(normals))
    family = Family(2, members)
    m = min(n, m_gon)
    rep = check_helly(family, m, DiameterAtLeast(None, 1), jobs=jobs)
    full_sq = rep.conclusion_value
    unscaled = max(squared_norm(sub(p, q)) for p, q in itertools.combinations(poly_verts, 2))
    ok = rep.alpha == 1 and full_sq < 1 and unscaled >= 4
    report = NonpolytopeReport(n, m_gon, s_est, s, eps, circum_sq, rep.total, rep.satisfying,
                               full_sq, unscaled, ok)
    if not ok:
        raise ConstructionError(f"non-polytope demo failed verification: {report.to_json()}")
    return family, report
