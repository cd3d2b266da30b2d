"""Exact rational geometry: half-spaces, H-polytopes, V-bodies and LP queries.

Points and directions are plain tuples of ``Fraction``.  A convex body is an
``HPolytope`` (finite list of inequalities) or a ``VBody`` (convex hull of a
finite point list).  Most queries also accept a sequence of bodies, which is
read as their intersection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, simplex_max, to_fraction

Vector = tuple  # tuple[Fraction, ...]


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class EmptyBody(GeometryError):
    pass


class UnboundedBody(GeometryError):
    pass


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing to coerce float {x!r} to an exact rational")
    return Fraction(x)


def vector(coords: Iterable) -> Vector:
    return tuple(as_rational(c) for c in coords)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(t, a: Sequence) -> Vector:
    return tuple(t * x for x in a)


def unit(d: int, i: int, sign: int = 1) -> Vector:
    return tuple(Fraction(sign if j == i else 0) for j in range(d))


def _check_dim(expected: int, got: int, what: str = "vector"):
    if expected != got:
        raise DimensionMismatch(f"{what} has dimension {got}, expected {expected}")


@dataclass(frozen=True)
class HalfSpace:
    """The closed half-space ``<normal, x> <= offset``."""

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", vector(self.normal))
        object.__setattr__(self, "offset", as_rational(self.offset))
        if not any(self.normal):
            raise GeometryError("half-space normal must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, x: Sequence) -> bool:
        return dot(self.normal, x) <= self.offset

    def slack(self, x: Sequence) -> Fraction:
        return self.offset - dot(self.normal, x)


@dataclass(frozen=True)
class HPolytope:
    """Intersection of finitely many closed half-spaces in R^dim.

    An empty constraint list is the whole space.
    """

    dim: int
    constraints: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError("dimension must be positive")
        cons = tuple(c if isinstance(c, HalfSpace) else HalfSpace(*c) for c in self.constraints)
        for c in cons:
            _check_dim(self.dim, c.dim, "constraint normal")
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def from_inequalities(cls, A, b) -> "HPolytope":
        A = [vector(row) for row in A]
        return cls(len(A[0]), tuple(HalfSpace(a, bi) for a, bi in zip(A, b)))

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "HPolytope":
        d = len(lows)
        cons = []
        for i in range(d):
            cons.append(HalfSpace(unit(d, i), highs[i]))
            cons.append(HalfSpace(unit(d, i, -1), -as_rational(lows[i])))
        return cls(d, tuple(cons))

    def contains(self, x: Sequence) -> bool:
        return all(c.contains(x) for c in self.constraints)

    def with_constraints(self, extra: Iterable[HalfSpace]) -> "HPolytope":
        return HPolytope(self.dim, self.constraints + tuple(extra))

    def scaled(self, t) -> "HPolytope":
        """The dilate ``t * self`` for t > 0."""
        t = as_rational(t)
        if t <= 0:
            raise GeometryError("scale factor must be positive")
        return HPolytope(self.dim, tuple(HalfSpace(c.normal, c.offset * t) for c in self.constraints))

    def translated(self, shift: Sequence) -> "HPolytope":
        shift = vector(shift)
        return HPolytope(
            self.dim, tuple(HalfSpace(c.normal, c.offset + dot(c.normal, shift)) for c in self.constraints)
        )


@dataclass(frozen=True)
class VBody:
    """Convex hull of a nonempty finite point list."""

    dim: int
    points: tuple

    def __post_init__(self):
        pts = tuple(vector(p) for p in self.points)
        if not pts:
            raise GeometryError("a V-body needs at least one point")
        for p in pts:
            _check_dim(self.dim, len(p), "point")
        object.__setattr__(self, "points", pts)

    def contains(self, x: Sequence) -> bool:
        return convex_coefficients(x, self.points) is not None

    def scaled(self, t) -> "VBody":
        t = as_rational(t)
        if t <= 0:
            raise GeometryError("scale factor must be positive")
        return VBody(self.dim, tuple(scale(t, p) for p in self.points))

    def translated(self, shift: Sequence) -> "VBody":
        return VBody(self.dim, tuple(add(p, shift) for p in self.points))


ConvexBody = Union[HPolytope, VBody]


@dataclass(frozen=True)
class LPResult:
    status: str
    optimum: Fraction | None = None
    witness: Vector | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _bodies(body) -> tuple:
    if isinstance(body, (HPolytope, VBody)):
        return (body,)
    bodies = tuple(body)
    if not bodies:
        raise GeometryError("empty list of bodies: ambient dimension is ambiguous")
    return bodies


def body_dim(body) -> int:
    bodies = _bodies(body)
    d = bodies[0].dim
    for b in bodies[1:]:
        _check_dim(d, b.dim, "body")
    return d


@dataclass
class _System:
    # variables: x (dim, free) followed by convex weights of each V-body (>= 0)
    dim: int
    A: list = field(default_factory=list)
    b: list = field(default_factory=list)
    nvars: int = 0

    @property
    def free(self):
        return [True] * self.dim + [False] * (self.nvars - self.dim)

    def row(self, coeffs: dict, rhs):
        r = [0] * self.nvars
        for j, v in coeffs.items():
            r[j] = v
        self.A.append(r)
        self.b.append(rhs)


def _system(bodies: Sequence[ConvexBody], dim: int) -> _System:
    nv = dim + sum(len(b.points) for b in bodies if isinstance(b, VBody))
    sys_ = _System(dim, nvars=nv)
    nxt = dim
    for body in bodies:
        if isinstance(body, HPolytope):
            for c in body.constraints:
                sys_.row(dict(enumerate(c.normal)), c.offset)
        else:
            lam = range(nxt, nxt + len(body.points))
            nxt += len(body.points)
            for i in range(dim):
                eq = {i: Fraction(1)}
                for j, p in zip(lam, body.points):
                    eq[j] = -p[i]
                sys_.row(eq, 0)
                sys_.row({k: -v for k, v in eq.items()}, 0)
            sys_.row({j: 1 for j in lam}, 1)
            sys_.row({j: -1 for j in lam}, -1)
    return sys_


def lp_solve(objective: Sequence, sense: str, body) -> LPResult:
    """Optimize a linear objective exactly over a body or an intersection of bodies.

    ``sense`` is ``"max"`` or ``"min"``.  The optimal witness satisfies every
    constraint exactly and attains the optimum exactly.
    """
    bodies = _bodies(body)
    d = body_dim(bodies)
    c = vector(objective)
    _check_dim(d, len(c), "objective")
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    sign = 1 if sense == "max" else -1
    sys_ = _system(bodies, d)
    cc = [sign * ci for ci in c] + [0] * (sys_.nvars - d)
    if not sys_.A:
        # whole space
        return LPResult(UNBOUNDED) if any(c) else LPResult(OPTIMAL, Fraction(0), (Fraction(0),) * d)
    status, value, x = simplex_max(cc, sys_.A, sys_.b, sys_.free)
    if status != OPTIMAL:
        return LPResult(status)
    w = tuple(x[:d])
    assert all(dot(row, x) <= rhs for row, rhs in zip(sys_.A, sys_.b))
    assert dot(c, w) == sign * value
    return LPResult(OPTIMAL, sign * value, w)


def feasible_point(body) -> Vector | None:
    res = lp_solve((0,) * body_dim(body), "max", body)
    return res.witness if res.optimal else None


def is_empty(body) -> bool:
    return feasible_point(body) is None


def intersect(bodies: Sequence[ConvexBody], dim: int | None = None) -> HPolytope:
    """Concatenate constraint lists; V-bodies enter through their H-representation."""
    bodies = tuple(bodies)
    if not bodies:
        if dim is None:
            raise GeometryError("intersection of no bodies needs an explicit dimension")
        return HPolytope(dim)
    d = body_dim(bodies)
    if dim is not None:
        _check_dim(dim, d, "body")
    cons = []
    for b in bodies:
        cons.extend(b.constraints if isinstance(b, HPolytope) else hrep(b).constraints)
    return HPolytope(d, tuple(cons))


def convex_coefficients(point: Sequence, points: Sequence[Sequence]) -> tuple | None:
    """Convex weights expressing ``point`` in terms of ``points``, or None."""
    point = vector(point)
    d = len(point)
    A, b = [], []
    for i in range(d):
        row = [p[i] for p in points]
        A.append(row)
        b.append(point[i])
        A.append([-v for v in row])
        b.append(-point[i])
    A.append([1] * len(points))
    b.append(1)
    A.append([-1] * len(points))
    b.append(-1)
    status, _, lam = simplex_max([0] * len(points), A, b, [False] * len(points))
    if status == INFEASIBLE:
        return None
    return tuple(lam)


def member(point: Sequence, body) -> bool:
    """Exact membership in a body, or in every body of a sequence."""
    point = vector(point)
    for b in _bodies(body):
        _check_dim(b.dim, len(point), "point")
        if not b.contains(point):
            return False
    return True


def contains_body(outer, inner) -> bool:
    """Whether ``inner`` is a subset of the H-polytope ``outer`` (one LP per constraint)."""
    if is_empty(inner):
        return True
    for c in outer.constraints:
        res = lp_solve(c.normal, "max", inner)
        if res.status == UNBOUNDED or res.optimum > c.offset:
            return False
    return True


# ---------------------------------------------------------------------------
# exact linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[as_rational(v) for v in r] for r in rows]
    pivots = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {z : rows z = 0}, one vector per free column."""
    R, pivots = rref(rows) if rows else ([], [])
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        z = [Fraction(0)] * ncols
        z[f] = Fraction(1)
        for row, p in zip(R, pivots):
            z[p] = -row[f]
        basis.append(tuple(z))
    return basis


def solve_square(A: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Unique solution of A x = b for square A, or None if A is singular."""
    n = len(A)
    M = [[as_rational(v) for v in row] + [as_rational(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        prow = M[col]
        for i in range(col + 1, n):
            f = M[i][col]
            if f:
                f *= inv
                M[i] = [a - f * p for a, p in zip(M[i], prow)]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return tuple(x)


def primitive(v: Sequence) -> Vector:
    """Positive multiple of a rational vector with coprime integer entries."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in v)


# ---------------------------------------------------------------------------
# vertices, H-representation, Radon partitions


def _normalized(c: HalfSpace) -> tuple:
    a = primitive(c.normal)
    i = next(i for i, x in enumerate(a) if x)
    return a, c.offset * a[i] / c.normal[i]


def dedupe_constraints(body: HPolytope) -> HPolytope:
    seen = {}
    for c in body.constraints:
        key = _normalized(c)
        seen.setdefault(key, c)
    return HPolytope(body.dim, tuple(seen.values()))


def check_bounded(body) -> bool:
    """False if empty; raises UnboundedBody if some coordinate is unbounded."""
    d = body_dim(body)
    for i in range(d):
        for s in (1, -1):
            res = lp_solve(unit(d, i, s), "max", body)
            if res.status == INFEASIBLE:
                return False
            if res.status == UNBOUNDED:
                raise UnboundedBody(f"body is unbounded along {'+' if s > 0 else '-'}e{i + 1}")
    return True


def recession_direction(body) -> Vector | None:
    """A nonzero r with x + t r in the body for all t >= 0, or None if bounded.

    Only meaningful for nonempty H-polytopes (the cone is {r : A r <= 0}).
    """
    if not isinstance(body, HPolytope):
        body = intersect(body)
    d = body.dim
    cone = [HalfSpace(c.normal, 0) for c in body.constraints]
    for i in range(d):
        for s in (1, -1):
            box = HPolytope(d, tuple(cone) + (HalfSpace(unit(d, i, s), 1),))
            res = lp_solve(unit(d, i, s), "max", box)
            if res.optimal and res.optimum > 0:
                return res.witness
    return None


def vertices(body) -> list[Vector]:
    """Exact vertex set of a bounded body, sorted lexicographically.

    H-polytopes are handled by enumerating d-subsets of constraints, so this
    is meant for small dimension and modest constraint counts.
    """
    if isinstance(body, VBody):
        return _hull_vertices(body)
    if not isinstance(body, HPolytope):
        body = intersect(body)
    if not check_bounded(body):
        return []
    body = dedupe_constraints(body)
    d = body.dim
    A = [[mpq(a.numerator, a.denominator) for a in c.normal] for c in body.constraints]
    b = [mpq(c.offset.numerator, c.offset.denominator) for c in body.constraints]
    found = set()
    for subset in itertools.combinations(range(len(A)), d):
        x = _solve_mpq([A[i] for i in subset], [b[i] for i in subset])
        if x is None or x in found:
            continue
        if all(sum(a * xi for a, xi in zip(row, x)) <= bi for row, bi in zip(A, b)):
            found.add(x)
    return sorted(tuple(to_fraction(c) for c in x) for x in found)


def _solve_mpq(A, b):
    # Gaussian elimination on a small square system; None when singular
    n = len(A)
    M = [row + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        prow = M[col]
        for i in range(col + 1, n):
            f = M[i][col]
            if f:
                f = f / prow[col]
                M[i] = [a - f * p for a, p in zip(M[i], prow)]
    x = [mpq(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return tuple(x)


def _hull_vertices(body: VBody) -> list[Vector]:
    pts = sorted(set(body.points))
    if len(pts) == 1:
        return pts
    out = []
    for i, p in enumerate(pts):
        rest = pts[:i] + pts[i + 1:]
        if convex_coefficients(p, rest) is None:
            out.append(p)
    return out


@lru_cache(maxsize=None)
def hrep(body: VBody) -> HPolytope:
    """Exact H-representation of conv(points), including lower-dimensional hulls.

    Equalities of the affine hull appear as pairs of opposite inequalities;
    facets come from hyperplanes through r affinely independent points, where
    r is the dimension of the hull.
    """
    pts = sorted(set(body.points))
    d = body.dim
    p0 = pts[0]
    diffs = [sub(p, p0) for p in pts[1:]]
    normals = nullspace(diffs, d) if diffs else [unit(d, i) for i in range(d)]
    r = d - len(normals)
    cons = []
    for nrm in normals:
        nrm = primitive(nrm)
        cons.append(HalfSpace(nrm, dot(nrm, p0)))
        cons.append(HalfSpace(scale(-1, nrm), -dot(nrm, p0)))
    seen = set()
    for subset in itertools.combinations(range(len(pts)), r) if r else ():
        base = pts[subset[0]]
        eqs = list(normals) + [sub(pts[i], base) for i in subset[1:]]
        ns = nullspace(eqs, d)
        if len(ns) != 1:
            continue
        a = primitive(ns[0])
        vals = [dot(a, p) for p in pts]
        top = dot(a, base)
        for sgn in (1, -1):
            if all(sgn * v <= sgn * top for v in vals):
                key = (scale(sgn, a), sgn * top)
                if key not in seen:
                    seen.add(key)
                    cons.append(HalfSpace(*key))
    return HPolytope(d, tuple(cons))


def affine_dependence(points: Sequence[Sequence]) -> Vector:
    """A nonzero mu with sum mu_i p_i = 0 and sum mu_i = 0; first nonzero entry positive."""
    pts = [vector(p) for p in points]
    d = len(pts[0])
    rows = [[p[i] for p in pts] for i in range(d)] + [[Fraction(1)] * len(pts)]
    ns = nullspace(rows, len(pts))
    if not ns:
        raise GeometryError("points are affinely independent")
    mu = ns[0]
    lead = next(m for m in mu if m)
    return tuple(m / abs(lead) for m in mu)


def radon_partition(points: Sequence[Sequence]) -> tuple[list[Vector], list[Vector], Vector]:
    """Split points into two parts whose convex hulls share the returned witness."""
    pts = [vector(p) for p in points]
    if not pts:
        raise GeometryError("no points")
    d = len(pts[0])
    for p in pts:
        _check_dim(d, len(p), "point")
    if len(pts) < d + 2:
        raise GeometryError(f"Radon partition needs at least {d + 2} points in dimension {d}")
    mu = affine_dependence(pts)
    part_a = [p for p, m in zip(pts, mu) if m > 0]
    part_b = [p for p, m in zip(pts, mu) if m <= 0]
    total = sum(m for m in mu if m > 0)
    witness = tuple(
        sum((m * p[i] for p, m in zip(pts, mu) if m > 0), Fraction(0)) / total for i in range(d)
    )
    return part_a, part_b, witness
