"""Lifting constructions that turn width/diameter questions into intersection questions.

Each lift of a body K lives in R^{2d} (or R^{kd} for the product lift) and is
built constraint-by-constraint from K, so the lift of an intersection is the
intersection of the lifts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    DimensionMismatch,
    GeometryError,
    HalfSpace,
    HPolytope,
    Vector,
    VBody,
    add,
    body_dim,
    dot,
    hrep,
    intersect,
    lp_solve,
    scale,
    sub,
    unit,
    vector,
)
from .norms import PolytopeNorm

WIDTH = "width"
DISCRETE = "discrete"
BOUNDARY = "boundary"
PRODUCT = "product"


def _as_hpolytope(K) -> HPolytope:
    if isinstance(K, HPolytope):
        return K
    if isinstance(K, VBody):
        return hrep(K)
    return intersect(K)


@dataclass(frozen=True)
class LiftedBody:
    """A lifted set in R^{2d} over the variables (x, y)."""

    base_dim: int
    kind: str
    polytope: HPolytope
    direction: Vector | None = None
    k: int | None = None
    facet: int | None = None

    def split(self, point: Sequence) -> tuple[Vector, Vector]:
        d = self.base_dim
        point = vector(point)
        return point[:d], point[d:]


def _pair_constraints(K: HPolytope, t) -> list[HalfSpace]:
    # x in K and x + t*y in K
    cons = []
    zero = (Fraction(0),) * K.dim
    for c in K.constraints:
        cons.append(HalfSpace(c.normal + zero, c.offset))
        cons.append(HalfSpace(c.normal + scale(t, c.normal), c.offset))
    return cons


def _equality(normal, value) -> list[HalfSpace]:
    return [HalfSpace(normal, value), HalfSpace(scale(-1, normal), -Fraction(value))]


def lift_width(K, v: Sequence) -> LiftedBody:
    """{(x, y) : x in K, x + y in K, <y, v> = 1}; nonempty iff the v-width of K is >= 1."""
    K = _as_hpolytope(K)
    v = vector(v)
    if len(v) != K.dim:
        raise DimensionMismatch("direction and body dimensions differ")
    if not any(v):
        raise GeometryError("direction must be nonzero")
    d = K.dim
    zero = (Fraction(0),) * d
    cons = _pair_constraints(K, 1) + _equality(zero + v, 1)
    return LiftedBody(d, WIDTH, HPolytope(2 * d, tuple(cons)), direction=v)


def generic_direction(d: int, bound: int) -> Vector:
    """Rational v with <v, z> != 0 for every nonzero integer z with |z_i| <= bound.

    Uses v = (1, 1/p_1, ..., 1/p_{d-1}) with distinct primes p_j > bound.
    """
    primes = []
    n = max(bound, 1) + 1
    while len(primes) < d - 1:
        if all(n % p for p in range(2, int(n**0.5) + 1)):
            primes.append(n)
        n += 1
    return (Fraction(1),) + tuple(Fraction(1, p) for p in primes)


def validate_direction(v: Sequence, bound: int) -> bool:
    """Brute-force check that no nonzero integer z in [-bound, bound]^d is orthogonal to v."""
    v = vector(v)
    rng = range(-bound, bound + 1)
    for z in itertools.product(rng, repeat=len(v)):
        if any(z) and dot(v, z) == 0:
            return False
    return True


def step_bound(K, k: int) -> int:
    """Bound on |y_i| for integer y with x, x + (k-1) y both in K."""
    d = body_dim(K)
    ext = 0
    for i in range(d):
        hi = lp_solve(unit(d, i), "max", K)
        lo = lp_solve(unit(d, i), "min", K)
        if not (hi.optimal and lo.optimal):
            raise GeometryError("step bound needs a nonempty bounded body")
        ext = max(ext, hi.optimum - lo.optimum)
    return int(ext // (k - 1))


def lift_discrete(K, k: int, v: Sequence | None = None) -> LiftedBody:
    """{(x, y) : x in K, x + (k-1) y in K, <v, y> >= 0}.

    The strict inequality <v, y> > 0 is enforced when integer points of the
    lift are enumerated, not in the polytope.  ``v`` defaults to a generic
    rational direction validated against the finite range of possible steps.
    """
    if k < 2:
        raise ValueError("discrete lift needs k >= 2")
    H = _as_hpolytope(K)
    d = H.dim
    bound = step_bound(K, k)
    if v is None:
        v = generic_direction(d, bound)
    v = vector(v)
    if not validate_direction(v, bound):
        raise GeometryError(f"direction {v} is orthogonal to a nonzero integer step within |y_i| <= {bound}")
    zero = (Fraction(0),) * d
    cons = _pair_constraints(H, k - 1) + [HalfSpace(zero + scale(-1, v), 0)]
    return LiftedBody(d, DISCRETE, HPolytope(2 * d, tuple(cons)), direction=v, k=k)


def discrete_lift_points(lifts: Sequence[LiftedBody]) -> list[tuple[Vector, Vector]]:
    """Integer points (x, y) of the intersected discrete lifts with <v, y> > 0."""
    from .lattice import integer_points

    v = lifts[0].direction
    if any(l.direction != v or l.k != lifts[0].k for l in lifts):
        raise GeometryError("discrete lifts must share direction and k")
    pts = integer_points([l.polytope for l in lifts])
    out = []
    for p in pts:
        x, y = lifts[0].split(p)
        if dot(v, y) > 0:
            out.append((x, y))
    return out


def lift_boundary(K, norm: PolytopeNorm, facet: int) -> LiftedBody:
    """Slice of {x in K, x + y in K, rho(y) = 1} over facet ``facet`` of the unit ball."""
    K = _as_hpolytope(K)
    if K.dim != norm.dim:
        raise DimensionMismatch("norm and body dimensions differ")
    d = K.dim
    zero = (Fraction(0),) * d
    vi = norm.facet_functional(facet)
    cons = _pair_constraints(K, 1) + _equality(zero + vi, 1)
    for v in norm.functionals:
        cons.append(HalfSpace(zero + v, 1))
        cons.append(HalfSpace(zero + scale(-1, v), 1))
    return LiftedBody(d, BOUNDARY, HPolytope(2 * d, tuple(cons)), direction=vi, facet=facet)


def flip(point: Sequence, d: int) -> Vector:
    """(x, y) -> (x + y, -y); maps the slice over facet L onto the slice over -L."""
    point = vector(point)
    x, y = point[:d], point[d:]
    return add(x, y) + scale(-1, y)


def opposite_facet(facet: int, norm: PolytopeNorm) -> int:
    h = norm.half_count
    return (facet + h) % (2 * h)


@dataclass(frozen=True)
class ProductLift:
    """{(x_1, y_1, ..., x_h, y_h) in K^{2h} : f = target}, h = k/2 facet pairs."""

    base_dim: int
    norm: PolytopeNorm
    polytope: HPolytope
    target: Fraction | None = Fraction(1)

    def blocks(self, point: Sequence) -> list[tuple[Vector, Vector]]:
        d = self.base_dim
        point = vector(point)
        return [(point[2 * i * d:(2 * i + 1) * d], point[(2 * i + 1) * d:(2 * i + 2) * d])
                for i in range(self.norm.half_count)]

    def terms(self, point: Sequence) -> list[Fraction]:
        return [dot(sub(y, x), v) for (x, y), v in zip(self.blocks(point), self.norm.functionals)]

    def f(self, point: Sequence) -> Fraction:
        return sum(self.terms(point), Fraction(0))

    def g(self, point: Sequence) -> Fraction:
        return max(self.terms(point))


def f_functional(norm: PolytopeNorm) -> Vector:
    """Coefficient vector of f(x_1, y_1, ...) = sum <y_i - x_i, v_i>."""
    out = []
    for v in norm.functionals:
        out.extend(-a for a in v)
        out.extend(v)
    return tuple(out)


def lift_product(K, norm: PolytopeNorm, target=1) -> ProductLift:
    """k = facet_count copies of K with f fixed to ``target`` (left free when target is None)."""
    K = _as_hpolytope(K)
    if K.dim != norm.dim:
        raise DimensionMismatch("norm and body dimensions differ")
    d = K.dim
    nblocks = norm.facet_count
    cons = []
    for b in range(nblocks):
        pre = (Fraction(0),) * (b * d)
        post = (Fraction(0),) * ((nblocks - b - 1) * d)
        for c in K.constraints:
            cons.append(HalfSpace(pre + c.normal + post, c.offset))
    if target is not None:
        cons += _equality(f_functional(norm), target)
        target = Fraction(target)
    return ProductLift(d, norm, HPolytope(nblocks * d, tuple(cons)), target)
