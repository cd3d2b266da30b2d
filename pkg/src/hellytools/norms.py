"""Polytope norms, directional widths and exact diameters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    DimensionMismatch,
    EmptyBody,
    GeometryError,
    HalfSpace,
    HPolytope,
    UnboundedBody,
    Vector,
    body_dim,
    dot,
    lp_solve,
    rank,
    sub,
    vector,
    vertices,
)
from .lp import INFEASIBLE, UNBOUNDED


@dataclass(frozen=True)
class PolytopeNorm:
    """Norm whose unit ball is ``{x : |<x, v_i>| <= 1 for all i}``.

    Only one functional per pair of opposite facets is stored, so the ball
    has ``2 * len(functionals)`` facets (assuming no functional is redundant).
    """

    dim: int
    functionals: tuple
    name: str = "custom"

    def __post_init__(self):
        fs = tuple(vector(v) for v in self.functionals)
        for v in fs:
            if len(v) != self.dim:
                raise DimensionMismatch(f"functional {v} does not live in R^{self.dim}")
        if not fs or rank(fs) < self.dim:
            raise GeometryError("facet functionals must span R^d, otherwise the unit ball is unbounded")
        object.__setattr__(self, "functionals", fs)

    @classmethod
    def linf(cls, d: int) -> "PolytopeNorm":
        return cls(d, tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)), "linf")

    @classmethod
    def l1(cls, d: int) -> "PolytopeNorm":
        signs = itertools.product((1, -1), repeat=d - 1)
        return cls(d, tuple((Fraction(1),) + tuple(Fraction(s) for s in sg) for sg in signs), "l1")

    @property
    def half_count(self) -> int:
        return len(self.functionals)

    @property
    def facet_count(self) -> int:
        return 2 * len(self.functionals)

    def facet_functional(self, i: int) -> Vector:
        """Outer functional of facet ``i``; facet ``i + k/2`` is the opposite of facet ``i``."""
        h = self.half_count
        if not 0 <= i < 2 * h:
            raise IndexError(f"facet index {i} out of range for {2 * h} facets")
        v = self.functionals[i % h]
        return v if i < h else tuple(-x for x in v)

    def ball(self) -> HPolytope:
        cons = []
        for v in self.functionals:
            cons.append(HalfSpace(v, 1))
            cons.append(HalfSpace(tuple(-x for x in v), 1))
        return HPolytope(self.dim, tuple(cons))

    def __call__(self, x: Sequence) -> Fraction:
        return rho(self, x)


def rho(norm: PolytopeNorm, x: Sequence) -> Fraction:
    x = vector(x)
    if len(x) != norm.dim:
        raise DimensionMismatch(f"point has dimension {len(x)}, norm lives in R^{norm.dim}")
    return max(abs(dot(x, v)) for v in norm.functionals)


@dataclass(frozen=True)
class WidthCertificate:
    """``value = <x - y, direction>`` for the attaining pair ``(x, y)``."""

    value: Fraction
    attaining_pair: tuple
    direction: Vector
    index: int | None = None


def _support(body, v, sense):
    res = lp_solve(v, sense, body)
    if res.status == INFEASIBLE:
        raise EmptyBody("body is empty")
    if res.status == UNBOUNDED:
        raise UnboundedBody(f"body is unbounded in direction {'+' if sense == 'max' else '-'}{v}")
    return res


def v_width(body, v: Sequence) -> WidthCertificate:
    """Width of a body (or intersection of bodies) in direction ``v``, by two exact LPs.

    Raises EmptyBody or UnboundedBody.
    """
    v = vector(v)
    if not any(v):
        raise GeometryError("direction must be nonzero")
    if len(v) != body_dim(body):
        raise DimensionMismatch("direction and body dimensions differ")
    hi = _support(body, v, "max")
    lo = _support(body, v, "min")
    return WidthCertificate(hi.optimum - lo.optimum, (hi.witness, lo.witness), v)


def rho_diameter(body, norm: PolytopeNorm) -> WidthCertificate:
    """Diameter in a polytope norm: the largest width over its facet functionals."""
    if body_dim(body) != norm.dim:
        raise DimensionMismatch("norm and body dimensions differ")
    best = None
    for i, v in enumerate(norm.functionals):
        w = v_width(body, v)
        if best is None or w.value > best.value:
            best = WidthCertificate(w.value, w.attaining_pair, v, i)
    return best


@dataclass(frozen=True)
class L2Diameter:
    squared: Fraction
    pair: tuple

    def at_least(self, t) -> bool:
        t = Fraction(t)
        return t <= 0 or self.squared >= t * t


def squared_norm(x: Sequence) -> Fraction:
    return dot(x, x)


def l2_diameter_exact(body) -> L2Diameter:
    """Euclidean diameter as an exact squared rational, attained at a vertex pair."""
    pts = vertices(body)
    if not pts:
        raise EmptyBody("body is empty")
    best = L2Diameter(Fraction(0), (pts[0], pts[0]))
    for p, q in itertools.combinations(pts, 2):
        s = squared_norm(sub(p, q))
        if s > best.squared:
            best = L2Diameter(s, (p, q))
    return best


@dataclass(frozen=True)
class NormRelation:
    p: str
    dim: int
    linf_diameter: Fraction
    lp_value: Fraction  # l_p diameter, or its square when p == "2"
    holds: bool


def lp_norm_relation_check(body, p: str, d: int | None = None) -> NormRelation:
    """Check ``diam_inf >= d**(-1/p) * diam_p`` exactly on one body.

    ``p`` is one of ``"1"``, ``"2"``, ``"inf"``.  For p = 2 the comparison is
    done on squares: ``d * diam_inf**2 >= diam_2**2``.
    """
    dim = body_dim(body)
    d = dim if d is None else d
    linf = rho_diameter(body, PolytopeNorm.linf(dim)).value
    p = str(p)
    if p == "1":
        val = rho_diameter(body, PolytopeNorm.l1(dim)).value
        holds = d * linf >= val
    elif p == "2":
        val = l2_diameter_exact(body).squared
        holds = d * linf * linf >= val
    elif p in ("inf", "oo"):
        val, holds = linf, True
    else:
        raise ValueError(f"unsupported p {p!r}; use '1', '2' or 'inf'")
    return NormRelation(p, d, linf, val, holds)
