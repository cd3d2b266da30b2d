"""Integer points and colinear integer points inside convex bodies."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .geometry import (
    UnboundedBody,
    VBody,
    _bodies,
    body_dim,
    lp_solve,
    member,
    unit,
)
from .lp import INFEASIBLE, UNBOUNDED

IntVector = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class LatticeWitness:
    """k colinear integer points base + j*step, 0 <= j < count."""

    base: IntVector
    step: IntVector
    count: int

    def points(self) -> list[IntVector]:
        return [tuple(b + j * s for b, s in zip(self.base, self.step)) for j in range(self.count)]

    def to_json(self) -> dict:
        return {"base": list(self.base), "step": list(self.step), "k": self.count}


def bounding_box(body) -> tuple[IntVector, IntVector] | None:
    """Integer box containing the body (or intersection), None if it is empty.

    Raises UnboundedBody when some coordinate is unbounded.
    """
    bodies = _bodies(body)
    d = body_dim(bodies)
    if len(bodies) == 1 and isinstance(bodies[0], VBody):
        pts = bodies[0].points
        return (tuple(math.ceil(min(p[i] for p in pts)) for i in range(d)),
                tuple(math.floor(max(p[i] for p in pts)) for i in range(d)))
    lo, hi = [], []
    for i in range(d):
        for sense, out, rnd in (("min", lo, math.ceil), ("max", hi, math.floor)):
            res = lp_solve(unit(d, i), sense, bodies)
            if res.status == INFEASIBLE:
                return None
            if res.status == UNBOUNDED:
                raise UnboundedBody(f"body is unbounded along coordinate {i + 1}")
            out.append(rnd(res.optimum))
    return tuple(lo), tuple(hi)


def _enumerate(bodies, box) -> list[IntVector]:
    lo, hi = box
    if any(l > h for l, h in zip(lo, hi)):
        return []
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    return [p for p in itertools.product(*ranges) if member(p, bodies)]


@lru_cache(maxsize=4096)
def _points_of(body) -> frozenset:
    box = bounding_box(body)
    return frozenset(_enumerate((body,), box)) if box else frozenset()


@lru_cache(maxsize=4096)
def _is_bounded(body) -> bool:
    if isinstance(body, VBody):
        return True
    try:
        bounding_box(body)
    except UnboundedBody:
        return False
    return True


def integer_points(body) -> list[IntVector]:
    """All lattice points of a bounded body or intersection, in lexicographic order.

    When every body is bounded on its own, per-body point sets are cached and
    intersected; otherwise the box of the whole intersection is scanned.
    """
    bodies = _bodies(body)
    body_dim(bodies)
    if all(_is_bounded(b) for b in bodies):
        common = None
        for b in sorted(bodies, key=lambda b: len(_points_of(b))):
            pts = _points_of(b)
            common = pts if common is None else common & pts
            if not common:
                break
        return sorted(common)
    box = bounding_box(bodies)
    return _enumerate(bodies, box) if box else []


def contains_k_colinear(body, k: int) -> LatticeWitness | None:
    """A witness of k colinear integer points in the body, or None.

    Two lattice points x < z whose difference has gcd g >= k - 1 give the
    progression x + j (z - x)/g; convexity keeps every such point inside.
    """
    if k < 1:
        raise ValueError("k must be positive")
    pts = integer_points(body)
    if not pts:
        return None
    d = len(pts[0])
    if k == 1:
        return LatticeWitness(pts[0], unit_step(d), 1)
    for x, z in itertools.combinations(pts, 2):
        diff = [b - a for a, b in zip(x, z)]
        g = 0
        for c in diff:
            g = math.gcd(g, c)
        if g >= k - 1:
            return LatticeWitness(x, tuple(c // g for c in diff), k)
    return None


def unit_step(d: int) -> IntVector:
    return tuple(int(c) for c in unit(d, 0))
