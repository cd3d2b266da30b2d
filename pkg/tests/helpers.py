"""Random instance generators and independent oracles shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from hellytools.engine import Family
from hellytools.geometry import HalfSpace, HPolytope, VBody, dot


def rat(rng: random.Random, lo, hi, den: int = 8) -> Fraction:
    return Fraction(rng.randint(int(lo * den), int(hi * den)), den)


def rand_point(rng, d, lo=-3, hi=3, den=4):
    return tuple(rat(rng, lo, hi, den) for _ in range(d))


def rand_normal(rng, d, mag=3):
    while True:
        n = tuple(Fraction(rng.randint(-mag, mag)) for _ in range(d))
        if any(n):
            return n


def bounding(d, r=6) -> list[HalfSpace]:
    return list(HPolytope.box([-r] * d, [r] * d).constraints)


def around_points(rng, core, count, cut, d, r=6, p_cut=1.0, axis=None) -> HPolytope:
    """Random polytope holding ``core``; some half-spaces are pushed inward.

    A push trims at most a ``cut`` fraction of ``axis`` (defaults to a unit
    offset when no axis is given).
    """
    cons = bounding(d, r)
    for _ in range(count):
        n = rand_normal(rng, d)
        off = max(dot(n, p) for p in core)
        if rng.random() < p_cut:
            scale = abs(dot(n, axis)) if axis is not None else 1
            off -= Fraction(rng.randint(0, int(cut * 32)), 32) * scale
        cons.append(HalfSpace(n, off))
    return HPolytope(d, tuple(cons))


def fat_segment(a, b, w):
    d = len(a)
    out = [a, b]
    for i in range(d):
        for s in (w, -w):
            out.append(tuple(x + (s if j == i else 0) for j, x in enumerate(a)))
            out.append(tuple(x + (s if j == i else 0) for j, x in enumerate(b)))
    return out


def segment_family(rng, d, n, direction, length, count=3, cut=Fraction(1, 4), p_cut=0.5,
                   w=Fraction(1, 8)) -> Family:
    """n bodies around a common fattened segment a + t*direction, t in [0, length]."""
    a = rand_point(rng, d, -1, 1)
    b = tuple(x + length * v for x, v in zip(a, direction))
    axis = tuple(y - x for x, y in zip(a, b))
    core = fat_segment(a, b, w)
    return Family.of([around_points(rng, core, count, cut, d, p_cut=p_cut, axis=axis) for _ in range(n)])


def rand_polygon_points(rng, d, npts, lo=-3, hi=3, den=2):
    return [rand_point(rng, d, lo, hi, den) for _ in range(npts)]


def rand_vbody(rng, d, npts=None, lo=-3, hi=3, den=2) -> VBody:
    npts = npts or rng.randint(1, d + 3)
    return VBody(d, tuple(rand_polygon_points(rng, d, npts, lo, hi, den)))


# -- oracles ---------------------------------------------------------------


def scipy_width(cons, v):
    """Width of {A x <= b} along v by floating LP; None if empty, inf if unbounded."""
    A = np.array([[float(x) for x in c.normal] for c in cons])
    b = np.array([float(c.offset) for c in cons])
    c = np.array([float(x) for x in v])
    bounds = [(None, None)] * len(v)
    hi = linprog(-c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    lo = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if hi.status == 2 or lo.status == 2:
        return None
    if hi.status == 3 or lo.status == 3:
        return float("inf")
    return -hi.fun - lo.fun


def brute_colinear(points, k):
    """Whether a finite set of lattice points holds k points on a common arithmetic progression."""
    pts = set(points)
    if k <= 1:
        return bool(pts)
    for x, y in itertools.permutations(sorted(pts), 2):
        step = tuple(b - a for a, b in zip(x, y))
        if all(tuple(a + j * s for a, s in zip(x, step)) in pts for j in range(k)):
            return True
    return False


def brute_box_points(body, lo, hi):
    d = body.dim
    return sorted(p for p in itertools.product(range(lo, hi + 1), repeat=d)
                  if body.contains(tuple(Fraction(c) for c in p)))


def lattice_core_family(rng, d, n, step, count=3, p_cut=0.15, slack=Fraction(3, 4), r=6) -> Family:
    """n bodies around the lattice pair {p, p + step}.

    Each constraint gets a random outward slack; with probability ``p_cut`` it
    is instead pulled in far enough to drop one of the two core points.
    """
    p = tuple(Fraction(rng.randint(-2, 2)) for _ in range(d))
    core = [p, tuple(x + s for x, s in zip(p, step))]
    bodies = []
    for _ in range(n):
        cons = bounding(d, r)
        for _ in range(count):
            nrm = rand_normal(rng, d)
            hi = max(dot(nrm, c) for c in core)
            lo = min(dot(nrm, c) for c in core)
            if rng.random() < p_cut and hi > lo:
                off = hi - (hi - lo) * Fraction(rng.randint(1, 31), 32)
            else:
                off = hi + Fraction(rng.randint(0, int(slack * 32)), 32)
            cons.append(HalfSpace(nrm, off))
        bodies.append(HPolytope(d, tuple(cons)))
    return Family.of(bodies)
