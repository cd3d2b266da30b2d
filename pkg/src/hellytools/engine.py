"""Helly-type checks over families of convex bodies.

A check evaluates a predicate on the intersection of every m-subfamily (or
every colorful tuple), counts how many satisfy it, and evaluates the same
predicate on the intersection of the whole family.  All decisions are exact.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import (
    ConvexBody,
    EmptyBody,
    GeometryError,
    UnboundedBody,
    Vector,
    dot,
    intersect,
    is_empty,
    lp_solve,
    recession_direction,
    vector,
)
from .lattice import contains_k_colinear, integer_points
from .liftings import f_functional, lift_product
from .norms import PolytopeNorm, l2_diameter_exact, rho_diameter, squared_norm, v_width

DEFAULT_CAP = 2_000_000
DEFAULT_SAMPLES = 10_000


def default_jobs() -> int:
    return int(os.environ.get("HELLY_JOBS", "1") or 1)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Family:
    dim: int
    members: tuple  # ((id, body), ...)

    def __post_init__(self):
        members = tuple((str(i), b) for i, b in self.members)
        ids = [i for i, _ in members]
        if len(set(ids)) != len(ids):
            raise ValueError("member ids must be unique")
        for i, b in members:
            if b.dim != self.dim:
                raise GeometryError(f"member {i} has dimension {b.dim}, family has {self.dim}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, bodies: Sequence[ConvexBody], prefix: str = "F") -> "Family":
        width = len(str(len(bodies)))
        return cls(bodies[0].dim, tuple((f"{prefix}{i:0{width}d}", b) for i, b in enumerate(bodies)))

    def __len__(self):
        return len(self.members)

    @property
    def ids(self) -> list[str]:
        return [i for i, _ in self.members]

    @property
    def bodies(self) -> list[ConvexBody]:
        return [b for _, b in self.members]

    def sorted_members(self) -> list:
        return sorted(self.members, key=lambda m: m[0])

    def with_member(self, ident: str, body: ConvexBody) -> "Family":
        return Family(self.dim, self.members + ((ident, body),))

    def scaled(self, t) -> "Family":
        return Family(self.dim, tuple((i, b.scaled(t)) for i, b in self.members))


@dataclass(frozen=True)
class ColorfulFamilies:
    families: tuple

    def __post_init__(self):
        fams = tuple(self.families)
        if not fams:
            raise ValueError("need at least one color class")
        if len({f.dim for f in fams}) != 1:
            raise GeometryError("color classes must share the dimension")
        object.__setattr__(self, "families", fams)

    @property
    def dim(self) -> int:
        return self.families[0].dim

    @property
    def tuple_count(self) -> int:
        return math.prod(len(f) for f in self.families)


# ---------------------------------------------------------------------------
# predicates


@dataclass(frozen=True)
class Evaluation:
    holds: bool
    value: object = None  # Fraction, "unbounded", "empty", or a witness
    detail: object = None


def _compare(value, threshold, strict):
    return value > threshold if strict else value >= threshold


@dataclass(frozen=True)
class NonemptyIntersection:
    def evaluate(self, bodies) -> Evaluation:
        return Evaluation(not is_empty(bodies))

    def describe(self) -> str:
        return "nonempty"


@dataclass(frozen=True)
class ContainsIntegerPoint:
    def evaluate(self, bodies) -> Evaluation:
        pts = integer_points(bodies)
        return Evaluation(bool(pts), len(pts), pts[0] if pts else None)

    def describe(self) -> str:
        return "integer"


@dataclass(frozen=True)
class ContainsKColinear:
    k: int

    def evaluate(self, bodies) -> Evaluation:
        w = contains_k_colinear(bodies, self.k)
        return Evaluation(w is not None, None, w)

    def describe(self) -> str:
        return f"colinear:{self.k}"


@dataclass(frozen=True)
class DiameterAtLeast:
    """Diameter (polytope norm, or Euclidean when ``norm`` is None) at least a threshold.

    With ``squared`` the threshold is compared against the squared Euclidean
    diameter.  Unbounded intersections satisfy the predicate; empty ones do not.
    """

    norm: PolytopeNorm | None
    threshold: Fraction = Fraction(1)
    strict: bool = False
    squared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        if self.squared and self.norm is not None:
            raise ValueError("squared thresholds only apply to the Euclidean diameter")

    def evaluate(self, bodies) -> Evaluation:
        try:
            if self.norm is None:
                diam = l2_diameter_exact(bodies)
                t2 = self.threshold if self.squared else self.threshold ** 2
                if self.threshold < 0 and not self.squared:
                    return Evaluation(True, diam.squared, diam.pair)
                return Evaluation(_compare(diam.squared, t2, self.strict), diam.squared, diam.pair)
            cert = rho_diameter(bodies, self.norm)
        except UnboundedBody:
            return Evaluation(True, "unbounded")
        except EmptyBody:
            return Evaluation(False, "empty")
        return Evaluation(_compare(cert.value, self.threshold, self.strict), cert.value, cert)

    def describe(self) -> str:
        name = "l2" if self.norm is None else self.norm.name
        op = ">" if self.strict else ">="
        what = "diameter^2" if self.squared or self.norm is None else "diameter"
        t = self.threshold if self.squared or self.norm is not None else self.threshold ** 2
        return f"{what}[{name}] {op} {t}"


@dataclass(frozen=True)
class VWidthAtLeast:
    """Width in direction v at least a threshold (or, with ``squared``, width^2 >= threshold)."""

    v: Vector
    threshold: Fraction = Fraction(1)
    strict: bool = False
    squared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "v", vector(self.v))
        object.__setattr__(self, "threshold", Fraction(self.threshold))

    def width(self, bodies):
        try:
            return v_width(bodies, self.v).value
        except UnboundedBody:
            return "unbounded"
        except EmptyBody:
            return "empty"

    def evaluate(self, bodies) -> Evaluation:
        w = self.width(bodies)
        if w == "unbounded":
            return Evaluation(True, w)
        if w == "empty":
            return Evaluation(False, w)
        if self.squared:
            return Evaluation(w >= 0 and _compare(w * w, self.threshold, self.strict), w)
        return Evaluation(_compare(w, self.threshold, self.strict), w)

    def describe(self) -> str:
        op = ">" if self.strict else ">="
        v = ",".join(str(x) for x in self.v)
        return f"{'width^2' if self.squared else 'width'}[{v}] {op} {self.threshold}"


Predicate = (NonemptyIntersection, ContainsIntegerPoint, ContainsKColinear, DiameterAtLeast, VWidthAtLeast)


def _evaluate(args):
    pred, bodies = args
    return pred.evaluate(bodies)


def _map(pred, groups, jobs):
    if jobs > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_evaluate, [(pred, g) for g in groups], chunksize=max(1, len(groups) // (4 * jobs))))
    return [pred.evaluate(g) for g in groups]


# ---------------------------------------------------------------------------
# reports


def _fmt(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return [_fmt(v) for v in x]
    return x


@dataclass
class FractionalReport:
    predicate: str
    family_size: int
    subset_size: int
    total: int
    evaluated: int
    satisfying: int
    alpha: Fraction
    sampled: bool = False
    unbounded: int = 0
    empty: int = 0
    first_failure: tuple | None = None
    conclusion: bool | None = None
    conclusion_value: object = None
    best_subfamily: tuple | None = None
    best_value: object = None
    search: str | None = None
    bound_fraction: float | None = None
    meets_bound: bool | None = None
    alpha_in: Fraction | None = None

    @property
    def hypothesis_holds(self) -> bool:
        return self.alpha == 1

    @property
    def helly_transfer(self) -> bool | None:
        """None unless every subset satisfied the predicate; then the full-family verdict."""
        return self.conclusion if self.hypothesis_holds else None

    def to_json(self) -> dict:
        out = {
            "predicate": self.predicate,
            "family_size": self.family_size,
            "subset_size": self.subset_size,
            "total": self.total,
            "evaluated": self.evaluated,
            "satisfying": self.satisfying,
            "alpha": str(self.alpha),
            "sampled": self.sampled,
            "unbounded_subsets": self.unbounded,
            "empty_subsets": self.empty,
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "conclusion": self.conclusion,
            "conclusion_value": _fmt(self.conclusion_value),
        }
        if self.search is not None:
            out.update({
                "best_subfamily": list(self.best_subfamily) if self.best_subfamily else None,
                "best_value": _fmt(self.best_value),
                "search": self.search,
                "alpha_in": str(self.alpha_in) if self.alpha_in is not None else None,
                "bound_fraction": self.bound_fraction,
                "meets_bound": self.meets_bound,
            })
        return out


def _value_of(ev: Evaluation):
    return ev.value if ev.value is not None else (ev.detail.to_json() if hasattr(ev.detail, "to_json") else None)


def _subsets(n, m, cap, samples, seed):
    total = math.comb(n, m)
    if total <= cap:
        return total, list(itertools.combinations(range(n), m)), False
    rng = random.Random(seed)
    return total, [tuple(sorted(rng.sample(range(n), m))) for _ in range(samples)], True


def check_helly(family: Family, m: int, pred, cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                seed: int = 0, jobs: int | None = None) -> FractionalReport:
    """Evaluate ``pred`` on every m-subfamily intersection and on the full intersection."""
    n = len(family)
    if not 1 <= m <= n:
        raise ValueError(f"subset size {m} must lie in [1, {n}]")
    jobs = default_jobs() if jobs is None else jobs
    members = family.sorted_members()
    total, combos, sampled = _subsets(n, m, cap, samples, seed)
    groups = [[members[i][1] for i in c] for c in combos]
    results = _map(pred, groups, jobs)
    sat = sum(r.holds for r in results)
    first_fail = next((tuple(members[i][0] for i in c) for c, r in zip(combos, results) if not r.holds), None)
    full = pred.evaluate([b for _, b in members])
    return FractionalReport(
        predicate=pred.describe(),
        family_size=n,
        subset_size=m,
        total=total,
        evaluated=len(combos),
        satisfying=sat,
        alpha=Fraction(sat, len(combos)),
        sampled=sampled,
        unbounded=sum(r.value == "unbounded" for r in results),
        empty=sum(r.value == "empty" for r in results),
        first_failure=first_fail,
        conclusion=full.holds,
        conclusion_value=_value_of(full),
    )


@dataclass
class ColorfulReport:
    predicate: str
    colors: int
    total: int
    evaluated: int
    satisfying: int
    alpha: Fraction
    sampled: bool
    first_failure: tuple | None
    per_color: list = field(default_factory=list)  # [(holds, value)]

    @property
    def hypothesis_holds(self) -> bool:
        return self.alpha == 1

    @property
    def concluding_colors(self) -> list[int]:
        return [i for i, (h, _) in enumerate(self.per_color) if h]

    @property
    def consistent(self) -> bool:
        """False only when every tuple satisfies the predicate but no color class does."""
        return not self.hypothesis_holds or bool(self.concluding_colors)

    def to_json(self) -> dict:
        return {
            "predicate": self.predicate,
            "colors": self.colors,
            "total": self.total,
            "evaluated": self.evaluated,
            "satisfying": self.satisfying,
            "alpha": str(self.alpha),
            "sampled": self.sampled,
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "per_color": [{"holds": h, "value": _fmt(v)} for h, v in self.per_color],
            "concluding_colors": self.concluding_colors,
            "consistent": self.consistent,
        }


def check_colorful(colors: ColorfulFamilies, pred, cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                   seed: int = 0) -> ColorfulReport:
    """Evaluate ``pred`` on every colorful tuple and on each color class.

    Tuples that pick the same bodies share one evaluation.
    """
    fams = [f.sorted_members() for f in colors.families]
    total = colors.tuple_count
    if total <= cap:
        tuples = itertools.product(*[range(len(f)) for f in fams])
        evaluated, sampled = total, False
    else:
        rng = random.Random(seed)
        tuples = (tuple(rng.randrange(len(f)) for f in fams) for _ in range(samples))
        evaluated, sampled = samples, True
    # equal bodies share an integer key so that memo lookups stay cheap
    keys, table = {}, []
    ids = []
    for f in fams:
        row = []
        for _, b in f:
            if b not in keys:
                keys[b] = len(table)
                table.append(b)
            row.append(keys[b])
        ids.append(row)
    memo = {}
    sat = 0
    first_fail = None
    for t in tuples:
        key = frozenset(ids[c][i] for c, i in enumerate(t))
        ev = memo.get(key)
        if ev is None:
            ev = memo[key] = pred.evaluate([table[j] for j in sorted(key)])
        if ev.holds:
            sat += 1
        elif first_fail is None:
            first_fail = tuple(fams[c][i][0] for c, i in enumerate(t))
    per_color = []
    for f in fams:
        ev = pred.evaluate([b for _, b in f])
        per_color.append((ev.holds, _value_of(ev)))
    return ColorfulReport(pred.describe(), len(fams), total, evaluated, sat, Fraction(sat, evaluated),
                          sampled, first_fail, per_color)


# ---------------------------------------------------------------------------
# fractional v-width


def fractional_bound_met(best: int, n: int, alpha: Fraction, d: int) -> bool:
    """Exact test of best >= (1 - (1 - alpha)^(1/2d)) * n, i.e. (1 - best/n)^(2d) <= 1 - alpha."""
    return (1 - Fraction(best, n)) ** (2 * d) <= 1 - Fraction(alpha)


def _best_exhaustive(members, pred):
    n = len(members)
    for size in range(n, 0, -1):
        for combo in itertools.combinations(range(n), size):
            ev = pred.evaluate([members[i][1] for i in combo])
            if ev.holds:
                return tuple(members[i][0] for i in combo), ev.value
    return None, None


def _width_key(w):
    if w == "unbounded":
        return (2, 0)
    if w == "empty":
        return (0, 0)
    return (1, w)


def _best_greedy(members, pred):
    current = list(members)
    while current:
        ev = pred.evaluate([b for _, b in current])
        if ev.holds:
            return tuple(i for i, _ in current), ev.value
        if len(current) == 1:
            break
        best_j, best_key = None, None
        for j in range(len(current)):
            rest = [b for t, (_, b) in enumerate(current) if t != j]
            key = _width_key(pred.width(rest))
            if best_key is None or key > best_key:
                best_j, best_key = j, key
        del current[best_j]
    return None, None


def fractional_vwidth(family: Family, v: Sequence, alpha_in=None, threshold=1, squared: bool = False,
                      exhaustive_limit: int = 12, jobs: int | None = None) -> FractionalReport:
    """Fraction of 2d-subsets with v-width >= threshold, plus the largest good subfamily found.

    The subfamily search is exhaustive up to ``exhaustive_limit`` members and a
    greedy peeling heuristic above it.  The report checks the found size
    against (1 - (1 - alpha)^(1/2d)) * n exactly, using ``alpha_in`` when given
    and the measured fraction otherwise.
    """
    pred = VWidthAtLeast(v, threshold, squared=squared)
    d = family.dim
    n = len(family)
    m = min(2 * d, n)
    rep = check_helly(family, m, pred, jobs=jobs)
    members = family.sorted_members()
    if n <= exhaustive_limit:
        best, value = _best_exhaustive(members, pred)
        rep.search = "exhaustive"
    else:
        best, value = _best_greedy(members, pred)
        rep.search = "greedy peeling (heuristic)"
    rep.best_subfamily, rep.best_value = best, value
    alpha = rep.alpha if alpha_in is None else Fraction(alpha_in)
    rep.alpha_in = None if alpha_in is None else alpha
    rep.bound_fraction = 1.0 - (1.0 - float(alpha)) ** (1.0 / (2 * d))
    rep.meets_bound = fractional_bound_met(len(best) if best else 0, n, alpha, d)
    return rep


# ---------------------------------------------------------------------------
# Euclidean directions and the cap-covering pipeline


@dataclass(frozen=True)
class Direction:
    """Unnormalized direction z of a long segment, with its exact squared length."""

    vector: Vector
    squared: Fraction
    pair: tuple | None = None


def diameter_direction(body) -> Direction:
    """Direction of a diametral vertex pair; requires Euclidean diameter >= 1."""
    diam = l2_diameter_exact(body)
    if diam.squared < 1:
        raise GeometryError("Euclidean diameter is below 1: no unit segment")
    p, q = diam.pair
    z = tuple(b - a for a, b in zip(p, q))
    return Direction(z, diam.squared, diam.pair)


def _segment_direction(bodies):
    try:
        return diameter_direction(bodies).vector
    except UnboundedBody:
        if is_empty(bodies):
            return None
        return recession_direction(bodies)
    except (EmptyBody, GeometryError):
        return None


@dataclass
class CapCoverReport:
    c: Fraction
    dim: int
    family_size: int
    subsets: int
    recorded: int
    alpha: Fraction
    axis: Vector | None = None
    axis_score: int = 0
    candidates: int = 0
    gamma: float | None = None
    beta: float | None = None
    vwidth: FractionalReport | None = None
    best_size: int = 0
    meets_beta: bool | None = None
    flags: tuple = ("axis search heuristic", "gamma truncated inf")

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "dim": self.dim,
            "family_size": self.family_size,
            "subsets": self.subsets,
            "recorded": self.recorded,
            "alpha": str(self.alpha),
            "axis": _fmt(self.axis) if self.axis else None,
            "axis_score": self.axis_score,
            "candidates": self.candidates,
            "gamma": self.gamma,
            "beta": self.beta,
            "best_size": self.best_size,
            "meets_beta": self.meets_beta,
            "vwidth": self.vwidth.to_json() if self.vwidth else None,
            "flags": list(self.flags),
        }


def _rationalize(x, den=10**6):
    return Fraction(x).limit_denominator(den)


def _candidate_axes(dirs, max_dirs):
    import numpy as np

    floats = np.array([[float(x) for x in z] for z in dirs])
    units = floats / np.linalg.norm(floats, axis=1, keepdims=True)
    # canonical sign, then dedupe near-identical directions
    for u in units:
        k = np.flatnonzero(np.abs(u) > 1e-12)[0]
        if u[k] < 0:
            u *= -1
    uniq, seen = [], set()
    for z, u in zip(dirs, units):
        key = tuple(np.round(u, 9))
        if key not in seen:
            seen.add(key)
            uniq.append((z, u))
    cands = [z for z, _ in uniq]
    base = uniq[:max_dirs]
    for (_, a), (_, b) in itertools.combinations(base, 2):
        for w in (a + b, a - b):
            if np.linalg.norm(w) > 1e-9:
                cands.append(tuple(_rationalize(x) for x in w))
    return cands


def _score(axis, dirs, c2_over_d, guard=1e-9):
    import numpy as np

    v = np.array([float(x) for x in axis])
    U = np.array([[float(x) for x in z] for z in dirs])
    lhs = (U @ v) ** 2
    rhs = c2_over_d * np.einsum("ij,ij->i", U, U) * float(v @ v)
    count = 0
    vv = dot(axis, axis)
    for i in range(len(dirs)):
        if abs(lhs[i] - rhs[i]) <= guard * max(1.0, rhs[i]):
            z = dirs[i]
            if dot(z, axis) ** 2 >= Fraction(c2_over_d) * squared_norm(z) * vv:
                count += 1
        elif lhs[i] > rhs[i]:
            count += 1
    return count


def cap_cover_experiment(family: Family, c, alpha_in=None, d_max: int = 200, max_dirs: int = 200,
                         exhaustive_limit: int = 12) -> CapCoverReport:
    """Desk-scale run of the cap-covering argument for the fractional diameter theorem.

    Records a unit-segment direction for each 2d-subfamily of Euclidean
    diameter >= 1, picks an axis covering the most recorded directions within
    angle cos >= c / sqrt(d), and runs the fractional v-width search along it
    with threshold c / sqrt(d).
    """
    from .analytics import beta_from_gamma, gamma

    d = family.dim
    if d < 2:
        raise ValueError("the cap-covering pipeline needs d >= 2")
    c = Fraction(str(c)) if isinstance(c, float) else Fraction(c)
    c2_over_d = c * c / d
    members = family.sorted_members()
    n = len(members)
    m = min(2 * d, n)
    combos = list(itertools.combinations(range(n), m))
    dirs = []
    for combo in combos:
        z = _segment_direction([members[i][1] for i in combo])
        if z is not None:
            dirs.append(z)
    alpha = Fraction(len(dirs), len(combos))
    rep = CapCoverReport(c, d, n, len(combos), len(dirs), alpha)
    if not dirs:
        return rep
    cands = _candidate_axes(dirs, max_dirs)
    rep.candidates = len(cands)
    best, best_score = None, -1
    for axis in cands:
        s = _score(axis, dirs, c2_over_d)
        if s > best_score:
            best, best_score = axis, s
    rep.axis, rep.axis_score = best, best_score
    threshold_sq = c2_over_d * dot(best, best)
    rep.vwidth = fractional_vwidth(family, best, alpha_in=None, threshold=threshold_sq, squared=True,
                                   exhaustive_limit=exhaustive_limit, jobs=1)
    a = float(alpha if alpha_in is None else alpha_in)
    rep.gamma = gamma(float(c), d_max).value
    rep.beta = beta_from_gamma(a, rep.gamma, d) if a > 0 else 0.0
    rep.best_size = len(rep.vwidth.best_subfamily or ())
    rep.meets_beta = rep.best_size >= rep.beta * n
    return rep


# ---------------------------------------------------------------------------
# iterative diameter certificate


class HypothesisFailure(GeometryError):
    def __init__(self, message, subset=None):
        super().__init__(message)
        self.subset = subset


@dataclass
class CertificateStep:
    n: int
    target: Fraction  # f(a_n)
    g: Fraction
    beta: Fraction
    lower_bound: Fraction  # n / (h + n - 1)
    point: Vector
    improving: dict | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "f": str(self.target),
            "g": str(self.g),
            "beta": str(self.beta),
            "lower_bound": str(self.lower_bound),
            "improving": self.improving,
        }


@dataclass
class DiameterCertificate:
    norm: str
    dim: int
    subset_size: int
    steps: list
    diameter: Fraction

    @property
    def betas(self) -> list[Fraction]:
        return [s.beta for s in self.steps]

    def to_json(self) -> dict:
        return {
            "norm": self.norm,
            "dim": self.dim,
            "subset_size": self.subset_size,
            "diameter": str(self.diameter),
            "steps": [s.to_json() for s in self.steps],
        }


def _improving_pair(bodies, norm):
    # maximize f over the product of the subset intersection; the best block gives (x, y, i)
    lift = lift_product(intersect(bodies), norm, target=None)
    res = lp_solve(f_functional(norm), "max", lift.polytope)
    if not res.optimal:
        return None
    terms = lift.terms(res.witness)
    i = max(range(len(terms)), key=lambda j: terms[j])
    x, y = lift.blocks(res.witness)[i]
    return {"index": i, "x": _fmt(x), "y": _fmt(y), "value": str(terms[i])}


def certify_diameter(family: Family, norm: PolytopeNorm, max_n: int = 20,
                     jobs: int | None = None) -> DiameterCertificate:
    """Lower bounds beta_n on the norm-diameter of the full intersection by iterated product lifts.

    Requires every kd-subfamily to have norm-diameter >= 1.  Step n finds
    a_n in (cap F)^k with f(a_n) = n - sum_{i<n} g(a_i) by LP and records
    beta_n = max_{i<=n} g(a_i) >= n / (k/2 + n - 1).
    """
    d = family.dim
    h = norm.half_count
    kd = norm.facet_count * d
    m = min(kd, len(family))
    hyp = check_helly(family, m, DiameterAtLeast(norm, 1), jobs=jobs)
    if not hyp.hypothesis_holds:
        raise HypothesisFailure(f"a {m}-subfamily has {norm.name}-diameter below 1: {hyp.first_failure}",
                                hyp.first_failure)
    members = family.sorted_members()
    K = intersect([b for _, b in members])
    diameter = rho_diameter(K, norm).value
    first_subset = [b for _, b in members[:m]]
    first_ids = [i for i, _ in members[:m]]
    steps = []
    target = Fraction(1)
    beta = None
    for n in range(1, max_n + 1):
        lift = lift_product(K, norm, target)
        res = lp_solve((0,) * lift.polytope.dim, "max", lift.polytope)
        if not res.optimal:
            raise RuntimeError(f"no point with f = {target} in the product of the intersection at step {n}")
        point = res.witness
        assert lift.f(point) == target
        g = lift.g(point)
        beta = g if beta is None else max(beta, g)
        bound = Fraction(n, h + n - 1)
        improving = None
        if g < 1:
            improving = _improving_pair(first_subset, norm)
            if improving is not None:
                improving["subset"] = first_ids
        steps.append(CertificateStep(n, target, g, beta, bound, point, improving))
        if beta < bound or beta > diameter:
            raise RuntimeError(f"certificate invariant broken at step {n}: beta={beta}, bound={bound}")
        target = target + 1 - g
    return DiameterCertificate(norm.name, d, m, steps, diameter)
