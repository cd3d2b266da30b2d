"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with its measurements and
then asserts.  Run with ``pytest -s tests/test_acceptance.py`` to see them
(``-s`` is on by default in this project's pytest config).
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from hellytools import io
from hellytools.analytics import beta_fractional, cap_fraction, gamma, monte_carlo_cap_fraction, r_d
from hellytools.cli import main
from hellytools.constructions import gen_nonpolytope_demo
from hellytools.engine import (
    ContainsKColinear,
    DiameterAtLeast,
    HypothesisFailure,
    VWidthAtLeast,
    certify_diameter,
    check_helly,
)
from hellytools.geometry import VBody, dot, intersect, is_empty, member, radon_partition
from hellytools.lattice import integer_points
from hellytools.liftings import lift_width
from hellytools.norms import PolytopeNorm, l2_diameter_exact, rho_diameter, v_width
from helpers import lattice_core_family, rand_normal, rand_vbody, rat, segment_family

F = Fraction


def verdict(n, ok, detail, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.1f}s"
        timing += f" / limit {limit:.0f}s]" if limit else "]"
        ok = ok and (limit is None or elapsed < limit)
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}{timing}")
    assert ok, detail


def _cli_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_criterion_01_discrete_tightness(capsys, tmp_path):
    lines = []
    ok = True
    for d, m, limit in ((2, 7, 10), (1, 1, 300), (3, 23, 300)):
        t = time.time()
        path = tmp_path / f"tight{d}.json"
        code, gen = _cli_json(capsys, "generate", "--construction", "discrete-tight", "--params", f"d={d}",
                              "--out", str(path))
        code2, rep = _cli_json(capsys, "check", "--family", str(path), "--subset-size", str(m),
                               "--predicate", "colinear:3")
        pts = integer_points(io.load_family(path).bodies)
        elapsed = time.time() - t
        q = sorted(tuple(c) for c in itertools.product((1, 2), repeat=d))
        good = (code == code2 == 0 and rep["alpha"] == "1" and rep["conclusion"] is False
                and rep["total"] == d * 2 ** d and pts == q and elapsed < limit)
        ok &= good
        lines.append(f"d={d} m={m} subsets={rep['total']} alpha={rep['alpha']} conclusion={rep['conclusion']} "
                     f"lattice={'Q' if pts == q else pts} {elapsed:.1f}s<{limit}s")
    verdict(1, ok, "; ".join(lines))


def _colinear_family(rng, d, n):
    step = tuple(F(rng.randint(-1, 1)) for _ in range(d))
    if not any(step):
        step = (F(1),) + step[1:]
    if d == 1:
        return lattice_core_family(rng, d, n, step, count=2, p_cut=0.08)
    return lattice_core_family(rng, d, n, step, count=3, p_cut=0.02)


def test_criterion_02_colinear_property_suite():
    t = time.time()
    rng = random.Random(2)
    stats = {}
    bad = 0
    for d, m, n, count in ((1, 4, 6, 300), (2, 16, 18, 100)):
        hyp = 0
        for _ in range(count):
            fam = _colinear_family(rng, d, n)
            rep = check_helly(fam, m, ContainsKColinear(2))
            if rep.alpha == 1:
                hyp += 1
                bad += not rep.conclusion
        stats[d] = (count, hyp)
    elapsed = time.time() - t
    nonvacuous = all(h >= c // 10 for c, h in stats.values())
    detail = (f"d=1: {stats[1][1]}/{stats[1][0]} families meet the 4-subset hypothesis, "
              f"d=2: {stats[2][1]}/{stats[2][0]} meet the 16-subset hypothesis; counterexamples={bad}")
    verdict(2, bad == 0 and nonvacuous, detail, elapsed, 600)


@pytest.mark.parametrize("norm_name,d", [("linf", 2), ("l1", 2), ("linf", 3)])
def test_criterion_03_minkowski_tightness(capsys, tmp_path, norm_name, d):
    t = time.time()
    path = tmp_path / "tight.json"
    code, out = _cli_json(capsys, "generate", "--construction", "minkowski-tight",
                          "--params", f"d={d}", f"norm={norm_name}", "--out", str(path))
    rep = out["verification"]
    # independent re-check from the written file
    fam = io.load_family(path)
    norm = getattr(PolytopeNorm, norm_name)(d)
    kd = norm.facet_count * d
    above = 0
    for drop in fam.ids:
        ev = DiameterAtLeast(norm, 2, strict=True).evaluate([b for i, b in fam.members if i != drop])
        above += ev.holds
    full = rho_diameter(fam.bodies, norm).value
    elapsed = time.time() - t
    ok = code == 0 and rep["verified"] and len(fam) == kd and above == kd and full <= 2
    verdict(3, ok, f"{norm_name} d={d}: {above}/{kd} of the {kd - 1}-subsets have diameter > 2, "
                   f"full diameter {full} <= 2, theta={rep['theta']}", elapsed, 60)


def test_criterion_04_vwidth_property_suite():
    t = time.time()
    rng = random.Random(4)
    hyp, bad, lift_bad = 0, 0, 0
    for i in range(500):
        d = 2 if i % 2 == 0 else 3
        v = rand_normal(rng, d, 2)
        vv = dot(v, v)
        fam = segment_family(rng, d, 2 * d + 2, tuple(x / vv for x in v), rat(rng, F(7, 10), F(13, 10)), w=F(1, 16))
        rep = check_helly(fam, 2 * d, VWidthAtLeast(v, 1))
        if rep.alpha == 1:
            hyp += 1
            lifted = [lift_width(b, v).polytope for b in fam.bodies]
            bad += not (rep.conclusion and not is_empty(lifted))
    equiv = 0
    for _ in range(200):
        d = rng.randint(1, 3)
        K = rand_vbody(rng, d, rng.randint(1, d + 3), lo=-1, hi=1)
        v = rand_normal(rng, d, 2)
        equiv += (not is_empty(lift_width(K, v).polytope)) == (v_width(K, v).value >= 1)
        lift_bad = 200 - equiv
    elapsed = time.time() - t
    detail = (f"{hyp}/500 families meet the 2d-subset hypothesis, counterexamples={bad}; "
              f"lift equivalence {equiv}/200")
    verdict(4, bad == 0 and lift_bad == 0 and hyp >= 50, detail, elapsed, 300)


def test_criterion_05_minkowski_positive():
    t = time.time()
    rng = random.Random(5)
    norm = PolytopeNorm.linf(2)
    hyp, bad = 0, 0
    for _ in range(200):
        u = (F(1), rat(rng, -1, 1))
        fam = segment_family(rng, 2, 10, u, rat(rng, F(9, 10), F(14, 10)), cut=F(1, 6), w=F(1, 16))
        rep = check_helly(fam, 8, DiameterAtLeast(norm, 1))
        if rep.alpha == 1:
            hyp += 1
            bad += not (rep.conclusion and rho_diameter(fam.bodies, norm).value >= 1)
    elapsed = time.time() - t
    verdict(5, bad == 0 and hyp >= 20, f"{hyp}/200 families meet the 8-subset hypothesis, counterexamples={bad}",
            elapsed, 300)


def test_criterion_06_lp_diameter_instances():
    t = time.time()
    rng = random.Random(6)
    hyp, bad = 0, 0
    for _ in range(100):
        u = (F(3, 5), F(4, 5)) if rng.random() < 0.5 else (F(1), F(0))
        fam = segment_family(rng, 2, 10, u, rat(rng, F(9, 10), F(14, 10)), cut=F(1, 6), w=F(1, 16))
        rep = check_helly(fam, 8, DiameterAtLeast(None, 1, squared=True))
        if rep.alpha == 1:
            hyp += 1
            bad += not (l2_diameter_exact(fam.bodies).squared >= F(1, 2))
    elapsed = time.time() - t
    verdict(6, bad == 0 and hyp >= 10,
            f"{hyp}/100 families meet the 8-subset l2 hypothesis, full diameter^2 >= 1/2 failures={bad}", elapsed)


def test_criterion_07_certificate():
    t = time.time()
    rng = random.Random(7)
    norm = PolytopeNorm.linf(2)
    done, refused, bad, improving = 0, 0, 0, 0
    while done < 20:
        u = (F(1), rat(rng, -1, 1))
        fam = segment_family(rng, 2, 9, u, rat(rng, F(11, 10), F(15, 10)), cut=F(1, 6), w=F(1, 16))
        try:
            cert = certify_diameter(fam, norm, 20)
        except HypothesisFailure:
            refused += 1
            continue
        done += 1
        betas = cert.betas
        diam = rho_diameter(fam.bodies, norm).value
        ok = (len(betas) == 20
              and all(a <= b for a, b in zip(betas, betas[1:]))
              and all(b >= F(n, n + 1) for n, b in enumerate(betas, 1))
              and all(b <= diam for b in betas))
        bad += not ok
        improving += sum(s.improving is not None for s in cert.steps)
    elapsed = time.time() - t
    verdict(7, bad == 0, f"{done} certified families (refused {refused}), beta_n >= n/(n+1) for n <= 20, "
                         f"monotone and below the exact diameter; violations={bad}; improving pairs={improving}",
            elapsed, 120)


def test_criterion_08_analytics():
    t = time.time()
    checks = {}
    g = gamma(0.01, 200)
    checks["gamma(0.01)>0.97"] = g.value > 0.97
    grid = np.linspace(0.05, 1.3, 50)
    vals = [gamma(c, 200).value for c in grid]
    checks["gamma decreasing on 50 points"] = all(a > b for a, b in zip(vals, vals[1:]))
    closed = (math.pi / 3 - math.sqrt(3) / 4) / math.pi
    checks["cap(2,1/2) closed form"] = abs(cap_fraction(2, 0.5) - closed) < 1e-9
    rng = random.Random(8)
    worst = 0.0
    for i in range(10):
        d, h = rng.randint(1, 20), rng.uniform(0.0, 0.6)
        p, se = monte_carlo_cap_fraction(d, h, 10_000_000, seed=100 + i)
        worst = max(worst, abs(p - cap_fraction(d, h)) / se)
    checks["monte carlo within 3 sigma"] = worst < 3
    checks["r_2 = 1/sqrt(pi)"] = abs(r_d(2) - 1 / math.sqrt(math.pi)) < 1e-12
    b = beta_fractional(1.0, 0.01, 2)
    checks["beta(1,0.01,2)>0.55"] = b > 0.55
    elapsed = time.time() - t
    failed = [k for k, v in checks.items() if not v]
    verdict(8, not failed, f"gamma(0.01)={g.value:.6f} (argmin d={g.argmin}), beta={b:.4f}, "
                           f"worst MC deviation {worst:.2f} sigma, failed={failed or 'none'}", elapsed, 120)


def test_criterion_09_nonpolytope_demo():
    t = time.time()
    fam, rep = gen_nonpolytope_demo(3, 12)
    # re-check from scratch on the emitted rational half-planes
    sat = sum(DiameterAtLeast(None, 1, squared=True).evaluate(list(c)).holds
              for c in itertools.combinations(fam.bodies, 3))
    full = l2_diameter_exact(fam.bodies).squared
    elapsed = time.time() - t
    ok = rep.verified and sat == math.comb(12, 3) and full < 1
    verdict(9, ok, f"n=3, 12-gon: {sat}/{math.comb(12, 3)} triples have l2 diameter >= 1, "
                   f"full diameter^2 = {float(full):.6f} < 1, s_3 estimate {rep.s_estimate:.9f}", elapsed, 60)


def test_criterion_10_radon():
    t = time.time()
    rng = random.Random(10)
    bad = 0
    for i in range(10_000):
        d = 1 + i % 4
        pts = [tuple(F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(d)) for _ in range(d + 2)]
        a, b, w = radon_partition(pts)
        bad += not (member(w, VBody(d, tuple(a))) and member(w, VBody(d, tuple(b))))
    elapsed = time.time() - t
    verdict(10, bad == 0, f"10000 instances in d=1..4, membership failures={bad}", elapsed, 60)
