import math
import random

import numpy as np
import pytest

from hellytools.analytics import (
    ball_volume,
    beta_fractional,
    beta_from_gamma,
    cap_fraction,
    cap_fraction_beta,
    gamma,
    gaussian_slab_limit,
    is_vacuous,
    monte_carlo_cap_fraction,
    r_d,
    r_d_asymptote,
)


def test_cap_endpoints():
    for d in (1, 2, 5, 40):
        assert cap_fraction(d, 0.0) == pytest.approx(0.5, abs=1e-12)
        assert cap_fraction(d, 1.0) == 0.0


def test_cap_circular_segment():
    h = 0.5
    expected = (math.acos(h) - h * math.sqrt(1 - h * h)) / math.pi
    assert abs(cap_fraction(2, h) - expected) < 1e-12
    assert abs(expected - (math.pi / 3 - math.sqrt(3) / 4) / math.pi) < 1e-15


def test_cap_three_ball():
    # spherical cap volume pi h'^2 (3 - h')/3 with h' = 1 - h, over 4 pi / 3
    h = 0.3
    hp = 1 - h
    assert abs(cap_fraction(3, h) - hp * hp * (3 - hp) / 4) < 1e-12


@pytest.mark.parametrize("d", [1, 2, 3, 7, 50, 200])
def test_quadrature_matches_incomplete_beta(d):
    for h in np.linspace(0, 1, 11):
        assert abs(cap_fraction(d, h) - cap_fraction_beta(d, h)) < 1e-10


def test_cap_decreasing():
    vals = [cap_fraction(4, h) for h in np.linspace(0, 1, 30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_cap_range_errors():
    with pytest.raises(ValueError):
        cap_fraction(2, 1.5)
    with pytest.raises(ValueError):
        cap_fraction(0, 0.5)


def test_monte_carlo_small():
    p, se = monte_carlo_cap_fraction(3, 0.2, 200_000, seed=3)
    assert abs(p - cap_fraction(3, 0.2)) < 4 * se


def test_gamma_small_c():
    g = gamma(0.01, 200)
    assert g.value > 0.97
    assert g.flags == ("truncated inf",)
    assert g.value <= min(g.per_d.values()) and g.value <= g.gaussian_limit


def test_gamma_monotone_on_grid():
    vals = [gamma(c, 60).value for c in np.linspace(0.05, 1.3, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(0 < v < 1 for v in vals)


def test_gamma_per_d_entry():
    g = gamma(1.0, 10)
    assert g.per_d[2] == pytest.approx(2 * cap_fraction(2, 1 / math.sqrt(2)), abs=1e-14)


def test_gamma_range():
    for bad in (0.0, math.sqrt(2), 2.0):
        with pytest.raises(ValueError):
            gamma(bad)


def test_gaussian_limit_is_erfc():
    for c in (0.1, 0.7, 1.3):
        assert abs(gaussian_slab_limit(c) - math.erfc(c / math.sqrt(2))) < 1e-10


def test_gaussian_limit_approached():
    c = 0.8
    assert abs(2 * cap_fraction(5000, c / math.sqrt(5000)) - gaussian_slab_limit(c)) < 1e-3


def test_r_d():
    assert r_d(1) == pytest.approx(0.5, abs=1e-15)
    assert abs(r_d(2) - 1 / math.sqrt(math.pi)) < 1e-12
    assert abs(r_d(1000) / r_d_asymptote(1000) - 1) < 0.01
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_beta_values():
    assert beta_from_gamma(0.9, 0.5, 2) == pytest.approx(1 - 0.55 ** 0.25, abs=1e-15)
    assert beta_from_gamma(1.0, 0.0, 2) == 0.0
    assert beta_fractional(1.0, 0.01, 2) > 0.55
    assert beta_fractional(1.0, 0.001, 3) > beta_fractional(1.0, 0.5, 3)


@pytest.mark.parametrize("seed", range(10))
def test_beta_ranges(seed):
    rng = random.Random(seed)
    a, c, d = rng.uniform(0.01, 1), rng.uniform(0.05, 1.35), rng.randint(2, 6)
    plain = beta_fractional(a, c, d, d_max=40)
    color = beta_fractional(a, c, d, colorful=True, d_max=40)
    assert 0 <= plain <= 1
    assert color <= plain
    assert is_vacuous(color) == (color <= 0)


def test_beta_errors():
    with pytest.raises(ValueError):
        beta_from_gamma(0.0, 0.5, 2)
    with pytest.raises(ValueError):
        beta_from_gamma(0.5, 0.5, 1)
