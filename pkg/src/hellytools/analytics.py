"""Cap volumes of the Euclidean ball and the derived constants gamma, beta and r_d.

Everything here is double precision.  Quadrature runs at relative tolerance
1e-12 so that reported values are good to about 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

SQRT2 = math.sqrt(2.0)


def _section(t: float, d: int) -> float:
    return (1.0 - t * t) ** ((d - 1) / 2.0)


def cap_fraction(d: int, h: float) -> float:
    """Fraction of the unit d-ball lying in {x : <x, u> >= h}, by adaptive quadrature."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"cap height must lie in [0, 1], got {h}")
    if h == 1.0:
        return 0.0
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=400)
    num, _ = integrate.quad(_section, h, 1.0, args=(d,), **opts)
    half, _ = integrate.quad(_section, 0.0, 1.0, args=(d,), **opts)
    return num / (2.0 * half)


def cap_fraction_beta(d: int, h: float) -> float:
    """Same quantity through the regularized incomplete beta function."""
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"cap height must lie in [0, 1], got {h}")
    return 0.5 * float(special.betainc((d + 1) / 2.0, 0.5, 1.0 - h * h))


def monte_carlo_cap_fraction(d: int, h: float, samples: int, seed: int = 0,
                             chunk: int = 1_000_000) -> tuple[float, float]:
    """Monte-Carlo estimate of the cap fraction and its standard error.

    Only the first coordinate of a uniform point in the ball is drawn:
    x_1 = g_1 / sqrt(g_1^2 + chi^2_{d-1}) * U^{1/d}.
    """
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        n = min(chunk, left)
        g = rng.standard_normal(n)
        rest = rng.chisquare(d - 1, n) if d > 1 else np.zeros(n)
        r = rng.random(n) ** (1.0 / d)
        x1 = g / np.sqrt(g * g + rest) * r
        hits += int(np.count_nonzero(x1 >= h))
        left -= n
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)


def gaussian_slab_limit(c: float) -> float:
    """Large-d limit of the two-cap fraction at height c/sqrt(d).

    Integrates the limiting cross-section density sqrt(e) exp(-pi e x^2) of the
    volume-one ball beyond c / sqrt(2 pi e), on both sides.
    """
    e = math.e
    lo = c / math.sqrt(2.0 * math.pi * e)
    tail, _ = integrate.quad(lambda x: math.sqrt(e) * math.exp(-math.pi * e * x * x), lo, math.inf,
                             epsabs=0.0, epsrel=1e-12)
    return 2.0 * tail


@dataclass
class GammaEval:
    c: float
    d_max: int
    per_d: dict = field(default_factory=dict)
    gaussian_limit: float = 1.0
    value: float = 1.0
    argmin: str = ""
    flags: tuple = ("truncated inf",)

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "d_max": self.d_max,
            "value": self.value,
            "argmin": self.argmin,
            "gaussian_limit": self.gaussian_limit,
            "per_d": {str(d): v for d, v in self.per_d.items()},
            "flags": list(self.flags),
        }


def gamma(c: float, d_max: int = 200) -> GammaEval:
    """Volume fraction of two opposite caps at height c/sqrt(d), minimized over d.

    The infimum over all d >= 2 is truncated at ``d_max`` and the d -> infinity
    gaussian limit is added as one more candidate.
    """
    if not 0.0 < c < SQRT2:
        raise ValueError(f"c must lie in (0, sqrt 2), got {c}")
    if d_max < 2:
        raise ValueError("d_max must be at least 2")
    out = GammaEval(c, d_max)
    for d in range(2, d_max + 1):
        out.per_d[d] = 2.0 * cap_fraction(d, c / math.sqrt(d))
    out.gaussian_limit = gaussian_slab_limit(c)
    d_best = min(out.per_d, key=out.per_d.get)
    if out.gaussian_limit < out.per_d[d_best]:
        out.value, out.argmin = out.gaussian_limit, "inf"
    else:
        out.value, out.argmin = out.per_d[d_best], str(d_best)
    return out


def ball_volume(d: int) -> float:
    return math.exp(0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0))


def r_d(d: int) -> float:
    """Radius of the d-dimensional Euclidean ball of volume one."""
    if d < 1:
        raise ValueError("dimension must be positive")
    log_vol = 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0)
    return math.exp(-log_vol / d)


def r_d_asymptote(d: int) -> float:
    return math.sqrt(d) / math.sqrt(2.0 * math.pi * math.e)


def beta_from_gamma(alpha: float, gamma_value: float, d: int, colorful: bool = False) -> float:
    """1 - (1 - alpha*gamma)^(1/2d), or 1 - 2d (1 - alpha*gamma)^(1/2d) for colors.

    The colorful value can be negative; it is returned unchanged.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if d < 2:
        raise ValueError("d must be at least 2")
    root = (1.0 - alpha * gamma_value) ** (1.0 / (2 * d))
    return 1.0 - (2 * d if colorful else 1) * root


def beta_fractional(alpha: float, c: float, d: int, colorful: bool = False, d_max: int = 200) -> float:
    return beta_from_gamma(alpha, gamma(c, d_max).value, d, colorful)


def is_vacuous(beta: float) -> bool:
    return beta <= 0.0
