"""Total-variation distance between one-dimensional Gaussian laws.

Two Gaussian densities cross at most twice, so the distance reduces to
normal CDF differences over the crossing points. Probabilities of intervals
are formed from ``erf``/``erfc`` directly, never as ``1 - Phi``, so that
distances near 0 and near 1 keep full relative precision.
"""

from __future__ import annotations

import math

from .moments import GaussianLaw

SQRT2 = math.sqrt(2.0)
EQUAL_VAR_TOL = 1e-12
SERIES_TOL = 1e-8


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF ``Phi(x) = erfc(-x/sqrt 2)/2``."""
    return 0.5 * math.erfc(-x / SQRT2)


def normal_mass(a: float, b: float) -> float:
    """``P(a < Z < b)`` for standard normal ``Z``, accurate in both tails."""
    if b <= a:
        return 0.0
    if a >= 0.0:
        return 0.5 * (math.erfc(a / SQRT2) - math.erfc(b / SQRT2))
    if b <= 0.0:
        return 0.5 * (math.erfc(-b / SQRT2) - math.erfc(-a / SQRT2))
    return 0.5 * (math.erf(b / SQRT2) - math.erf(a / SQRT2))


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, v))


def tv_mean_shift(m: float, sigma_sq: float) -> float:
    """TV between ``N(m, sigma_sq)`` and ``N(0, sigma_sq)``: ``2 Phi(|m|/2 sigma) - 1``."""
    if not sigma_sq > 0:
        raise ValueError("sigma_sq must be positive")
    return _clamp(math.erf(abs(m) / (2.0 * math.sqrt(sigma_sq) * SQRT2)))


def _log_ratio(s: float) -> float:
    """``ln(s)/(s-1)`` with its removable singularity at ``s = 1``."""
    d = s - 1.0
    if abs(d) < SERIES_TOL:
        return 1.0 - d / 2.0
    if abs(d) < 0.5:
        return math.log1p(d) / d
    return math.log(s) / d


def crossing_scale(sigma_sq: float) -> float:
    """``x(sigma) = sigma sqrt(ln(sigma^2)/(sigma^2 - 1))``; tends to 1 as ``sigma^2 -> 1``."""
    return math.sqrt(sigma_sq) * math.sqrt(_log_ratio(sigma_sq))


def tv_variance_only(sigma_sq: float) -> float:
    """TV between ``N(0, sigma_sq)`` and ``N(0, 1)``.

    The densities cross at ``+-x(sigma)``; the distance is twice the standard
    normal mass between ``x(sigma)/sigma`` and ``x(sigma)``.
    """
    if not sigma_sq > 0:
        raise ValueError("sigma_sq must be positive")
    if sigma_sq == 1.0:
        return 0.0
    x = crossing_scale(sigma_sq)
    y = x / math.sqrt(sigma_sq)
    return _clamp(2.0 * normal_mass(min(x, y), max(x, y)))


def _crossings(mu: float, s: float) -> tuple[float, float]:
    """Crossing points of ``N(mu, s)`` and ``N(0, 1)`` for ``s != 1``.

    Roots of ``(1-s) z^2 - 2 mu z + mu^2 + s ln s = 0``; the discriminant
    ``s (mu^2 + (s-1) ln s)`` is nonnegative.
    """
    d = s - 1.0
    log_s = math.log1p(d) if 0.5 < s < 2.0 else math.log(s)
    c = mu * mu + s * log_s
    disc = s * (mu * mu + d * log_s)
    q = mu + math.copysign(math.sqrt(disc), mu if mu != 0 else 1.0)
    z1 = q / (1.0 - s)
    z2 = c / q if q != 0 else -z1
    return (z1, z2) if z1 <= z2 else (z2, z1)


def tv_general(a: GaussianLaw, b: GaussianLaw) -> float:
    """Exact TV between two Gaussian laws via density crossing points.

    ``a`` is reduced to ``N(mu, s)`` relative to ``b`` standardized to
    ``N(0, 1)``. Equal variances give a single crossing and the mean-shift
    formula; otherwise the narrower law dominates between the two crossings
    ``z1 < z2`` and the distance is the difference of the two masses there.
    """
    sb = math.sqrt(b.variance)
    mu = (a.mean - b.mean) / sb
    s = a.variance / b.variance
    if abs(s - 1.0) < EQUAL_VAR_TOL:
        return tv_mean_shift(mu, 1.0)
    z1, z2 = _crossings(mu, s)
    sa = math.sqrt(s)
    mass_a = normal_mass((z1 - mu) / sa, (z2 - mu) / sa)
    mass_b = normal_mass(z1, z2)
    return _clamp(abs(mass_a - mass_b))
