"""Independent reference computations shared by the unit and acceptance tests."""

import math

import mpmath
import numpy as np
from scipy import integrate, optimize


def tv_quadrature(m1: float, v1: float, m2: float, v2: float) -> float:
    """Half the L1 distance between two normal densities by adaptive quadrature.

    Sign changes of ``f - g`` are bracketed on a dense grid and refined with
    Brent's method, so the integrand is smooth on every piece. Nothing here
    uses the closed-form crossing points.
    """
    s1, s2 = math.sqrt(v1), math.sqrt(v2)
    c1, c2 = 1 / (s1 * math.sqrt(2 * math.pi)), 1 / (s2 * math.sqrt(2 * math.pi))

    def diff(x):
        return c1 * math.exp(-0.5 * ((x - m1) / s1) ** 2) - c2 * math.exp(-0.5 * ((x - m2) / s2) ** 2)

    lo = min(m1 - 40 * s1, m2 - 40 * s2)
    hi = max(m1 + 40 * s1, m2 + 40 * s2)
    grid = np.linspace(lo, hi, 20001)
    vals = (c1 * np.exp(-0.5 * ((grid - m1) / s1) ** 2)
            - c2 * np.exp(-0.5 * ((grid - m2) / s2) ** 2))
    cuts = [lo]
    for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        cuts.append(optimize.brentq(diff, grid[k], grid[k + 1], xtol=1e-15, rtol=1e-15))
    cuts.append(hi)
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        pts = [x for x in (m1, m2) if a < x < b]
        val, _ = integrate.quad(diff, a, b, points=pts or None, epsabs=1e-15, epsrel=1e-13, limit=400)
        total += abs(val)
    return 0.5 * total


def c3_direct(alpha: float, r: float, eps: float, dps: int = 60) -> float:
    """``t^alpha r^t / eps`` at the shifted cut-off time, in high precision."""
    with mpmath.workdps(dps):
        r_, e_ = mpmath.mpf(r), mpmath.mpf(eps)
        L = mpmath.log(1 / e_) / mpmath.log(1 / r_)
        t = L + alpha * mpmath.log(L) / mpmath.log(1 / r_)
        return float(t ** alpha * r_ ** t / e_)


def random_gaussian_pairs(n: int, seed: int = 99) -> np.ndarray:
    """Rows ``(m1, v1, m2, v2)`` with means in [-3, 3] and variances in [0.05, 20]."""
    rng = np.random.default_rng(seed)
    m = rng.uniform(-3, 3, size=(n, 2))
    v = np.exp(rng.uniform(math.log(0.05), math.log(20), size=(n, 2)))
    return np.column_stack([m[:, 0], v[:, 0], m[:, 1], v[:, 1]])
