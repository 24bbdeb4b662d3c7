"""Gaussian laws of the perturbed recurrence.

For ``t >= p`` the noisy state is ``N(x_t, eps^2 sigma_t^2)`` where

    sigma_t^2 = sum_{s=0}^{t-p} psi_s^2

and ``psi_s`` is the complete homogeneous symmetric polynomial of degree
``s`` in the characteristic roots. Equivalently ``psi`` is the impulse
response of the recurrence, which is how it is computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, Unstable, ValidationError
from .polyroots import RecurrenceSpec, RootDecomposition, check_stability, spec_roots
from .recurrence import iterate_deterministic

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class GaussianLaw:
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if not self.variance > 0.0:
            raise ValidationError(f"invariant variance > 0 violated: {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class NoiseWeights:
    psi: np.ndarray
    sigma_sq_partial: np.ndarray  # sigma^2_{p+s} = sum_{u<=s} psi_u^2
    sigma_inf_sq: float
    truncation_index: int
    tail_bound: float
    kappa: float


def psi_weights(spec: RecurrenceSpec, n: int) -> np.ndarray:
    """``psi_0 .. psi_n`` from ``psi_s = phi_1 psi_{s-1} + ... + phi_p psi_{s-p}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    p = spec.p
    phi = np.asarray(spec.phi)
    psi = np.zeros(n + 1)
    psi[0] = 1.0
    for s in range(1, n + 1):
        k = min(p, s)
        # psi[s-1], psi[s-2], ..., psi[s-k] against phi_1..phi_k
        psi[s] = float(np.dot(phi[:k], psi[s - 1::-1][:k]))
    return psi


def sigma_t_sq(spec: RecurrenceSpec, t: int) -> float:
    """Normalized variance ``sigma_t^2`` of the state at time ``t >= p``."""
    if t < spec.p:
        raise DomainError(f"sigma_t^2 is defined for t >= p = {spec.p}, got t={t}")
    psi = psi_weights(spec, t - spec.p)
    return math.fsum(psi * psi)


def sigma_sq_series(spec: RecurrenceSpec, t_max: int) -> np.ndarray:
    """Array ``s`` with ``s[t] = sigma_t^2`` for ``p <= t <= t_max`` (NaN below p)."""
    out = np.full(t_max + 1, np.nan)
    if t_max < spec.p:
        return out
    psi = psi_weights(spec, t_max - spec.p)
    out[spec.p:] = np.cumsum(psi * psi)
    return out


def crude_tail_bound(J: int, p: int, kappa: float) -> float:
    """Upper bound on ``sum_{j>J} (j+1)^{2p} kappa^{2j}``.

    Term ratios ``((j+2)/(j+1))^{2p} kappa^2`` decrease in ``j``; once the
    ratio at ``J+1`` is below one the tail is dominated by a geometric series.
    Returns ``inf`` before that point.
    """
    if kappa == 0.0:
        return 0.0
    j = J + 1
    ratio = ((j + 2) / (j + 1)) ** (2 * p) * kappa * kappa
    if ratio >= 1.0:
        return math.inf
    log_term = 2 * p * math.log(j + 1) + 2 * j * math.log(kappa)
    return math.exp(log_term) / (1.0 - ratio)


def _kappa(spec: RecurrenceSpec, roots: RootDecomposition | None) -> float:
    if roots is None:
        roots = spec_roots(spec)
    return check_stability(roots).kappa


def noise_weights(spec: RecurrenceSpec, tol: float = DEFAULT_TOL,
                  roots: RootDecomposition | None = None,
                  early_stop: bool = True) -> NoiseWeights:
    """Weights ``psi`` and ``sigma_inf^2`` truncated with a certified tail bound.

    The truncation index ``J`` is the first index where the crude tail bound
    ``sum_{j>J} (j+1)^{2p} kappa^{2j}`` drops below ``tol``. With
    ``early_stop`` the sum may end sooner, once ``psi_s^2`` stays below
    ``tol (1 - kappa^2) / 2`` for ``2p`` consecutive indices. The reported
    ``tail_bound`` is always the crude bound evaluated at the index used.

    Raises
    ------
    Unstable
        If ``kappa >= 1``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    kappa = _kappa(spec, roots)
    if kappa >= 1.0:
        raise Unstable(f"max root modulus kappa = {kappa} >= 1")
    p = spec.p
    phi = np.asarray(spec.phi)
    small = tol * (1.0 - kappa * kappa) / 2.0

    psi = [1.0]
    run = 1 if 1.0 < small else 0
    J = 0
    while True:
        if crude_tail_bound(J, p, kappa) < tol:
            break
        if early_stop and run >= 2 * p:
            break
        s = len(psi)
        k = min(p, s)
        val = math.fsum(phi[i] * psi[s - 1 - i] for i in range(k))
        psi.append(val)
        J = s
        run = run + 1 if val * val < small else 0
    psi_arr = np.asarray(psi)
    partial = np.cumsum(psi_arr * psi_arr)
    value = math.fsum(psi_arr * psi_arr)
    return NoiseWeights(psi=psi_arr, sigma_sq_partial=partial, sigma_inf_sq=value,
                        truncation_index=J, tail_bound=crude_tail_bound(J, p, kappa),
                        kappa=kappa)


def sigma_inf_sq(spec: RecurrenceSpec, tol: float = DEFAULT_TOL,
                 roots: RootDecomposition | None = None) -> tuple[float, int, float]:
    """``(sigma_inf^2, truncation_index, tail_bound)``."""
    w = noise_weights(spec, tol, roots)
    return w.sigma_inf_sq, w.truncation_index, w.tail_bound


def law_at(spec: RecurrenceSpec, t: int, roots: RootDecomposition | None = None) -> GaussianLaw:
    """Law of the noisy state at time ``t >= p``: ``N(x_t, eps^2 sigma_t^2)``.

    ``roots`` is accepted for interface symmetry; the law needs only ``spec``.
    """
    var = sigma_t_sq(spec, t)
    x = iterate_deterministic(spec, t)[t]
    return GaussianLaw(float(x), spec.eps ** 2 * var)


def limit_law(spec: RecurrenceSpec, tol: float = DEFAULT_TOL,
              roots: RootDecomposition | None = None) -> GaussianLaw:
    """Stationary law ``N(0, eps^2 sigma_inf^2)``."""
    value, _, _ = sigma_inf_sq(spec, tol, roots)
    return GaussianLaw(0.0, spec.eps ** 2 * value)
