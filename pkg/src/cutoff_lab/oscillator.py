"""Forward-difference discretization of the damped Brownian oscillator.

With unit mass, ``x'' + gamma x' + kappa x = eps dB/dt`` and step ``h`` give

    X_{t+2} = (2 - gamma h) X_{t+1} - (1 - gamma h + kappa h^2) X_t + eps h^{3/2} xi_{t+2}

with characteristic polynomial ``lam^2 + (gamma h - 2) lam + (1 - gamma h + kappa h^2)``
whose discriminant is ``h^2 (gamma^2 - 4 kappa)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfRange, ValidationError
from .polyroots import RecurrenceSpec, check_stability, spec_roots
from .recurrence import certify_rational


def _positive(**kw: float) -> None:
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise ValidationError(f"{name} must be positive, got {v}")


def discretize(gamma: float, kappa: float, h: float, eps: float = 1.0,
               u: float = 1.0, v: float = 0.0) -> RecurrenceSpec:
    """Order-2 recurrence for position ``u`` and velocity ``v`` at time 0.

    Initial values are ``x_0 = u`` and ``x_1 = u + v h``; the noise
    amplitude of the recurrence is ``eps h^{3/2}``.
    """
    _positive(gamma=gamma, kappa=kappa, h=h, eps=eps)
    phi1 = 2.0 - gamma * h
    phi2 = -(1.0 - gamma * h + kappa * h * h)
    return RecurrenceSpec((phi1, phi2), (u, u + v * h), eps * h ** 1.5)


@dataclass(frozen=True)
class StabilityRange:
    case: str  # "i", "ii" or "iii"
    h_upper: float
    exact: bool  # False: (0, h_upper) is only sufficient
    h_star: float

    def describe(self) -> str:
        kind = "equivalent to" if self.exact else "sufficient:"
        return f"stability {kind} h in (0, {self.h_upper:.17g})"


def stability_range(gamma: float, kappa: float) -> StabilityRange:
    """Range of ``h`` giving all roots inside the unit disc.

    Overdamped (``gamma^2 > 4 kappa``): ``(0, 2/gamma)`` is sufficient only.
    Critical and underdamped: exactly ``(0, gamma/kappa)``.
    """
    _positive(gamma=gamma, kappa=kappa)
    disc = gamma * gamma - 4.0 * kappa
    if disc > 0:
        upper, case, exact = 2.0 / gamma, "i", False
    elif disc == 0:
        upper, case, exact = gamma / kappa, "ii", True
    else:
        upper, case, exact = gamma / kappa, "iii", True
    return StabilityRange(case, upper, exact, min(1.0, upper))


@dataclass(frozen=True)
class RootClass:
    case: str
    subcase: str
    roots: tuple[complex, ...]
    r: float
    theta: float | None = None
    theta_rational: Fraction | None = None
    signs: tuple[int, ...] = ()


def classify_roots(gamma: float, kappa: float, h: float) -> RootClass:
    """Case label of the discretized oscillator's characteristic roots.

    Subcases: ``i`` distinct real moduli, ``ii.1`` double real root,
    ``ii.2`` real roots ``+-r``, ``iii.1`` complex pair with rational
    rotation number, ``iii.2`` complex pair without a certified rational one.

    Raises
    ------
    OutOfRange
        If the roots at this ``h`` are not all inside the unit disc.
    """
    _positive(gamma=gamma, kappa=kappa, h=h)
    rng = stability_range(gamma, kappa)
    spec = discretize(gamma, kappa, h)
    roots = spec_roots(spec)
    stab = check_stability(roots)
    if rng.exact and not 0 < h < rng.h_upper:
        raise OutOfRange(f"h={h} outside {rng.describe()}")
    if not stab.stable:
        raise OutOfRange(f"h={h}: max root modulus {stab.kappa} >= 1")

    lams = tuple(g.root for g in roots.groups for _ in range(g.multiplicity))
    r = stab.kappa
    if rng.case == "iii":
        upper = next(z for z in lams if z.imag > 0)
        theta = math.atan2(upper.imag, upper.real) / (2 * math.pi)
        frac = certify_rational(theta)
        return RootClass("iii", "iii.1" if frac is not None else "iii.2", lams,
                         math.sqrt(1.0 - gamma * h + kappa * h * h), theta, frac)
    signs = tuple(1 if z.real > 0 else -1 for z in lams)
    if rng.case == "ii" or roots.q == 1:
        return RootClass(rng.case, "ii.1", lams, r, signs=signs)
    if abs(abs(lams[0]) - abs(lams[1])) <= 1e-12 * r:
        return RootClass(rng.case, "ii.2", lams, r, signs=signs)
    return RootClass(rng.case, "i", lams, r, signs=signs)
