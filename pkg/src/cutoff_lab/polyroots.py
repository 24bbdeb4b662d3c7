"""Characteristic polynomial of a linear recurrence and its roots.

The recurrence

    x_{t+p} = phi_1 x_{t+p-1} + ... + phi_p x_t

has characteristic polynomial ``f(lam) = lam^p - phi_1 lam^{p-1} - ... - phi_p``.
Roots are found as companion-matrix eigenvalues, polished by Newton steps on
``f`` and then grouped into multiplicity clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonConvergence, ValidationError

CLUSTER_TOL = 1e-7
REAL_SNAP_TOL = 1e-9
# Loose radius within which polished clusters are tested for a common
# multiple root via vanishing Taylor coefficients.
COALESCE_RADIUS = 1e-3
NEWTON_MAX_ITER = 60


@dataclass(frozen=True)
class RecurrenceSpec:
    """Order-``p`` recurrence with Gaussian noise amplitude ``eps``.

    Attributes
    ----------
    phi : tuple of float
        Coefficients ``phi_1 .. phi_p``; ``phi_p`` must be nonzero.
    init : tuple of float
        Initial values ``x_0 .. x_{p-1}``.
    eps : float
        Noise amplitude, strictly positive.
    """

    phi: tuple[float, ...]
    init: tuple[float, ...]
    eps: float = 1.0

    def __post_init__(self) -> None:
        phi = tuple(float(c) for c in self.phi)
        init = tuple(float(c) for c in self.init)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "eps", float(self.eps))
        if len(phi) == 0:
            raise ValidationError("invariant p >= 1 violated: phi is empty")
        if len(init) != len(phi):
            raise ValidationError(
                f"invariant len(init) == p violated: p={len(phi)}, len(init)={len(init)}"
            )
        if not all(math.isfinite(c) for c in phi + init):
            raise ValidationError("phi and init must be finite")
        if phi[-1] == 0.0:
            raise ValidationError("invariant phi_p != 0 violated")
        if not (self.eps > 0.0 and math.isfinite(self.eps)):
            raise ValidationError(f"invariant eps > 0 violated: eps={self.eps}")

    @property
    def p(self) -> int:
        return len(self.phi)

    def with_eps(self, eps: float) -> "RecurrenceSpec":
        return RecurrenceSpec(self.phi, self.init, eps)


@dataclass(frozen=True)
class PolyCoeffs:
    """Monic coefficients, highest degree first (``numpy.polyval`` order)."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        c = tuple(float(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise ValidationError("polynomial must have degree >= 1")
        if c[0] != 1.0:
            raise ValidationError("polynomial must be monic")
        if c[-1] == 0.0:
            raise ValidationError("constant term must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return np.polyval(self.coeffs, lam)


@dataclass(frozen=True)
class RootGroup:
    root: complex
    multiplicity: int


@dataclass(frozen=True)
class RootDecomposition:
    """Distinct roots with multiplicities.

    Groups are sorted by descending modulus, ties by ascending principal
    argument. Non-real roots come in exact conjugate pairs.
    """

    groups: tuple[RootGroup, ...]

    @property
    def q(self) -> int:
        return len(self.groups)

    @property
    def degree(self) -> int:
        return sum(g.multiplicity for g in self.groups)

    def all_roots(self) -> np.ndarray:
        """Roots repeated according to multiplicity."""
        return np.array(
            [g.root for g in self.groups for _ in range(g.multiplicity)], dtype=complex
        )

    def expand(self) -> np.ndarray:
        """Coefficients of ``prod_j (lam - lam_j)^{m_j}`` (real part)."""
        return np.real(np.poly(self.all_roots()))


@dataclass(frozen=True)
class Stability:
    stable: bool
    margin: float
    kappa: float

    def __bool__(self) -> bool:
        return self.stable


def characteristic_polynomial(spec: RecurrenceSpec) -> PolyCoeffs:
    """Return ``(1, -phi_1, ..., -phi_p)``."""
    return PolyCoeffs((1.0,) + tuple(-c for c in spec.phi))


def _taylor_coeffs(coeffs: np.ndarray, z: complex, upto: int) -> tuple[np.ndarray, np.ndarray]:
    """Taylor coefficients f^(k)(z)/k! for k < upto, with rounding-error scales.

    The scale for coefficient k is sum_i |a_i| C(n-i, k) |z|^(n-i-k), a bound on
    the magnitude of the terms summed while evaluating it.
    """
    n = len(coeffs) - 1
    vals = np.zeros(upto, dtype=complex)
    scales = np.zeros(upto)
    az = abs(z)
    for k in range(upto):
        v = 0j
        s = 0.0
        for i, a in enumerate(coeffs):
            e = n - i
            if e < k:
                continue
            b = math.comb(e, k)
            v += a * b * z ** (e - k)
            s += abs(a) * b * az ** (e - k)
        vals[k] = v
        scales[k] = s
    return vals, scales


def _newton_polish(coeffs: np.ndarray, z: complex) -> complex:
    dcoeffs = np.polyder(coeffs)
    fz = np.polyval(coeffs, z)
    for _ in range(NEWTON_MAX_ITER):
        d = np.polyval(dcoeffs, z)
        if d == 0:
            break
        step = fz / d
        znew = z - step
        fnew = np.polyval(coeffs, znew)
        if abs(fnew) >= abs(fz):
            break
        z, fz = znew, fnew
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


def _refine_multiple(coeffs: np.ndarray, z: complex, m: int) -> complex:
    """Newton on f^(m-1), which has a simple root at an m-fold root of f."""
    if m < 2:
        return complex(z)
    dm1 = np.polyder(coeffs, m - 1)
    dm = np.polyder(dm1)
    best, best_val = complex(z), abs(np.polyval(dm1, z))
    for _ in range(8):
        den = np.polyval(dm, z)
        if den == 0:
            break
        z = z - np.polyval(dm1, z) / den
        val = abs(np.polyval(dm1, z))
        if val < best_val:
            best, best_val = complex(z), val
    return best


def _snap_and_pair(roots: list[complex]) -> list[complex]:
    """Snap near-real roots onto the axis and symmetrize conjugate pairs."""
    out: list[complex] = []
    upper: list[complex] = []
    lower: list[complex] = []
    for z in roots:
        if abs(z.imag) < REAL_SNAP_TOL * (1.0 + abs(z.real)):
            out.append(complex(z.real, 0.0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    if len(upper) != len(lower):
        raise NonConvergence("non-real roots do not pair into conjugates")
    remaining = list(lower)
    for z in upper:
        k = min(range(len(remaining)), key=lambda i: abs(remaining[i] - z.conjugate()))
        w = remaining.pop(k)
        sym = (z + w.conjugate()) / 2
        out.append(sym)
        out.append(sym.conjugate())
    return out


def _cluster(roots: list[complex]) -> list[list[complex]]:
    """Single-linkage clustering at CLUSTER_TOL * max(1, |lam|)."""
    clusters: list[list[complex]] = []
    for z in roots:
        hits = [
            c for c in clusters
            if any(abs(z - w) < CLUSTER_TOL * max(1.0, abs(z), abs(w)) for w in c)
        ]
        merged = [z]
        for c in hits:
            merged.extend(c)
            clusters.remove(c)
        clusters.append(merged)
    return clusters


def _coalesce(coeffs: np.ndarray, groups: list[tuple[complex, int]]) -> list[tuple[complex, int]]:
    """Merge nearby groups whose mean is a numerically certified multiple root.

    Eigenvalues of a companion matrix with an m-fold root scatter by roughly
    eps**(1/m), which exceeds CLUSTER_TOL for m >= 3. A merged group of total
    multiplicity m at mean z is accepted when every Taylor coefficient of order
    < m vanishes to within its own rounding-error scale.
    """
    unit = np.finfo(float).eps
    changed = True
    while changed:
        changed = False
        for i, (z, m) in enumerate(groups):
            near = [
                j for j, (w, _) in enumerate(groups)
                if j != i and abs(w - z) < COALESCE_RADIUS * max(1.0, abs(z))
            ]
            if not near:
                continue
            members = [i] + near
            total = sum(groups[j][1] for j in members)
            mean = sum(groups[j][0] * groups[j][1] for j in members) / total
            mean = _refine_multiple(coeffs, mean, total)
            vals, scales = _taylor_coeffs(coeffs, mean, total)
            if all(abs(v) <= 64 * total * unit * s for v, s in zip(vals, scales)):
                groups = [g for j, g in enumerate(groups) if j not in members]
                groups.append((mean, total))
                changed = True
                break
    return groups


def _sort_key(z: complex) -> tuple[float, float]:
    return (-round(abs(z), 12), round(math.atan2(z.imag, z.real), 12))


def find_roots(poly: PolyCoeffs, residual_tol: float | None = None) -> RootDecomposition:
    """Roots of a monic polynomial, grouped by multiplicity.

    Parameters
    ----------
    poly : PolyCoeffs
        Monic polynomial with nonzero constant term.
    residual_tol : float, optional
        Maximum accepted ``|f(lam_j)|``; defaults to
        ``1e-10 * (1 + max|coeff|)``.

    Raises
    ------
    NonConvergence
        If some group violates the residual tolerance after polishing.
    """
    coeffs = np.asarray(poly.coeffs, dtype=float)
    if residual_tol is None:
        residual_tol = 1e-10 * (1.0 + float(np.max(np.abs(coeffs))))
    n = poly.degree
    companion = np.zeros((n, n))
    companion[0, :] = -coeffs[1:]
    if n > 1:
        companion[1:, :-1] = np.eye(n - 1)
    raw = np.linalg.eigvals(companion)
    polished = [_newton_polish(coeffs, complex(z)) for z in raw]
    paired = _snap_and_pair(polished)
    groups = [
        (_refine_multiple(coeffs, complex(np.mean(c)), len(c)), len(c))
        for c in _cluster(paired)
    ]
    groups = _coalesce(coeffs, groups)

    # Conjugate closure on the group level, then re-snap group means.
    fixed: list[tuple[complex, int]] = []
    upper = []
    for z, m in groups:
        if abs(z.imag) < REAL_SNAP_TOL * (1.0 + abs(z.real)):
            fixed.append((complex(z.real, 0.0), m))
        elif z.imag > 0:
            upper.append((z, m))
    lower = [(z, m) for z, m in groups if not abs(z.imag) < REAL_SNAP_TOL * (1.0 + abs(z.real)) and z.imag < 0]
    if len(upper) != len(lower):
        raise NonConvergence("root groups do not close under conjugation")
    for z, m in upper:
        k = min(range(len(lower)), key=lambda i: abs(lower[i][0] - z.conjugate()))
        w, mw = lower.pop(k)
        if mw != m:
            raise NonConvergence("conjugate root groups have different multiplicities")
        sym = (z + w.conjugate()) / 2
        fixed.append((sym, m))
        fixed.append((sym.conjugate(), m))

    for z, _ in fixed:
        if abs(np.polyval(coeffs, z)) > residual_tol:
            raise NonConvergence(
                f"root {z} has residual {abs(np.polyval(coeffs, z)):.3e} > {residual_tol:.3e}"
            )
    fixed.sort(key=lambda g: _sort_key(g[0]))
    return RootDecomposition(tuple(RootGroup(complex(z), int(m)) for z, m in fixed))


def check_stability(roots: RootDecomposition) -> Stability:
    """Hypothesis check: every root strictly inside the unit disc.

    Returns the verdict, the margin ``1 - kappa`` and ``kappa = max |lam_j|``.
    """
    kappa = max(abs(g.root) for g in roots.groups)
    return Stability(stable=kappa < 1.0, margin=1.0 - kappa, kappa=kappa)


def spec_roots(spec: RecurrenceSpec) -> RootDecomposition:
    """Shorthand for ``find_roots(characteristic_polynomial(spec))``."""
    return find_roots(characteristic_polynomial(spec))


def polynomial_from_roots(roots: Sequence[complex]) -> tuple[float, ...]:
    """Recurrence coefficients ``phi`` whose characteristic roots are ``roots``."""
    c = np.real(np.poly(np.asarray(roots, dtype=complex)))
    return tuple(float(-v) for v in c[1:])
