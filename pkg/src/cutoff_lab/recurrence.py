"""Deterministic recurrence: closed form, asymptotic profile, maximal set.

Every solution of the recurrence has the form

    x_t = sum_j sum_k c_{j,k} t^(k-1) lam_j^t

and, after discarding subdominant terms, ``x_t ~ t^(l-1) r^t v_t`` with
``v_t`` a finite trigonometric sum. Whether ``liminf |v_t| > 0`` decides if
the initial data lie in the maximal set where window cut-off holds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import IllConditioned, ZeroSolution
from .polyroots import RecurrenceSpec, RootDecomposition

ZERO_COEFF_TOL = 1e-9
MODULUS_TIE_TOL = 1e-9
RATIONAL_MAX_DEN = 10**4
RATIONAL_TOL = 1e-12
ZERO_VALUE_TOL = 1e-12
MAX_EXACT_PERIOD = 10**8
COND_LIMIT = 1e12
DEFAULT_SCAN_HORIZON = 10**5
SUP_SCAN_HORIZON = 10**4


class Verdict(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


def iterate_deterministic(spec: RecurrenceSpec, T: int) -> np.ndarray:
    """Values ``x_0 .. x_T`` by direct iteration."""
    p = spec.p
    if T < p - 1:
        raise ValueError(f"T must be >= p-1 = {p - 1}")
    x = np.empty(T + 1)
    x[:p] = spec.init
    # phi_1 multiplies the most recent value
    phi_rev = np.asarray(spec.phi[::-1])
    for t in range(p, T + 1):
        x[t] = float(np.dot(phi_rev, x[t - p:t]))
    return x


@dataclass(frozen=True)
class RepresentationTerm:
    root: complex
    multiplicity: int
    coeffs: tuple[complex, ...]  # c_{j,1} .. c_{j,m_j}, basis t^(k-1) lam^t


@dataclass(frozen=True)
class SolutionRepresentation:
    terms: tuple[RepresentationTerm, ...]
    init: tuple[float, ...]

    def evaluate(self, t) -> np.ndarray:
        """Complex values of the closed form at integer times ``t``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        for term in self.terms:
            lam_t = term.root ** t
            for k, c in enumerate(term.coeffs):
                if c == 0:
                    continue
                # 0**0 == 1 under numpy, matching t^(k-1) at t=0, k=1
                out += c * (t ** k) * lam_t
        return out

    def evaluate_real(self, t) -> np.ndarray:
        return np.real(self.evaluate(t))


def _basis_matrix(groups, p: int) -> np.ndarray:
    t = np.arange(p, dtype=float)
    cols = []
    for g in groups:
        lam_t = g.root ** t
        for k in range(g.multiplicity):
            cols.append((t ** k) * lam_t)
    return np.column_stack(cols).astype(complex)


def solve_representation(spec: RecurrenceSpec, roots: RootDecomposition) -> SolutionRepresentation:
    """Coefficients of the closed form fitted to the initial data.

    Solves the confluent Vandermonde system whose columns are the basis
    sequences ``t^(k-1) lam_j^t`` sampled at ``t = 0 .. p-1``.

    Raises
    ------
    IllConditioned
        If the condition number of the system exceeds 1e12.
    """
    p = spec.p
    if roots.degree != p:
        raise ValueError(f"root decomposition has degree {roots.degree}, spec has p={p}")
    A = _basis_matrix(roots.groups, p)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditioned(f"confluent Vandermonde condition number {cond:.3e} > {COND_LIMIT:.0e}")
    c = np.linalg.solve(A, np.asarray(spec.init, dtype=complex))

    per_group = []
    pos = 0
    for g in roots.groups:
        per_group.append(c[pos:pos + g.multiplicity].copy())
        pos += g.multiplicity

    # real data => conjugate roots carry conjugate coefficients
    for i, g in enumerate(roots.groups):
        if g.root.imag > 0:
            j = next(
                k for k, h in enumerate(roots.groups)
                if h.root == g.root.conjugate() and h.multiplicity == g.multiplicity
            )
            sym = (per_group[i] + np.conj(per_group[j])) / 2
            per_group[i] = sym
            per_group[j] = np.conj(sym)
        elif g.root.imag == 0:
            per_group[i] = per_group[i].real.astype(complex)

    terms = tuple(
        RepresentationTerm(g.root, g.multiplicity, tuple(complex(v) for v in cs))
        for g, cs in zip(roots.groups, per_group)
    )
    return SolutionRepresentation(terms, tuple(spec.init))


@dataclass(frozen=True)
class TrigTerm:
    """One summand ``alpha cos(2 pi theta t) + beta sin(2 pi theta t)``."""

    alpha: float
    beta: float
    theta: float
    theta_rational: Fraction | None = None

    @property
    def amplitude(self) -> float:
        return math.hypot(self.alpha, self.beta)


def certify_rational(theta: float, max_den: int = RATIONAL_MAX_DEN,
                     tol: float = RATIONAL_TOL) -> Fraction | None:
    """Best rational approximation with denominator <= ``max_den``, if within ``tol``.

    ``Fraction.limit_denominator`` walks the continued-fraction convergents
    (and the last semiconvergent) of ``theta``.
    """
    f = Fraction(theta).limit_denominator(max_den)
    if abs(float(f) - theta) <= tol:
        return f
    return None


def evaluate_trig(terms, t) -> np.ndarray:
    """``v_t`` at integer times; rational frequencies use exact phase reduction."""
    t = np.atleast_1d(np.asarray(t, dtype=np.int64))
    v = np.zeros(t.shape, dtype=float)
    for term in terms:
        if term.theta_rational is not None:
            num, den = term.theta_rational.numerator, term.theta_rational.denominator
            ang = 2.0 * np.pi * ((num * t) % den) / den
        else:
            ang = 2.0 * np.pi * np.mod(term.theta * t.astype(float), 1.0)
        v += term.alpha * np.cos(ang) + term.beta * np.sin(ang)
    return v


@dataclass(frozen=True)
class AsymptoticProfile:
    """``x_t ~ t^(l-1) r^t v_t`` with ``v_t = sum_j (alpha_j cos + beta_j sin)``.

    ``M`` is the triangle-inequality bound on ``sup |v_t|``; ``sup_scan`` is
    the observed maximum of ``|v_t|`` on ``0 <= t <= 10^4``. ``m_liminf`` is
    exact over one common period when every frequency is certified rational,
    otherwise a tail-window scan estimate.
    """

    r: float
    l: int
    terms: tuple[TrigTerm, ...]
    M: float
    sup_scan: float
    m_liminf: float
    liminf_exact: bool
    in_maximal_set: Verdict
    witness_t: int | None = None
    period: int | None = None

    def v(self, t) -> np.ndarray:
        return evaluate_trig(self.terms, t)


def _trig_terms(dominant) -> tuple[TrigTerm, ...]:
    terms = []
    for root, c in dominant:
        if root.imag < 0:
            continue  # absorbed by its conjugate partner
        if root.imag == 0:
            theta = 0.0 if root.real > 0 else 0.5
            terms.append(TrigTerm(float(c.real), 0.0, theta, Fraction(0) if theta == 0 else Fraction(1, 2)))
        else:
            theta = math.atan2(root.imag, root.real) / (2 * math.pi)
            # c e^{iwt} + conj(c) e^{-iwt} = 2Re(c) cos wt - 2Im(c) sin wt
            terms.append(TrigTerm(2 * c.real, -2 * c.imag, theta, certify_rational(theta)))
    return tuple(terms)


def _common_period(terms) -> int | None:
    period = 1
    for term in terms:
        if term.theta_rational is None:
            return None
        period = math.lcm(period, term.theta_rational.denominator)
    return period


def _exact_min(terms, period: int, chunk: int = 1 << 20) -> tuple[float, int]:
    best, best_t = math.inf, 0
    for start in range(0, period, chunk):
        t = np.arange(start, min(period, start + chunk), dtype=np.int64)
        vals = np.abs(evaluate_trig(terms, t))
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_t = float(vals[i]), int(t[i])
    return best, best_t


def scan_liminf(profile_or_terms, horizon: int) -> float:
    """``min |v_t|`` over the tail window ``horizon/2 <= t <= horizon``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    terms = getattr(profile_or_terms, "terms", profile_or_terms)
    t = np.arange(horizon // 2, horizon + 1, dtype=np.int64)
    return float(np.min(np.abs(evaluate_trig(terms, t))))


def _liminf_and_verdict(terms, scan_horizon: int):
    period = _common_period(terms)
    if period is not None and period <= MAX_EXACT_PERIOD:
        m, t_min = _exact_min(terms, period)
        if m <= ZERO_VALUE_TOL:
            return m, True, Verdict.NO, t_min, period
        return m, True, Verdict.YES, None, period
    return scan_liminf(terms, scan_horizon), False, Verdict.UNKNOWN, None, period


def asymptotic_profile(rep: SolutionRepresentation,
                       scan_horizon: int = DEFAULT_SCAN_HORIZON) -> AsymptoticProfile:
    """Dominant rate ``r``, polynomial order ``l`` and oscillating factor ``v_t``.

    Root groups whose coefficients all vanish are dropped. Among the surviving
    groups of maximal modulus ``r``, only those with the largest nonzero
    polynomial order ``l`` enter ``v_t``.

    Raises
    ------
    ZeroSolution
        If every coefficient vanishes (zero initial data).
    """
    thresh = ZERO_COEFF_TOL * (1.0 + float(np.linalg.norm(rep.init)))
    surviving = []
    for term in rep.terms:
        nz = [k for k, c in enumerate(term.coeffs) if abs(c) >= thresh]
        if nz:
            surviving.append((term, max(nz) + 1))
    if not surviving:
        raise ZeroSolution("all representation coefficients vanish (init = 0_p)")

    r = max(abs(term.root) for term, _ in surviving)
    top = [(term, lk) for term, lk in surviving if abs(abs(term.root) - r) <= MODULUS_TIE_TOL * r]
    l = max(lk for _, lk in top)
    dominant = [(term.root, term.coeffs[l - 1]) for term, lk in top if lk == l]
    terms = _trig_terms(dominant)

    M = float(sum(term.amplitude for term in terms))
    sup_scan = float(np.max(np.abs(evaluate_trig(terms, np.arange(SUP_SCAN_HORIZON + 1)))))
    m, exact, verdict, witness, period = _liminf_and_verdict(terms, scan_horizon)
    return AsymptoticProfile(r=float(r), l=int(l), terms=terms, M=M, sup_scan=sup_scan,
                             m_liminf=m, liminf_exact=exact, in_maximal_set=verdict,
                             witness_t=witness, period=period)


@dataclass(frozen=True)
class Membership:
    verdict: Verdict
    witness_t: int | None
    m_liminf: float
    exact: bool
    evidence: str


def maximal_set_membership(spec: RecurrenceSpec | None, profile: AsymptoticProfile) -> Membership:
    """Does ``spec.init`` lie in the maximal set where ``liminf |v_t| > 0``?

    ``Yes`` and ``No`` are certified over one exact period of ``v_t``;
    ``No`` comes with a witness ``t`` where ``|v_t| <= 1e-12``. When some
    frequency is not certified rational the verdict is ``Unknown`` and the
    scanned tail minimum is reported as evidence.
    """
    verdict = profile.in_maximal_set
    if verdict is Verdict.YES:
        evidence = f"min |v_t| over period {profile.period} is {profile.m_liminf:.10g}"
    elif verdict is Verdict.NO:
        evidence = f"|v_{profile.witness_t}| = {abs(profile.v(profile.witness_t)[0]):.3g} within period {profile.period}"
    else:
        evidence = f"frequencies not certified rational; scanned tail minimum {profile.m_liminf:.3g}"
    return Membership(verdict, profile.witness_t, profile.m_liminf, profile.liminf_exact, evidence)
