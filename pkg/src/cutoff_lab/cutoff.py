"""Distance to equilibrium, cut-off time and window diagnostics.

``d(t)`` is the TV distance between the law at time ``t`` and the stationary
law. It is compared against the mean-shift distance ``D(t)`` and the
variance-mismatch remainder ``R(t)``, which always satisfy
``|d - D| <= R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError
from .gaussian_metrics import tv_general, tv_mean_shift, tv_variance_only
from .moments import GaussianLaw, noise_weights, sigma_sq_series
from .polyroots import RecurrenceSpec, RootDecomposition, spec_roots
from .recurrence import asymptotic_profile, iterate_deterministic, solve_representation

SANDWICH_SLACK = 1e-9
# floor() snaps values within this relative distance of an integer, so that
# t = log_{1/r}(1/eps) lands on k for eps = r^k despite rounding in the logs
FLOOR_SNAP = 1e-9
DEFAULT_EPS_GRID = tuple(10.0 ** -k for k in range(2, 9))


def snapped_floor(z: float) -> int:
    n = round(z)
    if abs(z - n) <= FLOOR_SNAP * max(1.0, abs(z)):
        return int(n)
    return math.floor(z)


def cutoff_time(r: float, l: int, eps: float) -> float:
    """``log_{1/r}(1/eps) + (l-1) log_{1/r}(log_{1/r}(1/eps))``.

    Raises
    ------
    DomainError
        Unless ``0 < r < 1``, ``l >= 1`` and ``0 < eps < r``.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    if not 0.0 < eps < r:
        raise DomainError(f"cut-off time needs 0 < eps < r = {r}, got eps={eps}")
    log_inv_r = -math.log(r)
    base = -math.log(eps) / log_inv_r
    return base + (l - 1) * math.log(base) / log_inv_r


def c3_ratio(alpha: float, r: float, eps: float) -> float:
    """``t^alpha r^t / eps`` at ``t = log_{1/r}(1/eps) + alpha log_{1/r}(log_{1/r}(1/eps))``.

    With ``L = log_{1/r}(1/eps)`` the log of the ratio is
    ``alpha ln t + t ln r - ln eps = alpha (ln t - ln L)``, evaluated in that
    form so nothing underflows and ``alpha = 0`` gives exactly 1.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    if not 0.0 < eps < r:
        raise DomainError(f"need 0 < eps < r = {r}, got eps={eps}")
    if alpha == 0:
        return 1.0
    log_inv_r = -math.log(r)
    L = -math.log(eps) / log_inv_r
    t = L + alpha * math.log(L) / log_inv_r
    if t <= 0:
        raise DomainError(f"t = {t} is not positive for alpha={alpha}, eps={eps}")
    return math.exp(alpha * math.log1p(alpha * math.log(L) / (log_inv_r * L)))


@dataclass(frozen=True)
class CutoffSchedule:
    r: float
    l: int
    C: float = 1.0

    def t_of_eps(self, eps: float) -> float:
        return cutoff_time(self.r, self.l, eps)

    def w_of_eps(self, eps: float) -> float:
        return self.C


@dataclass(frozen=True)
class CurvePoint:
    abscissa: float
    t: int
    d: float
    D: float
    R: float


@dataclass
class TVCurve:
    kind: str  # "time_grid", "b_grid" or "delta_grid"
    eps: float
    points: list[CurvePoint] = field(default_factory=list)

    def sandwich_violations(self, slack: float = SANDWICH_SLACK) -> list[CurvePoint]:
        return [pt for pt in self.points if abs(pt.d - pt.D) > pt.R + slack]

    def as_rows(self) -> list[tuple[float, float, float, float]]:
        return [(pt.abscissa, pt.d, pt.D, pt.R) for pt in self.points]


class _Evaluator:
    """Precomputed means and variances for distance evaluation up to ``t_max``.

    Each point depends only on the precomputed arrays, so evaluation order
    cannot change results.
    """

    def __init__(self, spec: RecurrenceSpec, roots: RootDecomposition | None, t_max: int):
        self.spec = spec
        self.x = iterate_deterministic(spec, max(t_max, spec.p - 1))
        self.sig_t = sigma_sq_series(spec, t_max)
        self.sig_inf = noise_weights(spec, roots=roots).sigma_inf_sq

    def point(self, t: int, eps: float, abscissa: float) -> CurvePoint:
        if t < self.spec.p:
            raise DomainError(f"distance is defined for t >= p = {self.spec.p}, got t={t}")
        xt = float(self.x[t])
        st = float(self.sig_t[t])
        e2 = eps * eps
        d = tv_general(GaussianLaw(xt, e2 * st), GaussianLaw(0.0, e2 * self.sig_inf))
        D = tv_mean_shift(xt / (eps * math.sqrt(self.sig_inf)), 1.0)
        R = tv_variance_only(st / self.sig_inf)
        return CurvePoint(float(abscissa), int(t), d, D, R)


def distance_curve(spec: RecurrenceSpec, roots: RootDecomposition | None, eps: float,
                   t_grid: Iterable[int]) -> TVCurve:
    """``d``, ``D`` and ``R`` at each integer time of ``t_grid`` (all ``>= p``)."""
    ts = [int(t) for t in t_grid]
    curve = TVCurve("time_grid", float(eps))
    if not ts:
        return curve
    ev = _Evaluator(spec, roots, max(ts))
    curve.points = [ev.point(t, eps, t) for t in ts]
    return curve


def profile_of(spec: RecurrenceSpec, roots: RootDecomposition | None = None):
    roots = roots if roots is not None else spec_roots(spec)
    return asymptotic_profile(solve_representation(spec, roots))


def centered_curve(spec: RecurrenceSpec, roots: RootDecomposition | None, eps: float,
                   b_grid: Iterable[float], C: float = 1.0) -> TVCurve:
    """Distances at ``floor(t_eps + b C)`` for each ``b`` of the grid.

    Raises
    ------
    DomainError
        If some evaluation time falls below ``p``.
    """
    prof = profile_of(spec, roots)
    t_eps = cutoff_time(prof.r, prof.l, eps)
    bs = [float(b) for b in b_grid]
    ts = [snapped_floor(t_eps + b * C) for b in bs]
    bad = [b for b, t in zip(bs, ts) if t < spec.p]
    if bad:
        raise DomainError(f"floor(t_eps + b C) < p for b in {bad} (t_eps = {t_eps:.6g})")
    curve = TVCurve("b_grid", float(eps))
    if not ts:
        return curve
    ev = _Evaluator(spec, roots, max(ts))
    curve.points = [ev.point(t, eps, b) for b, t in zip(bs, ts)]
    return curve


def _trend_ok(values: Sequence[float | None], increasing: bool, tol: float) -> bool:
    vals = [v for v in values if v is not None]
    for a, b in zip(vals, vals[1:]):
        if increasing and b < a - tol:
            return False
        if not increasing and b > a + tol:
            return False
    return True


def window_cutoff_check(spec: RecurrenceSpec, roots: RootDecomposition | None,
                        eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
                        b_neg: float = -20.0, b_pos: float = 20.0, tol: float = 0.01,
                        C: float = 1.0, deltas: Sequence[float] = (0.5, 1.5),
                        trend_tol: float = 0.02) -> dict:
    """Finite-eps diagnostic of window cut-off around ``t_eps``.

    For each ``eps`` the report holds ``d`` at ``floor(t_eps + b_neg C)`` and
    ``floor(t_eps + b_pos C)`` and at ``floor(delta t_eps)`` for each delta.
    Times below ``p`` are recorded as ``None`` and skipped by the trend tests.
    The verdict is PASS when, at the smallest ``eps``, the ``b_neg`` distance
    is at least ``1 - tol`` and the ``b_pos`` distance at most ``tol``.
    """
    eps_grid = [float(e) for e in eps_grid]
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps_grid must be strictly decreasing")
    if not b_neg < 0 < b_pos:
        raise ValueError("need b_neg < 0 < b_pos")
    prof = profile_of(spec, roots)
    t_eps = [cutoff_time(prof.r, prof.l, e) for e in eps_grid]

    def times(e_t: float) -> dict:
        out = {"b_neg": snapped_floor(e_t + b_neg * C), "b_pos": snapped_floor(e_t + b_pos * C)}
        for dl in deltas:
            out[f"delta={dl:g}"] = snapped_floor(dl * e_t)
        return out

    all_times = [times(te) for te in t_eps]
    t_max = max(max(tt.values()) for tt in all_times)
    ev = _Evaluator(spec, roots, max(t_max, spec.p))

    entries = []
    for e, te, tt in zip(eps_grid, t_eps, all_times):
        row = {"eps": e, "t_eps": te}
        for key, t in tt.items():
            row[f"t_{key}"] = t
            row[f"d_{key}"] = ev.point(t, e, t).d if t >= spec.p else None
        entries.append(row)

    last = entries[-1]
    d_neg, d_pos = last["d_b_neg"], last["d_b_pos"]
    passed = d_neg is not None and d_pos is not None and d_neg >= 1 - tol and d_pos <= tol
    trends = {
        "b_neg_nondecreasing": _trend_ok([r["d_b_neg"] for r in entries], True, trend_tol),
        "b_pos_nonincreasing": _trend_ok([r["d_b_pos"] for r in entries], False, trend_tol),
    }
    for dl in deltas:
        key = f"delta={dl:g}"
        if dl < 1:
            trends[f"{key}_nondecreasing"] = _trend_ok([r[f"d_{key}"] for r in entries], True, trend_tol)
        elif dl > 1:
            trends[f"{key}_nonincreasing"] = _trend_ok([r[f"d_{key}"] for r in entries], False, trend_tol)
    return {
        "r": prof.r,
        "l": prof.l,
        "C": C,
        "b_neg": b_neg,
        "b_pos": b_pos,
        "tol": tol,
        "profile_M": prof.M,
        "profile_sup_scan": prof.sup_scan,
        "profile_m_liminf": prof.m_liminf,
        "in_maximal_set": prof.in_maximal_set.value,
        "entries": entries,
        "trends": trends,
        "verdict": "PASS" if passed else "FAIL",
    }
