"""Monte Carlo simulation of the perturbed recurrence.

Innovations come from a counter-based generator (Philox4x32-10): the normal
draw for path ``i`` at time ``t`` is a pure function of ``(seed, i, t)``.
Paths are processed in fixed-size blocks whose moment summaries are merged
in block order, so results are bitwise identical for any thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .moments import sigma_sq_series
from .polyroots import RecurrenceSpec, RootDecomposition
from .recurrence import iterate_deterministic

BLOCK_SIZE = 1 << 16
THREADS_ENV = "CUTOFF_LAB_THREADS"

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)


def philox4x32(counter, key, rounds: int = 10):
    """Philox4x32 block function, vectorized over broadcastable uint32 inputs.

    ``counter`` is a sequence of four word arrays and ``key`` a pair of words.
    Returns four ``uint32`` arrays.
    """
    c0, c1, c2, c3 = (np.asarray(w, dtype=np.uint64) for w in counter)
    k0 = np.asarray(key[0], dtype=np.uint64)
    k1 = np.asarray(key[1], dtype=np.uint64)
    for r in range(rounds):
        if r:
            k0 = (k0 + _W0) & _MASK32
            k1 = (k1 + _W1) & _MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0, lo0 = p0 >> _SHIFT32, p0 & _MASK32
        hi1, lo1 = p1 >> _SHIFT32, p1 & _MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return tuple(w.astype(np.uint32) for w in (c0, c1, c2, c3))


def _seed_key(seed: int) -> tuple[np.uint64, np.uint64]:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.uint64(seed & 0xFFFFFFFF), np.uint64(seed >> 32)


def _uniform53(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Uniform on (0, 1) from two 32-bit words; never returns 0 or 1."""
    hi = (a >> np.uint32(5)).astype(np.float64)
    lo = (b >> np.uint32(6)).astype(np.float64)
    return (hi * 67108864.0 + lo + 0.5) / 9007199254740992.0


def standard_normals(seed: int, paths: np.ndarray, step: int) -> np.ndarray:
    """Standard normal draw for each path index at innovation index ``step``.

    One Philox call yields two normals, so ``step`` selects counter word
    ``step // 2`` and the word pair ``step % 2``.
    """
    paths = np.asarray(paths, dtype=np.uint64)
    k0, k1 = _seed_key(seed)
    zeros = np.zeros_like(paths)
    ctr = (
        np.full_like(paths, step // 2),
        zeros,
        paths & _MASK32,
        paths >> _SHIFT32,
    )
    w = philox4x32(ctr, (k0, k1))
    if step % 2 == 0:
        u = _uniform53(w[0], w[1])
    else:
        u = _uniform53(w[2], w[3])
    return ndtri(u)


@dataclass(frozen=True)
class SimConfig:
    """Simulation setup. ``eps`` overrides ``spec.eps`` when given (0 allowed)."""

    spec: RecurrenceSpec
    T: int
    N: int
    seed: int = 0
    eps: float | None = None

    def __post_init__(self) -> None:
        if self.T < self.spec.p:
            raise ValueError(f"T must be >= p = {self.spec.p}")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        _seed_key(self.seed)
        if self.eps is not None and not self.eps >= 0:
            raise ValueError("eps override must be >= 0")

    @property
    def noise(self) -> float:
        return self.spec.eps if self.eps is None else float(self.eps)


@dataclass
class SimResult:
    sample_mean: np.ndarray
    sample_var: np.ndarray
    N: int
    T: int
    seed: int
    samples: dict[int, np.ndarray] = field(default_factory=dict)


def _simulate_block(cfg: SimConfig, start: int, stop: int, record: tuple[int, ...]):
    p = cfg.spec.p
    n = stop - start
    ids = np.arange(start, stop, dtype=np.uint64)
    phi = cfg.spec.phi
    eps = cfg.noise
    # lag state: state[k] holds X_{t-p+k}
    state = [np.full(n, v, dtype=np.float64) for v in cfg.spec.init]
    mean = np.zeros(cfg.T + 1)
    m2 = np.zeros(cfg.T + 1)
    kept = {}
    for t in range(cfg.T + 1):
        if t < p:
            cur = state[t]
        else:
            cur = np.zeros(n)
            for i, c in enumerate(phi):
                cur = cur + c * state[p - 1 - i]
            cur = cur + eps * standard_normals(cfg.seed, ids, t - p)
            state = state[1:] + [cur]
        mu = float(np.mean(cur))
        mean[t] = mu
        m2[t] = float(np.sum((cur - mu) ** 2))
        if t in record:
            kept[t] = cur.copy()
    return n, mean, m2, kept


def _threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def simulate_paths(cfg: SimConfig, threads: int | None = None,
                   record: tuple[int, ...] = ()) -> SimResult:
    """Simulate ``N`` independent paths up to time ``T``.

    Block summaries ``(count, mean, M2)`` are combined with Chan's pairwise
    update in block order. ``record`` lists times whose raw samples are kept.
    """
    blocks = [(s, min(cfg.N, s + BLOCK_SIZE)) for s in range(0, cfg.N, BLOCK_SIZE)]
    record = tuple(int(t) for t in record)
    n_threads = min(_threads(threads), len(blocks))
    if n_threads == 1:
        parts = [_simulate_block(cfg, a, b, record) for a, b in blocks]
    else:
        with ThreadPoolExecutor(n_threads) as pool:
            parts = list(pool.map(lambda ab: _simulate_block(cfg, ab[0], ab[1], record), blocks))

    n_tot, mean, m2, _ = parts[0]
    for n_b, mean_b, m2_b, _ in parts[1:]:
        n_new = n_tot + n_b
        delta = mean_b - mean
        mean = mean + delta * (n_b / n_new)
        m2 = m2 + m2_b + delta * delta * (n_tot * n_b / n_new)
        n_tot = n_new
    var = m2 / (cfg.N - 1) if cfg.N > 1 else np.zeros_like(m2)
    samples = {t: np.concatenate([part[3][t] for part in parts]) for t in record}
    return SimResult(sample_mean=mean, sample_var=var, N=cfg.N, T=cfg.T, seed=cfg.seed,
                     samples=samples)


def validate_moments(res: SimResult, spec: RecurrenceSpec, roots: RootDecomposition | None = None,
                     eps: float | None = None, variance_scale: float = 1.0,
                     z_max: float = 5.0) -> dict:
    """z-scores of simulated moments against the exact Gaussian law.

    For each ``p <= t <= T`` the mean score is
    ``(mean - x_t) / sqrt(v_t / N)`` and the variance score is
    ``(var / v_t - 1) / sqrt(2 / (N - 1))``, with ``v_t = eps^2 sigma_t^2``
    multiplied by ``variance_scale`` (a knob for power checks).
    """
    eps = spec.eps if eps is None else eps
    x = iterate_deterministic(spec, res.T)
    sig = sigma_sq_series(spec, res.T)
    rows = []
    worst = 0.0
    for t in range(spec.p, res.T + 1):
        v = eps * eps * sig[t] * variance_scale
        z_mean = (res.sample_mean[t] - x[t]) / math.sqrt(v / res.N)
        z_var = (res.sample_var[t] / v - 1.0) / math.sqrt(2.0 / max(res.N - 1, 1))
        worst = max(worst, abs(z_mean), abs(z_var))
        rows.append({
            "t": t,
            "mean": float(res.sample_mean[t]),
            "expected_mean": float(x[t]),
            "var": float(res.sample_var[t]),
            "expected_var": float(v),
            "z_mean": float(z_mean),
            "z_var": float(z_var),
        })
    return {
        "N": res.N,
        "T": res.T,
        "seed": res.seed,
        "z_max": z_max,
        "max_abs_z": worst,
        "rows": rows,
        "verdict": "PASS" if worst <= z_max else "FAIL",
    }
