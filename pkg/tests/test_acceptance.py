"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL (details)`` line; the lines are
printed together at the end of the pytest run. Run this file directly to
print them without pytest.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from cutoff_lab.cutoff import (c3_ratio, centered_curve, cutoff_time, distance_curve,
                               snapped_floor, window_cutoff_check)
from cutoff_lab.gaussian_metrics import tv_general, tv_mean_shift, tv_variance_only
from cutoff_lab.moments import GaussianLaw, noise_weights, psi_weights, sigma_sq_series
from cutoff_lab.montecarlo import SimConfig, simulate_paths, validate_moments
from cutoff_lab.oscillator import classify_roots, discretize, stability_range
from cutoff_lab.polyroots import RecurrenceSpec, check_stability, spec_roots
from cutoff_lab.recurrence import (Verdict, asymptotic_profile, iterate_deterministic,
                                   maximal_set_membership, solve_representation)

from conftest import psi_by_compositions, random_spec_set, random_stable_spec
from oracles import random_gaussian_pairs, tv_quadrature

RESULTS: dict[int, str] = {}

AR1 = RecurrenceSpec((0.5,), (1.0,))
SPEC_SET = random_spec_set(50, seed=2024)


def record(n: int, failures: list[str], info: str) -> None:
    status = "PASS" if not failures else "FAIL"
    detail = info if not failures else "; ".join(failures)
    RESULTS[n] = f"criterion {n}: {status} ({detail})"
    print(RESULTS[n])
    assert not failures, RESULTS[n]


def check(failures: list[str], ok: bool, msg: str) -> None:
    if not ok:
        failures.append(msg)


def test_criterion_01_psi_oracle():
    fails: list[str] = []
    worst = 0.0
    for spec in SPEC_SET:
        psi = psi_weights(spec, 10)
        for s in range(11):
            worst = max(worst, abs(psi[s] - psi_by_compositions(spec.phi, s)))
    check(fails, worst <= 1e-10, f"max |psi - oracle| = {worst:.3g} > 1e-10")
    fixed = psi_weights(RecurrenceSpec((1.0, -0.25), (0.0, 1.0)), 4)
    check(fails, np.allclose(fixed, [1, 1, 0.75, 0.5, 0.3125], atol=1e-10, rtol=0),
          f"fixed case psi = {list(fixed)}")
    record(1, fails, f"50 specs, max error {worst:.2g}")


def test_criterion_02_representation_oracle():
    fails: list[str] = []
    worst = 0.0
    for spec in SPEC_SET:
        rep = solve_representation(spec, spec_roots(spec))
        closed = rep.evaluate(np.arange(51))
        direct = iterate_deterministic(spec, 50)
        worst = max(worst, float(np.max(np.abs(closed - direct))))
    check(fails, worst <= 1e-8, f"max |closed - iterate| = {worst:.3g} > 1e-8")
    record(2, fails, f"50 specs, t <= 50, max error {worst:.2g}")


def test_criterion_03_tv_exactness():
    fails: list[str] = []
    worst = 0.0
    for m1, v1, m2, v2 in random_gaussian_pairs(1000):
        got = tv_general(GaussianLaw(m1, v1), GaussianLaw(m2, v2))
        worst = max(worst, abs(got - tv_quadrature(m1, v1, m2, v2)))
    check(fails, worst <= 1e-9, f"max |tv - quadrature| = {worst:.3g} over 1000 pairs")
    ms = tv_mean_shift(2.0, 1.0)
    check(fails, abs(ms - 0.6826895) <= 1e-6, f"tv_mean_shift(2,1) = {ms:.10f}")
    vo = tv_variance_only(4.0)
    check(fails, abs(vo - 0.3226735) <= 1e-6,
          f"tv_variance_only(4) = {vo:.10f}, target 0.3226735 +- 1e-6 (quadrature gives "
          f"{tv_quadrature(0, 4, 0, 1):.10f})")
    record(3, fails, f"1000 pairs max error {worst:.2g}; fixed values ok")


def _all_curves():
    rng = np.random.default_rng(404)
    specs = [AR1, RecurrenceSpec((1.0, -0.25), (0.0, 1.0)), RecurrenceSpec((1.5, -0.75), (1.0, 0.75)),
             RecurrenceSpec((0.0, 0.25), (4.0, 1.0))]
    specs += [random_stable_spec(rng, (1, 2, 3)[i % 3]) for i in range(30)]
    for spec in specs:
        for eps in (1e-2, 1e-4, 1e-8):
            yield distance_curve(spec, None, eps, range(spec.p, spec.p + 60))
    for k in (10, 25, 40):
        yield centered_curve(AR1, None, 0.5**k, range(-5, 6))
    for eps in (1e-3, 1e-6):
        yield centered_curve(RecurrenceSpec((1.0, -0.25), (0.0, 1.0)), None, eps, np.arange(-5, 10.5, 0.5))


def test_criterion_04_sandwich():
    fails: list[str] = []
    n_points, n_bad, worst = 0, 0, -math.inf
    for curve in _all_curves():
        for pt in curve.points:
            n_points += 1
            excess = abs(pt.d - pt.D) - pt.R
            worst = max(worst, excess)
            n_bad += excess > 1e-9
    check(fails, n_points >= 1000, f"only {n_points} points")
    check(fails, n_bad == 0, f"{n_bad} of {n_points} points violate |d - D| <= R + 1e-9")
    record(4, fails, f"{n_points} points, max(|d-D| - R) = {worst:.2g}")


def test_criterion_05_sigma_inf_closed_forms():
    fails: list[str] = []
    cases = [("p=1 phi=0.5", (0.5,), 4 / 3, "4/3"),
             ("double root 0.5", (1.0, -0.25), 64 / 27, "64/27"),
             ("phi=(0,0.25)", (0.0, 0.25), 16 / 15, "16/15")]
    for label, phi, target, shown in cases:
        spec = RecurrenceSpec(phi, (1.0,) * len(phi))
        w = noise_weights(spec, tol=1e-12, early_stop=False)
        check(fails, abs(w.sigma_inf_sq - target) <= 1e-10,
              f"{label}: sigma_inf^2 = {w.sigma_inf_sq:.12f}, target {shown} = {target:.12f}")
        series = sigma_sq_series(spec, 400)[spec.p:]
        check(fails, bool(np.all(np.diff(series) >= 0)), f"{label}: sigma_t^2 not monotone")
        check(fails, series[-1] <= w.sigma_inf_sq + 1e-15, f"{label}: sigma_t^2 exceeds limit")
        check(fails, w.tail_bound < 1e-12, f"{label}: tail bound {w.tail_bound:.3g} not certified")
    record(5, fails, "closed forms, monotonicity and tail bounds ok")


def test_criterion_06_window_cutoff():
    fails: list[str] = []
    osc = discretize(2.0, 1.0, 0.5, u=0.0, v=2.0)
    check(fails, osc.phi == (1.0, -0.25) and osc.init == (0.0, 1.0), f"oscillator spec {osc}")
    for label, spec, l_expected in (("AR(1)", AR1, 1), ("oscillator ii", osc, 2)):
        rep = window_cutoff_check(spec, None, eps_grid=[10.0**-k for k in range(2, 9)],
                                  b_neg=-20, b_pos=20, tol=0.001, C=1.0, trend_tol=0.02)
        last = rep["entries"][-1]
        check(fails, rep["l"] == l_expected, f"{label}: l = {rep['l']}")
        check(fails, last["d_b_neg"] is not None and last["d_b_neg"] >= 0.999,
              f"{label}: d(t-20) = {last['d_b_neg']}")
        check(fails, last["d_b_pos"] is not None and last["d_b_pos"] <= 0.001,
              f"{label}: d(t+20) = {last['d_b_pos']}")
        check(fails, rep["trends"]["b_neg_nondecreasing"], f"{label}: b=-20 trend")
        check(fails, rep["trends"]["b_pos_nonincreasing"], f"{label}: b=+20 trend")
        check(fails, rep["verdict"] == "PASS", f"{label}: verdict {rep['verdict']}")
    record(6, fails, "AR(1) and oscillator case ii")


def test_criterion_07_ar1_profile():
    fails: list[str] = []
    worst = -math.inf
    for k in range(10, 41):
        eps = 0.5**k
        t_eps = cutoff_time(0.5, 1, eps)
        ts = [snapped_floor(t_eps + b) for b in range(-5, 6)]
        curve = distance_curve(AR1, None, eps, ts)
        for b, pt in zip(range(-5, 6), curve.points):
            ref = tv_mean_shift(0.5**b / 1.1547005, 1.0)
            excess = abs(pt.d - ref) - (pt.R + 1e-6)
            worst = max(worst, excess)
            check(fails, excess <= 0, f"k={k} b={b}: |d - ref| = {abs(pt.d - ref):.3g} > R + 1e-6")
    limit = tv_mean_shift(1 / 1.1547005, 1.0)
    d40 = centered_curve(AR1, None, 0.5**40, [0]).points[0].d
    check(fails, abs(limit - 0.3350) <= 0.001, f"limit value {limit:.6f}")
    check(fails, abs(d40 - 0.3350) <= 0.001, f"d at b=0, k=40 is {d40:.6f}")
    record(7, fails[:5], f"max(|d-ref| - R - 1e-6) = {worst:.2g}; b=0 limit {limit:.6f}")


def test_criterion_08_c3():
    fails: list[str] = []
    check(fails, all(c3_ratio(0, r, e) == 1.0 for r in (0.1, 0.5, 0.9) for e in (1e-3, 1e-50)),
          "alpha=0 ratio not exactly 1")
    v = c3_ratio(1, 0.5, 1e-3)
    check(fails, abs(v - 1.3328) <= 1e-3, f"c3_ratio(1, 0.5, 1e-3) = {v}")
    vals = [c3_ratio(1, 0.5, 10.0**-k) for k in range(2, 51)]
    check(fails, all(math.isfinite(x) for x in vals), "non-finite ratio")
    check(fails, all(b < a for a, b in zip(vals, vals[1:])), "ratio not strictly decreasing")
    check(fails, all(x > 1 for x in vals) and vals[-1] < 1.06, f"ratio at 1e-50 = {vals[-1]}")
    record(8, fails, f"ratio {vals[0]:.4f} -> {vals[-1]:.4f} over eps = 1e-2..1e-50")


def test_criterion_09_oscillator():
    fails: list[str] = []
    rng = stability_range(2.0, 1.0)
    check(fails, rng.case == "ii" and rng.exact and rng.h_upper == 2.0, f"(2,1) range {rng}")
    inside = check_stability(spec_roots(discretize(2.0, 1.0, 2.0 * (1 - 1e-6)))).stable
    outside = check_stability(spec_roots(discretize(2.0, 1.0, 2.0 * (1 + 1e-6)))).stable
    check(fails, inside and not outside, "boundary h = 2 not sharp to 1e-6")
    c = classify_roots(1.0, 1.0, 0.5)
    check(fails, c.case == "iii" and c.subcase == "iii.1", f"(1,1,0.5) subcase {c.subcase}")
    check(fails, abs(c.r - 0.8660254) <= 1e-7, f"r = {c.r}")
    check(fails, c.theta_rational == Fraction(1, 12), f"theta = {c.theta_rational}")
    for init, verdict, m in (((1.0, 0.75), Verdict.NO, None),
                             ((0.9659258, 0.8365163), Verdict.YES, 0.2588190)):
        spec = discretize(1.0, 1.0, 0.5, u=init[0], v=(init[1] - init[0]) / 0.5)
        prof = asymptotic_profile(solve_representation(spec, spec_roots(spec)))
        mem = maximal_set_membership(spec, prof)
        check(fails, mem.verdict is verdict, f"init {init}: verdict {mem.verdict.value}")
        if m is not None:
            check(fails, abs(mem.m_liminf - m) <= 1e-6, f"init {init}: m_liminf {mem.m_liminf}")
    record(9, fails, "case ii boundary sharp, case iii (r, theta) certified, membership ok")


def test_criterion_10_monte_carlo():
    fails: list[str] = []
    spec = AR1.with_eps(0.1)
    cfg = SimConfig(spec, T=20, N=10**6, seed=20240917)
    one = simulate_paths(cfg, threads=1)
    eight = simulate_paths(cfg, threads=8)
    check(fails, np.array_equal(one.sample_mean, eight.sample_mean)
          and np.array_equal(one.sample_var, eight.sample_var), "1-thread and 8-thread runs differ")
    report = validate_moments(one, spec)
    picked = [row for row in report["rows"] if row["t"] in (1, 5, 10, 20)]
    worst = max(max(abs(row["z_mean"]), abs(row["z_var"])) for row in picked)
    check(fails, len(picked) == 4 and worst <= 5.0, f"max |z| = {worst:.3f}")
    record(10, fails, f"N=1e6, max |z| at t in {{1,5,10,20}} = {worst:.2f}, bitwise reproducible")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
