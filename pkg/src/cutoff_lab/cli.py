"""Command-line interface: ``cutoff-lab <command> ...``.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import specio
from .cutoff import centered_curve, distance_curve, c3_ratio, window_cutoff_check
from .errors import CutoffLabError, NumericalError
from .moments import noise_weights, sigma_sq_series
from .montecarlo import SimConfig, simulate_paths, validate_moments
from .oscillator import classify_roots, discretize, stability_range
from .polyroots import characteristic_polynomial, check_stability, find_roots
from .recurrence import (asymptotic_profile, iterate_deterministic, maximal_set_membership,
                         solve_representation)

fmt = specio.fmt


def _clean(obj):
    """Make an object JSON-safe: complex -> {re, im}, non-finite -> string."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _emit_json(obj, out) -> None:
    json.dump(_clean(obj), out, indent=2)
    out.write("\n")


def _emit_csv(header, rows, out, footer: dict | None = None) -> None:
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    for k, v in (footer or {}).items():
        out.write(f"# {k}={fmt(v) if isinstance(v, float) else v}\r\n")


def parse_eps_grid(text: str) -> list[float]:
    """``START:STOP:COUNT`` log-spaced, or a comma-separated list."""
    if ":" in text:
        a, b, n = text.split(":")
        return [float(v) for v in np.geomspace(float(a), float(b), int(n))]
    return [float(v) for v in text.split(",")]


def parse_b_grid(text: str) -> list[float]:
    """``MIN:MAX:STEP`` inclusive of both ends."""
    a, b, step = (float(v) for v in text.split(":"))
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [a + i * step for i in range(n)]


def analyze_report(spec) -> dict:
    poly = characteristic_polynomial(spec)
    roots = find_roots(poly)
    stab = check_stability(roots)
    rep = solve_representation(spec, roots)
    report = {
        "spec": {"p": spec.p, "phi": list(spec.phi), "init": list(spec.init), "eps": spec.eps},
        "polynomial": list(poly.coeffs),
        "roots": [
            {"re": g.root.real, "im": g.root.imag, "modulus": abs(g.root), "multiplicity": g.multiplicity}
            for g in roots.groups
        ],
        "stable": stab.stable,
        "kappa": stab.kappa,
        "margin": stab.margin,
        "representation": [
            {"root": t.root, "multiplicity": t.multiplicity, "coeffs": list(t.coeffs)}
            for t in rep.terms
        ],
    }
    if any(v != 0 for v in spec.init):
        prof = asymptotic_profile(rep)
        mem = maximal_set_membership(spec, prof)
        report["profile"] = {
            "r": prof.r,
            "l": prof.l,
            "terms": [
                {"alpha": t.alpha, "beta": t.beta, "theta": t.theta,
                 "theta_rational": str(t.theta_rational) if t.theta_rational is not None else None}
                for t in prof.terms
            ],
            "M": prof.M,
            "sup_scan": prof.sup_scan,
            "m_liminf": prof.m_liminf,
            "liminf_exact": prof.liminf_exact,
            "in_maximal_set": mem.verdict.value,
            "witness_t": mem.witness_t,
            "evidence": mem.evidence,
        }
    else:
        report["profile"] = None
    return report


def cmd_analyze(args, out) -> None:
    _emit_json(analyze_report(specio.load(args.spec)), out)


def cmd_variance(args, out) -> None:
    spec = specio.load(args.spec)
    T = args.t_max
    x = iterate_deterministic(spec, max(T, spec.p - 1))
    sig = sigma_sq_series(spec, T)
    w = noise_weights(spec, tol=args.tol)
    rows = [(t, float(x[t]), float(sig[t])) for t in range(spec.p, T + 1)]
    _emit_csv(("t", "x_t", "sigma_t_sq"), rows, out, {
        "sigma_inf_sq": w.sigma_inf_sq,
        "truncation_index": w.truncation_index,
        "tail_bound": w.tail_bound,
    })


def cmd_tv_curve(args, out) -> None:
    spec = specio.load(args.spec)
    if args.b_grid:
        curve = centered_curve(spec, None, args.eps, parse_b_grid(args.b_grid), args.window_c)
    else:
        t_min = max(args.t_min, spec.p)
        curve = distance_curve(spec, None, args.eps, range(t_min, args.t_max + 1))
    _emit_csv(("abscissa", "d", "D", "R"), curve.as_rows(), out)


def cmd_cutoff(args, out) -> None:
    spec = specio.load(args.spec)
    report = window_cutoff_check(spec, None, parse_eps_grid(args.eps_grid), args.b_neg,
                                 args.b_pos, args.tol, args.window_c)
    _emit_json(report, out)


def cmd_c3(args, out) -> None:
    rows = [(e, c3_ratio(args.alpha, args.r, e)) for e in parse_eps_grid(args.eps_grid)]
    _emit_csv(("eps", "ratio"), rows, out)


def cmd_simulate(args, out) -> None:
    spec = specio.load(args.spec)
    if args.eps is not None:
        spec = spec.with_eps(args.eps)
    cfg = SimConfig(spec, args.horizon, args.paths, args.seed)
    res = simulate_paths(cfg, threads=args.threads)
    _emit_json(validate_moments(res, spec), out)


def cmd_oscillator(args, out) -> None:
    spec = discretize(args.gamma, args.kappa, args.h, args.eps, args.u, args.v)
    rng = stability_range(args.gamma, args.kappa)
    comment = f"oscillator gamma={fmt(args.gamma)} kappa={fmt(args.kappa)} h={fmt(args.h)}"
    if args.out:
        specio.dump(spec, args.out, comment)
    report = {
        "spec": {"p": spec.p, "phi": list(spec.phi), "init": list(spec.init), "eps": spec.eps},
        "spec_file": str(args.out) if args.out else None,
        "stability": {"case": rng.case, "h_upper": rng.h_upper, "exact": rng.exact,
                      "h_star": rng.h_star, "description": rng.describe()},
    }
    cls = classify_roots(args.gamma, args.kappa, args.h)
    report["classification"] = {
        "case": cls.case, "subcase": cls.subcase, "roots": list(cls.roots), "r": cls.r,
        "theta": cls.theta,
        "theta_rational": str(cls.theta_rational) if cls.theta_rational is not None else None,
    }
    _emit_json(report, out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cutoff-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="roots, stability, closed form and asymptotic profile")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("variance", help="x_t and sigma_t^2 table")
    p.add_argument("--spec", required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("tv-curve", help="d, D, R over a time grid or a centered b grid")
    p.add_argument("--spec", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--t-min", type=int, default=0)
    p.add_argument("--t-max", type=int, default=100)
    p.add_argument("--b-grid", help="MIN:MAX:STEP around the cut-off time")
    p.add_argument("--window-c", type=float, default=1.0)
    p.set_defaults(func=cmd_tv_curve)

    p = sub.add_parser("cutoff", help="window cut-off diagnostic")
    p.add_argument("--spec", required=True)
    p.add_argument("--eps-grid", default="1e-2:1e-8:7")
    p.add_argument("--b-neg", type=float, default=-20.0)
    p.add_argument("--b-pos", type=float, default=20.0)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--window-c", type=float, default=1.0)
    p.set_defaults(func=cmd_cutoff)

    p = sub.add_parser("c3", help="t^alpha r^t / eps along an eps grid")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--eps-grid", default="1e-2:1e-50:49")
    p.set_defaults(func=cmd_c3)

    p = sub.add_parser("simulate", help="Monte Carlo moment check")
    p.add_argument("--spec", required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--paths", type=int, default=10**5)
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oscillator", help="discretize the Brownian oscillator")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--out", type=Path, help="write the spec file here")
    p.set_defaults(func=cmd_oscillator)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (CutoffLabError, ValueError, OSError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    return 0


def run(argv: list[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
