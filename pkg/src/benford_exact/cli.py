"""Command-line interface: ``benford-exact <command> [options]``.

Every command writes either CSV (header row, '.17g' floats, '\\n' line
ends) or a JSON report matching ``report_schema.json``.  Exit status is 0
when all checks pass, 1 when a verification fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources

import numpy as np

from . import __version__
from ._parallel import thread_count
from .core import (benford_prob, benford_table, digit_law_from_dist, empirical_digit_table,
                   frac_log, leading_digit)
from .distributions import (DistParams, PiecewiseSpec, cdf_y, is_admissible, max_base,
                            partial_moment_bounded, piecewise_digit_cdf, piecewise_sample,
                            sample_y)
from .errors import DomainError
from .gof import chi_square_gof, ks_uniform
from .quadrature import DEFAULT_M_TRUNC, TAIL_POLICIES, poisson_pdf_sum, trapz_pdf_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TRAPZ_SLACK = 1e-9
DEFAULT_LAW_TOL = 1e-6


def load_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())


# -- argument types ---------------------------------------------------------

def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _base(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"base must be an integer >= 2, got {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError(f"base must be an integer >= 2, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {v}")
    return v


def _sigma_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sigma grid must be comma-separated numbers, got {text!r}") from None
    if not vals or any(not 0.0 <= v < 1.0 for v in vals):
        raise argparse.ArgumentTypeError(f"every sigma must lie in [0, 1), got {text!r}")
    return vals


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benford-exact",
        description="Sample and verify distributions that are exactly Benford.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt, *, a=True, base=True):
        if a:
            p.add_argument("--a", type=_positive_float, default=1.0,
                           help="shape parameter of the sinc^2-log family (default 1.0)")
        if base:
            p.add_argument("--base", type=_base, default=10, help="integer base b >= 2 (default 10)")
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p = sub.add_parser("sample", help="draw Y = ln X and emit fraction and leading digit")
    common(p, "csv")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("digits", help="Monte Carlo leading-digit table with chi-square and KS")
    common(p, "csv")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--scale", type=_positive_float, default=1.0,
                   help="multiply samples by this constant first")
    p.add_argument("--alpha", type=float, default=0.001)

    p = sub.add_parser("verify-trapz", help="check h * sum pdf_y((m+sigma)h) == 1 with h = ln b")
    common(p, "json")
    p.add_argument("--h", type=_positive_float, default=None, help="step; overrides ln(base)")
    p.add_argument("--sigma", type=_sigma_list, default=[0.0])
    p.add_argument("--m-trunc", type=_positive_int, default=DEFAULT_M_TRUNC)
    p.add_argument("--tail-policy", choices=TAIL_POLICIES, default="bound")

    p = sub.add_parser("verify-law", help="compare the exact digit law of X with Benford")
    common(p, "json")
    p.add_argument("--m-trunc", type=_positive_int, default=DEFAULT_M_TRUNC)
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_LAW_TOL)

    p = sub.add_parser("piecewise", help="piecewise family: exact digit law and sampled digits")
    common(p, "csv", a=False)
    p.add_argument("--m0", type=int, default=0)
    p.add_argument("--m1", type=int, default=0)
    p.add_argument("--weights", type=_float_list, default=None,
                   help="comma-separated p_m0..p_m1 (default uniform)")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--alpha", type=float, default=0.001)

    p = sub.add_parser("moments", help="partial moments E[X^lam; X <= e^(k pi/a)]")
    common(p, "json", base=False)
    p.add_argument("--lam", type=_positive_int, default=1)
    p.add_argument("--k-max", type=_positive_int, default=6)
    return parser


# -- commands ---------------------------------------------------------------

def _regime(a, base):
    if is_admissible(base, a):
        return "admissible: ln b < pi/a"
    return "inadmissible: ln b >= pi/a"


def _cmd_sample(args):
    p = DistParams(args.a)
    batch = sample_y(args.n, args.seed, p)
    y = batch.log_values
    f = frac_log(y, args.base)
    d = leading_digit(y, args.base)
    cols = ["index", "y", "fraction", "digit"]
    rows = [[i, float(y[i]), float(f[i]), int(d[i])] for i in range(len(y))]
    metrics = {"n": len(y)}
    return dict(metrics=metrics, bounds={}, passed=True, columns=cols, rows=rows)


def _digit_rows(counts, probs, n):
    rows = []
    for d, (obs, pd) in enumerate(zip(counts, probs), start=1):
        sd = math.sqrt(n * pd * (1 - pd))
        z = (obs - n * pd) / sd if sd > 0 else 0.0
        rows.append([d, float(pd), int(obs), z])
    return rows


def _cmd_digits(args):
    p = DistParams(args.a)
    batch = sample_y(args.n, args.seed, p)
    if args.scale != 1.0:
        batch = batch.scaled(args.scale)
    table = empirical_digit_table(batch, args.base)
    expected = benford_table(args.base).entries
    chi = chi_square_gof(table.entries, expected)
    # F of the unscaled sample is uniform iff X is Benford; test through the CDF too
    ks_f = ks_uniform(frac_log(batch.log_values, args.base))
    ks_u = ks_uniform(np.minimum(cdf_y(batch.log_values - math.log(args.scale), p),
                                 np.nextafter(1.0, 0.0)))
    rows = _digit_rows(table.entries, expected, args.n)
    passed = chi.p_value > args.alpha and ks_f.p_value > args.alpha
    metrics = {
        "regime": _regime(args.a, args.base),
        "chi_square": {"statistic": chi.statistic, "df": chi.dof, "p_value": chi.p_value},
        "ks_fraction": {"statistic": ks_f.statistic, "n": ks_f.dof, "p_value": ks_f.p_value},
        "ks_cdf": {"statistic": ks_u.statistic, "n": ks_u.dof, "p_value": ks_u.p_value},
    }
    return dict(metrics=metrics, bounds={"alpha": args.alpha}, passed=passed,
                columns=["d", "expected", "observed", "z_score"], rows=rows)


def _cmd_verify_trapz(args):
    h = args.h if args.h is not None else math.log(args.base)
    results = trapz_pdf_sweep(args.a, [h], args.sigma, args.m_trunc, args.tail_policy)[0]
    rows = []
    for s, r in zip(args.sigma, results):
        dev = r.sum - 1.0
        ok = abs(dev) <= r.tail_bound + TRAPZ_SLACK
        rows.append([s, r.sum, r.tail_bound, dev, poisson_pdf_sum(args.a, h, s), ok])
    admissible = h < math.pi / args.a
    metrics = {
        "h": h,
        "regime": "admissible: h < pi/a" if admissible else "inadmissible: h >= pi/a",
        "max_abs_deviation": max(abs(r[3]) for r in rows),
        "terms_used": results[0].terms_used,
    }
    bounds = {"max_tail_bound": max(r.tail_bound for r in results), "slack": TRAPZ_SLACK}
    return dict(metrics=metrics, bounds=bounds, passed=all(r[5] for r in rows),
                columns=["sigma", "sum", "tail_bound", "deviation", "poisson", "pass"],
                rows=rows)


def _cmd_verify_law(args):
    law = digit_law_from_dist(args.a, args.base, args.m_trunc)
    bench = benford_table(args.base).entries
    rows = []
    for d in range(1, args.base):
        got, want = float(law.entries[d - 1]), float(bench[d - 1])
        rows.append([d, want, got, got - want])
    worst = max(abs(r[3]) for r in rows)
    metrics = {
        "regime": _regime(args.a, args.base),
        "max_base": max_base(args.a),
        "max_abs_deviation": worst,
    }
    bounds = {"tol": args.tol, "truncation_bound": law.abs_error_bound}
    return dict(metrics=metrics, bounds=bounds, passed=worst <= args.tol,
                columns=["d", "benford", "law", "deviation"], rows=rows)


def _cmd_piecewise(args):
    count = args.m1 - args.m0 + 1
    weights = args.weights if args.weights is not None else [1.0 / count] * count
    spec = PiecewiseSpec(args.base, args.m0, args.m1, weights)
    b = args.base
    cdf = [0.0] + [piecewise_digit_cdf(d, spec) for d in range(2, b)] + [1.0]
    exact = [cdf[i + 1] - cdf[i] for i in range(b - 1)]
    bench = [benford_prob(d, b) for d in range(1, b)]
    worst = max(abs(e - w) for e, w in zip(exact, bench))
    batch = piecewise_sample(args.n, args.seed, spec)
    table = empirical_digit_table(batch, b)
    chi = chi_square_gof(table.entries, bench)
    rows = [r[:2] + [e] + r[2:] for r, e in zip(_digit_rows(table.entries, bench, args.n), exact)]
    metrics = {
        "max_abs_deviation": worst,
        "chi_square": {"statistic": chi.statistic, "df": chi.dof, "p_value": chi.p_value},
    }
    bounds = {"exactness_tol": 1e-14, "alpha": args.alpha}
    passed = worst <= 1e-14 and chi.p_value > args.alpha
    return dict(metrics=metrics, bounds=bounds, passed=passed,
                columns=["d", "benford", "exact", "observed", "z_score"], rows=rows)


def _cmd_moments(args):
    rows = []
    prev = None
    for k in range(1, args.k_max + 1):
        log_t = k * math.pi / args.a
        res = partial_moment_bounded(args.lam, math.exp(log_t), args.a)
        inc = None if prev is None else res.value - prev
        rows.append([k, log_t, res.value, res.abs_error_bound, inc])
        prev = res.value
    increasing = all(r[4] > 0 for r in rows[1:])
    metrics = {"lam": args.lam, "final_value": rows[-1][2]}
    bounds = {"max_abs_error_bound": max(r[3] for r in rows)}
    return dict(metrics=metrics, bounds=bounds, passed=increasing,
                columns=["k", "log_t_max", "partial_moment", "abs_error_bound", "increment"],
                rows=rows)


COMMANDS = {
    "sample": _cmd_sample,
    "digits": _cmd_digits,
    "verify-trapz": _cmd_verify_trapz,
    "verify-law": _cmd_verify_law,
    "piecewise": _cmd_piecewise,
    "moments": _cmd_moments,
}

_CONFIG_SKIP = {"command", "format", "out"}


# -- rendering --------------------------------------------------------------

def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(v) for v in r])
    return buf.getvalue()


def render_json(command, config, result) -> str:
    report = {
        "command": command,
        "config": config,
        "metrics": result["metrics"],
        "bounds": result["bounds"],
        "pass": bool(result["passed"]),
        "columns": result["columns"],
        "rows": result["rows"],
    }
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        thread_count()
        result = COMMANDS[args.command](args)
    except (DomainError, ValueError) as exc:
        print(f"benford-exact {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = {k.replace("_", "-"): v for k, v in vars(args).items() if k not in _CONFIG_SKIP}
    if args.format == "csv":
        text = render_csv(result["columns"], result["rows"])
    else:
        text = render_json(args.command, config, result)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK if result["passed"] else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
