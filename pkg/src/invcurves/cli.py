"""Command line entry point: ``invcurves <subcommand> ...``.

Data goes to stdout (or ``--out``); diagnostics go to stderr.  Exit status
is 0 on success, 1 when a verification check fails and 2 on usage or
domain errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .dynamics import DomainError, State, fixed_point, iterate_trajectory, periodic_partner, validate_params
from .manifolds import (
    center_model,
    default_window,
    format_polynomial,
    printed_form,
    stable_model,
    trace_curve,
    unstable_model,
)
from .spectral import spectrum_T
from .verify import DEFAULT_SEED, FAIL, reproduce_paper_report, run_suite, summarize

log = logging.getLogger("invcurves")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


def _params(args):
    p = validate_params(args.alpha, args.beta)
    if p.alpha == 0.0:
        log.warning("alpha = 0: positivity of iterates is not guaranteed for every start")
    return p


def _emit_json(obj, out) -> None:
    # allow_nan=False turns any stray NaN/Inf into an error instead of invalid JSON
    out.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _emit_human(rows, out) -> None:
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        if isinstance(v, float):
            v = f"{v:.10g}"
        elif isinstance(v, (tuple, list)):
            v = "(" + ", ".join(f"{c:.10g}" for c in v) + ")"
        out.write(f"{k:<{width}}  {v}\n")


def _open_out(path, out):
    if path in (None, "-"):
        return out, False
    return open(path, "w", newline="", encoding="utf-8"), True


# -- subcommands ------------------------------------------------------------


def cmd_analyze(args, out) -> int:
    sp = spectrum_T(_params(args))
    data = {
        "alpha": sp.params.alpha,
        "beta": sp.params.beta,
        "x_bar": sp.x_bar,
        "theta": sp.theta,
        "lambda1": sp.lambda1,
        "lambda2": sp.lambda2,
        "v1": list(sp.v1),
        "v2": list(sp.v2),
        "saddle": sp.saddle,
    }
    if args.json:
        _emit_json(data, out)
    else:
        _emit_human(list(data.items()), out)
    return EXIT_OK


def cmd_coeffs(args, out) -> int:
    p = _params(args)
    m = unstable_model(p) if args.kind == "unstable" else stable_model(p)
    names = ("a2", "a3") if args.kind == "unstable" else ("b2", "b3")
    g1, g2, g3 = m.linear_constants
    data = {
        "kind": m.kind,
        "alpha": p.alpha,
        "beta": p.beta,
        "x_bar": m.base[0],
        "gamma1": g1,
        "gamma2": g2,
        "gamma3": g3,
        names[0]: m.coeff2,
        names[1]: m.coeff3,
        "tangent_slope": m.tangent_slope,
        "printed": printed_form(m),
        "polynomial": format_polynomial(m),
    }
    if args.json:
        _emit_json(data, out)
    else:
        _emit_human([(k, v) for k, v in data.items() if k != "printed"], out)
    return EXIT_OK


def cmd_center(args, out) -> int:
    pair = periodic_partner(args.phi, args.beta)
    m = center_model(pair.swapped() if args.swap else pair)
    d1, d2, d3 = m.linear_constants
    data = {
        "phi": pair.phi,
        "psi": pair.psi,
        "beta": pair.beta,
        "swapped": bool(args.swap),
        "base": list(m.base),
        "lambda01": m.spectrum.lambda01,
        "delta1": d1,
        "delta2": d2,
        "delta3": d3,
        "c2": m.coeff2,
        "c3": m.coeff3,
        "tangent_slope": m.tangent_slope,
        "printed": printed_form(m),
        "polynomial": format_polynomial(m),
    }
    if args.json:
        _emit_json(data, out)
    else:
        _emit_human([(k, v) for k, v in data.items() if k != "printed"], out)
    return EXIT_OK


def cmd_curve(args, out) -> int:
    if args.kind == "center":
        if args.phi is None:
            raise DomainError("--kind center needs --phi", field="phi")
        pair = periodic_partner(args.phi, args.beta)
        m = center_model(pair.swapped() if args.swap else pair)
    else:
        if args.alpha is None:
            raise DomainError(f"--kind {args.kind} needs --alpha", field="alpha")
        p = _params(args)
        m = unstable_model(p) if args.kind == "unstable" else stable_model(p)
    lo, hi = default_window(m, args.radius)
    lo = lo if args.xmin is None else args.xmin
    hi = hi if args.xmax is None else args.xmax
    trace = trace_curve(m, lo, hi, args.samples)
    if trace.gaps:
        log.warning("Newton did not converge at %d of %d samples (first gap x = %.6g)",
                    len(trace.gaps), args.samples, trace.gaps[0])
    fh, close = _open_out(args.out, out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in trace.points:
            w.writerow([f"{x:.12g}", f"{y:.12g}"])
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_trajectory(args, out) -> int:
    p = _params(args)
    orbit = iterate_trajectory(p, State(args.y0, args.z0), args.n)
    fh, close = _open_out(args.out, out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x"])
        w.writerow([-1, f"{orbit[0].y:.12g}"])
        for k, s in enumerate(orbit):
            w.writerow([k, f"{s.z:.12g}"])
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _report_rows(reports):
    for r in reports:
        yield r.status, r.name, r.observed, r.expected, r.detail


def cmd_verify(args, out) -> int:
    reports = run_suite(seed=args.seed, grid=args.grid)
    counts = summarize(reports)
    if args.json:
        _emit_json({"checks": [r.to_dict() for r in reports], "summary": counts}, out)
    else:
        for status, name, obs, exp, detail in _report_rows(reports):
            out.write(f"{status:<7} {name:<48} observed={obs:.6g} expected={exp:.6g}  {detail}\n")
        out.write(", ".join(f"{k}: {v}" for k, v in counts.items()) + "\n")
    return EXIT_CHECK_FAILED if counts[FAIL] else EXIT_OK


def cmd_reproduce(args, out) -> int:
    reports = reproduce_paper_report()
    counts = summarize(reports)
    rows = []
    for r in reports:
        case, quantity = r.name.split(":", 1)
        rows.append({
            "case": case,
            "quantity": quantity,
            "paper_value": r.expected,
            "computed": r.observed,
            "abs_diff": abs(r.observed - r.expected),
            "status": r.status,
        })
    if args.json:
        _emit_json({"rows": rows, "summary": counts}, out)
    else:
        out.write(f"{'case':<8} {'quantity':<9} {'paper_value':>16} {'computed':>16} {'abs_diff':>10}  status\n")
        for row in rows:
            out.write(f"{row['case']:<8} {row['quantity']:<9} {row['paper_value']:>16.10g} "
                      f"{row['computed']:>16.10g} {row['abs_diff']:>10.2e}  {row['status']}\n")
        out.write(", ".join(f"{k}: {v}" for k, v in counts.items()) + "\n")
    return EXIT_CHECK_FAILED if counts[FAIL] else EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="invcurves",
        description="Invariant manifolds of x[n+1] = alpha + beta*x[n-1] + x[n-1]/x[n].",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_ab(p, required=True):
        p.add_argument("--alpha", type=float, required=required)
        p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("analyze", help="fixed point, eigenvalues and eigenvectors")
    add_ab(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("coeffs", help="closed-form saddle manifold coefficients")
    p.add_argument("--kind", choices=("unstable", "stable"), required=True)
    add_ab(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("center", help="invariant curve through a period-two point (alpha = 1)")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--swap", action="store_true", help="use the companion base point (psi, phi)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("curve", help="trace a manifold's zero set to CSV")
    p.add_argument("--kind", choices=("unstable", "stable", "center"), required=True)
    add_ab(p, required=False)
    p.add_argument("--phi", type=float)
    p.add_argument("--swap", action="store_true")
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--radius", type=float, default=0.5,
                   help="half-width of the default x window around the base point")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("trajectory", help="iterate the recurrence to CSV")
    add_ab(p)
    p.add_argument("--y0", type=float, required=True, help="x[-1]")
    p.add_argument("--z0", type=float, required=True, help="x[0]")
    p.add_argument("-n", type=int, required=True, help="number of map applications")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("verify", help="run every verification check")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--grid", choices=("coarse", "fine"), default="coarse")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce-paper", help="regression table for the worked examples")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None, out=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s",
                        stream=sys.stderr, force=True)
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "samples", 2) < 2:
        print("error: --samples must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
