"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
Every command builds a JSON-ready report first; ``csv`` and ``table`` are
renderings of that report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .acceptance import FAULTS, run_all
from .algebra import ParseError, as_fraction, format_fraction, parse_poly, parse_rational_function
from .geometry import (
    CrossModel,
    density_properties_check,
    models_up_to,
    ros_bound_check,
    sigma0,
    theta0,
)
from .jacobi import eigenvalue, jacobi_polynomial
from .rigidity import DELTA_VANISHES, falsification_trace, structural_analysis
from .spectral import SpectralError, solve_spectrum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- rendering ---------------------------------------------------------------------

def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table_text(header, rows) -> str:
    cells = [[str(h) for h in header]] + [["" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _json_text(report) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def _emit(args, report, header, rows, extra_table: str = "") -> None:
    fmt = args.format
    if fmt == "json":
        text = _json_text(report)
    elif fmt == "csv":
        text = _csv_text(header, rows)
    else:
        text = _table_text(header, rows) + extra_table
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(text: str) -> CrossModel:
    try:
        return CrossModel.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fraction(text: str, what: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse {what} {text!r}") from None


# -- commands ----------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    model = _model(args.model)
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    order = args.order if args.order is not None else max(32, args.count + 4)
    if order < args.count + 4:
        raise UsageError("--order must be at least count + 4")
    tol = args.tol if args.tol is not None else 1e-8
    params = model.params
    result = solve_spectrum(params, None, order=order, count=args.count)
    rows, entries, ok = [], [], True
    for n, num in enumerate(result.eigenvalues):
        exact = eigenvalue(n, params)
        err = abs(num - float(exact)) / max(1.0, abs(float(exact)))
        good = err <= tol
        ok &= good
        entries.append({"n": n, "exact": format_fraction(exact), "numeric": num,
                        "relative_error": err, "residual": result.residuals[n], "ok": good})
        rows.append([n, str(exact), f"{num:.12g}", f"{err:.2e}", good])
    report = {"command": "spectrum", "model": model.name, "params": params.to_json(),
              "order": order, "tolerance": tol, "eigenvalues": entries, "ok": ok}
    _emit(args, report, ["n", "exact", "numeric", "rel_error", "ok"], rows)
    return EXIT_OK if ok else EXIT_FAIL


def _read_poly(args):
    if args.jacobi is not None:
        if args.jacobi < 1:
            raise UsageError("--jacobi needs n >= 1")
        return jacobi_polynomial(args.jacobi, _model(args.model).params)
    text = args.poly
    if args.poly_file is not None:
        try:
            with open(args.poly_file, encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as exc:
            raise UsageError(str(exc)) from None
    if text is None:
        raise UsageError("one of --poly, --poly-file or --jacobi is required")
    try:
        return parse_poly(text)
    except (ParseError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse polynomial: {exc}") from None


def cmd_rigidity(args) -> int:
    model = _model(args.model)
    params = model.params
    P = _read_poly(args)
    if P.degree < 1:
        raise UsageError("polynomial must be nonconstant")
    if args.lam is not None:
        lam = _fraction(args.lam, "lambda")
    elif args.jacobi is not None:
        lam = eigenvalue(args.jacobi, params)
    else:
        raise UsageError("--lambda is required with --poly")
    report = structural_analysis(P, lam, params)
    body = {"command": "rigidity", "model": model.name, "params": params.to_json(),
            "P": P.to_json(), "P_text": str(P), "lambda": format_fraction(lam)}
    body.update(report.to_json())
    rows = [[name, value] for name, value in report.checks().items()]
    rows.append(["verdict", report.verdict])
    extra = f"delta = {report.delta}\n" + (f"note: {report.note}\n" if report.note else "")
    _emit(args, body, ["check", "value"], rows, extra)
    if args.expect_vanish:
        return EXIT_OK if report.verdict == DELTA_VANISHES else EXIT_FAIL
    if args.expect_violation:
        return EXIT_OK if report.verdict.startswith("StructureViolated") else EXIT_FAIL
    return EXIT_OK


def cmd_falsify(args) -> int:
    model = _model(args.model)
    if args.maxdeg < 1:
        raise UsageError("--maxdeg must be at least 1")
    try:
        delta = parse_rational_function(args.delta)
    except (ParseError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse delta: {exc}") from None
    trace = falsification_trace(delta, model.params, args.maxdeg)
    last = trace[-1]
    found = None
    if last.consistent:
        found = {"degree": last.degree, "poly": last.solution.to_json(),
                 "poly_text": str(last.solution), "lambda": format_fraction(last.forced_lambda)}
    report = {"command": "falsify", "model": model.name, "params": model.params.to_json(),
              "delta": delta.to_json(), "delta_text": str(delta), "maxdeg": args.maxdeg,
              "attempts": [a.to_json() for a in trace], "outcome": "found" if found else "none",
              "solution": found}
    rows = [[a.degree, a.forced_lambda,
             a.equations, a.unknowns, a.rank, a.augmented_rank, a.consistent] for a in trace]
    extra = f"outcome: {report['outcome']}" + (
        f"  P = {found['poly_text']}, lambda = {last.forced_lambda}" if found else "") + "\n"
    _emit(args, report, ["degree", "forced_lambda", "equations", "unknowns", "rank",
                         "augmented_rank", "consistent"], rows, extra)
    if args.expect is None:
        return EXIT_OK
    return EXIT_OK if report["outcome"] == args.expect else EXIT_FAIL


def cmd_ros(args) -> int:
    if args.all or args.model is None:
        models = models_up_to(args.max_dim)
    else:
        models = [_model(args.model)]
    records = [ros_bound_check(m) for m in models]
    ok = all(r.equality for r in records)
    report = {"command": "ros", "models": [r.to_json() for r in records], "ok": ok}
    rows = [[r.model, r.lambda1, r.ricci, r.bound, r.equality] for r in records]
    _emit(args, report, ["model", "lambda1", "einstein", "bound", "equality"], rows)
    return EXIT_OK if ok else EXIT_FAIL


def _clean(v: float) -> float:
    return round(float(v), 14) + 0.0


def cmd_density(args) -> int:
    model = _model(args.model)
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    r = np.array([math.pi * i / (args.samples + 1) for i in range(1, args.samples + 1)])
    th = theta0(r, model) if len(r) else r
    sg = sigma0(r, model) if len(r) else r
    rows = [[_clean(a), _clean(b), _clean(c)] for a, b, c in zip(r, th, sg)]
    props = density_properties_check(model)
    report = {"command": "density", "model": model.name, "samples": args.samples,
              "rows": [{"r": a, "theta0": b, "sigma0": c} for a, b, c in rows],
              "properties": props.to_json()}
    if args.format != "json":
        summary = ", ".join(f"{k}={v}" for k, v in props.to_json().items() if k != "model")
        print(f"{model.name} density properties: {summary}", file=sys.stderr)
    _emit(args, report, ["r", "theta0", "sigma0"], rows)
    return EXIT_OK if props.all_ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    results = run_all(seed=args.seed, fault=args.inject_fault)
    ok = all(r.passed for r in results)
    report = {"command": "verify-all", "seed": args.seed, "fault": args.inject_fault,
              "criteria": [r.to_json() for r in results], "ok": ok}
    rows = [[r.number, "PASS" if r.passed else "FAIL", r.name,
             "; ".join(map(str, r.failures[:2]))] for r in results]
    if args.output:
        _emit(args, report, ["criterion", "status", "name", "failures"], rows)
        sys.stdout.write(_table_text(["criterion", "status", "name", "failures"], rows))
    else:
        _emit(args, report, ["criterion", "status", "name", "failures"], rows)
    if not ok:
        names = ", ".join(str(r.number) for r in results if not r.passed)
        print(f"failing criteria: {names}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "table"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance")

    parser = _Parser(prog="crossrigidity",
                     description="Exact and numerical checks for radial Jacobi equations on model CROSSes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="numerical vs exact Jacobi spectrum")
    p.add_argument("--model", default="S2")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_spectrum, default_format="table")

    p = sub.add_parser("rigidity", parents=[common], help="structural analysis of a (P, lambda) pair")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--poly", help='polynomial, e.g. "x^2 - 1/3"')
    src.add_argument("--poly-file", help="file containing the polynomial")
    src.add_argument("--jacobi", type=int, help="use the degree-n Jacobi polynomial of the model")
    p.add_argument("--lambda", dest="lam", help="eigenvalue, integer or p/q")
    p.add_argument("--model", default="S2")
    exp = p.add_mutually_exclusive_group()
    exp.add_argument("--expect-vanish", action="store_true")
    exp.add_argument("--expect-violation", action="store_true")
    p.set_defaults(func=cmd_rigidity, default_format="json")

    p = sub.add_parser("falsify", parents=[common], help="search for polynomial solutions of a perturbed equation")
    p.add_argument("--delta", required=True, help='rational function, e.g. "1/(x-2)"')
    p.add_argument("--maxdeg", type=int, default=12)
    p.add_argument("--model", default="S2")
    p.add_argument("--expect", choices=("none", "found"))
    p.set_defaults(func=cmd_falsify, default_format="table")

    p = sub.add_parser("ros", parents=[common], help="first eigenvalue against the Ros bound")
    p.add_argument("--all", action="store_true", help="every model up to --max-dim")
    p.add_argument("--max-dim", type=int, default=16)
    p.add_argument("--model")
    p.set_defaults(func=cmd_ros, default_format="table")

    p = sub.add_parser("density", parents=[common], help="sample the model density and mean curvature")
    p.add_argument("--model", default="S2")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_density, default_format="csv")

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--inject-fault", choices=FAULTS, default=None)
    p.set_defaults(func=cmd_verify_all, default_format="table")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"crossrigidity {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpectralError as exc:
        print(f"crossrigidity {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
