"""Command-line entry point: ``logjet <subcommand> ...``.

Every subcommand prints JSON records (one per line, stable key order) on
stdout and diagnostics on stderr.  Exit status is 0 when no check failed,
1 on check failures and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .directed import DirectedStructure, constraint_polynomials, log_constraint_polynomials, reduce_constraints
from .errors import LogjetError
from .jetcore import PolynomialGerm
from .jetdiff import check_equivariance, wronskian_dependence, wronskian_polynomial
from .logcoords import LogChart, g_polynomials, hat_from_log, to_log_coords
from .parser import analyze_expression, parse_expression
from .sampling import random_reparam, trial_rng
from .scalars import format_scalar, parse_scalar
from .semple import lift_curve, project
from .suites import SUITES, CheckReport, suite_theta
from .theta import (
    LatticeVector,
    ThetaSeries,
    quasi_periodicity_check,
    translation_invariance_check,
    wronskian_theta,
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GermSpec:
    germ: PolynomialGerm
    chart: LogChart
    order: int


def _load_json(arg: str, what: str):
    text = arg if arg.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {what} file {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def load_germ(arg: str) -> GermSpec:
    """Read ``{order, chart: {n, l}, coords: [[c0, c1, ...], ...]}`` (file path or inline)."""
    data = _load_json(arg, "germ")
    try:
        coeffs = [[parse_scalar(c) for c in row] for row in data["coords"]]
        chart_data = data.get("chart", {})
        n = int(chart_data.get("n", len(coeffs)))
        chart = LogChart(n, int(chart_data.get("l", 0)))
        order = int(data.get("order", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed germ: {exc}") from None
    if len(coeffs) != n:
        raise UsageError(f"germ has {len(coeffs)} coordinates but chart says n={n}")
    return GermSpec(PolynomialGerm(coeffs), chart, order)


def load_structure(arg: str) -> DirectedStructure:
    """Read ``{n, A: [...], a: {"i,m": "<polynomial in z[..]>"}}``."""
    data = _load_json(arg, "structure")
    try:
        a = {}
        for key, expr in data.get("a", {}).items():
            i, m = (int(x) for x in key.split(","))
            a[(i, m)] = parse_expression(str(expr))
        return DirectedStructure(int(data["n"]), tuple(data["A"]), a)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed structure: {exc}") from None


def _parse_chart(text: str | None, n: int) -> LogChart | None:
    if text is None:
        return None
    parts = [int(x) for x in text.split(",")]
    if len(parts) == 1:
        return LogChart(n, parts[0])
    return LogChart(parts[0], parts[1])


def _seed(text):
    if text is None:
        text = os.environ.get("LOGJET_SEED", "0")
    try:
        return int(text)
    except ValueError:
        return text


def _fmt(x) -> str:
    return format_scalar(x)


def _emit(report: CheckReport, timing: bool, out) -> None:
    out.write(json.dumps(report.to_record(timing), ensure_ascii=False) + "\n")
    if not timing:
        print(f"{report.check}: {report.elapsed:.3f}s", file=sys.stderr)


# --- subcommands ------------------------------------------------------------

def cmd_check_equivariance(args) -> list[CheckReport]:
    parsed = analyze_expression(args.expr)
    for w in parsed.warnings:
        print(f"warning: {w}", file=sys.stderr)
    m = args.m
    if m is None:
        m = parsed.weight
    if m is None:
        if parsed.polynomial.is_zero():
            m = 0
        else:
            m = max(parsed.polynomial.monomial_weights())
            print(f"warning: testing against the largest weight m={m}", file=sys.stderr)
    chart = LogChart(args.n, args.log) if args.n else None
    start = time.perf_counter()
    rep = check_equivariance(parsed.polynomial, m, args.trials, seed=args.seed, k=args.k, n=args.n, chart=chart)
    details = {"expression": parsed.polynomial.to_text(), "weight": parsed.weight}
    if parsed.warnings:
        details["warnings"] = parsed.warnings
    if rep.witness:
        details["witness"] = rep.witness
    params = {"expr": args.expr, "m": m, "k": rep.k, "n": rep.n, "l": args.log}
    return [CheckReport("check-equivariance", params, rep.trials, rep.failures, rep.max_residual,
                        args.seed, time.perf_counter() - start, details)]


def cmd_logcoords(args) -> list[CheckReport]:
    germ_in = load_germ(args.germ)
    chart = _parse_chart(args.chart, germ_in.germ.n) or germ_in.chart
    k = args.k or germ_in.order
    start = time.perf_counter()
    f = germ_in.germ.jet(k)
    Z = to_log_coords(f, chart)
    ok = hat_from_log(Z) == f
    details = {
        "base": [_fmt(x) for x in Z.base],
        "Z": [[_fmt(x) for x in row] for row in Z.Z],
    }
    params = {"order": k, "chart": {"n": chart.n, "l": chart.l}}
    return [CheckReport("logcoords", params, 1, 0 if ok else 1, 0.0, None,
                        time.perf_counter() - start, details)]


def cmd_gpoly(args):
    polys = g_polynomials(args.k)
    if args.json:
        rec = {f"g_{j}": g.to_text("order") for j, g in enumerate(polys, start=1)}
        print(json.dumps({"check": "gpoly", "params": {"k": args.k}, "g": rec}))
    else:
        for j, g in enumerate(polys, start=1):
            print(f"g_{j}={g.to_text('order')}")
    return []


def cmd_constraints(args) -> list[CheckReport]:
    ds = load_structure(args.structure)
    start = time.perf_counter()
    if args.log is None:
        cs = constraint_polynomials(ds, args.k)
        letter = "P"
    else:
        l = ds.n if args.log < 0 else args.log
        cs = log_constraint_polynomials(ds, LogChart(ds.n, l), args.k)
        letter = "Q"
    red = reduce_constraints(cs)
    polys = {f"{letter}_{h}^{i}": p.to_text() for (h, i), p in sorted(cs.polys.items())}
    reduced = {f"{letter}_{h}^{i}": p.to_text() for (h, i), p in sorted(red.polys.items())}
    params = {"n": ds.n, "A": list(ds.A), "k": args.k, "log": letter == "Q"}
    if letter == "Q":
        params["l"] = l
    return [CheckReport("constraints", params, 0, 0, 0.0, None, time.perf_counter() - start,
                        {"constraints": polys, "reduced": reduced})]


def cmd_lift(args) -> list[CheckReport]:
    germ_in = load_germ(args.germ)
    k = args.k if args.k is not None else germ_in.order
    t = parse_scalar(args.t)
    start = time.perf_counter()
    p = lift_curve(germ_in.germ, k, t, chart=germ_in.chart)
    failures = sum(project(p, j) != lift_curve(germ_in.germ, j, t, chart=germ_in.chart) for j in range(1, k))
    details = {
        "level": p.level,
        "base": [_fmt(x) for x in p.base],
        "rho": p.rho,
        "blocks": [[_fmt(x) for x in b] for b in p.blocks],
        "line": [_fmt(x) for x in p.line] if p.line else None,
        "branch": p.branch,
    }
    params = {"k": k, "t": args.t, "chart": {"n": germ_in.chart.n, "l": germ_in.chart.l}}
    return [CheckReport("lift", params, max(k - 1, 0), failures, 0.0, None,
                        time.perf_counter() - start, details)]


def cmd_wronskian(args) -> list[CheckReport]:
    germ_in = load_germ(args.germ)
    n = germ_in.germ.n
    k = args.k if args.k is not None else max(germ_in.order, n)
    start = time.perf_counter()
    f = germ_in.germ.jet(k)
    Z = to_log_coords(f, germ_in.chart)
    W = wronskian_polynomial(n)
    value = W.evaluate(Z.variables())
    # equivariance at this germ under seeded reparametrizations
    failures = 0
    m = W.weighted_degree()
    for trial in range(args.trials):
        phi = random_reparam(trial_rng(args.seed, trial), k)
        moved = W.evaluate(to_log_coords(f.reparametrize(phi), germ_in.chart).variables())
        failures += moved != phi.first ** m * value
    dep = wronskian_dependence(list(germ_in.germ.jet(max(k, n)).coords))
    details = {
        "wronskian": W.to_text(),
        "weight": m,
        "value": _fmt(value),
        "dependent": dep.dependent,
        "coefficients": [_fmt(c) for c in dep.coefficients] if dep.coefficients else None,
        "minor_rows": list(dep.minor_rows) if dep.minor_rows else None,
    }
    if args.theta:
        details["theta_wronskian"] = _fmt(wronskian_theta(germ_in.germ, ThetaSeries(args.tau)))
    params = {"k": k, "n": n, "l": germ_in.chart.l, "trials": args.trials}
    return [CheckReport("wronskian", params, args.trials, failures, 0.0, args.seed,
                        time.perf_counter() - start, details)]


def cmd_theta_check(args) -> list[CheckReport]:
    try:
        p, q = (int(x) for x in args.gamma.split(","))
    except ValueError:
        raise UsageError("--gamma expects 'p,q'") from None
    gamma = LatticeVector(p, q)
    T = ThetaSeries(args.tau, args.N, args.prec, args.tol)
    start = time.perf_counter()
    fit = quasi_periodicity_check(T, gamma, seed=args.seed)
    worst = max(fit.alpha_error, fit.beta_error, fit.residual)
    params = {"tau": args.tau or "i", "N": args.N, "prec": args.prec, "gamma": [p, q], "tol": args.tol}
    quasi = CheckReport("theta.quasi_periodicity", params, 1, int(worst >= args.tol), worst, args.seed,
                        time.perf_counter() - start,
                        {"alpha": _fmt(fit.alpha), "beta": _fmt(fit.beta),
                         "expected_alpha": _fmt(fit.expected_alpha), "expected_beta": _fmt(fit.expected_beta)})
    out = [quasi]
    for rep in suite_theta(args.seed, germs=4, tau=args.tau, N=args.N, prec=args.prec, tol=args.tol):
        if rep.check != "theta.quasi_periodicity":
            out.append(rep)
    start = time.perf_counter()
    germ = PolynomialGerm([[parse_scalar("1/3+1/5i"), 1, parse_scalar("1/2")]])
    tr = translation_invariance_check(germ, gamma, T)
    w = max(tr.residual, tr.column_residual)
    out.append(CheckReport("theta.translation_gamma", params, 1, int(w >= args.tol), w, args.seed,
                           time.perf_counter() - start, {"value": _fmt(tr.value)}))
    return out


def cmd_suite(args) -> list[CheckReport]:
    names = list(SUITES) if args.all or not args.names else args.names
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    out = []
    for name in names:
        out.extend(SUITES[name](seed=args.seed))
    return out


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="random seed (default: $LOGJET_SEED or 0)")
    common.add_argument("--timing", action="store_true", help="include elapsed seconds in the records")

    parser = argparse.ArgumentParser(prog="logjet", description="Checks for logarithmic jet differentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-equivariance", parents=[common], help="test Q(j(f o phi)) = phi'(0)^m Q(j f)")
    p.add_argument("--expr", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="expected weight (default: the weighted degree)")
    p.add_argument("--log", type=int, default=0, help="number of logarithmic coordinates")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_check_equivariance)

    p = sub.add_parser("logcoords", parents=[common], help="logarithmic jet coordinates of a germ")
    p.add_argument("--germ", required=True, help="germ JSON file or inline JSON")
    p.add_argument("--chart", default=None, help="'l' or 'n,l'")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_logcoords)

    p = sub.add_parser("gpoly", parents=[common], help="print g_1..g_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gpoly)

    p = sub.add_parser("constraints", parents=[common], help="constraint polynomials of a directed structure")
    p.add_argument("--structure", required=True, help="structure JSON file or inline JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--log", type=int, nargs="?", const=-1, default=None,
                   help="use logarithmic constraints with l log coordinates (bare flag: all)")
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("lift", parents=[common], help="Semple tower coordinates of f_[k](t)")
    p.add_argument("--germ", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", default="0")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("wronskian", parents=[common], help="Wronskian value, equivariance and dependence")
    p.add_argument("--germ", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--theta", action="store_true", help="also evaluate the theta Wronskian")
    p.add_argument("--tau", default=None)
    p.set_defaults(func=cmd_wronskian)

    p = sub.add_parser("theta-check", parents=[common], help="quasi-periodicity and invariance of theta")
    p.add_argument("--tau", default=None, help="period (default i)")
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--prec", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--gamma", default="0,1", help="lattice vector 'p,q' for p + q tau")
    p.set_defaults(func=cmd_theta_check)

    p = sub.add_parser("suite", parents=[common], help="run check suites")
    p.add_argument("names", nargs="*", help=f"suites to run ({', '.join(SUITES)})")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _seed(None)
    try:
        reports = args.func(args)
    except UsageError as exc:
        print(f"logjet: error: {exc}", file=sys.stderr)
        return 2
    except (LogjetError, ValueError) as exc:
        print(f"logjet: error: {exc}", file=sys.stderr)
        return 2
    for rep in reports:
        _emit(rep, args.timing, sys.stdout)
    sys.stdout.flush()
    return 1 if any(r.failures for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
