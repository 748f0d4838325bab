"""Command-line front end.

Exit codes: 0 success / claim holds, 2 claim violated (or, for ``audit``,
a sound bound violated), 1 usage, domain or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import audit, bounds, means
from .bounds import BoundId, Case, HypothesisError, MonotonicityError
from .expr import DomainError, ParseError
from .propositions import PROPOSITIONS, PropCase, prop_crosscheck
from .quadrature import QuadConfig, QuadratureError

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2
LEMMA_TOL = 1e-8

BOUND_CLAIMS = {b.value.lower().replace("_", "-"): b for b in BoundId}
PROP_CLAIMS = {p.lower(): p for p in PROPOSITIONS}
OTHER_CLAIMS = ("hh", "lemma", "young", "chebyshev", "kernel")
CLAIM_IDS = (*BOUND_CLAIMS, *PROP_CLAIMS, *OTHER_CLAIMS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _quad_config(args) -> QuadConfig:
    tol = args.tol
    if tol is None and os.environ.get("INEQ_TOL"):
        try:
            tol = float(os.environ["INEQ_TOL"])
        except ValueError:
            raise UsageError(f"INEQ_TOL must be a number, got {os.environ['INEQ_TOL']!r}")
    if tol is None:
        return QuadConfig()
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    return QuadConfig(abs_tol=tol, rel_tol=tol)


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.claim} needs {', '.join(missing)}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _print_verdict(v: bounds.Verdict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(asdict(v), indent=2))
        return
    if fmt == "csv":
        sys.stdout.write(audit.verdicts_to_csv([v]))
        return
    status = "holds" if v.holds else "VIOLATED"
    n = f" n={v.n}" if v.n is not None else ""
    print(f"{v.claim}  f={v.f}  a={v.a:g} b={v.b:g} p={v.p:g}{n}")
    print(f"  lhs     {_fmt(v.lhs)}")
    print(f"  rhs     {_fmt(v.rhs)}")
    print(f"  margin  {_fmt(v.margin)}")
    print(f"  slack   {v.slack:.3g}")
    print(f"  {status}")


def _check_bound(args, cfg) -> int:
    bound = BOUND_CLAIMS[args.claim]
    _require(args, "f", "a", "b")
    if bound.fixed_p is not None:
        if args.p is not None:
            raise UsageError(f"{args.claim} fixes p = {bound.fixed_p:g}; do not pass --p")
        p = bound.fixed_p
    else:
        _require(args, "p")
        p = args.p
    v = audit.evaluate_claim(bound, Case(args.f, args.a, args.b, p), cfg)
    _print_verdict(v, args.format)
    return EXIT_OK if v.holds else EXIT_VIOLATED


def _check_prop(args, cfg) -> int:
    prop = PROP_CLAIMS[args.claim]
    _require(args, "a", "b", "p")
    if prop in ("P1", "P2", "P3"):
        _require(args, "n")
    case = PropCase(prop, args.a, args.b, args.p, args.n)
    v = audit.evaluate_claim(prop, case, cfg)
    _print_verdict(v, args.format)
    if args.format == "table":
        cc = prop_crosscheck(case, cfg)
        agree = "agrees" if cc.agree else f"differs, ratio {cc.ratio:.6g}"
        print(f"  parent bound rhs {_fmt(cc.theorem)} ({agree})")
    return EXIT_OK if v.holds else EXIT_VIOLATED


def _emit(payload: dict, fmt: str, lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _check_other(args, cfg) -> int:
    claim = args.claim
    if claim == "hh":
        _require(args, "f", "a", "b")
        r = bounds.hh_check(args.f, args.a, args.b, cfg)
        _emit(asdict(r), args.format,
              [f"hh  f={args.f}  a={args.a:g} b={args.b:g}",
               f"  f(mid)      {_fmt(r.left)}",
               f"  mean value  {_fmt(r.mid)}",
               f"  trapezoid   {_fmt(r.right)}",
               f"  {'holds' if r.holds else 'VIOLATED'}"])
        return EXIT_OK if r.holds else EXIT_VIOLATED
    if claim == "lemma":
        _require(args, "f", "a", "b")
        case = Case(args.f, args.a, args.b, args.p or 2.0)
        res = bounds.lemma_identity_residual(case, cfg)
        ok = res < LEMMA_TOL
        _emit({"residual": res, "holds": ok}, args.format,
              [f"lemma  f={args.f}  a={args.a:g} b={args.b:g}",
               f"  residual  {res:.3g}", f"  {'holds' if ok else 'VIOLATED'}"])
        return EXIT_OK if ok else EXIT_VIOLATED
    if claim == "young":
        _require(args, "a", "b", "p")
        r = bounds.young_check(args.a, args.b, args.p)
        _emit(asdict(r), args.format,
              [f"young  a={args.a:g} b={args.b:g} p={args.p:g}",
               f"  ab                 {_fmt(r.lhs)}",
               f"  a^p/p + b^q/q      {_fmt(r.rhs)}",
               f"  {'holds' if r.holds else 'VIOLATED'}" + (" with equality" if r.equality else "")])
        return EXIT_OK if r.holds else EXIT_VIOLATED
    if claim == "chebyshev":
        _require(args, "f", "g", "a", "b")
        r = bounds.chebyshev_check(args.f, args.g, args.w, args.a, args.b, cfg)
        _emit(asdict(r), args.format,
              [f"chebyshev  f={args.f}  g={args.g}  w={args.w or '1'}  [{args.a:g}, {args.b:g}]",
               f"  lhs  {_fmt(r.lhs)}", f"  rhs  {_fmt(r.rhs)}",
               f"  {r.orientation}, {'holds' if r.holds else 'VIOLATED'}"])
        return EXIT_OK if r.holds else EXIT_VIOLATED
    # kernel
    _require(args, "p")
    p = args.p
    if not p > 1:
        raise UsageError("kernel needs p > 1")
    rows, ok = [], True
    payload: dict = {"p": p}
    if args.t is not None:
        k = bounds.kernel_eval(p, args.t)
        ok = ok and k >= 1.0 - 1e-12
        payload["kernel"] = k
        rows.append(f"  K_p({args.t:g})  {_fmt(k)}")
    for weight in ("unit", "one-minus-2t"):
        got = bounds.kernel_moment(p, weight, cfg)
        want = bounds.kernel_moment_closed(p, weight)
        ok = ok and abs(got - want) <= 1e-9
        payload[weight] = {"quadrature": got, "closed_form": want}
        rows.append(f"  moment[{weight}]  {got:.12f}  closed form {want:.12f}")
    payload["holds"] = ok
    _emit(payload, args.format, [f"kernel  p={p:g}", *rows, f"  {'holds' if ok else 'VIOLATED'}"])
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_check(args) -> int:
    cfg = _quad_config(args)
    if args.claim in BOUND_CLAIMS:
        return _check_bound(args, cfg)
    if args.claim in PROP_CLAIMS:
        return _check_prop(args, cfg)
    return _check_other(args, cfg)


def cmd_audit(args) -> int:
    if args.suite not in audit.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; available suites: "
                         + ", ".join(audit.SUITES))
    report = audit.run_named_suite(args.suite, _quad_config(args), seed=args.seed)
    if args.format == "json":
        text = report.to_json()
    elif args.format == "csv":
        text = report.to_csv()
    else:
        text = render_summary_table(report)
    sound_bad = report.sound_violations
    summary = (f"audit {args.suite}: {len(report.verdicts)} verdicts, "
               f"{sum(not v.holds for v in report.verdicts)} violations "
               f"({len(sound_bad)} in sound bounds), {len(report.errors)} skipped")
    if args.out:
        try:
            Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        print(summary)
    else:
        print(text)
        print(summary, file=sys.stderr)
    return EXIT_VIOLATED if sound_bad else EXIT_OK


def render_summary_table(report: audit.AuditReport) -> str:
    lines = [f"{'claim':<12}{'cases':>7}{'holds':>7}{'viol':>7}  {'max margin':>14}  worst case"]
    for claim, s in report.summary.items():
        worst = report.verdicts[s.argmax] if s.argmax is not None else None
        where = (f"f={worst.f} [{worst.a:g}, {worst.b:g}] p={worst.p:g}" if worst else "")
        margin = f"{s.max_margin:.6g}" if s.max_margin is not None else "-"
        lines.append(f"{claim:<12}{s.cases:>7}{s.holds:>7}{s.violations:>7}  {margin:>14}  {where}")
    findings = report.findings
    if "c2_constant_ratio" in findings:
        lines.append(f"C2 printed/derived constant ratio: {findings['c2_constant_ratio']['ratio']:.15g}")
    for name, chain in findings.get("proof_chains", {}).items():
        lines.append(f"{name} proof chain on x^2, [0,1], p=2: first failing step "
                     f"{chain['first_failure'] or 'none'}")
    return "\n".join(lines)


def cmd_means(args) -> int:
    a, b = args.a, args.b
    if not (a > 0 and b > 0):
        raise DomainError("means need a, b > 0")
    chain = means.chain_check(a, b)
    ok = not any(e.violated for e in chain)
    extra = [(str(means.kind_for_exponent(r)), means.mean(means.kind_for_exponent(r), a, b))
             for r in args.r or ()]
    if args.format == "json":
        print(json.dumps({"a": a, "b": b,
                          "means": {str(e.kind): e.value for e in chain} | dict(extra),
                          "chain_ok": ok}, indent=2))
    else:
        for e in chain:
            print(f"{str(e.kind):<6}{e.value:.10g}")
        for name, value in extra:
            print(f"{name:<6}{value:.10g}")
        print("chain H <= G <= L <= I <= A: " + ("OK" if ok else "BROKEN"))
    return EXIT_OK


def cmd_search(args) -> int:
    spec = audit.SearchSpec(
        claim=audit.normalize_claim(args.claim), family=args.family, budget=args.budget,
        seed=args.seed, rounds=args.rounds, grid_points=args.grid_points,
        a_range=tuple(args.a_range) if args.a_range else None,
        delta_range=tuple(args.delta_range), p_range=tuple(args.p_range))
    result = audit.search(spec, _quad_config(args))
    if args.format == "json":
        print(json.dumps(asdict(result), indent=2))
        return EXIT_OK
    if result.best_case is None:
        print("no valid case in the search box")
        return EXIT_OK
    c = result.best_case
    where = f"f={c['f']} a={c['a']:.6g} b={c['b']:.6g} p={c['p']:.6g}"
    if result.violated:
        print(f"violation found for {spec.claim}: {where}")
    else:
        print(f"no violation found for {spec.claim}; closest case {where}")
    print(f"  best margin  {result.best_margin:.6f}")
    print(f"  evaluations  {result.evaluations}")
    return EXIT_OK


def _claim_token(text: str) -> str:
    token = text.lower()
    if token not in CLAIM_IDS:
        raise argparse.ArgumentTypeError(f"unknown claim {text!r}; choose from {', '.join(CLAIM_IDS)}")
    return token


def _search_claim(text: str) -> str:
    token = text.lower()
    if token not in BOUND_CLAIMS and token not in PROP_CLAIMS:
        raise argparse.ArgumentTypeError(f"search supports bound and proposition claims, not {text!r}")
    return token


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ineqaudit", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=None,
                        help="quadrature abs/rel tolerance (default 1e-10, or $INEQ_TOL)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="evaluate one claim on one case")
    check.add_argument("claim", type=_claim_token, help=", ".join(CLAIM_IDS))
    check.add_argument("--f", help="convex function of x, e.g. 'x^2'")
    check.add_argument("--g", help="second function (chebyshev)")
    check.add_argument("--w", help="nonnegative weight (chebyshev, default 1)")
    check.add_argument("--a", type=float)
    check.add_argument("--b", type=float)
    check.add_argument("--p", type=float)
    check.add_argument("--n", type=int)
    check.add_argument("--t", type=float, help="kernel argument in (0, 1)")
    check.add_argument("--format", choices=("table", "json", "csv"), default="table")
    check.set_defaults(func=cmd_check)

    aud = sub.add_parser("audit", help="run a claim x case suite and write a report")
    aud.add_argument("--suite", default="default")
    aud.add_argument("--out", help="report path (default: standard output)")
    aud.add_argument("--format", choices=("table", "json", "csv"), default="table")
    aud.add_argument("--seed", type=int, default=0)
    aud.set_defaults(func=cmd_audit)

    mn = sub.add_parser("means", help="tabulate special means of a and b")
    mn.add_argument("--a", type=float, required=True)
    mn.add_argument("--b", type=float, required=True)
    mn.add_argument("--r", type=float, action="append", help="p-logarithmic exponent (repeatable)")
    mn.add_argument("--format", choices=("table", "json"), default="table")
    mn.set_defaults(func=cmd_means)

    se = sub.add_parser("search", help="maximise the violation margin of a claim")
    se.add_argument("--claim", type=_search_claim, required=True)
    se.add_argument("--family", default="monomials",
                    help="monomials, exp, reciprocal, xlnx, or an expression in x")
    se.add_argument("--budget", type=int, default=10_000)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--rounds", type=int, default=8)
    se.add_argument("--grid-points", type=int, default=4)
    se.add_argument("--a-range", type=float, nargs=2, metavar=("LO", "HI"))
    se.add_argument("--delta-range", type=float, nargs=2, metavar=("LO", "HI"), default=(0.5, 5.0))
    se.add_argument("--p-range", type=float, nargs=2, metavar=("LO", "HI"), default=(1.1, 10.0))
    se.add_argument("--format", choices=("table", "json"), default="table")
    se.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, DomainError, HypothesisError, MonotonicityError,
            QuadratureError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
