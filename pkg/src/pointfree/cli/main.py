"""``pointfree`` command: measure, integrate, approx, selftest, parse.

Machine-readable JSON goes to stdout (and to ``--json PATH`` when given);
short human summaries go to stderr.

Exit codes: 0 ok, 1 selftest failure, 2 budget exhausted / not converged,
3 parse or usage error, 4 backend error, 5 other evaluation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .. import __version__
from ..backends import load_backend
from ..borel_functions import dyadic_approx
from ..errors import (
    BackendError,
    DepthCapExceeded,
    ExpressionSyntaxError,
    PointfreeError,
)
from ..extension import ExtendedMeasure
from ..integration import integrate
from .compile import compile_fun, compile_set
from .language import FUN, SET, parse, to_json, to_source

EXIT_OK, EXIT_SELFTEST, EXIT_BUDGET, EXIT_PARSE, EXIT_BACKEND, EXIT_EVAL = 0, 1, 2, 3, 4, 5
OUTPUT_VERSION = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_source(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def _emit(payload: dict, args) -> None:
    payload = {"version": OUTPUT_VERSION, **payload}
    text = json.dumps(payload, sort_keys=True)
    print(text)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_sorted(src: str, sort: str):
    node = parse(_read_source(src))
    if node.sort != sort:
        raise ExpressionSyntaxError(f"expected a {sort} expression, got a {node.sort}")
    return node


def cmd_measure(args) -> int:
    node = _parse_sorted(args.expr, SET)
    backend = load_backend(args.backend)
    mu = ExtendedMeasure(backend, budget=args.budget)
    r = mu.eval(compile_set(node), args.eps)
    _emit({"command": "measure", "expr": to_source(node), "backend": backend.describe(), **r.to_dict()}, args)
    _say(f"mu in [{float(r.lo):.12g}, {float(r.hi):.12g}]  ({'converged' if r.converged else 'budget exhausted'})")
    return EXIT_OK if r.converged else EXIT_BUDGET


def cmd_integrate(args) -> int:
    node = _parse_sorted(args.expr, FUN)
    backend = load_backend(args.backend)
    mu = ExtendedMeasure(backend, budget=args.budget)
    r = integrate(compile_fun(node), mu, args.eps, ladder=args.ladder, bound=args.bound)
    _emit({"command": "integrate", "expr": to_source(node), "backend": backend.describe(), **r.to_dict()}, args)
    _say(f"integral in [{float(r.lo):.12g}, {float(r.hi):.12g}]  ({r.status})")
    return EXIT_OK if r.converged else EXIT_BUDGET


def cmd_approx(args) -> int:
    node = _parse_sorted(args.expr, FUN)
    s = dyadic_approx(compile_fun(node), args.n)
    parts = []
    mu = ExtendedMeasure(load_backend(args.backend), budget=args.budget) if args.backend else None
    for a, x in s.parts:
        entry = {"set": str(a), "value": float(x)}
        if mu is not None:
            m = mu.eval(a, args.eps)
            entry["measure"] = [float(m.lo), float(m.hi)]
        parts.append(entry)
    _emit({"command": "approx", "expr": to_source(node), "n": args.n, "parts": parts}, args)
    _say(f"{len(parts)} part(s) at ladder level {args.n}")
    return EXIT_OK


def cmd_parse(args) -> int:
    node = parse(_read_source(args.expr))
    _emit({"command": "parse", "sort": node.sort, "canonical": to_source(node), "tree": to_json(node)}, args)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from ..selftest import run_selftest

    backend = load_backend(args.backend)
    report = run_selftest(backend, samples=args.samples, seed=args.seed)
    _emit({"command": "selftest", "backend": backend.describe(), **report}, args)
    for s in report["suites"]:
        _say(f"{'PASS' if s['ok'] else 'FAIL'}  {s['name']}: {s['detail']}")
    return EXIT_OK if report["ok"] else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pointfree", description="Point-free measure and integration engine.")
    p.add_argument("--version", action="version", version=f"pointfree {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, backend_required=True):
        sp.add_argument("--backend", required=backend_required, default=None,
                        help="config file, inline JSON, or a type name (gaussian, skew, product, unit, finite)")
        sp.add_argument("--eps", type=float, default=1e-6)
        sp.add_argument("--budget", type=int, default=64, help="maximum truncation depth")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", metavar="PATH", help="also write the JSON result here")

    m = sub.add_parser("measure", help="enclose the measure of a set expression")
    m.add_argument("expr", help="expression text, @file, or - for stdin")
    common(m)
    m.set_defaults(run=cmd_measure)

    i = sub.add_parser("integrate", help="enclose the integral of a function expression")
    i.add_argument("expr")
    common(i)
    i.add_argument("--bound", type=float, default=None, help="declared upper bound on the function")
    i.add_argument("--ladder", type=int, default=12, help="maximum dyadic refinement level")
    i.set_defaults(run=cmd_integrate)

    a = sub.add_parser("approx", help="dump the dyadic simple approximation at level n")
    a.add_argument("expr")
    a.add_argument("n", type=int)
    common(a, backend_required=False)
    a.set_defaults(run=cmd_approx)

    s = sub.add_parser("selftest", help="run law, additivity and convergence suites against a backend")
    common(s)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(run=cmd_selftest)

    q = sub.add_parser("parse", help="print the canonical form and JSON tree of an expression")
    q.add_argument("expr")
    q.add_argument("--json", metavar="PATH")
    q.set_defaults(run=cmd_parse)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_PARSE
    try:
        return args.run(args)
    except ExpressionSyntaxError as exc:
        _emit({"error": "parse", "message": str(exc), "line": exc.line, "column": exc.column,
               "expected": list(exc.expected)}, args)
        _say(f"parse error: {exc}")
        return EXIT_PARSE
    except DepthCapExceeded as exc:
        _emit({"error": "depth_cap", "message": str(exc)}, args)
        _say(f"error: {exc}")
        return EXIT_PARSE
    except BackendError as exc:
        _emit({"error": "backend", "kind": type(exc).__name__, "message": str(exc)}, args)
        _say(f"backend error: {exc}")
        return EXIT_BACKEND
    except (PointfreeError, ValueError, TypeError, OSError) as exc:
        _emit({"error": "evaluation", "kind": type(exc).__name__, "message": str(exc)}, args)
        _say(f"error: {exc}")
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
