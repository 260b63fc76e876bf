"""Command-line front end.

Exit codes: 0 success / Equivalent, 1 NotEquivalent (or a failed
verification), 2 parse or input error, 3 internal invariant failure,
4 OutOfScope.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

from .expr_io import (
    DocumentError,
    MatrixDocument,
    ParseError,
    infer_variables,
    load_document,
    parse_set,
    print_poly,
    print_set,
)
from .groebner import GroebnerLimitExceeded, gcd, groebner_basis
from .poly_core import MonomialOrder, VariableContext
from .polymatrix import minor_report, normal_rank
from .smith import FactorizationWitness, Verdict, decide, verify_witness

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3
EXIT_OUT_OF_SCOPE = 4

_VERDICT_EXIT = {
    Verdict.EQUIVALENT: EXIT_OK,
    Verdict.NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT,
    Verdict.OUT_OF_SCOPE: EXIT_OUT_OF_SCOPE,
}


class InputError(Exception):
    pass


class RunReport:
    """Accumulates stage results and timings for one command."""

    def __init__(self, argv: List[str], digest: Optional[str] = None):
        self.data: Dict[str, Any] = {"command": argv, "input_sha256": digest, "results": {}}
        self.timings: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    def __setitem__(self, key: str, value: Any) -> None:
        self.data["results"][key] = value

    def structured(self) -> str:
        return json.dumps({**self.data, "timings": self.timings}, indent=2, sort_keys=True)

    def text(self) -> str:
        lines = []
        for key, value in self.data["results"].items():
            if isinstance(value, list):
                lines.append(f"{key}:")
                for item in value:
                    if isinstance(item, dict):
                        lines.append("  " + ", ".join(f"{k}={v}" for k, v in item.items()))
                    else:
                        lines.append(f"  {item}")
            elif isinstance(value, dict):
                lines.append(f"{key}: " + ", ".join(f"{k}={v}" for k, v in value.items()))
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    raw = _read_bytes(path)
    doc = load_document(raw)
    return doc.to_matrix(), hashlib.sha256(raw).hexdigest()


def _emit(report: RunReport, fmt: str) -> None:
    print(report.structured() if fmt == "structured" else report.text())


def cmd_analyze(args) -> int:
    F, digest = _load(args.file)
    order = MonomialOrder.from_name(args.order)
    report = RunReport(args.argv, digest)
    with report.stage("rank"):
        r = normal_rank(F)
    report["shape"] = f"{F.rows}x{F.cols}"
    report["rank"] = r
    top = r if args.max_k is None else min(r, args.max_k)
    orders = []
    for k in range(1, top + 1):
        with report.stage(f"k={k}"):
            rep = minor_report(F, k, order)
        orders.append({
            "k": k,
            "d": print_poly(rep.d),
            "reduced_minors": [print_poly(b) for b in rep.generators],
            "unit_ideal": rep.unit_ideal,
        })
    report["orders"] = orders
    _emit(report, args.format)
    return EXIT_OK


def _decision_report(args):
    F, digest = _load(args.file)
    if F.is_zero():
        raise InputError("the zero matrix has no Smith decision")
    order = MonomialOrder.from_name(args.order)
    report = RunReport(args.argv, digest)
    with report.stage("decide"):
        dec = decide(F, order)
    report["shape"] = f"{F.rows}x{F.cols}"
    report["rank"] = dec.rank
    report["d"] = [{"k": rep.k, "d": print_poly(rep.d), "unit_ideal": rep.unit_ideal} for rep in dec.reports]
    if dec.shape is None:
        report["qwl_shape"] = None
    else:
        s = dec.shape
        report["qwl_shape"] = {"f1": print_poly(s.f1), "p": s.p, "f2": print_poly(s.f2), "q": s.q,
                               "unit": str(s.unit)}
    report["verdict"] = dec.verdict.value
    report["smith_diagonal"] = [print_poly(e) for e in dec.smith_diagonal]
    return F, dec, report


def cmd_decide(args) -> int:
    _, dec, report = _decision_report(args)
    _emit(report, args.format)
    return _VERDICT_EXIT[dec.verdict]


def cmd_smith(args) -> int:
    F, dec, report = _decision_report(args)
    if dec.verdict is Verdict.EQUIVALENT and args.format == "text":
        S = dec.smith_matrix(F.rows, F.cols)
        print(MatrixDocument.from_matrix(S, {"verdict": dec.verdict.value}).dumps(), end="")
    else:
        _emit(report, args.format)
    return _VERDICT_EXIT[dec.verdict]


def cmd_verify(args) -> int:
    F, digest = _load(args.file)
    U, _ = _load(args.u)
    D, _ = _load(args.d)
    V, _ = _load(args.v)
    report = RunReport(args.argv, digest)
    with report.stage("verify"):
        try:
            ok = verify_witness(F, FactorizationWitness(U, D, V))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    report["witness_valid"] = ok
    _emit(report, args.format)
    return EXIT_OK if ok else EXIT_NOT_EQUIVALENT


def _poly_source(arg: str) -> str:
    path = Path(arg)
    if not arg.lstrip().startswith("{") and path.is_file():
        return path.read_text(encoding="utf-8")
    return arg


def _context(sources: List[str], explicit: Optional[str]) -> VariableContext:
    names = [v.strip() for v in explicit.split(",")] if explicit else infer_variables(sources)
    return VariableContext(names or ["x1"])


def cmd_gb(args) -> int:
    src = _poly_source(args.polys)
    ctx = _context([src], args.vars)
    polys = [p for p in parse_set(src, ctx) if not p.is_zero()]
    order = MonomialOrder.from_name(args.order)
    if not polys:
        print("{0}")
        return EXIT_OK
    gb = groebner_basis(polys, order)
    print(print_set(gb.generators, order))
    return EXIT_OK


def cmd_gcd(args) -> int:
    ctx = _context([args.p1, args.p2], args.vars)
    f, g = parse_set(args.p1, ctx), parse_set(args.p2, ctx)
    if len(f) != 1 or len(g) != 1:
        raise InputError("gcd takes exactly two polynomials")
    try:
        h = gcd(f[0], g[0])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(print_poly(h))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands must not reset flags given before the subcommand name
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        flags = argparse.ArgumentParser(add_help=False)
        flags.add_argument("--order", choices=["lex", "grevlex"], default=default("lex"),
                           help="monomial order for Groebner computations")
        flags.add_argument("--format", choices=["text", "structured"], default=default("text"))
        flags.add_argument("--seed", type=int, default=default(None), help="seed for randomized replay")
        return flags

    common = global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="qwlsmith", parents=[global_flags(suppress=False)],
                                     description="Smith form decisions for quasi weakly linear polynomial matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="d_k, reduced minors and J_k verdicts")
    p.add_argument("file")
    p.add_argument("--max-k", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decide", parents=[common], help="equivalence to the Smith form")
    p.add_argument("file")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("smith", parents=[common], help="print the Smith form as a matrix document")
    p.add_argument("file")
    p.set_defaults(func=cmd_smith)

    p = sub.add_parser("verify", parents=[common], help="check F = U*D*V with U, V unimodular")
    p.add_argument("file")
    p.add_argument("--u", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gb", parents=[common], help="reduced Groebner basis")
    p.add_argument("polys", help="'{p1, p2, ...}' or a file holding such a list")
    p.add_argument("--vars", default=None, help="comma separated variable order (default: sorted names)")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("gcd", parents=[common], help="monic gcd of two polynomials")
    p.add_argument("p1")
    p.add_argument("p2")
    p.add_argument("--vars", default=None)
    p.set_defaults(func=cmd_gcd)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    args.argv = argv
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.func(args)
    except (ParseError, DocumentError, InputError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GroebnerLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, ArithmeticError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
