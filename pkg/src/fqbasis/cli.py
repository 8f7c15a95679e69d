"""Command-line entry point.

Exit codes: 0 success, 1 bad input or usage, 2 a guaranteed property failed
(which would be a counterexample to a proved statement).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .collisions import energy_identity_check
from .errors import PreconditionError, Violation
from .field import find_primitive_element, make_field
from .sharpness import box_counterexample, subfield_counterexample, trivial_counterexample
from .subsets import parse_set, productset
from .sweep import SweepConfig, default_output, sweep
from .theorems import THEOREMS, minimal_basis_order, verify_pair

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, required=True, help="characteristic")
    p.add_argument("--m", type=int, default=1, help="extension degree")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fqbasis", description="Additive bases from product sets in GF(p^m).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("field", help="describe GF(p^m)")
    _field_args(p)

    p = sub.add_parser("verify", help="certify N(AB) = F_q for one pair")
    _field_args(p)
    p.add_argument("--A", required=True, help="set literal, e.g. 0,1,3")
    p.add_argument("--B", required=True)
    p.add_argument("--theorem", choices=THEOREMS, help="force a theorem instead of auto-routing")
    p.add_argument("--cap", type=int, help="oracle cap (default 2q)")

    p = sub.add_parser("oracle", help="minimal k with kX = F_q (or kAB with --A/--B)")
    _field_args(p)
    p.add_argument("--X")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--cap", type=int)

    p = sub.add_parser("energy", help="summed collision energy against its closed form")
    _field_args(p)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)

    p = sub.add_parser("counterexample", help="pairs with |A||B| = q and no basis")
    p.add_argument("kind", choices=["trivial", "subfield", "box"])
    _field_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--cap", type=int, help="oracle cap (default 4q)")

    p = sub.add_parser("sweep", help="verify many pairs")
    _field_args(p)
    p.add_argument("--mode", choices=["exhaustive", "random"], default="random")
    p.add_argument("--filter", default=">q", help='">q", ">=2q", "=q" or a minimum |A||B|')
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--theorem", default="auto", choices=("auto",) + THEOREMS)
    p.add_argument("--cap", type=int)
    p.add_argument("--out", help="JSONL output path (default: $FQBASIS_OUTPUT_DIR or stdout)")
    p.add_argument("--csv", help="also write the summary as CSV")
    p.add_argument("--budget", type=int, help="exhaustive budget on 4^q")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record per-pair microseconds")
    return parser


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _run(args) -> int:
    if args.command == "counterexample":
        if args.kind == "box":
            if args.k is None or args.l is None:
                raise PreconditionError("box needs --k and --l")
            ce = box_counterexample(args.p, args.m, args.k, args.l)
        else:
            f = make_field(args.p, args.m)
            ce = trivial_counterexample(f) if args.kind == "trivial" else subfield_counterexample(f)
        _emit(ce.to_json(args.cap))
        return EXIT_OK

    if args.command == "sweep":
        cfg = SweepConfig(p=args.p, m=args.m, mode=args.mode, pair_filter=args.filter,
                          trials=args.trials, seed=args.seed, theorem=args.theorem,
                          cap=args.cap, output=args.out, csv_summary=args.csv,
                          timing=args.timing, workers=args.workers)
        if args.budget is not None:
            cfg.exhaustive_budget = args.budget
        to_stdout = default_output(cfg) is None
        emit = (lambda rec: print(json.dumps(rec, separators=(",", ":")))) if to_stdout else None
        report = sweep(cfg, on_record=emit)
        out = {"header": report.header, "summary": report.summary}
        if to_stdout:
            print(json.dumps(out, separators=(",", ":")))
        else:
            _emit(out)
        return EXIT_VIOLATION if report.violations else EXIT_OK

    f = make_field(args.p, args.m)
    if args.command == "field":
        out = f.to_json()
        out["q"] = f.q
        out["primitive_element"] = find_primitive_element(f).index
        _emit(out)
        return EXIT_OK

    if args.command == "verify":
        A, B = parse_set(f, args.A), parse_set(f, args.B)
        report = verify_pair(A, B, args.cap, args.theorem)
        _emit(report.to_json())
        return EXIT_OK if report.consistent else EXIT_VIOLATION

    if args.command == "oracle":
        if args.X is not None:
            X = parse_set(f, args.X)
        elif args.A is not None and args.B is not None:
            X = productset(parse_set(f, args.A), parse_set(f, args.B))
        else:
            raise PreconditionError("oracle needs --X or both --A and --B")
        _emit(minimal_basis_order(X, args.cap).to_json())
        return EXIT_OK

    if args.command == "energy":
        A, B = parse_set(f, args.A), parse_set(f, args.B)
        rep = energy_identity_check(A, B)
        _emit({"q": f.q, "A": A.members(), "B": B.members(), "total": rep.total,
               "expected": rep.expected, "equal": rep.equal,
               "plus_equals_minus": rep.plus_equals_minus})
        return EXIT_OK if rep.equal and rep.plus_equals_minus else EXIT_VIOLATION

    raise AssertionError(args.command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _run(args)
    except Violation as exc:
        print(f"VIOLATION: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (PreconditionError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
