"""Command-line front end.

Pipeline: parse -> effective bridges (declared plus computed) -> translate ->
run the query under tabling -> print answers one per line in table order,
then optional stats / oracle-comparison lines.

Exit status: 0 on success, 1 when --oracle-check finds a mismatch, 2 on any
file, parse or runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .bridges import find_bridges
from .engine import DEFAULT_BUDGET
from .errors import Error
from .fixtures import gen_fixture
from .oracle import bottom_up_eval, compare_answer_sets
from .syntax import parse_program, parse_query, print_program, print_term
from .tabling import Engine
from .terms import Program, pred_of
from .translate import Mode, translate


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cctab",
        description="Tabled evaluation of a Prolog subset via continuation-call translation.",
    )
    ap.add_argument("file", nargs="?", help="program file (omit when using --gen)")
    ap.add_argument("--query", help="goal to run, e.g. 'path(1, X)'")
    ap.add_argument(
        "--mode",
        choices=["general", "legacy"],
        default="general",
        help="translation mode (default: general)",
    )
    ap.add_argument(
        "--translate-only",
        action="store_true",
        help="print the translated program and exit (no query execution)",
    )
    ap.add_argument(
        "--show-bridges",
        action="store_true",
        help="print the effective bridge set, one name/arity per line, sorted",
    )
    ap.add_argument("--stats", action="store_true", help="print tabling counters after the query")
    ap.add_argument(
        "--oracle-check",
        action="store_true",
        help="compare the query's answer set against the bottom-up oracle",
    )
    ap.add_argument(
        "--depth",
        type=int,
        default=DEFAULT_BUDGET,
        metavar="N",
        help=f"resolution step budget (default {DEFAULT_BUDGET})",
    )
    ap.add_argument(
        "--gen",
        metavar="KIND:SIZE",
        help="generate a fixture program instead of reading a file (chain|cycle|grid)",
    )
    return ap


def _load_source(args) -> str:
    if args.gen:
        kind, sep, size = args.gen.partition(":")
        if not sep or not size.isdigit():
            raise Error(f"--gen expects KIND:SIZE, got {args.gen!r}")
        return gen_fixture(kind, int(size))
    with open(args.file, encoding="utf-8") as f:
        return f.read()


def run(args) -> int:
    if args.gen and args.file:
        raise Error("give either a program file or --gen, not both")
    if not args.gen and not args.file:
        raise Error("no program: give a file or --gen KIND:SIZE")
    if args.translate_only and args.query:
        raise Error("--translate-only excludes query execution")
    if args.oracle_check and not args.query:
        raise Error("--oracle-check needs --query")

    mode = Mode(args.mode)
    program = parse_program(_load_source(args))

    effective = set(program.bridges)
    if mode is Mode.GENERAL:
        effective |= find_bridges(program)
    analyzed = Program(program.clauses, program.tabled, frozenset(effective))

    if args.show_bridges:
        for pred in sorted(effective):
            print(pred)

    translated = translate(analyzed, mode)
    if args.translate_only:
        sys.stdout.write(print_program(translated))
        return 0
    if not args.query:
        return 0

    goals = parse_query(args.query)
    engine = Engine(translated, mode=mode, depth_budget=args.depth)
    for solution in engine.solve(goals):
        print(", ".join(print_term(g) for g in solution.goals))
    if args.stats:
        print(engine.counters.stats_line())
    if args.oracle_check:
        if len(goals) != 1:
            raise Error("--oracle-check needs a single-goal query")
        facts = bottom_up_eval(program)
        equal, missing, extra = compare_answer_sets(
            engine.space, facts, pred_of(goals[0]), call=goals[0]
        )
        if equal:
            print("OK")
        else:
            for t in missing:
                print(f"missing: {print_term(t)}")
            for t in extra:
                print(f"extra: {print_term(t)}")
            return 1
    return 0


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s")
    args = build_arg_parser().parse_args(argv)
    try:
        return run(args)
    except Error as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
