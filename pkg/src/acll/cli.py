"""Command-line entry point.

    acll problem.trs                       complete the equations
    acll problem.trs --goal "f(0) = 0"     complete, then decide the goal
    acll rules.trs --check-only            Church-Rosser modulo AC check
    acll rules.trs --canonicalize          reduce an AC-complete TRS

Exit status: 0 success or valid, 1 failure or invalid, 2 exhausted or
indeterminate, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .ac import Relation
from .canonicity import ddot, is_canonical_mod_b
from .completion import EngineConfig, race_preferences, run_completion
from .decision import church_rosser_mod_ac, decide_validity
from .termination import make_oracle
from .wst import WstError, parse_wst, print_wst

OK, FAIL, UNKNOWN, USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="acll", description="Left-linear completion modulo AC.")
    ap.add_argument("problem", help="WST file, or - for standard input")
    ap.add_argument("--engine", choices=["a", "b"], default="a",
                    help="b deduces cliffs as equations and rewrites plainly")
    ap.add_argument("--prime", action="store_true", help="only prime critical pairs")
    ap.add_argument("--simp", choices=["plain", "ps", "modulo"], default="plain",
                    help="relation used by Simplify and Compose")
    ap.add_argument("--goal", metavar="S = T", help="equation to decide after completion")
    ap.add_argument("--order", default="auto",
                    help="auto, acrpo, poly-search[:BOUND], poly-file:PATH or external:CMD")
    ap.add_argument("--interactive-prover", action="store_true",
                    help="keep one external prover session open")
    ap.add_argument("--prover-timeout", type=int, default=10000, metavar="MS",
                    help="per-query limit for an external prover")
    ap.add_argument("--timeout", type=float, default=60.0, metavar="SECS")
    ap.add_argument("--max-iter", type=int, default=2500, metavar="N")
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--race", action="store_true",
                       help="run both orientation preferences in parallel")
    group.add_argument("--prefer", choices=["l2r", "r2l"], default="l2r")
    ap.add_argument("--check-only", action="store_true",
                    help="check the given rules for Church-Rosser modulo AC")
    ap.add_argument("--canonicalize", action="store_true",
                    help="reduce the given (or completed) TRS to its canonical form")
    ap.add_argument("--dump-state", metavar="PATH", help="write the final engine state")
    ap.add_argument("--time", action="store_true", help="include wall time in statistics")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _print_stats(stats, show_time, out):
    for k, v in stats.items():
        if k == "seconds" and not show_time:
            continue
        print(f"{k}: {v}", file=out)


def _check_only(problem, args, out) -> int:
    if problem.equations:
        print("error: --check-only expects rules (->), not equations", file=sys.stderr)
        return USAGE
    oracle = make_oracle(args.order, args.interactive_prover, args.prover_timeout)
    try:
        verdict = church_rosser_mod_ac(problem.rules, oracle, prime_only=True)
    finally:
        oracle.close()
    print(verdict, file=out)
    if verdict.loop:
        print("loop: " + " -> ".join(str(t) for t in verdict.loop), file=out)
    print(f"critical_pairs_checked: {verdict.checked}", file=out)
    return {"yes": OK, "no": FAIL}.get(verdict.verdict, UNKNOWN)


def _canonicalize_rules(problem, args, out) -> int:
    oracle = make_oracle(args.order, args.interactive_prover, args.prover_timeout)
    try:
        try:
            reduced = ddot(problem.rules, oracle)
        except ValueError as exc:
            print(f"MAYBE ({exc})", file=out)
            return UNKNOWN
        verdict = is_canonical_mod_b(reduced, oracle)
    finally:
        oracle.close()
    word = {True: "YES", False: "NO", None: "MAYBE"}[verdict.value]
    print(f"{word} (AC-canonical)", file=out)
    for reason in verdict.reasons:
        print(f"reason: {reason}", file=out)
    out.write(print_wst(reduced, extra_symbols=problem.theory_symbols()))
    return {True: OK, False: FAIL}.get(verdict.value, UNKNOWN)


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        problem = parse_wst(_read(args.problem))
        goal = problem.parse_equation(args.goal) if args.goal else problem.goal
    except (OSError, WstError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    if args.check_only:
        return _check_only(problem, args, out)
    if args.canonicalize and not problem.equations:
        return _canonicalize_rules(problem, args, out)
    try:
        cfg = EngineConfig(engine=args.engine, prime_only=args.prime, simp=Relation.parse(args.simp),
                           prefer=args.prefer, max_iterations=args.max_iter, timeout=args.timeout,
                           order=args.order, interactive_prover=args.interactive_prover,
                           prover_timeout_ms=args.prover_timeout)
        cfg.oracle().close()  # reject a bad --order before starting
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    equations = problem.all_equations()
    outcome = race_preferences(equations, cfg) if args.race else run_completion(equations, cfg)
    if args.dump_state:
        with open(args.dump_state, "w") as fh:
            fh.write(outcome.state.dump())
    rules = outcome.rules
    if outcome.completed:
        if args.canonicalize:
            rules = ddot(rules)
        print("COMPLETED", file=out)
        out.write(print_wst(rules, extra_symbols=problem.theory_symbols()))
    else:
        print(f"{outcome.status.upper()} ({outcome.reason})", file=out)
        if outcome.peer is not None:
            print(f"other worker: {outcome.peer.status.upper()} ({outcome.peer.reason})", file=out)
    _print_stats(outcome.stats, args.time, out)
    if goal is not None:
        if not outcome.completed:
            print("MAYBE (no complete system for the goal)", file=out)
            return UNKNOWN
        res = decide_validity(rules, goal.lhs, goal.rhs)
        print(res, file=out)
        return OK if res.valid else FAIL
    if outcome.completed:
        return OK
    return FAIL if outcome.status == "failed" else UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
