"""Command-line entry point (``krt``).

Exit codes: 0 success, 2 invalid arguments, 3 discrepancy target not
feasible, 4 Arnoldi breakdown before the requested step, 5 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import (
    BreakdownError,
    ConvergenceError,
    DegenerateProblemError,
    InfeasibleError,
    InvalidInputError,
)
from .experiments import ExperimentOptions, TABLES, emit_profile, records_to_csv, reproduce_table, run_experiment
from .lowrank import GapMethod
from .mmio import save_matrix
from .numerics import Weight
from .problems import ProblemKind, make_problem

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_BREAKDOWN = 4
EXIT_NONCONVERGENCE = 5

log = logging.getLogger("arnoldi_tikhonov")


def _problem_arg(text):
    try:
        return ProblemKind(text.replace("-", "_"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown problem {text!r}; choose from {', '.join(k.value for k in ProblemKind)}"
        ) from None


def _seeds_arg(text):
    try:
        seeds = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}") from None
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krt", description="Arnoldi-Tikhonov regularization with a discrepancy-principle parameter."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a test problem's matrix and exact solution")
    gen.add_argument("--problem", type=_problem_arg, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--out-matrix", required=True)
    gen.add_argument("--out-x", required=True)

    def add_run_args(p):
        p.add_argument("--problem", type=_problem_arg, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--noise", type=float, required=True, help="relative noise level nu")
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    solve = sub.add_parser("solve", help="run one experiment and write its record")
    add_run_args(solve)
    solve.add_argument("--weight", choices=["euclidean", "one-over-n"], default="euclidean")
    solve.add_argument("--gap", choices=["spectral", "frobenius"], default="spectral")
    solve.add_argument("--skip-full", action="store_true", help="skip the full-matrix comparison solve")
    solve.add_argument("--timing", action="store_true", help="fill in runtime_ms")

    table = sub.add_parser("table", help="reproduce one of the published tables")
    table.add_argument("--id", choices=sorted(TABLES), required=True)
    table.add_argument("--seeds", type=_seeds_arg, default=[0, 1, 2, 3, 4])
    table.add_argument("--out", default="-")
    table.add_argument("--timing", action="store_true")

    profile = sub.add_parser("profile", help="write exact and computed solution profiles")
    add_run_args(profile)
    return parser


def _dispatch(args) -> int:
    if args.command == "generate":
        problem = make_problem(args.problem, args.n)
        save_matrix(args.out_matrix, problem.A)
        save_matrix(args.out_x, problem.x_exact)
    elif args.command == "solve":
        opts = ExperimentOptions(
            weight=Weight(args.weight.replace("-", "_")),
            gap_method=GapMethod(args.gap),
            skip_full=args.skip_full,
        )
        record = run_experiment(args.problem, args.n, args.ell, args.noise, args.seed, opts)
        _write(args.out, records_to_csv([record], timing=args.timing))
    elif args.command == "table":
        _write(args.out, reproduce_table(args.id, args.seeds, timing=args.timing))
    elif args.command == "profile":
        _write(args.out, emit_profile(args.problem, args.n, args.ell, args.noise, args.seed))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _dispatch(args)
    except (InfeasibleError, DegenerateProblemError) as exc:
        log.error("%s", exc)
        return EXIT_INFEASIBLE
    except BreakdownError as exc:
        log.error("%s", exc)
        return EXIT_BREAKDOWN
    except ConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_NONCONVERGENCE
    except InvalidInputError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
