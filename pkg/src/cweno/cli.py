"""Command line: ``cweno run|converge|shock``."""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from typing import Sequence

from cweno import harness
from cweno.cweno1d import CwenoParams
from cweno.mesh import BoundaryCondition
from cweno.models import PROBLEM_NAMES, InadmissibleStateError, builtin_problems
from cweno.oracles import ValidityError
from cweno.scheme import NonFiniteError

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

DEFAULT_N = {"run": "200", "converge": "20,40,80,160,320", "shock": "200"}


class UsageError(Exception):
    pass


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        ns = [int(float(part)) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad resolution list: {text!r}") from None
    if not ns:
        raise argparse.ArgumentTypeError("empty resolution list")
    return ns


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cweno", description="Compact third-order central WENO solver.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "advance one problem and write the final field"),
        ("converge", "convergence table over doubling resolutions"),
        ("shock", "shock-tube profile and density error"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--problem", required=True, help=f"one of: {', '.join(PROBLEM_NAMES)}")
        p.add_argument("--n", type=_n_list, default=None, help="cells per axis (comma list for converge)")
        p.add_argument("--lambda", dest="lam", type=_positive_float, default=None, help="mesh ratio dt/h")
        p.add_argument("--eps", type=_positive_float, default=None, help="weight regularization (default 1e-2)")
        p.add_argument("--p", type=int, default=2, help="weight exponent (default 2)")
        p.add_argument("--t-final", type=_positive_float, default=None)
        p.add_argument("--bc", choices=[b.value for b in BoundaryCondition], default=None)
        p.add_argument("--ideal-weights", action="store_true", help="use the constant ideal weights")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    return parser


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _params(args, default_eps: float) -> CwenoParams:
    if args.ideal_weights and args.eps is not None:
        raise UsageError("--ideal-weights and --eps are mutually exclusive")
    if args.p < 1:
        raise UsageError("--p must be a positive integer")
    eps = default_eps if args.eps is None else args.eps
    return CwenoParams(epsilon=eps, p=args.p, ideal_weights=args.ideal_weights)


def _single_n(args) -> int:
    ns = args.n or _n_list(DEFAULT_N[args.command])
    if len(ns) != 1:
        raise UsageError(f"{args.command} takes a single --n")
    return ns[0]


def _cmd_run(args) -> None:
    prob = builtin_problems(args.problem, _single_n(args))
    report = harness.run_problem(prob, _params(args, prob.epsilon), args.lam, args.t_final, args.bc)
    with _open_out(args.out) as fh:
        harness.write_profile_csv(report.field, report.w_center, fh)


def _cmd_converge(args) -> None:
    ns = args.n or _n_list(DEFAULT_N["converge"])
    if args.bc is not None:
        raise UsageError("converge uses each problem's own boundary condition; drop --bc")
    prob = builtin_problems(args.problem, ns[0])
    if prob.exact is None:
        raise UsageError(f"problem {args.problem!r} has no exact solution to converge against")
    rows = harness.convergence_study(args.problem, ns, _params(args, prob.epsilon), args.lam, args.t_final)
    with _open_out(args.out) as fh:
        harness.write_convergence_csv(rows, fh)


def _cmd_shock(args) -> None:
    if args.problem not in harness.SHOCK_PROBLEMS:
        raise UsageError(f"shock needs one of: {', '.join(harness.SHOCK_PROBLEMS)}")
    n = _single_n(args)
    prob = builtin_problems(args.problem, n)
    lam = prob.lam if args.lam is None else args.lam
    report = harness.shock_report(args.problem, n, lam, args.t_final, _params(args, prob.epsilon), args.bc)
    with _open_out(args.out) as fh:
        harness.write_profile_csv(report.field, report.w_center, fh)
    print(
        f"{args.problem} N={n}: L1(rho)={report.l1_density:.6e} "
        f"density reversal={report.density_reversal:.3e} (jump {report.density_jump:.6g})",
        file=sys.stderr,
    )


COMMANDS = {"run": _cmd_run, "converge": _cmd_converge, "shock": _cmd_shock}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    if args.problem not in PROBLEM_NAMES:
        print(f"error: unknown problem {args.problem!r}; valid names: {', '.join(PROBLEM_NAMES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except (UsageError, ValidityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, InadmissibleStateError):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonFiniteError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
