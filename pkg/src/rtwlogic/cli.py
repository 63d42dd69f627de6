"""Command line front end for the experiment suite.

Exit codes: 0 when the experiment's own acceptance check passed, 1 when
it ran but failed its check, 2 for invalid arguments.  Reports embed the
master seed; rerunning any subcommand with the same flags writes
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import experiments


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _lambda(text: str) -> Fraction:
    value = _fraction(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("lambda must satisfy 0 < lambda <= 1")
    return value


def _epsilon(text: str) -> Fraction:
    value = _fraction(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("epsilon must satisfy 0 < epsilon < 1")
    return value


def _bits_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of ints: {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("bit counts must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="report format (default: csv)",
    )
    common.add_argument(
        "--out", metavar="PATH", default=None,
        help="write the report to PATH instead of stdout",
    )

    parser = argparse.ArgumentParser(
        prog="rtwlogic",
        description="experiments on telegraph-wave logic representations "
        "and time-shifted identification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "zero-prob", parents=[common],
        help="survival probability of the uniform superposition at lambda=1",
    )
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)

    p = sub.add_parser(
        "range", parents=[common],
        help="amplitude range of the uniform superposition",
    )
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_lambda, default=Fraction(1, 2))
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate all sign assignments (bits <= 6)")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)

    p = sub.add_parser(
        "resolution", parents=[common],
        help="amplitude resolution bits of the scaled representation",
    )
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_lambda, default=Fraction(1, 2))

    p = sub.add_parser(
        "identify", parents=[common],
        help="Monte Carlo error budget of time-shifted identification",
    )
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 1000))
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--baseline", action="store_true",
                   help="also run the exhaustive baseline search (bits <= 14)")

    p = sub.add_parser(
        "bench", parents=[common],
        help="cost scaling of identification across bit counts",
    )
    p.add_argument("--bits", type=_bits_list, default=[4, 6, 8, 10, 12])
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 1000000))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--no-baseline", action="store_true",
                   help="skip the exponential baseline entirely")
    p.add_argument("--baseline-cap", type=int, default=experiments.BASELINE_BITS_CAP,
                   help="largest bit count the baseline is run at")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock columns (breaks byte-identical reruns)")

    p = sub.add_parser(
        "not-demo", parents=[common],
        help="NOT gate on one bit of the uniform superposition",
    )
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_lambda, default=Fraction(1, 2))
    p.add_argument("--target", type=int, default=1, help="bit to invert (1-based)")
    p.add_argument("--periods", type=int, default=1000)
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)

    return parser


def _run(args: argparse.Namespace) -> experiments.ExperimentReport:
    if args.command == "zero-prob":
        return experiments.zero_probability_experiment(args.bits, args.trials, args.seed)
    if args.command == "range":
        return experiments.amplitude_range_experiment(
            args.bits, args.lam,
            exhaustive=True if args.exhaustive else None,
            trials=args.trials, seed=args.seed,
        )
    if args.command == "resolution":
        return experiments.resolution_experiment(args.bits, args.lam)
    if args.command == "identify":
        return experiments.identification_experiment(
            args.bits, args.trials, args.seed,
            epsilon=args.epsilon, include_baseline=args.baseline,
        )
    if args.command == "bench":
        return experiments.identification_benchmark(
            args.bits, args.epsilon, args.trials, args.seed,
            include_baseline=not args.no_baseline,
            baseline_cap=args.baseline_cap,
            include_timing=args.timing,
        )
    if args.command == "not-demo":
        return experiments.not_gate_demo(
            args.bits, args.lam, args.target, periods=args.periods, seed=args.seed,
        )
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _run(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report.render(args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
