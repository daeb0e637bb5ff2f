"""Argument parsing and the ``hpf`` entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.cli.commands import FORMATS, RunConfig, parse_exponent, run
from src.config import LOG_LEVELS, settings

EPILOG = """
Examples:
  %(prog)s pf --f "cos(x)" --alpha -1.5 --x 0.5 --n 2
  %(prog)s pf --f "exp(x)" --alpha -0.5 --sweep-n 1..3
  %(prog)s witness --f "sin(1/x)/x" --depth 21
  %(prog)s witness --w "x" --p inf
  %(prog)s partition --tau "1/x" --K 20
  %(prog)s summation --seq "0110[01]*" --random 10 --pairs 10 --N 16
  %(prog)s analytic --K 6 --base 6 --seq 010110 --laurent "-2:1,0:3"
  %(prog)s verify-all --seed 7 --workers 4 --save
"""


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="json",
                        help="Report format on stdout (default: json).")
    parser.add_argument("--tol", type=float, default=None,
                        help="Absolute tolerance (default: HPF_TOLERANCE).")
    parser.add_argument("--log-level", default=None,
                        help="Logging level on stderr (default: HPF_LOG_LEVEL).")


def _add_witness_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--f", help="Divergent integrand f for the gluing construction.")
    parser.add_argument("--w", help="Weight w for the weighted construction.")
    parser.add_argument("--p", type=parse_exponent, default=None,
                        help="Exponent p in [1, inf] of the weight space.")
    parser.add_argument("--depth", type=int, default=12,
                        help="Dyadic scales of the gluing construction (default: 12).")


def build_parser() -> argparse.ArgumentParser:
    """Build the ``hpf`` parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="hpf",
        description="Hadamard finite parts, divergence witnesses and interface summation.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    pf = sub.add_parser("pf", help="Finite part of the Riemann-Liouville integral.")
    pf.add_argument("--f", required=True, help="Integrand as an expression in x.")
    pf.add_argument("--alpha", type=float, required=True, help="Order alpha.")
    pf.add_argument("--x", type=float, default=1.0, help="Upper endpoint in (0, 1] (default: 1).")
    depth = pf.add_mutually_exclusive_group(required=True)
    depth.add_argument("--n", type=int, help="Integration-by-parts depth.")
    depth.add_argument("--sweep-n", help="Depth range such as 1..3.")
    _add_common(pf)

    witness = sub.add_parser("witness", help="Divergence witness tau from f or from a weight.")
    _add_witness_source(witness)
    _add_common(witness)

    partition = sub.add_parser("partition", help="Unit-mass partition of (0, 1].")
    partition.add_argument("--tau", help="Witness tau as an expression (default: 1/x).")
    partition.add_argument("--tau-from-witness", action="store_true",
                           help="Build tau with the witness construction instead.")
    _add_witness_source(partition)
    partition.add_argument("--K", type=int, default=None, help="Number of points (default: 20).")
    _add_common(partition)

    summation = sub.add_parser("summation", help="Summation traces of binary sequences.")
    summation.add_argument("--seq", action="append", default=[],
                           help="Binary sequence, e.g. 0110[01]* (repeatable).")
    summation.add_argument("--corpus", help="File with one sequence per line.")
    summation.add_argument("--random", type=int, default=0, help="Random sequences to add.")
    summation.add_argument("--pairs", type=int, default=0, help="Random eventually-equal pairs to test.")
    summation.add_argument("--N", type=int, default=16, help="Sequence length (default: 16).")
    summation.add_argument("--K", type=int, default=None, help="Partition points (default: max(20, N)).")
    summation.add_argument("--tau", help="Witness tau as an expression (default: 1/x).")
    summation.add_argument("--seed", type=int, default=7, help="Random seed (default: 7).")
    _add_common(summation)

    analytic = sub.add_parser("analytic", help="Entire interpolant of the partial sums.")
    analytic.add_argument("--K", type=int, default=None, help="Number of nodes (default: 6).")
    analytic.add_argument("--base", type=float, default=6.0, help="Node base b (default: 6).")
    analytic.add_argument("--J", type=int, default=None, help="Series terms (default: K + 10).")
    analytic.add_argument("--seq", action="append", default=[], help="Binary sequence (repeatable).")
    analytic.add_argument("--laurent", help='Laurent data "power:coef,...".')
    analytic.add_argument("--x", type=float, default=1.0, help="Endpoint for the Laurent finite part.")
    _add_common(analytic)

    verify = sub.add_parser("verify-all", help="Run every acceptance suite.")
    verify.add_argument("--seed", type=int, default=7, help="Random seed (default: 7).")
    verify.add_argument("--workers", type=int, default=1, help="Suites run in parallel (default: 1).")
    verify.add_argument("--quiet", action="store_true", help="No progress output on stderr.")
    verify.add_argument("--save", action="store_true", help="Save report.json and summary.json.")
    verify.add_argument("--output-dir", default=None, help="Base directory for saved reports.")
    _add_common(verify)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Copy the parsed namespace into a RunConfig, keeping its defaults for absent flags."""
    known = RunConfig.__dataclass_fields__
    values = {k.replace("-", "_"): v for k, v in vars(args).items()}
    return RunConfig(**{k: v for k, v in values.items() if k in known and v is not None})


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and print its report. Returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        settings.validate()
        level = (args.log_level or settings.log_level).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Unknown --log-level: {args.log_level}")
    except ValueError as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return 3
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    config = config_from_args(args)
    report = run(config)
    print(report.render(config.format))
    return report.exit_code
