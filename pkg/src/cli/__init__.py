"""Command line: expressions, reports, subcommands and acceptance suites."""

from .expressions import compile_expression, parse_expression
from .report import EXIT_CODES, CheckRecord, Report, canonical_json
from .commands import (
    RunConfig,
    cmd_analytic,
    cmd_partition,
    cmd_pf,
    cmd_summation,
    cmd_verify_all,
    cmd_witness,
    run,
)
from .suites import SUITES

__all__ = [
    "compile_expression",
    "parse_expression",
    "EXIT_CODES",
    "CheckRecord",
    "Report",
    "canonical_json",
    "RunConfig",
    "cmd_analytic",
    "cmd_partition",
    "cmd_pf",
    "cmd_summation",
    "cmd_verify_all",
    "cmd_witness",
    "run",
    "SUITES",
]
