"""Subcommands of the ``hpf`` command line.

Every command takes a RunConfig and returns a Report. Library errors are
caught in ``run`` and mapped to exit codes through their category: 1 for a
failed check, 2 for a precondition, 3 for parse and configuration errors.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate as scipy_integrate

from src.analyticpf.beta import make_beta
from src.analyticpf.interpolation import build_system
from src.analyticpf.laurent import LaurentData, derivative_residual, pf_meromorphic
from src.cli import checks
from src.cli.expressions import compile_expression
from src.cli.report import Report
from src.errors import HPFError
from src.finitepart.riesz import PFQuery, depth_sweep, pf_riesz, riesz_to_fractional
from src.realfunc.handle import FunctionHandle
from src.summation.interface import interface_sum
from src.summation.operators import verify_based_at_infinity
from src.summation.sequences import BinarySeq, load_corpus, random_pair
from src.witness.bundle import WeightSpec, WitnessBundle
from src.witness.level_sets import build_tau_L10
from src.witness.partition import build_partition
from src.witness.weighted import build_tau_weighted

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("pf", "witness", "partition", "summation", "analytic", "verify-all")
FORMATS = ("json", "csv", "text")

SWEEP_TOL = 1e-7
DIRECT_TOL = 1e-6
SUMMATION_TOL = 1e-6
ANALYTIC_TOL = 1e-6

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_range(text: str) -> list[int]:
    """``"1..3"`` -> [1, 2, 3]; a single integer is a one-element range."""
    match = _RANGE.match(text)
    if match is None:
        if text.strip().isdigit():
            return [int(text)]
        raise ValueError(f"expected a depth range like 1..3, got {text!r}")
    lo, hi = int(match.group(1)), int(match.group(2))
    if hi < lo:
        raise ValueError(f"empty depth range {text!r}")
    return list(range(lo, hi + 1))


def parse_exponent(text: str | float | None) -> float | None:
    """p as a float; ``inf`` and ``infinity`` give math.inf."""
    if text is None or isinstance(text, float):
        return text
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


def parse_laurent(text: str) -> LaurentData:
    """``"-2:1.5, 0:3"`` -> c_-2 = 1.5, c_0 = 3."""
    coefficients = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        power, sep, value = item.partition(":")
        if not sep:
            raise ValueError(f"Laurent term {item!r} must read power:coefficient")
        coefficients[int(power)] = coefficients.get(int(power), 0.0) + float(value)
    return LaurentData.from_mapping(coefficients)


@dataclass
class RunConfig:
    """Parsed command-line parameters.

    Only the fields a subcommand reads need to be set; ``validate`` checks
    them before any computation.
    """

    subcommand: str
    f: str | None = None
    w: str | None = None
    p: float | None = None
    tau: str | None = None
    tau_from_witness: bool = False
    alpha: float | None = None
    x: float = 1.0
    n: int | None = None
    sweep_n: str | None = None
    depth: int = 12
    K: int | None = None
    N: int = 16
    base: float = 6.0
    J: int | None = None
    seq: list[str] = field(default_factory=list)
    corpus: str | None = None
    random: int = 0
    pairs: int = 0
    laurent: str | None = None
    tol: float | None = None
    format: str = "json"
    seed: int = 7
    workers: int = 1
    quiet: bool = False
    save: bool = False
    output_dir: str | None = None

    def validate(self) -> None:
        """Raise ValueError when the parameters violate the subcommand's preconditions."""
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError(f"--tol must be positive, got {self.tol}")
        if self.subcommand == "pf":
            if self.f is None or self.alpha is None:
                raise ValueError("pf needs --f and --alpha")
            if not 0.0 < self.x <= 1.0:
                raise ValueError(f"--x must lie in (0, 1], got {self.x}")
            if self.n is None and self.sweep_n is None:
                raise ValueError("pf needs --n or --sweep-n")
            if self.n is not None and self.n < 0:
                raise ValueError(f"--n must be nonnegative, got {self.n}")
            if self.sweep_n is not None:
                parse_range(self.sweep_n)
        if self.subcommand == "witness" and (self.f is None) == (self.w is None):
            raise ValueError("witness needs exactly one of --f and --w")
        if self.w is not None and self.p is None:
            raise ValueError("--w needs --p")
        if self.p is not None and not self.p >= 1:
            raise ValueError(f"--p must lie in [1, inf], got {self.p}")
        if self.subcommand == "partition" and self.tau is not None and self.tau_from_witness:
            raise ValueError("give either --tau or --tau-from-witness")
        if self.K is not None and self.K < 1:
            raise ValueError(f"--K must be at least 1, got {self.K}")
        if self.N < 1 or self.random < 0 or self.pairs < 0 or self.depth < 1 or self.workers < 1:
            raise ValueError("--N, --depth and --workers must be positive; --random and --pairs nonnegative")
        if self.laurent is not None:
            parse_laurent(self.laurent)

    def to_dict(self) -> dict:
        echo = {k: v for k, v in asdict(self).items() if k not in ("quiet", "save", "output_dir", "workers")}
        if echo["p"] is not None and math.isinf(echo["p"]):
            echo["p"] = "inf"
        return echo


# ----------------------------------------------------------------------------
# pf
# ----------------------------------------------------------------------------


def _direct_integral(f: FunctionHandle, alpha: float, x: float) -> tuple[float, float]:
    """∫_0^x s^(α-1) f(s) ds by QUADPACK's algebraic-weight rule."""
    value, error = scipy_integrate.quad(lambda s: float(f.raw(np.array(s))), 0.0, x,
                                        weight="alg", wvar=(alpha - 1.0, 0.0),
                                        epsabs=1e-13, epsrel=1e-12, limit=200)
    return value, error


def cmd_pf(config: RunConfig) -> Report:
    """Finite part Γ(α)J^α f(x); with --sweep-n, the spread over several depths."""
    report = Report("pf", config.to_dict())
    f = compile_expression(config.f)
    if config.sweep_n is not None:
        depths = parse_range(config.sweep_n)
        results = depth_sweep(f, config.alpha, config.x, depths, config.tol)
        values = [r.value for r in results]
        for n, value in zip(depths, values):
            report.info(f"pf/n={n}", checks.ANCHOR_RIESZ, value)
        spread = max(values) - min(values)
        report.check("pf/depth_spread", checks.ANCHOR_RIESZ, spread < SWEEP_TOL, spread, SWEEP_TOL,
                     detail=f"depths {depths[0]}..{depths[-1]}")
        report.results["sweep"] = [r.to_dict() for r in results]
        return report

    result = pf_riesz(PFQuery(f, config.alpha, config.x, config.n), config.tol)
    report.check("pf/sufficient_smoothness", checks.ANCHOR_SUFC, result.condition_report.ok,
                 detail=result.condition_report.reason)
    report.info("pf/value", checks.ANCHOR_RIESZ, result.value)
    report.results["pf"] = result.to_dict()
    report.results["fractional_integral"] = riesz_to_fractional(result.value, config.alpha)
    if config.alpha > 0:
        direct, error = _direct_integral(f, config.alpha, config.x)
        gap = abs(result.value - direct)
        report.check("pf/direct_quadrature", checks.ANCHOR_DIRECT, gap <= DIRECT_TOL, gap, DIRECT_TOL,
                     detail=f"direct value {direct:.17g} (± {error:.2g})")
    return report


# ----------------------------------------------------------------------------
# witness / partition
# ----------------------------------------------------------------------------


def _witness_bundle(config: RunConfig) -> WitnessBundle:
    if config.f is not None:
        return build_tau_L10(compile_expression(config.f), depth=config.depth, tol=config.tol)
    w = "x" if config.w is None else config.w
    p = math.inf if config.p is None else config.p
    return build_tau_weighted(WeightSpec(p, compile_expression(w)), tol=config.tol)


def cmd_witness(config: RunConfig) -> Report:
    """τ from f (gluing) or from a weight w and exponent p."""
    report = Report("witness", config.to_dict())
    bundle = _witness_bundle(config)
    checks.witness_checks(report, bundle)
    report.results["bundle"] = bundle.to_dict()
    return report


def _tau_bundle(config: RunConfig) -> WitnessBundle:
    if config.tau_from_witness:
        return _witness_bundle(config)
    return WitnessBundle.from_tau(compile_expression(config.tau or "1/x"), tol=config.tol)


def cmd_partition(config: RunConfig) -> Report:
    """α_k with unit τ-mass between consecutive points."""
    report = Report("partition", config.to_dict())
    bundle = _tau_bundle(config)
    part = build_partition(bundle, config.K)
    masses = checks.partition_checks(report, part)
    report.results["partition"] = part.to_dict()
    report.results["unit_masses"] = masses
    report.results["bundle"] = bundle.to_dict()
    return report


# ----------------------------------------------------------------------------
# summation
# ----------------------------------------------------------------------------


def _sequences(config: RunConfig, rng: np.random.Generator) -> list[BinarySeq]:
    sequences = [BinarySeq.parse(text) for text in config.seq]
    if config.corpus is not None:
        sequences.extend(load_corpus(Path(config.corpus)))
    sequences.extend(BinarySeq.random(rng, config.N) for _ in range(config.random))
    if not sequences and not config.pairs:
        sequences.append(BinarySeq.parse("0110[01]*"))
    return sequences


def cmd_summation(config: RunConfig) -> Report:
    """Summation traces S(a) for the given sequences, and the eventual-equality test on random pairs."""
    report = Report("summation", config.to_dict())
    rng = np.random.default_rng(config.seed)
    bundle = _tau_bundle(config)
    K = max(config.K or 20, config.N)
    part = build_partition(bundle, K)

    def summation(a: BinarySeq):
        return interface_sum(a, part, bundle, N=config.N, tol=config.tol)

    traces = []
    for i, a in enumerate(_sequences(config, rng)):
        trace = summation(a)
        checks.summation_checks(report, trace, SUMMATION_TOL, prefix=f"summation/{i}")
        traces.append(trace.to_dict())
    for i in range(config.pairs):
        agree_from = int(rng.integers(0, config.N))
        a, b = random_pair(rng, config.N, agree_from)
        result = verify_based_at_infinity(summation, a, b, agree_from, SUMMATION_TOL)
        report.check(f"pairs/{i}", checks.ANCHOR_AT_INFINITY, result.holds, result.trace_agreement,
                     agree_from, detail=f"{a} / {b}")
    report.results["partition"] = part.to_dict()
    report.results["traces"] = traces
    return report


# ----------------------------------------------------------------------------
# analytic
# ----------------------------------------------------------------------------


def cmd_analytic(config: RunConfig) -> Report:
    """Interpolating entire function for one sequence, and optionally a Laurent finite part."""
    report = Report("analytic", config.to_dict())
    beta = make_beta(config.K or 6, config.base)
    sequences = [BinarySeq.parse(text) for text in config.seq] or [BinarySeq.parse("010110")]
    for i, a in enumerate(sequences):
        system = build_system(beta, a, config.J)
        checks.analytic_checks(report, system, ANALYTIC_TOL, prefix=f"analytic/{i}")
        report.results[f"system/{i}"] = system.to_dict()
    if config.laurent is not None:
        data = parse_laurent(config.laurent)
        pf = pf_meromorphic(data, config.x)
        report.info("laurent/finite_part", checks.ANCHOR_MEROMORPHIC, pf.finite_part,
                    detail=f"plus {pf.log_coefficient:.17g}*log(x)")
        residual = derivative_residual(data)
        report.check("laurent/derivative", checks.ANCHOR_MEROMORPHIC, residual <= ANALYTIC_TOL, residual,
                     ANALYTIC_TOL)
        report.results["laurent"] = {"data": data.to_dict(), "pf": pf.to_dict()}
    return report


# ----------------------------------------------------------------------------
# verify-all and dispatch
# ----------------------------------------------------------------------------


def cmd_verify_all(config: RunConfig) -> Report:
    """Every acceptance suite, seeded, in one consolidated report."""
    from src.workflow.orchestrator import VerificationWorkflow, WorkflowConfig

    workflow = VerificationWorkflow(WorkflowConfig(
        seed=config.seed,
        workers=config.workers,
        quiet=config.quiet,
        save=config.save,
        output_base_dir=config.output_dir,
    ))
    report = workflow.run()
    report.config = config.to_dict()
    return report


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "pf": cmd_pf,
    "witness": cmd_witness,
    "partition": cmd_partition,
    "summation": cmd_summation,
    "analytic": cmd_analytic,
    "verify-all": cmd_verify_all,
}


def error_record(report: Report, exc: Exception, category: str) -> Report:
    """Attach an aborting error to the report as a failed record."""
    report.error = {"type": type(exc).__name__, "category": category, "message": str(exc)}
    context = getattr(exc, "report", None)
    if hasattr(context, "to_dict"):
        report.results["condition_report"] = context.to_dict()
    report.fail("error", type(exc).__name__, str(exc))
    return report


def run(config: RunConfig) -> Report:
    """Validate, run the subcommand and convert errors into report entries.

    The exit code is ``report.exit_code``.
    """
    report = Report(config.subcommand, config.to_dict())
    try:
        config.validate()
        return COMMANDS[config.subcommand](config)
    except HPFError as exc:
        logger.error("%s failed: %s", config.subcommand, exc)
        return error_record(report, exc, exc.category)
    except ValueError as exc:
        logger.error("%s: invalid input: %s", config.subcommand, exc)
        return error_record(report, exc, "parse")

