"""Turn library results into report records.

Each helper runs the checks belonging to one construction and appends them to
a Report. They never raise for a failed check.
"""

from __future__ import annotations

import math

import numpy as np

from src.analyticpf.beta import BetaSequence
from src.analyticpf.conda import verify_conda
from src.analyticpf.interpolation import (
    InterpolationSystem,
    check_coefficient_decay,
    check_growth,
    deriv_via_cauchy,
    eval_F,
    increment_check,
    termwise_derivative,
)
from src.cli.report import Report
from src.errors import NotConstant, QuadratureDivergence
from src.realfunc.handle import FunctionHandle
from src.summation.interface import SummationTrace
from src.summation.operators import s_dblstar
from src.witness.bundle import WitnessBundle
from src.witness.partition import PartitionSequence
from src.witness.weighted import holder_check

ANCHOR_RIESZ = "finite part by integration by parts"
ANCHOR_DIRECT = "convergent integral of s^(alpha-1) f"
ANCHOR_SUFC = "sufficient smoothness"
ANCHOR_WITNESS_F = "witness glued from f"
ANCHOR_WITNESS_W = "witness from a weight"
ANCHOR_HOLDER = "Hoelder inequality"
ANCHOR_PARTITION = "unit-mass partition"
ANCHOR_INTERFACE = "antiderivative to summation"
ANCHOR_AT_INFINITY = "summation based at infinity"
ANCHOR_INTERPOLATION = "entire interpolant on beta nodes"
ANCHOR_DECAY = "coefficient bound"
ANCHOR_GROWTH = "growth on the negative axis"
ANCHOR_CAUCHY = "Cauchy derivative"
ANCHOR_INCREMENTS = "increments between nodes"
ANCHOR_WINDOWS = "window integrals determine the antiderivative"
ANCHOR_MEROMORPHIC = "finite part of a Laurent polynomial"

SAMPLES = 10_000
TRACE_LAST = 20
RESIDUAL_BOUND = 1.0 + 1e-3
MASK_BOUND = 0.5


def witness_checks(report: Report, bundle: WitnessBundle, prefix: str = "witness",
                   residual_from: float = 1e-6) -> None:
    """Nonnegativity, profile bound, growing divergence trace and the construction-specific bounds."""
    anchor = ANCHOR_WITNESS_F if bundle.source == "L10" else ANCHOR_WITNESS_W
    xs = np.geomspace(bundle.floor, 1.0, SAMPLES)
    lowest = float(np.min(bundle.tau.raw(xs)))
    report.check(f"{prefix}/nonnegative", anchor, lowest >= 0.0, lowest, 0.0,
                 detail=f"{SAMPLES} samples on [{bundle.floor:g}, 1]")

    if bundle.profile is not None:
        peak = float(np.max(np.abs(bundle.profile(xs))))
        report.check(f"{prefix}/profile_bound", anchor, peak <= 1.0, peak, 1.0)

    trace = [value for eps, value in bundle.divergence_trace() if eps >= 2.0**-TRACE_LAST]
    steps = np.diff(trace)
    smallest = float(steps.min()) if len(steps) else math.nan
    report.check(f"{prefix}/trace_increasing", anchor, bool(len(steps) and np.all(steps > 0)),
                 smallest, 0.0, detail=f"eps = 2^-4 .. 2^-{TRACE_LAST}")

    if bundle.base is not None:
        residual_from = max(residual_from, bundle.floor)
        residual = bundle.residual_mass(residual_from)
        report.check(f"{prefix}/residual_mass", anchor, residual <= RESIDUAL_BOUND, residual,
                     RESIDUAL_BOUND, detail=f"integral of f+ - tau over [{residual_from:g}, 1]")

    spec = bundle.weight
    if spec is not None and math.isinf(spec.p):
        product = float(np.max(spec.w.raw(xs) * bundle.tau.raw(xs)))
        report.check(f"{prefix}/weighted_sup", anchor, product <= 1.0 + 1e-12, product, 1.0)
    elif spec is not None and spec.p > 1:
        holder = holder_check(spec, bundle.tau)
        report.check(f"{prefix}/holder", ANCHOR_HOLDER, holder.holds, holder.lhs, holder.rhs,
                     detail=f"dual integral {'converges' if holder.applicable else 'diverges'}")


def partition_checks(report: Report, part: PartitionSequence, tol: float = 1e-6,
                     prefix: str = "partition") -> list[float]:
    """Every window carries unit mass by fresh quadrature. Returns the masses."""
    masses = part.unit_masses()
    worst = max((abs(m - 1.0) for m in masses), default=0.0)
    report.check(f"{prefix}/unit_masses", ANCHOR_PARTITION, worst < tol, worst, tol,
                 detail=f"K={part.K}")
    residual = max(part.residuals, default=0.0)
    report.info(f"{prefix}/table_residual", ANCHOR_PARTITION, residual,
                detail="largest |theta(alpha_k) - k| on the mass table")
    return masses


def summation_checks(report: Report, trace: SummationTrace, tol: float = 1e-6,
                     prefix: str = "summation") -> None:
    """Increment identity, mask bound and constancy of S - Sigma."""
    error = trace.increment_error
    report.check(f"{prefix}/increments", ANCHOR_INTERFACE, error <= tol, error, tol,
                 detail=f"x_(k+1) - x_k = a_k for {trace.sequence}")
    report.check(f"{prefix}/mask_defect", ANCHOR_INTERFACE, trace.mask_defect < MASK_BOUND,
                 trace.mask_defect, MASK_BOUND)
    try:
        constant = s_dblstar(trace.s_terms, trace.sequence, tol)
    except NotConstant as exc:
        report.check(f"{prefix}/constant", ANCHOR_INTERFACE, False, exc.deviation, tol, detail=str(exc))
    else:
        report.check(f"{prefix}/constant", ANCHOR_INTERFACE, True, constant.deviation, tol,
                     detail=f"S - Sigma = {constant.value:.12g}")


def _log_periodic(beta: BetaSequence) -> FunctionHandle:
    """t -> sin(2π log_base t)/t, whose integral over every [β_n, β_(n+1)] vanishes."""
    log_base = math.log(beta.base)
    return FunctionHandle(
        fn=lambda t: np.sin(2.0 * math.pi * np.log(t) / log_base) / t,
        label="sin(2pi log_b t)/t",
        domain=(0.0, math.inf),
    )


def analytic_checks(report: Report, sys: InterpolationSystem, tol: float = 1e-6,
                    prefix: str = "analytic") -> None:
    """Interpolation, coefficient decay, increments, growth, Cauchy derivative and window checks."""
    betas = np.array(sys.beta.betas)
    values = np.asarray(eval_F(sys, betas).value, dtype=float)
    sums = np.array(sys.partial_sums, dtype=float)
    relative = float(np.max(np.abs(values - sums) / np.maximum(1.0, np.abs(sums))))
    report.check(f"{prefix}/interpolation", ANCHOR_INTERPOLATION, relative <= tol, relative, tol,
                 detail=f"F(beta_k) = s_k for {sys.sequence}")

    decay = check_coefficient_decay(sys)
    report.check(f"{prefix}/coefficient_decay", ANCHOR_DECAY, decay.holds, max(decay.ratios.values(), default=0.0),
                 decay.C, detail=f"C fitted at k={decay.fitted_at}")

    increments = increment_check(sys, tol)
    report.check(f"{prefix}/increments", ANCHOR_INCREMENTS, increments.holds, increments.max_bit_error, tol,
                 detail=f"route gap {increments.max_route_gap:.3g}")
    if not increments.convention_ok:
        report.skip(f"{prefix}/first_bit", ANCHOR_INCREMENTS, "a_1 = 1: F(beta_1) is not 0")

    growth = check_growth(sys)
    report.check(f"{prefix}/growth", ANCHOR_GROWTH, growth.holds, growth.log_C,
                 detail="vacuous" if growth.vacuous else "log C fitted at the smallest radius")

    for name, z in (("real", 0.5 * betas[0]), ("complex", complex(betas[0], betas[0]))):
        try:
            derivative = deriv_via_cauchy(sys, z)
        except QuadratureDivergence as exc:
            report.fail(f"{prefix}/cauchy_{name}", ANCHOR_CAUCHY, str(exc))
            continue
        allowed = tol * max(1.0, abs(derivative.termwise))
        ok = derivative.discrepancy <= allowed and abs(derivative.value) <= derivative.bound * (1.0 + 1e-9)
        report.check(f"{prefix}/cauchy_{name}", ANCHOR_CAUCHY, ok, derivative.discrepancy, allowed,
                     detail=f"{derivative.nodes} nodes, |F'| <= {derivative.bound:.6g}")

    f1 = FunctionHandle(fn=lambda t: termwise_derivative(sys, t), label="F'", domain=(0.0, math.inf))
    wiggle = _log_periodic(sys.beta)
    f2 = FunctionHandle(fn=lambda t: f1.raw(t) + wiggle.raw(t), label="F' + wiggle", domain=(0.0, math.inf))
    windows = verify_conda(f1, f2, sys.beta)
    gap = abs(windows.anchored_1 - windows.anchored_2)
    if windows.status == "not applicable":
        report.skip(f"{prefix}/windows", ANCHOR_WINDOWS, "window integrals differ")
    else:
        report.check(f"{prefix}/windows", ANCHOR_WINDOWS, windows.status == "holds", gap,
                     detail="(P f1)(beta_1) against (P f2)(beta_1)")
