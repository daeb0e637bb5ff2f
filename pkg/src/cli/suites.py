"""Seeded acceptance suites run by ``verify-all``.

Each suite builds its own data from ``np.random.default_rng([seed, index])``
and returns a Report. Suites are independent and may run concurrently.
Errors inside one case become failed records and never abort a suite.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
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
from src.finitepart.riesz import PFQuery, depth_sweep, pf_riesz
from src.quad.improper import improper_integral, l1_classify
from src.quad.results import L1Verdict, VerdictKind
from src.realfunc.antiderivative import AnchoredAntiderivative, verify_extension_axioms
from src.realfunc.handle import germ_equal
from src.summation.interface import interface_sum
from src.summation.operators import verify_based_at_infinity
from src.summation.sequences import BinarySeq, random_pair
from src.witness.bundle import WeightSpec, WitnessBundle
from src.witness.level_sets import build_tau_L10
from src.witness.partition import build_partition
from src.witness.weighted import build_tau_weighted, holder_check

logger = logging.getLogger(__name__)

Suite = Callable[[int], Report]

# dyadic scales of the glued witness; 2^-21 lies below the residual check's 1e-6
GLUING_DEPTH = 21


def _guarded(report: Report, name: str, anchor: str, action: Callable[[], None]) -> None:
    """Run one case; a library error becomes a failed record."""
    try:
        action()
    except HPFError as exc:
        logger.warning("case %s failed: %s", name, exc)
        report.fail(name, anchor, f"{type(exc).__name__}: {exc}")


@lru_cache(maxsize=None)
def reciprocal_bundle() -> WitnessBundle:
    """τ(x) = 1/x with its mass table."""
    return WitnessBundle.from_tau(compile_expression("1/x"))


@lru_cache(maxsize=None)
def oscillating_bundle() -> WitnessBundle:
    """The glued witness of sin(1/x)/x."""
    return build_tau_L10(compile_expression("sin(1/x)/x"), depth=GLUING_DEPTH)


# ----------------------------------------------------------------------------
# Foundations
# ----------------------------------------------------------------------------


def foundations_suite(seed: int) -> Report:
    """Integrability verdicts, germ comparisons and the extension-of-the-integral axioms."""
    report = Report("foundations")
    anchor = "integrability near 0"

    verdict = improper_integral(compile_expression("x^(-1/2)"))
    value = verdict.value if verdict.is_convergent else math.nan
    report.check("improper/inverse_sqrt", anchor, verdict.is_convergent and abs(value - 2.0) <= 1e-8,
                 abs(value - 2.0), 1e-8, detail=str(verdict))
    verdict = improper_integral(compile_expression("1/x"))
    report.check("improper/reciprocal", anchor, verdict.kind is VerdictKind.DIVERGENT_PLUS,
                 detail=str(verdict))
    for text, expected in (("x^(-1/2)", L1Verdict.L1), ("1", L1Verdict.L1), ("sin(1/x)/x", L1Verdict.NOT_L1)):
        found = l1_classify(compile_expression(text))
        report.check(f"l1/{text}", anchor, found is expected, detail=f"{found.value}, expected {expected.value}")

    identity = compile_expression("x")
    report.check("germ/reflexive", "germs at 0+", germ_equal(identity, identity, 1.0))
    report.check("germ/distinct", "germs at 0+", not germ_equal(identity, compile_expression("2*x"), 0.3))

    rng = np.random.default_rng([seed, 0])
    axioms = verify_extension_axioms(
        AnchoredAntiderivative.from_zero(),
        [compile_expression("x"), compile_expression("x^(-1/2)"), compile_expression("cos(x)")],
        seed=int(rng.integers(0, 2**31)),
    )
    for i, check in enumerate(axioms.checks):
        if check.status == "skipped":
            report.skip(f"axioms/{i}/{check.axiom}", "extension of the integral", check.detail)
        else:
            report.check(f"axioms/{i}/{check.axiom}", "extension of the integral", check.status == "pass",
                         check.measured, check.tolerance, detail=f"{check.subject}: {check.detail}")
    return report


# ----------------------------------------------------------------------------
# Finite parts
# ----------------------------------------------------------------------------


def finite_part_suite(seed: int) -> Report:
    """s^m against the continued closed form x^(α+m)/(α+m)."""
    report = Report("finite_part")
    tol = 1e-8
    for m in range(4):
        f = compile_expression(f"s^{m}")
        for alpha in (-0.5, -1.5, -2.5):
            if float(alpha + m).is_integer() and alpha + m <= 0:
                continue
            n = math.ceil(-alpha)
            for x in (0.25, 0.5, 1.0):
                name = f"s^{m}/alpha={alpha:g}/x={x:g}"

                def case(f=f, alpha=alpha, x=x, n=n, m=m, name=name):
                    value = pf_riesz(PFQuery(f, alpha, x, n)).value
                    exact = x ** (alpha + m) / (alpha + m)
                    gap = abs(value - exact)
                    report.check(name, checks.ANCHOR_RIESZ, gap <= tol, gap, tol, detail=f"n={n}")

                _guarded(report, name, checks.ANCHOR_RIESZ, case)
    return report


def continuation_suite(seed: int) -> Report:
    """Depth 0 against direct quadrature for α > 0; pairwise depth agreement for α < 0."""
    report = Report("continuation")
    rng = np.random.default_rng([seed, 1])
    direct_tol, depth_tol = 1e-6, 1e-7
    for text in ("cos(s)", "exp(s)", "1/(1+s)"):
        f = compile_expression(text)
        alpha = float(rng.uniform(0.2, 0.9))
        name = f"{text}/direct"

        def direct_case(f=f, alpha=alpha, name=name):
            value = pf_riesz(PFQuery(f, alpha, 1.0, 0)).value
            oracle, _ = scipy_integrate.quad(lambda s: float(f.raw(np.array(s))), 0.0, 1.0,
                                             weight="alg", wvar=(alpha - 1.0, 0.0), epsabs=1e-13, epsrel=1e-12)
            gap = abs(value - oracle)
            report.check(name, checks.ANCHOR_DIRECT, gap <= direct_tol, gap, direct_tol, detail=f"alpha={alpha:.6g}")

        _guarded(report, name, checks.ANCHOR_DIRECT, direct_case)

        alpha = float(rng.uniform(-0.9, -0.1))
        name = f"{text}/depths"

        def depth_case(f=f, alpha=alpha, name=name):
            values = [r.value for r in depth_sweep(f, alpha, 1.0, (1, 2, 3))]
            spread = max(values) - min(values)
            report.check(name, checks.ANCHOR_RIESZ, spread <= depth_tol, spread, depth_tol,
                         detail=f"alpha={alpha:.6g}, n=1..3")

        _guarded(report, name, checks.ANCHOR_RIESZ, depth_case)
    return report


# ----------------------------------------------------------------------------
# Witnesses and partitions
# ----------------------------------------------------------------------------


def gluing_suite(seed: int) -> Report:
    """The glued witness of sin(1/x)/x."""
    report = Report("gluing")

    def case():
        bundle = oscillating_bundle()
        checks.witness_checks(report, bundle)
        report.results["bundle"] = bundle.to_dict()

    _guarded(report, "witness", checks.ANCHOR_WITNESS_F, case)
    return report


def weighted_suite(seed: int) -> Report:
    """Closed forms for w = x at p = inf and p = 2, then Hoelder's inequality on random convergent cases."""
    report = Report("weighted")
    rng = np.random.default_rng([seed, 2])
    w = compile_expression("x")
    xs = np.geomspace(1e-6, 0.5, 512)

    def sup_case():
        bundle = build_tau_weighted(WeightSpec(math.inf, w))
        gap = float(np.max(np.abs(bundle.tau.raw(xs) * xs - 1.0)))
        report.check("p=inf/closed_form", checks.ANCHOR_WITNESS_W, gap <= 1e-12, gap, 1e-12, detail="tau = 1/x")

    def square_case():
        bundle = build_tau_weighted(WeightSpec(2.0, w))
        exact = 1.0 / (xs * (1.0 - xs))
        gap = float(np.max(np.abs(bundle.tau.raw(xs) - exact) / exact))
        report.check("p=2/closed_form", checks.ANCHOR_WITNESS_W, gap <= 1e-10, gap, 1e-10,
                     detail="relative, tau = 1/(x(1-x)) on (0, 1/2]")

    _guarded(report, "p=inf/closed_form", checks.ANCHOR_WITNESS_W, sup_case)
    _guarded(report, "p=2/closed_form", checks.ANCHOR_WITNESS_W, square_case)

    for i in range(50):
        p = float(rng.uniform(1.2, 4.0))
        q = p / (p - 1.0)
        power = float(rng.uniform(0.0, 0.9 / q))
        decay = float(rng.uniform(0.0, 0.9))
        scale = float(rng.uniform(0.5, 2.0))
        name = f"holder/{i}"

        def case(p=p, power=power, decay=decay, scale=scale, name=name):
            spec = WeightSpec(p, compile_expression(f"x^{power!r}"))
            tau = compile_expression(f"{scale!r}*x^(-{decay!r})")
            result = holder_check(spec, tau)
            report.check(name, checks.ANCHOR_HOLDER, result.holds and result.applicable, result.lhs, result.rhs,
                         detail=f"p={p:.4g}, w=x^{power:.4g}, tau={scale:.4g}x^-{decay:.4g}")

        _guarded(report, name, checks.ANCHOR_HOLDER, case)
    return report


def partition_suite(seed: int) -> Report:
    """α_k = e^-k for τ = 1/x, and unit masses for the glued witness."""
    report = Report("partition")
    tol = 1e-9

    def reciprocal_case():
        part = build_partition(reciprocal_bundle(), 20)
        gap = max(abs(a - math.exp(-k)) for k, a in enumerate(part.alphas))
        report.check("reciprocal/closed_form", checks.ANCHOR_PARTITION, gap <= tol, gap, tol,
                     detail="alpha_k = e^-k, k <= 20")
        report.results["reciprocal"] = part.to_dict()

    def glued_case():
        part = build_partition(oscillating_bundle())
        checks.partition_checks(report, part, prefix="glued")
        report.results["glued"] = part.to_dict()

    _guarded(report, "reciprocal/closed_form", checks.ANCHOR_PARTITION, reciprocal_case)
    _guarded(report, "glued/unit_masses", checks.ANCHOR_PARTITION, glued_case)
    return report


# ----------------------------------------------------------------------------
# Summation
# ----------------------------------------------------------------------------


def summation_suite(seed: int, sequences: int = 100, pairs: int = 100, N: int = 16, K: int = 20) -> Report:
    """Random sequences through the interface with τ = 1/x, then random eventually-equal pairs."""
    report = Report("summation")
    rng = np.random.default_rng([seed, 3])
    tol = 1e-6
    bundle = reciprocal_bundle()
    part = build_partition(bundle, K)

    def summation(a: BinarySeq):
        return interface_sum(a, part, bundle, N=N)

    constants = []
    for i in range(sequences):
        a = BinarySeq.random(rng, N)

        def case(a=a, i=i):
            trace = summation(a)
            checks.summation_checks(report, trace, tol, prefix=f"sequence/{i}")
            constants.append(trace.constant_estimate)

        _guarded(report, f"sequence/{i}", checks.ANCHOR_INTERFACE, case)
    for i in range(pairs):
        agree_from = int(rng.integers(0, N))
        a, b = random_pair(rng, N, agree_from)

        def pair_case(a=a, b=b, agree_from=agree_from, i=i):
            result = verify_based_at_infinity(summation, a, b, agree_from, tol)
            report.check(f"pair/{i}", checks.ANCHOR_AT_INFINITY, result.holds, result.trace_agreement, agree_from,
                         detail=f"{a} / {b}")

        _guarded(report, f"pair/{i}", checks.ANCHOR_AT_INFINITY, pair_case)
    report.results["constants"] = constants
    return report


# ----------------------------------------------------------------------------
# Entire interpolation and Laurent finite parts
# ----------------------------------------------------------------------------


def analytic_suite(seed: int, base: float = 6.0, K: int = 6, J: int = 16, count: int = 5) -> Report:
    """Interpolants for random sequences starting with a_1 = 0."""
    report = Report("analytic")
    rng = np.random.default_rng([seed, 4])
    beta = make_beta(K, base)
    report.results["beta"] = beta.to_dict()
    for i in range(count):
        a = BinarySeq((0,) + tuple(int(b) for b in rng.integers(0, 2, size=K - 1)))

        def case(a=a, i=i):
            checks.analytic_checks(report, build_system(beta, a, J), prefix=f"system/{i}")

        _guarded(report, f"system/{i}", checks.ANCHOR_INTERPOLATION, case)
    return report


def meromorphic_suite(seed: int, cases: int = 20) -> Report:
    """Linearity of the Laurent finite part and the derivative reconstruction."""
    report = Report("meromorphic")
    rng = np.random.default_rng([seed, 5])
    xs = np.linspace(0.05, 0.95, 20)
    for i in range(cases):
        first = LaurentData.random(rng, int(rng.integers(1, 6)))
        second = LaurentData.random(rng, int(rng.integers(1, 6)))
        a, b = rng.uniform(-2.0, 2.0, size=2)
        x = float(rng.uniform(0.1, 1.0))
        combined = pf_meromorphic(first.scale(a) + second.scale(b), x)
        parts = (pf_meromorphic(first, x), pf_meromorphic(second, x))
        expected_value = a * parts[0].finite_part + b * parts[1].finite_part
        expected_log = a * parts[0].log_coefficient + b * parts[1].log_coefficient
        scale = 1.0 + abs(expected_value)
        residual = max(abs(combined.finite_part - expected_value) / scale,
                       abs(combined.log_coefficient - expected_log))
        report.check(f"linearity/{i}", checks.ANCHOR_MEROMORPHIC, residual < 1e-12, residual, 1e-12,
                     detail=f"x={x:.6g}")
        residual = derivative_residual(first, xs)
        report.check(f"derivative/{i}", checks.ANCHOR_MEROMORPHIC, residual <= 1e-6, residual, 1e-6,
                     detail=f"pole order {first.pole_order}")
    return report


SUITES: dict[str, Suite] = {
    "foundations": foundations_suite,
    "finite_part": finite_part_suite,
    "continuation": continuation_suite,
    "gluing": gluing_suite,
    "weighted": weighted_suite,
    "partition": partition_suite,
    "summation": summation_suite,
    "analytic": analytic_suite,
    "meromorphic": meromorphic_suite,
}
