"""Hadamard finite parts through repeated integration by parts.

For f smooth on (0, x] and n >= 0 with α + n > 0 in the integrable sense,

    Γ(α)J^α f(x) = Σ_{k<n} (-1)^k f^(k)(x) x^(α+k) / ∏_{j<=k}(α+j)
                   + (-1)^n / ∏_{j<n}(α+j) · ∫_0^x s^(α+n-1) f^(n)(s) ds.

The boundary terms at 0, infinite when Re α < 0, are discarded at every step.
The result is the analytic continuation of ∫_0^x s^(α-1) f(s) ds in α and does
not depend on n once the tail integral converges.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

from scipy.special import gamma

from src.config import settings
from src.errors import (
    DomainError,
    PoleAt,
    PoleAtNonpositiveInteger,
    PreconditionFailed,
    QuadratureDivergence,
)
from src.quad.improper import improper_integral, l1_classify
from src.quad.panels import integrate
from src.quad.results import L1Verdict, QuadResult
from src.realfunc.handle import FunctionHandle, eval_deriv

logger = logging.getLogger(__name__)

_POLE_TOL = 1e-14


@dataclass(frozen=True)
class PFQuery:
    """A finite-part request: f, exponent α, evaluation point x and depth n."""

    f: FunctionHandle
    alpha: float
    x: float
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"depth n must be nonnegative, got {self.n}")
        lo, hi = self.f.domain
        if not lo < self.x <= min(hi, 1.0):
            raise DomainError(self.x, (lo, min(hi, 1.0)), self.f.label)

    def to_dict(self) -> dict:
        return {"f": self.f.label, "alpha": self.alpha, "x": self.x, "n": self.n}


@dataclass(frozen=True)
class SufcReport:
    """Outcome of the sufficient-smoothness check.

    Attributes:
        ok: True when f^(n) exists and s^(α+n-1)·f^(n)(s) is absolutely integrable near 0.
        alpha: Exponent checked.
        n: Depth checked.
        reason: "L1", "NotL1", "Unknown" or "OrderUnavailable".
        verdict: The integrability verdict, absent when the order is unavailable.
    """

    ok: bool
    alpha: float
    n: int
    reason: str
    verdict: L1Verdict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "alpha": self.alpha,
            "n": self.n,
            "reason": self.reason,
            "verdict": None if self.verdict is None else self.verdict.value,
        }


@dataclass(frozen=True)
class PFResult:
    """Finite part Γ(α)J^α f(x) with its pieces.

    ``value`` equals math.fsum(boundary_terms + (tail_term,)), where
    tail_term = tail_coefficient · tail_integral.value.
    """

    query: PFQuery
    value: float
    boundary_terms: tuple[float, ...]
    tail_coefficient: float
    tail_integral: QuadResult
    tail_term: float
    condition_report: SufcReport

    def to_dict(self) -> dict:
        return {
            "query": self.query.to_dict(),
            "value": self.value,
            "boundary_terms": list(self.boundary_terms),
            "tail_coefficient": self.tail_coefficient,
            "tail_integral": self.tail_integral.to_dict(),
            "tail_term": self.tail_term,
            "condition_report": self.condition_report.to_dict(),
        }


def _is_nonpositive_integer(alpha: float) -> bool:
    nearest = round(alpha)
    return nearest <= 0 and abs(alpha - nearest) < _POLE_TOL


def pochhammer_ratio(alpha: float, k: int) -> float:
    """Γ(α)/Γ(α+k+1) = 1/∏_{j=0}^{k}(α+j), computed as a product.

    Raises:
        PoleAt: If some factor α + j vanishes.
    """
    factors = []
    for j in range(k + 1):
        factor = alpha + j
        if abs(factor) < _POLE_TOL:
            raise PoleAt(j, alpha)
        factors.append(factor)
    return 1.0 / math.prod(factors)


def tail_coefficient(alpha: float, n: int) -> float:
    """(-1)^n / ∏_{j<n}(α+j); equal to 1 for n = 0."""
    if n == 0:
        return 1.0
    return (-1) ** n * pochhammer_ratio(alpha, n - 1)


def sufc_integrand(f: FunctionHandle, alpha: float, n: int) -> FunctionHandle:
    """s -> s^(α+n-1)·f^(n)(s)."""
    power = alpha + n - 1
    return f.derivative(n).times(lambda s: s**power, label=f"s^{power:g}*{f.label}^({n})")


def check_sufc(f: FunctionHandle, alpha: float, n: int, tol: float | None = None) -> SufcReport:
    """Whether f has order-n derivatives and s^(α+n-1)·f^(n)(s) is L1 near 0."""
    if not f.has_order(n):
        return SufcReport(False, alpha, n, "OrderUnavailable")
    verdict = l1_classify(sufc_integrand(f, alpha, n), tol)
    report = SufcReport(verdict is L1Verdict.L1, alpha, n, verdict.value, verdict)
    logger.debug("sufficient smoothness of %s at alpha=%g, n=%d: %s", f.label, alpha, n, verdict.value)
    return report


def pf_riesz(q: PFQuery, tol: float | None = None) -> PFResult:
    """Finite part Γ(α)J^α f(x) at depth n.

    The tail integral is split at x/2: an improper limit on (0, x/2] and a
    proper integral on [x/2, x].

    Raises:
        PoleAtNonpositiveInteger: α is 0, -1, -2, ... (logarithmic case).
        PreconditionFailed: The sufficient-smoothness check fails.
        QuadratureDivergence: The improper tail does not settle.
    """
    tol = settings.tolerance if tol is None else tol
    f, alpha, x, n = q.f, q.alpha, q.x, q.n
    if _is_nonpositive_integer(alpha):
        raise PoleAtNonpositiveInteger(-round(alpha), alpha)

    report = check_sufc(f, alpha, n, tol)
    if not report.ok:
        raise PreconditionFailed(report)

    boundary = []
    for k in range(n):
        derivative = eval_deriv(f, k, x).value
        boundary.append((-1) ** k * pochhammer_ratio(alpha, k) * derivative * x ** (alpha + k))

    integrand = sufc_integrand(f, alpha, n)
    half = 0.5 * x
    near_zero = improper_integral(integrand, tol, upper=half)
    if not near_zero.is_convergent:
        raise QuadratureDivergence(len(near_zero.epsilon_trace), math.nan)
    proper = integrate(integrand, half, x, tol=tol)
    tail = QuadResult(
        value=near_zero.value + proper.value,
        abs_error_estimate=near_zero.error_estimate + proper.abs_error_estimate,
        subdivisions=proper.subdivisions + len(near_zero.epsilon_trace),
        converged=proper.converged,
    )
    coefficient = tail_coefficient(alpha, n)
    tail_term = coefficient * tail.value
    value = math.fsum([*boundary, tail_term])
    logger.info("pf of %s at alpha=%g, x=%g, n=%d: %.17g", f.label, alpha, x, n, value)
    return PFResult(q, value, tuple(boundary), coefficient, tail, tail_term, report)


def pf_depth_consistency(f: FunctionHandle, alpha: float, x: float, n1: int, n2: int,
                         tol: float | None = None) -> float:
    """|pf_riesz at depth n1 - pf_riesz at depth n2|."""
    first = pf_riesz(PFQuery(f, alpha, x, n1), tol).value
    if n1 == n2:
        return 0.0
    second = pf_riesz(PFQuery(f, alpha, x, n2), tol).value
    return abs(first - second)


def depth_sweep(f: FunctionHandle, alpha: float, x: float, depths: Iterable[int],
                tol: float | None = None) -> list[PFResult]:
    """pf_riesz over several depths; the spread of the values measures consistency."""
    return [pf_riesz(PFQuery(f, alpha, x, n), tol) for n in depths]


def riesz_to_fractional(value: float, alpha: float) -> float:
    """J^α f(x) = (Γ(α)J^α f(x)) / Γ(α).

    Raises:
        PoleAtNonpositiveInteger: Γ has a pole at α.
    """
    if _is_nonpositive_integer(alpha):
        raise PoleAtNonpositiveInteger(-round(alpha), alpha)
    return value / float(gamma(alpha))
