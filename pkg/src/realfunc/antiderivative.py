"""Antiderivatives as an anchored integral plus a constant functional.

Any right inverse of differentiation has the form x -> ∫_{x0}^x g + c(g). The
Lebesgue integral from 0 is the special case c(g) = ∫_0^{x0} g, which exists
only for integrable g. No antiderivative is offered for inputs outside L1:
there is no canonical one, and no measurable choice extends the integral to
all continuous functions on (0, 1].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from src.config import settings
from src.errors import NotIntegrable
from src.realfunc.handle import FunctionHandle, linear_combination

logger = logging.getLogger(__name__)

ConstantFunctional = Callable[[FunctionHandle], float]


def zero_functional(g: FunctionHandle) -> float:
    return 0.0


@dataclass(frozen=True)
class Primitive:
    """x -> ∫_{anchor}^x g + constant for one integrand g."""

    integrand: FunctionHandle
    anchor: float
    constant: float
    tol: float

    def _segment(self, lo: float, hi: float) -> float:
        # imported lazily: src.quad depends on this package's handle module
        from src.quad.panels import integrate

        if lo == hi:
            return 0.0
        if lo < hi:
            return integrate(self.integrand, lo, hi, tol=self.tol).value
        return -integrate(self.integrand, hi, lo, tol=self.tol).value

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        out = np.empty_like(flat)
        # walk outward from the anchor so each stretch is integrated once
        order = np.argsort(flat, kind="stable")
        above = [i for i in order if flat[i] >= self.anchor]
        below = [i for i in order[::-1] if flat[i] < self.anchor]
        for group in (above, below):
            position, running = self.anchor, []
            for i in group:
                running.append(self._segment(position, float(flat[i])))
                position = float(flat[i])
                out[i] = math.fsum(running)
        out += self.constant
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass(frozen=True)
class AnchoredAntiderivative:
    """P g (x) = ∫_{anchor}^x g + c(g).

    Attributes:
        anchor: The point x0 where the integral part vanishes.
        constant: The functional c applied to each integrand.
        tol: Quadrature tolerance (``settings.tolerance`` when None).
        label: Name used in reports.
    """

    anchor: float = 1.0
    constant: ConstantFunctional = field(default=zero_functional)
    tol: float | None = None
    label: str = "P"

    @classmethod
    def from_zero(cls, anchor: float = 1.0, tol: float | None = None) -> "AnchoredAntiderivative":
        """The Lebesgue antiderivative x -> ∫_0^x g, defined on L1 inputs only."""

        def integral_from_zero(g: FunctionHandle) -> float:
            from src.quad.improper import improper_integral

            verdict = improper_integral(g, tol=tol, upper=anchor)
            if not verdict.is_convergent:
                raise NotIntegrable(g.label, verdict)
            return float(verdict.value)

        return cls(anchor=anchor, constant=integral_from_zero, tol=tol, label="P_0+")

    def __call__(self, g: FunctionHandle) -> Primitive:
        tol = settings.tolerance if self.tol is None else self.tol
        return Primitive(integrand=g, anchor=self.anchor, constant=float(self.constant(g)), tol=tol)


# ----------------------------------------------------------------------------
# Axiom checks
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomCheck:
    """One axiom check.

    Attributes:
        axiom: "III", "IV", "V" or "derivative".
        subject: Label of the function(s) involved.
        status: "pass", "fail" or "skipped".
        measured: Largest residual observed.
        tolerance: Allowed residual.
        detail: Short explanation.
    """

    axiom: str
    subject: str
    status: str
    measured: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def by_axiom(self, axiom: str) -> list[AxiomCheck]:
        return [c for c in self.checks if c.axiom == axiom]


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _linearity(P, f, g, a, b, xs, tol) -> AxiomCheck:
    combo = linear_combination([(a, f), (b, g)])
    lhs = np.asarray(P(combo)(xs))
    rhs = a * np.asarray(P(f)(xs)) + b * np.asarray(P(g)(xs))
    residual = float(np.max(np.abs(lhs - rhs)))
    allowed = tol * (1.0 + float(np.max(np.abs(rhs))))
    return AxiomCheck("III", f"{f.label}, {g.label}", _status(residual <= allowed), residual, allowed,
                      f"a={a:.6g}, b={b:.6g}")


def _lebesgue(P, f, xs, tol) -> AxiomCheck:
    from src.quad.improper import improper_integral, l1_classify
    from src.quad.panels import integrate
    from src.quad.results import L1Verdict

    if l1_classify(f, tol) is not L1Verdict.L1:
        return AxiomCheck("IV", f.label, "skipped", math.nan, tol, "input not classified L1")
    whole = improper_integral(f, tol)
    if not whole.is_convergent:
        return AxiomCheck("IV", f.label, "skipped", math.nan, tol, "integral from 0 not resolved")
    reference = np.array([whole.value - integrate(f, float(x), f.domain[1], tol=tol).value for x in xs])
    residual = float(np.max(np.abs(np.asarray(P(f)(xs)) - reference)))
    allowed = 100.0 * (tol + whole.error_estimate)
    return AxiomCheck("IV", f.label, _status(residual <= allowed), residual, allowed,
                      "agreement with the integral from 0")


def _eventual_positivity(P, f, tol) -> AxiomCheck:
    probe = np.geomspace(1e-4, 1e-1, 16)
    if np.any(f.raw(probe) <= 0):
        return AxiomCheck("V", f.label, "skipped", math.nan, 0.0, "input not strictly positive")
    values = np.asarray(P(f)(probe[:8]))
    worst = float(values.min())
    return AxiomCheck("V", f.label, _status(worst > 0), worst, 0.0,
                      "P f > 0 on the eight smallest probe points")


def _derivative(P, f, xs, tol) -> AxiomCheck:
    primitive = P(f)
    h = 1e-4 * xs
    slope = (np.asarray(primitive(xs + h)) - np.asarray(primitive(xs - h))) / (2 * h)
    exact = f.raw(xs)
    residual = float(np.max(np.abs(slope - exact) / (1.0 + np.abs(exact))))
    allowed = 1e-5
    return AxiomCheck("derivative", f.label, _status(residual <= allowed), residual, allowed,
                      "(P f)' = f by central differences")


def verify_extension_axioms(P: AnchoredAntiderivative, fs: Sequence[FunctionHandle],
                            seed: int = 0, pairs: int = 3, points: int = 8,
                            tol: float | None = None) -> AxiomReport:
    """Run the extension-of-the-integral checks on P.

    (III) linearity on random pairs and scalars, (IV) agreement with the
    Lebesgue integral from 0 on L1 inputs, (V) eventual positivity near 0 for
    strictly positive inputs, and the derivative property. Failures are report
    entries, never exceptions.
    """
    tol = settings.tolerance if tol is None else tol
    check_tol = max(tol, 1e-8)
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(0.05, 0.95, size=points))
    checks: list[AxiomCheck] = []

    for _ in range(pairs if len(fs) else 0):
        i, j = rng.integers(0, len(fs), size=2)
        a, b = rng.uniform(-2.0, 2.0, size=2)
        try:
            checks.append(_linearity(P, fs[i], fs[j], float(a), float(b), xs, check_tol))
        except NotIntegrable as exc:
            checks.append(AxiomCheck("III", f"{fs[i].label}, {fs[j].label}", "fail", math.nan, check_tol,
                                     str(exc)))
    for f in fs:
        for axiom, run in (("IV", lambda: _lebesgue(P, f, xs, check_tol)),
                           ("V", lambda: _eventual_positivity(P, f, check_tol)),
                           ("derivative", lambda: _derivative(P, f, xs, check_tol))):
            try:
                checks.append(run())
            except NotIntegrable as exc:
                checks.append(AxiomCheck(axiom, f.label, "fail", math.nan, check_tol, str(exc)))

    report = AxiomReport(tuple(checks))
    logger.info("axiom checks for %s: %d checks, passed=%s", P.label, len(checks), report.passed)
    return report
