"""The standard summation Σ, the decomposition S = Σ + S*, and the based-at-infinity test."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import accumulate
from typing import Callable, NamedTuple, Sequence

import numpy as np

from src.errors import NotConstant
from src.summation.sequences import BinarySeq

logger = logging.getLogger(__name__)


def standard_sum(a: BinarySeq, N: int) -> list[float]:
    """Partial sums (a_0, a_0 + a_1, ...) truncated to N terms."""
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    return [float(s) for s in accumulate(a.bits(N))]


def s_star(S_terms: Sequence[float], a: BinarySeq) -> list[float]:
    """S*(a) = S(a) - Σ(a), termwise."""
    sigma = standard_sum(a, len(S_terms))
    return [float(s - t) for s, t in zip(S_terms, sigma)]


class SummationConstant(NamedTuple):
    value: float
    deviation: float


def s_dblstar(S_terms: Sequence[float], a: BinarySeq, tol: float = 1e-6) -> SummationConstant:
    """The constant c with S(a) = Σ(a) + c, and the largest deviation from it.

    Raises:
        NotConstant: If S*(a) varies by more than tol.
    """
    terms = np.asarray(s_star(S_terms, a))
    value = float(np.mean(terms))
    deviation = float(np.max(np.abs(terms - value))) if len(terms) else 0.0
    if deviation > tol:
        raise NotConstant(deviation, tol)
    return SummationConstant(value, deviation)


@dataclass(frozen=True)
class BasedAtInfinityReport:
    """Comparison of two summations whose inputs agree eventually.

    Attributes:
        holds: True when the traces agree from N' on and N' <= input_agreement.
        input_agreement: Index N from which the inputs agree within the window.
        trace_agreement: Index N' from which the traces agree within tol.
        window: Number of terms compared.
        max_late_difference: Largest trace difference at indices >= N.
        precondition: Whether the inputs agree from the requested N.
    """

    holds: bool
    input_agreement: int
    trace_agreement: int
    window: int
    max_late_difference: float
    precondition: bool

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "input_agreement": self.input_agreement,
            "trace_agreement": self.trace_agreement,
            "window": self.window,
            "max_late_difference": self.max_late_difference,
            "precondition": self.precondition,
        }


def verify_based_at_infinity(build: Callable[[BinarySeq], object], a: BinarySeq, a2: BinarySeq,
                             N: int, tol: float = 1e-6) -> BasedAtInfinityReport:
    """Check that inputs agreeing from N on give summations agreeing from some N' <= N.

    ``build`` maps a sequence to an object with an ``s_terms`` attribute.
    """
    s1 = np.asarray(build(a).s_terms)
    s2 = np.asarray(build(a2).s_terms)
    window = min(len(s1), len(s2))
    close = np.abs(s1[:window] - s2[:window]) <= tol
    trailing = int(np.argmin(close[::-1])) if not np.all(close) else window
    trace_agreement = window - trailing
    inputs_agree_from = a.first_agreement(a2, window)
    precondition = inputs_agree_from <= N
    late = np.abs(s1[N:window] - s2[N:window])
    report = BasedAtInfinityReport(
        holds=precondition and trace_agreement <= N,
        input_agreement=inputs_agree_from,
        trace_agreement=trace_agreement,
        window=window,
        max_late_difference=float(late.max()) if len(late) else 0.0,
        precondition=precondition,
    )
    logger.info("based at infinity for %s / %s from %d: %s (traces agree from %d)",
                a, a2, N, report.holds, trace_agreement)
    return report
