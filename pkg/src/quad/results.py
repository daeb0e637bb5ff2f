"""Result types returned by the quadrature layer."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class QuadResult:
    """Outcome of a proper integral.

    Attributes:
        value: Integral estimate.
        abs_error_estimate: Sum of per-panel error estimates.
        subdivisions: Number of panels used.
        converged: True when the estimate met tol + rel_tol·|value|.
    """

    value: float
    abs_error_estimate: float
    subdivisions: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "subdivisions": self.subdivisions,
            "converged": self.converged,
        }


class VerdictKind(str, Enum):
    CONVERGENT = "Convergent"
    DIVERGENT_PLUS = "DivergentPlus"
    DIVERGENT_MINUS = "DivergentMinus"
    UNKNOWN = "Oscillatory/Unknown"


class L1Verdict(str, Enum):
    L1 = "L1"
    NOT_L1 = "NotL1"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ImproperVerdict:
    """Verdict on lim ∫_ε^upper f as ε -> 0+.

    Attributes:
        kind: Convergent, DivergentPlus, DivergentMinus or Oscillatory/Unknown.
        value: Extrapolated limit when convergent.
        error_estimate: Error of ``value`` when convergent.
        epsilon_trace: Pairs (ε, ∫_ε^upper f) along a strictly decreasing ε-sequence.
        note: Short reason for the verdict.
    """

    kind: VerdictKind
    value: float | None
    error_estimate: float | None
    epsilon_trace: tuple[tuple[float, float], ...]
    note: str = ""

    @property
    def is_convergent(self) -> bool:
        return self.kind is VerdictKind.CONVERGENT

    def __str__(self) -> str:
        if self.is_convergent:
            return f"{self.kind.value}({self.value!r} ± {self.error_estimate!r})"
        return self.kind.value

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "error_estimate": self.error_estimate,
            "note": self.note,
            "epsilon_trace": [list(p) for p in self.epsilon_trace],
        }
