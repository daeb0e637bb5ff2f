"""Exception hierarchy shared by all subpackages.

Every error carries a ``category`` used by the command line to choose an exit
code: ``check`` (1), ``precondition`` (2) or ``parse`` (3).
"""

from __future__ import annotations

from typing import Any


class HPFError(Exception):
    """Base class for library errors."""

    category = "precondition"


# ----------------------------------------------------------------------------
# realfunc
# ----------------------------------------------------------------------------


class DomainError(HPFError):
    """A point lies outside the domain of a function handle."""

    def __init__(self, x: float, domain: tuple[float, float], label: str = "f"):
        self.x = x
        self.domain = domain
        self.label = label
        super().__init__(f"{label}: x={x!r} outside ({domain[0]!r}, {domain[1]!r}]")


class OrderUnavailable(HPFError):
    """A derivative order is not exposed by a handle."""

    def __init__(self, order: int, available: int | None, label: str = "f"):
        self.order = order
        self.available = available
        self.label = label
        shown = "inf" if available is None else available
        super().__init__(
            f"{label}: derivative of order {order} unavailable (exact orders: {shown}, "
            "numeric fallback disabled)"
        )


class ProfileOutOfRange(HPFError):
    """A gluing profile leaves the unit ball."""

    def __init__(self, x: float, value: float):
        self.x = x
        self.value = value
        super().__init__(f"profile value {value!r} at x={x!r} exceeds 1 in magnitude")


class NotIntegrable(HPFError):
    """A Lebesgue antiderivative from zero was requested for a non-L1 input."""

    def __init__(self, label: str, verdict: Any):
        self.label = label
        self.verdict = verdict
        super().__init__(f"{label} has no integral from 0 (verdict: {verdict})")


# ----------------------------------------------------------------------------
# quad
# ----------------------------------------------------------------------------


class QuadratureError(HPFError):
    """Quadrature could not deliver a trustworthy value."""

    category = "check"


class NonFiniteSample(QuadratureError):
    """The integrand returned inf or nan."""

    def __init__(self, x: float, value: float, label: str = "f"):
        self.x = x
        self.value = value
        self.label = label
        super().__init__(f"{label}({x!r}) = {value!r} is not finite")


class MaxSubdivisions(QuadratureError):
    """The panel budget ran out before the tolerance was met."""

    def __init__(self, limit: int, lo: float, hi: float, label: str = "f"):
        self.limit = limit
        self.lo = lo
        self.hi = hi
        self.label = label
        super().__init__(f"{label}: more than {limit} panels needed on [{lo!r}, {hi!r}]")


class QuadratureDivergence(QuadratureError):
    """A refinement sequence failed to settle."""

    def __init__(self, nodes: int, spread: float):
        self.nodes = nodes
        self.spread = spread
        super().__init__(f"no agreement after {nodes} nodes (last spread {spread!r})")


# ----------------------------------------------------------------------------
# finitepart
# ----------------------------------------------------------------------------


class PoleAt(HPFError):
    """A Pochhammer factor α + j vanishes."""

    def __init__(self, j: int, alpha: float):
        self.j = j
        self.alpha = alpha
        super().__init__(f"alpha + {j} = 0 for alpha={alpha!r}")


class PoleAtNonpositiveInteger(PoleAt):
    """α is a nonpositive integer: the finite part needs logarithmic terms."""


class PreconditionFailed(HPFError):
    """The sufficient-smoothness condition does not hold."""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"precondition failed: {getattr(report, 'reason', report)}")


# ----------------------------------------------------------------------------
# witness
# ----------------------------------------------------------------------------


class NotDivergentPositive(HPFError):
    """Neither f+ nor f- has a divergent integral near 0."""

    def __init__(self, label: str, plus: Any, minus: Any):
        self.label = label
        self.plus = plus
        self.minus = minus
        super().__init__(f"{label}: f+ verdict {plus}, f- verdict {minus}; no divergent part")


class LevelSetNotFound(HPFError):
    """A level set needed by the witness construction is empty."""

    def __init__(self, level: float, reached: int):
        self.level = level
        self.reached = reached
        super().__init__(f"no point with f >= {level!r} after {reached} levels")


class CriterionFails(HPFError):
    """The weighted non-inclusion criterion does not hold."""

    def __init__(self, p: float, verdict: Any):
        self.p = p
        self.verdict = verdict
        super().__init__(f"criterion for p={p!r} fails (verdict: {verdict})")


class RangeExhausted(HPFError):
    """The tabulated mass cannot reach the requested partition depth."""

    def __init__(self, requested: int, reachable: float):
        self.requested = requested
        self.reachable = reachable
        super().__init__(f"requested K={requested} but only {reachable!r} units of mass reachable")


# ----------------------------------------------------------------------------
# summation
# ----------------------------------------------------------------------------


class PartitionTooShallow(HPFError):
    """The partition does not cover the realized prefix of a sequence."""

    def __init__(self, needed: int, depth: int):
        self.needed = needed
        self.depth = depth
        super().__init__(f"sequence needs {needed} windows, partition has {depth}")


class NotConstant(HPFError):
    """S - Sigma is not constant: the summation operator is broken."""

    category = "check"

    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"S* deviates by {deviation!r} > {tol!r}")


class SequenceSyntaxError(HPFError):
    """A bit-string does not follow the prefix[pattern]* syntax."""

    category = "parse"

    def __init__(self, text: str, reason: str):
        self.text = text
        self.reason = reason
        super().__init__(f"bad sequence {text!r}: {reason}")


# ----------------------------------------------------------------------------
# analyticpf
# ----------------------------------------------------------------------------


class BaseTooSmall(HPFError):
    """The β-sequence base must exceed 5."""

    def __init__(self, base: float):
        self.base = base
        super().__init__(f"base must be > 5, got {base!r}")


# ----------------------------------------------------------------------------
# cli
# ----------------------------------------------------------------------------


class ExpressionError(HPFError):
    """An expression string could not be parsed."""

    category = "parse"

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in {text!r}")
