"""Window-integral agreement implies equal anchored antiderivatives, on the t-side."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from src.quad.panels import integrate
from src.realfunc.antiderivative import AnchoredAntiderivative
from src.realfunc.handle import FunctionHandle
from src.analyticpf.beta import BetaSequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CondaReport:
    """Window integrals ∫_{β_{n+1}}^{β_n} f (negative of the integral over [β_n, β_{n+1}])
    and the anchored values (P f)(β_1).

    ``status`` is "holds", "violated" or "not applicable" (hypotheses fail).
    """

    windows: tuple[tuple[float, float], ...]
    integrals_1: tuple[float, ...]
    integrals_2: tuple[float, ...]
    hypotheses_hold: bool
    anchored_1: float
    anchored_2: float
    status: str

    def to_dict(self) -> dict:
        return {
            "windows": [list(w) for w in self.windows],
            "integrals_1": list(self.integrals_1),
            "integrals_2": list(self.integrals_2),
            "hypotheses_hold": self.hypotheses_hold,
            "anchored_1": self.anchored_1,
            "anchored_2": self.anchored_2,
            "status": self.status,
        }


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * (1.0 + max(abs(x), abs(y)))


def verify_conda(f1: FunctionHandle, f2: FunctionHandle, beta: BetaSequence,
                 P: AnchoredAntiderivative | None = None, tol: float = 1e-8) -> CondaReport:
    """If f1 and f2 have equal integrals over every window, compare (P f1)(β_1) and (P f2)(β_1).

    P defaults to the anchored antiderivative at β_K with zero constant, shared by both inputs.
    """
    betas = beta.betas
    P = AnchoredAntiderivative(anchor=betas[-1]) if P is None else P
    windows = tuple((betas[n], betas[n + 1]) for n in range(len(betas) - 1))
    first = tuple(-integrate(f1, lo, hi).value for lo, hi in windows)
    second = tuple(-integrate(f2, lo, hi).value for lo, hi in windows)
    hypotheses = all(_close(a, b, tol) for a, b in zip(first, second))
    anchored_1 = float(P(f1)(betas[0]))
    anchored_2 = float(P(f2)(betas[0]))
    if not hypotheses:
        status = "not applicable"
    elif _close(anchored_1, anchored_2, tol):
        status = "holds"
    else:
        status = "violated"
    logger.info("conda check %s vs %s over %d windows: %s", f1.label, f2.label, len(windows), status)
    return CondaReport(windows, first, second, hypotheses, anchored_1, anchored_2, status)
