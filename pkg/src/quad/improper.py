"""Improper integrals toward 0 and integrability verdicts."""

from __future__ import annotations

import logging
import math

import numpy as np

from src.config import settings
from src.errors import QuadratureError
from src.quad.panels import integrate
from src.quad.results import ImproperVerdict, L1Verdict, VerdictKind
from src.realfunc.handle import FunctionHandle

logger = logging.getLogger(__name__)

_WINDOW = 8
# fitted per-step increment ratios: at or above _FLAT_RATIO the increments do not
# decay; below _DECAY_RATIO a geometric tail may be extrapolated
_FLAT_RATIO = 1.0 - 1e-4
_DECAY_RATIO = 0.95
_RATIO_DRIFT = 1e-3
_LIMIT_RTOL = 1e-6


def epsilon_schedule(f: FunctionHandle, upper: float, n_start: int = 4,
                     n_stop: int | None = None) -> list[float]:
    """ε_n = upper·2^-n for n = n_start..n_stop.

    The schedule stops at ``settings.epsilon_min`` and, for oscillating handles,
    before the number of arches above ε exceeds ``settings.max_arches``.
    """
    limit = math.floor(math.log2(upper / settings.epsilon_min))
    n_stop = min(40 if n_stop is None else n_stop, limit)
    if f.phase is not None:
        while n_stop > n_start and f.phase.arch_count(upper * 2.0**-n_stop, upper) > settings.max_arches:
            n_stop -= 1
    return [upper * 2.0**-n for n in range(n_start, n_stop + 1)]


def _extrapolate(values: list[float], increments: np.ndarray) -> tuple[float, float]:
    """Geometric tail I_N + d_N·r/(1-r) with r = d_N/d_{N-1}, error from the previous step."""

    def limit(i: int) -> float | None:
        if i < 1:
            return None
        r = increments[i] / increments[i - 1] if increments[i - 1] != 0 else 0.0
        if not 0.0 <= r < 1.0:
            return None
        return values[i + 1] + increments[i] * r / (1.0 - r)

    last = limit(len(increments) - 1)
    before = limit(len(increments) - 2)
    if last is None or before is None:
        return values[-1], float(np.max(np.abs(increments[-4:])))
    return last, abs(last - before)


def _fitted_ratio(increments: np.ndarray) -> float:
    """exp of the least-squares slope of log|d_i|."""
    logs = np.log(np.abs(increments))
    return math.exp(np.polyfit(np.arange(len(increments)), logs, 1)[0])


def _classify(eps: list[float], values: list[float], tol: float) -> ImproperVerdict:
    trace = tuple(zip(eps, values))
    increments = np.diff(values)
    if len(increments) < _WINDOW:
        return ImproperVerdict(VerdictKind.UNKNOWN, None, None, trace, "trace too short")

    recent = increments[-_WINDOW:]
    early, late = np.abs(recent[: _WINDOW // 2]).max(), np.abs(recent[_WINDOW // 2:]).max()
    positive, negative = bool(np.all(recent > 0)), bool(np.all(recent < 0))
    one_signed = positive or negative
    divergent = VerdictKind.DIVERGENT_PLUS if positive else VerdictKind.DIVERGENT_MINUS

    if one_signed and abs(values[-1]) > settings.divergence_bound:
        return ImproperVerdict(divergent, None, None, trace, "monotone beyond divergence bound")
    if late <= tol:
        return ImproperVerdict(VerdictKind.CONVERGENT, values[-1], 4.0 * late + tol, trace,
                               "increments below tolerance")
    if one_signed:
        ratio = _fitted_ratio(recent)
        if ratio >= _FLAT_RATIO:
            # increments that stop shrinking carry the trace past any bound
            return ImproperVerdict(divergent, None, None, trace,
                                   f"monotone trace, increments do not decay (ratio {ratio:.6f})")
        drift = _fitted_ratio(recent[_WINDOW // 2:]) - _fitted_ratio(recent[: _WINDOW // 2])
        value, error = _extrapolate(values, increments)
        stable = error <= tol + _LIMIT_RTOL * max(1.0, abs(value))
        if ratio < _DECAY_RATIO and drift <= _RATIO_DRIFT and stable:
            return ImproperVerdict(VerdictKind.CONVERGENT, value, error + tol, trace,
                                   f"geometric decay, ratio {ratio:.4f}")
        note = (f"monotone below divergence bound, ratio {ratio:.4f}, drift {drift:.2e}, "
                f"extrapolation gap {error:.2e}")
        logger.debug("undecided trace: %s", note)
        return ImproperVerdict(VerdictKind.UNKNOWN, None, None, trace, note)
    if late <= 0.5 * early:
        rho = (late / early) ** (1.0 / (_WINDOW // 2))
        error = late * rho / (1.0 - rho) if rho < 1 else late
        return ImproperVerdict(VerdictKind.CONVERGENT, values[-1], error + tol, trace,
                               "oscillating increments with decaying envelope")
    return ImproperVerdict(VerdictKind.UNKNOWN, None, None, trace, "increments neither decay nor keep sign")


def improper_integral(f: FunctionHandle, tol: float | None = None, upper: float | None = None,
                      n_start: int = 4, n_stop: int | None = None) -> ImproperVerdict:
    """Probe lim_{ε -> 0+} ∫_ε^upper f along ε_n = upper·2^-n.

    Args:
        f: Integrand on (0, upper].
        tol: Absolute tolerance (``settings.tolerance`` when None).
        upper: Right end of integration, the domain's right end by default.
        n_start: First exponent of the schedule.
        n_stop: Last exponent (at most 40, clipped by ``epsilon_min``).

    Returns:
        ImproperVerdict. Quadrature failures end the trace early and are reported
        through the verdict's note, never raised.
    """
    tol = settings.tolerance if tol is None else tol
    upper = f.domain[1] if upper is None else upper
    if not math.isfinite(upper):
        raise ValueError("improper_integral needs a finite upper bound")
    schedule = epsilon_schedule(f, upper, n_start, n_stop)

    eps: list[float] = []
    parts: list[float] = []
    values: list[float] = []
    note = ""
    previous = upper
    for e in schedule:
        try:
            part = integrate(f, e, previous, tol=tol)
        except QuadratureError as exc:
            note = f"trace stopped at eps={e!r}: {exc}"
            logger.warning("%s: %s", f.label, note)
            break
        parts.append(part.value)
        eps.append(e)
        values.append(math.fsum(parts))
        previous = e

    verdict = _classify(eps, values, tol)
    if note and verdict.kind is VerdictKind.UNKNOWN:
        verdict = ImproperVerdict(verdict.kind, None, None, verdict.epsilon_trace, note)
    logger.info("improper integral of %s: %s (%s)", f.label, verdict, verdict.note)
    return verdict


def l1_classify(f: FunctionHandle, tol: float | None = None) -> L1Verdict:
    """Absolute integrability near 0, decided from the improper integral of |f|."""
    verdict = improper_integral(f.absolute(), tol)
    if verdict.is_convergent:
        return L1Verdict.L1
    if verdict.kind is VerdictKind.DIVERGENT_PLUS:
        return L1Verdict.NOT_L1
    return L1Verdict.UNKNOWN


def limit_classify(f: FunctionHandle, tol: float | None = None) -> L1Verdict:
    """Integrability in the limit sense: ∫_ε^1 f has a limit as ε -> 0+."""
    verdict = improper_integral(f, tol)
    if verdict.is_convergent:
        return L1Verdict.L1
    if verdict.kind in (VerdictKind.DIVERGENT_PLUS, VerdictKind.DIVERGENT_MINUS):
        return L1Verdict.NOT_L1
    return L1Verdict.UNKNOWN
