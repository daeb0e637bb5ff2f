"""Witnesses outside a weighted Lebesgue space L^p_w on (0, 1].

τ ≥ 0 is built with ∫ τ = ∞ while wτ stays in L^p, which is possible exactly
when the weight fails the non-inclusion criterion for its exponent.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.errors import CriterionFails
from src.quad.improper import improper_integral
from src.quad.panels import CumulativeIntegral, integrate
from src.quad.results import ImproperVerdict, VerdictKind
from src.realfunc.gluing import GluingProfile, smooth_step
from src.realfunc.handle import FunctionHandle
from src.witness.bundle import WeightSpec, WitnessBundle
from src.witness.level_sets import bisect_boundary

logger = logging.getLogger(__name__)

_BLEND_START = 0.5
_BLEND_END = 0.75
_RUN_MARGIN = 0.05


def _bundle(tau: FunctionHandle, spec: WeightSpec, tol: float | None,
            intervals: tuple[tuple[float, float], ...] = (), **details) -> WitnessBundle:
    mass = CumulativeIntegral.build(tau, settings.epsilon_min, 1.0, tol=tol)
    logger.info("weighted witness %s for p=%s: mass %.6g down to %g",
                tau.label, spec.p, mass.total, mass.floor)
    return WitnessBundle(tau=tau, source="P44", mass=mass, intervals=intervals, weight=spec,
                         details=details)


def _sup_norm_witness(spec: WeightSpec, tol: float | None) -> WitnessBundle:
    tau = spec.power_of_weight(-1.0, f"1/{spec.w.label}")
    verdict = improper_integral(tau, tol)
    if verdict.kind is not VerdictKind.DIVERGENT_PLUS:
        raise CriterionFails(spec.p, verdict)
    return _bundle(tau, spec, tol, inverse_weight=verdict)


def _power_witness(spec: WeightSpec, tol: float | None) -> WitnessBundle:
    """τ = w^-q / ∫_x^1 w^-q on (0, 1/2], blended to the constant τ(1/2) on [1/2, 3/4]."""
    q = spec.q
    proof_weight = spec.power_of_weight(-q, f"{spec.w.label}^(-{q:g})")
    statement_weight = spec.power_of_weight(-1.0 / (spec.p - 1.0), f"{spec.w.label}^(-{1.0 / (spec.p - 1.0):g})")
    proof = improper_integral(proof_weight, tol)
    statement = improper_integral(statement_weight, tol)
    if proof.kind is not VerdictKind.DIVERGENT_PLUS:
        raise CriterionFails(spec.p, proof)

    theta = CumulativeIntegral.build(proof_weight, settings.epsilon_min, 1.0, tol=tol)
    anchor = float(proof_weight.raw(np.array(_BLEND_START)) / theta(_BLEND_START))

    def fn(x):
        x = np.asarray(x, dtype=float)
        s = smooth_step((x - _BLEND_START) / (_BLEND_END - _BLEND_START))
        out = np.full_like(x, anchor)
        live = s < 1.0
        if np.any(live):
            xl = x[live]
            formula = proof_weight.raw(xl) / np.asarray(theta(xl), dtype=float)
            out[live] = (1.0 - s[live]) * formula + s[live] * anchor
        return out

    tau = FunctionHandle(
        fn=fn,
        label=f"tau[{spec.w.label},p={spec.p:g}]",
        domain=(0.0, 1.0),
        phase=spec.w.phase,
        knots=lambda lo, hi: np.array([v for v in (_BLEND_START, _BLEND_END) if lo < v < hi]),
        smoothness_order=spec.w.smoothness_order,
        parent=spec.w,
    )
    return _bundle(tau, spec, tol, proof_exponent=proof, statement_exponent=statement, q=q)


def weight_vanishes_at_zero(w: FunctionHandle, n_start: int = 4, n_stop: int = 40) -> bool:
    """Sampled test for w(0+) = 0: decaying by a factor 10 and nonincreasing over the later half."""
    n_stop = min(n_stop, math.floor(-math.log2(settings.epsilon_min)))
    values = w.raw(np.array([2.0**-n for n in range(n_start, n_stop + 1)]))
    late = values[len(values) // 2:]
    return bool(values[-1] <= 0.1 * values[0] and np.all(np.diff(late) <= 0))


def _level_runs(w_tilde: FunctionHandle, xs: np.ndarray, values: np.ndarray,
                lower: float, upper: float) -> list[tuple[float, float]]:
    """Maximal intervals where lower ≤ w̃ < upper, endpoints refined by bisection."""
    inside = (values >= lower) & (values < upper)
    if not np.any(inside):
        return []
    padded = np.concatenate([[False], inside, [False]])
    starts = np.flatnonzero(~padded[:-1] & padded[1:])
    ends = np.flatnonzero(padded[:-1] & ~padded[1:]) - 1

    def member(v):
        return (v >= lower) & (v < upper)

    left = xs[starts].copy()
    interior = starts > 0
    left[interior] = bisect_boundary(w_tilde, xs[starts[interior]], xs[starts[interior] - 1], member)
    right = xs[ends].copy()
    interior = ends < len(xs) - 1
    right[interior] = bisect_boundary(w_tilde, xs[ends[interior]], xs[ends[interior] + 1], member)
    return [(float(a), float(b)) for a, b in zip(left, right) if b > a]


def _level_set_witness(spec: WeightSpec, tol: float | None, k_max: int,
                       per_octave: int = 64) -> WitnessBundle:
    """τ = Σ_k h_k / ∫ h_k with h_k smoothed indicators of {w̃ ∈ [1/(k+1)², 1/k²)}."""
    if not weight_vanishes_at_zero(spec.w):
        raise CriterionFails(spec.p, "w(0+) is not 0")
    floor = settings.epsilon_min
    octaves = math.ceil(math.log2(1.0 / floor))
    xs = np.geomspace(floor, 1.0, octaves * per_octave + 1)
    scale = max(1.0, float(np.max(spec.w.raw(xs))))
    w_tilde = spec.w.scaled(1.0 / scale)
    values = w_tilde.raw(xs)

    components = []
    for k in range(1, k_max + 1):
        runs = _level_runs(w_tilde, xs, values, 1.0 / (k + 1) ** 2, 1.0 / k**2)
        if not runs:
            continue
        margins = [_RUN_MARGIN * (b - a) for a, b in runs]
        profile = GluingProfile.from_intervals(
            [(a + m, b - m) for (a, b), m in zip(runs, margins)], margins)
        h = FunctionHandle(fn=profile, label=f"h_{k}", knots=profile.knots)
        measure = math.fsum(integrate(h, a, b, tol=tol).value for a, b in runs)
        components.append((k, 1.0 / measure, profile))
    if not components:
        raise CriterionFails(spec.p, "no level set of the weight is realized")

    def fn(x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        for _, coefficient, profile in components:
            out += coefficient * profile(x)
        return out

    def knots(lo, hi):
        return np.unique(np.concatenate([p.knots(lo, hi) for _, _, p in components]))

    tau = FunctionHandle(fn=fn, label=f"tau[{spec.w.label},p=1]", knots=knots, parent=spec.w)
    logger.info("level sets realized for %s: %s", spec.w.label, [k for k, _, _ in components])
    intervals = tuple((float(b), float(c)) for _, _, p in components for b, c in p.cores)
    return _bundle(tau, spec, tol, intervals, levels=[k for k, _, _ in components], weight_scale=scale)


def build_tau_weighted(spec: WeightSpec, tol: float | None = None, k_max: int = 40) -> WitnessBundle:
    """Witness τ ≥ 0 with ∫ τ = ∞ and wτ ∈ L^p.

    Args:
        spec: Weight and exponent.
        tol: Quadrature tolerance.
        k_max: Number of level sets tried when p = 1.

    Raises:
        CriterionFails: If the non-inclusion criterion for p does not hold.
    """
    if math.isinf(spec.p):
        return _sup_norm_witness(spec, tol)
    if spec.p == 1:
        return _level_set_witness(spec, tol, k_max)
    return _power_witness(spec, tol)


@dataclass(frozen=True)
class HolderReport:
    """∫τ ≤ (∫(wτ)^p)^(1/p)·(∫w^-q)^(1/q) on [eps, 1]."""

    lhs: float
    weighted_norm: float
    dual_norm: float
    rhs: float
    holds: bool
    applicable: bool
    criterion: ImproperVerdict
    eps: float

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "weighted_norm": self.weighted_norm,
            "dual_norm": self.dual_norm,
            "rhs": self.rhs,
            "holds": self.holds,
            "applicable": self.applicable,
            "criterion": self.criterion.to_dict(),
            "eps": self.eps,
        }


def holder_check(spec: WeightSpec, tau: FunctionHandle, eps: float = 1e-6,
                 tol: float | None = None) -> HolderReport:
    """Hölder's inequality for τ against w on [eps, 1].

    ``applicable`` is False when ∫_0^1 w^-q diverges, the branch where the
    bound is vacuous.
    """
    if not 1 < spec.p < math.inf:
        raise ValueError(f"holder_check needs p in (1, inf), got {spec.p}")
    tol = settings.tolerance if tol is None else tol
    p, q = spec.p, spec.q
    dual = spec.power_of_weight(-q, f"{spec.w.label}^(-{q:g})")
    criterion = improper_integral(dual, tol)

    weighted = FunctionHandle(
        fn=lambda x: np.power(np.abs(spec.w.raw(x) * tau.raw(x)), p),
        label=f"({spec.w.label}*{tau.label})^{p:g}",
        phase=tau.phase or spec.w.phase,
        knots=tau.knots,
    )
    lhs = integrate(tau, eps, 1.0, tol=tol).value
    weighted_norm = integrate(weighted, eps, 1.0, tol=tol).value ** (1.0 / p)
    dual_norm = integrate(dual, eps, 1.0, tol=tol).value ** (1.0 / q)
    rhs = weighted_norm * dual_norm
    holds = lhs <= rhs * (1.0 + settings.rel_tolerance) + tol
    logger.debug("holder on [%g, 1]: %.12g <= %.12g (%s)", eps, lhs, rhs, holds)
    return HolderReport(lhs, weighted_norm, dual_norm, rhs, holds, criterion.is_convergent, criterion, eps)
