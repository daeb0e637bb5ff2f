"""The entire interpolant F_a with F_a(β_k) = s_k, evaluated in log space.

    F_a(z) = Σ_{k≤K} B_k ∏_{j≠k, j≤J} (1 - z/β_j)²,   B_k = s_k / ∏_{j≠k} (1 - β_k/β_j)²

where s_k = a_1 + ... + a_k. Raw products overflow double precision for
moderate K, so every term is carried as a logarithm and combined with a
max shift.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from src.errors import QuadratureDivergence
from src.quad.panels import integrate
from src.realfunc.handle import FunctionHandle
from src.summation.sequences import BinarySeq
from src.analyticpf.beta import BetaSequence

logger = logging.getLogger(__name__)

_EXTRA_FACTORS = 10


@dataclass(frozen=True)
class LogMagnitude:
    """sign·exp(log_magnitude); sign 0 encodes an exact zero."""

    sign: int
    log_magnitude: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        with np.errstate(over="ignore"):
            return float(self.sign * np.exp(self.log_magnitude))

    def to_dict(self) -> dict:
        return {"sign": self.sign, "log_magnitude": self.log_magnitude}


@dataclass(frozen=True)
class InterpolationSystem:
    """Coefficients of F_a for one bit sequence.

    Attributes:
        beta: Interpolation nodes.
        sequence: Bits, read as a_1 = sequence[0], a_2 = sequence[1], ...
        J: Number of product factors kept (J >= K).
        bits: a_1, ..., a_K.
        partial_sums: s_1, ..., s_K.
        coefficients: B_1, ..., B_K in sign/log form.
    """

    beta: BetaSequence
    sequence: BinarySeq
    J: int
    bits: tuple[int, ...]
    partial_sums: tuple[int, ...]
    coefficients: tuple[LogMagnitude, ...]

    @property
    def K(self) -> int:
        return self.beta.K

    @property
    def nodes(self) -> np.ndarray:
        """β_1, ..., β_J."""
        return np.array([self.beta.value(j) for j in range(1, self.J + 1)])

    @property
    def active(self) -> np.ndarray:
        return np.array([c.sign != 0 for c in self.coefficients])

    @property
    def log_coefficients(self) -> np.ndarray:
        return np.array([c.log_magnitude if c.sign else -np.inf for c in self.coefficients])

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.to_dict(),
            "sequence": str(self.sequence),
            "J": self.J,
            "bits": list(self.bits),
            "partial_sums": list(self.partial_sums),
            "coefficients": [c.to_dict() for c in self.coefficients],
        }


def log_node_product(beta: BetaSequence, k: int, J: int) -> float:
    """Σ_{j≠k, j≤J} 2·log|1 - β_k/β_j| without forming the ratios' differences directly."""
    log_base = math.log(beta.base)
    terms = []
    for j in range(1, J + 1):
        if j == k:
            continue
        if j > k:
            terms.append(math.log1p(-beta.base ** (k - j)))
        else:
            terms.append((k - j) * log_base + math.log1p(-beta.base ** (j - k)))
    return 2.0 * math.fsum(terms)


def build_system(beta: BetaSequence, a: BinarySeq, J: int | None = None) -> InterpolationSystem:
    """Coefficients B_k = s_k / ∏_{j≠k}(1 - β_k/β_j)² with J product factors."""
    J = beta.K + _EXTRA_FACTORS if J is None else J
    if J < beta.K:
        raise ValueError(f"J must be at least K={beta.K}, got {J}")
    bits = a.bits(beta.K)
    sums = tuple(int(s) for s in np.cumsum(bits))
    coefficients = []
    for k, s in enumerate(sums, start=1):
        if s == 0:
            coefficients.append(LogMagnitude(0, -math.inf))
        else:
            coefficients.append(LogMagnitude(1, math.log(s) - log_node_product(beta, k, J)))
    if bits and bits[0] != 0:
        logger.warning("sequence %s has a_1 = 1; increment checks expect a_1 = 0", a)
    return InterpolationSystem(beta, a, J, bits, sums, tuple(coefficients))


def coeff_B(sys: InterpolationSystem, k: int) -> LogMagnitude:
    """B_k as (sign, log-magnitude)."""
    if not 1 <= k <= sys.K:
        raise IndexError(f"k must lie in 1..{sys.K}, got {k}")
    return sys.coefficients[k - 1]


# ----------------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------------


def _factor_logs(sys: InterpolationSystem, z: np.ndarray):
    """log(1 - z/β_j) per node (rows) and point (columns), with exact zeros masked out."""
    nodes = sys.nodes[:, None]
    factors = 1.0 - z[None, :] / nodes
    zero = factors == 0
    with np.errstate(divide="ignore"):
        if np.iscomplexobj(z):
            logs = np.log(np.where(zero, 1.0, factors))
        else:
            logs = np.log(np.abs(np.where(zero, 1.0, factors)))
    return logs, zero


def _term_logs(sys: InterpolationSystem, z: np.ndarray) -> np.ndarray:
    """L[k, m] = log B_k + 2·Σ_{j≠k} log(1 - z_m/β_j); -inf where the term vanishes."""
    logs, zero = _factor_logs(sys, z)
    K = sys.K
    total = logs.sum(axis=0)
    zeros_total = zero.sum(axis=0)
    own = logs[:K]
    other_zeros = zeros_total[None, :] - zero[:K]
    L = sys.log_coefficients[:, None] + 2.0 * (total[None, :] - own)
    dead = (other_zeros > 0) | ~sys.active[:, None]
    return np.where(dead, -np.inf, L), dead


@dataclass(frozen=True)
class FEvaluation:
    """F_a at one or more points.

    Attributes:
        value: F_a(z); ±inf when the magnitude exceeds double precision.
        log_magnitude: log|F_a(z)|, finite even when ``value`` overflows.
        overflow: True where ``value`` is not representable.
        error_bound: Bound from dropping the factors j > J.
        series_tail_bound: Coarse bound on the terms k > K of the infinite family.
    """

    value: float | complex | np.ndarray
    log_magnitude: float | np.ndarray
    overflow: bool | np.ndarray
    error_bound: float | np.ndarray
    series_tail_bound: float | np.ndarray

    def to_dict(self) -> dict:
        def plain(v):
            if isinstance(v, np.ndarray):
                return [plain(x) for x in v.tolist()]
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return v

        return {
            "value": plain(self.value),
            "log_magnitude": plain(self.log_magnitude),
            "overflow": plain(self.overflow),
            "error_bound": plain(self.error_bound),
            "series_tail_bound": plain(self.series_tail_bound),
        }


def _combine(L: np.ndarray, weights: np.ndarray | None = None):
    """Σ_k weights_k·exp(L_k) per column as (log|sum|, sum or None, log Σ|terms|)."""
    real_L = L.real if np.iscomplexobj(L) else L
    shift = np.max(real_L, axis=0)
    finite = np.isfinite(shift)
    safe = np.where(finite, shift, 0.0)
    with np.errstate(under="ignore", invalid="ignore"):
        scaled = np.exp(L - safe[None, :])
        if weights is not None:
            scaled = scaled * weights
        total = scaled.sum(axis=0)
        abs_total = np.abs(scaled).sum(axis=0)
    with np.errstate(divide="ignore"):
        log_abs = np.where(finite, safe + np.log(np.abs(total)), -np.inf)
        log_sum_abs = np.where(finite, safe + np.log(abs_total), -np.inf)
    return log_abs, safe, total, finite, log_sum_abs


def _series_tail(sys: InterpolationSystem, z: np.ndarray) -> np.ndarray:
    base, K = sys.beta.base, sys.K
    envelope = 2.0 * np.log1p(np.abs(z)[None, :] / sys.nodes[:, None]).sum(axis=0)
    ks = np.arange(K + 1, K + 51)
    log_weights = np.log(4.0 * ks) - 2.0 * ks * math.log(base)
    with np.errstate(over="ignore"):
        return np.exp(logsumexp(log_weights) + envelope)


def eval_F(sys: InterpolationSystem, z: float | complex | np.ndarray) -> FEvaluation:
    """F_a(z) for real or complex z, scalar or array."""
    arr = np.asarray(z)
    complex_input = np.iscomplexobj(arr)
    flat = np.atleast_1d(arr).ravel().astype(complex if complex_input else float)
    L, _ = _term_logs(sys, flat)

    if complex_input:
        log_abs, shift, total, finite, log_sum_abs = _combine(L)
        with np.errstate(over="ignore", invalid="ignore"):
            value = np.where(finite, np.exp(shift) * total, 0.0 + 0.0j)
    else:
        finite = np.isfinite(L.max(axis=0))
        log_abs = np.where(finite, logsumexp(np.where(finite[None, :], L, 0.0), axis=0), -np.inf)
        log_sum_abs = log_abs
        with np.errstate(over="ignore"):
            value = np.where(finite, np.exp(log_abs), 0.0)
    overflow = ~np.isfinite(value)

    t = 2.0 * np.abs(flat) * sys.beta.base ** (-sys.J) / (sys.beta.base - 1.0)
    with np.errstate(over="ignore", divide="ignore"):
        error = np.where(np.isfinite(log_sum_abs), np.exp(log_sum_abs) * np.expm1(t), 0.0)
    tail = _series_tail(sys, flat)

    if arr.ndim == 0:
        v = complex(value[0]) if complex_input else float(value[0])
        return FEvaluation(v, float(log_abs[0]), bool(overflow[0]), float(error[0]), float(tail[0]))
    shape = arr.shape
    return FEvaluation(value.reshape(shape), log_abs.reshape(shape), overflow.reshape(shape),
                       error.reshape(shape), tail.reshape(shape))


def termwise_derivative(sys: InterpolationSystem, z: float | complex | np.ndarray):
    """F_a'(z) by the product rule: Σ_k term_k(z)·Σ_{j≠k} 2/(z - β_j)."""
    arr = np.asarray(z)
    complex_input = np.iscomplexobj(arr)
    flat = np.atleast_1d(arr).ravel().astype(complex if complex_input else float)
    L, dead = _term_logs(sys, flat)
    diff = flat[None, :] - sys.nodes[:, None]
    zero = diff == 0
    with np.errstate(divide="ignore"):
        inv = np.where(zero, 0.0, 2.0 / np.where(zero, 1.0, diff))
    D = inv.sum(axis=0)[None, :] - inv[: sys.K]
    D = np.where(dead, 0.0, D)

    if complex_input:
        _, shift, total, finite, _ = _combine(L, D)
        with np.errstate(over="ignore", invalid="ignore"):
            value = np.where(finite, np.exp(shift) * total, 0.0 + 0.0j)
    else:
        with np.errstate(divide="ignore"):
            logs = np.where(D != 0, L + np.log(np.abs(np.where(D != 0, D, 1.0))), -np.inf)
        live = np.isfinite(logs).any(axis=0)
        out = np.zeros(flat.shape)
        if np.any(live):
            mag, sign = logsumexp(logs[:, live], axis=0, b=np.sign(D[:, live]), return_sign=True)
            with np.errstate(over="ignore"):
                out[live] = sign * np.exp(mag)
        value = out
    return value[0].item() if arr.ndim == 0 else value.reshape(arr.shape)


# ----------------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthReport:
    """log|F(-ρ)| against log C + g(ρ)·log(4ρ²), C fitted at the smallest ρ."""

    rhos: tuple[float, ...]
    log_values: tuple[float, ...]
    log_bounds: tuple[float, ...]
    log_C: float
    holds: bool
    vacuous: bool

    def to_dict(self) -> dict:
        return {
            "rhos": list(self.rhos),
            "log_values": list(self.log_values),
            "log_bounds": list(self.log_bounds),
            "log_C": self.log_C,
            "holds": self.holds,
            "vacuous": self.vacuous,
        }


def check_growth(sys: InterpolationSystem, rhos=None, slack: float = 1e-9) -> GrowthReport:
    """Growth of F along the negative axis against (4ρ²)^g(ρ)."""
    rhos = np.sort(np.asarray(sys.beta.betas if rhos is None else rhos, dtype=float))
    log_values = np.asarray(eval_F(sys, -rhos).log_magnitude)
    shape = np.asarray(sys.beta.g(rhos)) * np.log(4.0 * rhos**2)
    if not np.any(np.isfinite(log_values)):
        return GrowthReport(tuple(rhos), tuple(log_values), tuple(shape), -math.inf, True, True)
    log_C = float(log_values[0] - shape[0])
    bounds = log_C + shape
    holds = bool(np.all(log_values <= bounds + slack))
    logger.info("growth check over %d radii: log C = %.6g, holds=%s", len(rhos), log_C, holds)
    return GrowthReport(tuple(rhos.tolist()), tuple(log_values.tolist()), tuple(bounds.tolist()),
                        log_C, holds, False)


@dataclass(frozen=True)
class DecayReport:
    """|B_k| against C·s_k·base^(-2k), C fitted at the first k with s_k > 0.

    ``chain_ratios`` holds |B_k| / (s_k·(β_{k-1}/β_k)²) for k >= 2.
    """

    ratios: dict[int, float]
    chain_ratios: dict[int, float]
    C: float
    fitted_at: int | None
    holds: bool

    def to_dict(self) -> dict:
        return {
            "ratios": {str(k): v for k, v in self.ratios.items()},
            "chain_ratios": {str(k): v for k, v in self.chain_ratios.items()},
            "C": self.C,
            "fitted_at": self.fitted_at,
            "holds": self.holds,
        }


def check_coefficient_decay(sys: InterpolationSystem, slack: float = 1e-9) -> DecayReport:
    log_base = math.log(sys.beta.base)
    ratios, chain = {}, {}
    for k, (coefficient, s) in enumerate(zip(sys.coefficients, sys.partial_sums), start=1):
        if s == 0:
            continue
        log_ratio = coefficient.log_magnitude - math.log(s)
        ratios[k] = math.exp(log_ratio + 2 * k * log_base)
        if k >= 2:
            chain[k] = math.exp(log_ratio + 2 * log_base)
    if not ratios:
        return DecayReport({}, {}, 0.0, None, True)
    first = min(ratios)
    C = ratios[first]
    holds = all(r <= C * (1.0 + slack) for r in ratios.values())
    return DecayReport(ratios, chain, C, first, holds)


@dataclass(frozen=True)
class CauchyDerivative:
    """F'(z) from Cauchy's formula on |s| = radius, with the termwise cross-check.

    ``bound`` is the Cauchy estimate radius·max|F| / (radius - |z|)².
    """

    value: float | complex
    nodes: int
    radius: float
    termwise: float | complex
    discrepancy: float
    bound: float

    def to_dict(self) -> dict:
        def plain(v):
            return {"re": v.real, "im": v.imag} if isinstance(v, complex) else v

        return {
            "value": plain(self.value),
            "nodes": self.nodes,
            "radius": self.radius,
            "termwise": plain(self.termwise),
            "discrepancy": self.discrepancy,
            "bound": self.bound,
        }


def deriv_via_cauchy(sys: InterpolationSystem, z: float | complex, rho: float | None = None,
                     radius_factor: float = 2.0, tol: float = 1e-10,
                     max_nodes: int = 4096) -> CauchyDerivative:
    """F'(z) = (1/2πi)∮ F(s)/(s - z)² ds by the trapezoid rule on a circle.

    Raises:
        QuadratureDivergence: If doubling the nodes up to ``max_nodes`` does not settle.
    """
    rho = max(abs(z), 1.0) if rho is None else rho
    if abs(z) > rho:
        raise ValueError(f"|z|={abs(z)!r} exceeds rho={rho!r}")
    radius = radius_factor * rho
    termwise = termwise_derivative(sys, z)

    previous, spread, M = None, math.inf, 32
    while M <= max_nodes:
        s = radius * np.exp(2j * np.pi * np.arange(M) / M)
        L, _ = _term_logs(sys, s)
        log_abs, shift, total, finite, _ = _combine(L)
        peak = float(np.max(np.where(finite, log_abs, -np.inf)))
        if not math.isfinite(peak):
            return CauchyDerivative(0.0 if np.isrealobj(z) else 0j, M, radius, termwise, 0.0, 0.0)
        kernel = s / (s - z) ** 2
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            values = np.where(finite, np.exp(shift - peak) * total, 0.0) * kernel
        estimate = values.mean() * math.exp(peak)
        scale = np.abs(values).mean() * math.exp(peak)
        if previous is not None:
            spread = abs(estimate - previous)
            if spread <= tol * max(scale, 1e-300):
                value = estimate.real if np.isrealobj(z) else complex(estimate)
                bound = radius * math.exp(peak) / (radius - abs(z)) ** 2
                discrepancy = abs(value - termwise)
                logger.debug("cauchy derivative at %s settled with %d nodes", z, M)
                return CauchyDerivative(value, M, radius, termwise, float(discrepancy), float(bound))
        previous = estimate
        M *= 2
    raise QuadratureDivergence(M // 2, float(spread))


@dataclass(frozen=True)
class IncrementRecord:
    k: int
    bit: int
    difference: float
    quadrature: float

    def to_dict(self) -> dict:
        return {"k": self.k, "bit": self.bit, "difference": self.difference, "quadrature": self.quadrature}


@dataclass(frozen=True)
class IncrementReport:
    """F(β_{k+1}) - F(β_k) and ∫_{α_{k+1}}^{α_k} F'(1/t)/t² dt against a_{k+1}."""

    records: tuple[IncrementRecord, ...]
    holds: bool
    convention_ok: bool
    max_bit_error: float
    max_route_gap: float

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "holds": self.holds,
            "convention_ok": self.convention_ok,
            "max_bit_error": self.max_bit_error,
            "max_route_gap": self.max_route_gap,
        }


def pulled_back_derivative(sys: InterpolationSystem) -> FunctionHandle:
    """f_1(t) = F'(1/t)·t^-2 on (0, 1]."""
    return FunctionHandle(
        fn=lambda t: np.asarray(termwise_derivative(sys, 1.0 / np.asarray(t, dtype=float))) / t**2,
        label=f"F'(1/t)/t^2[{sys.sequence}]",
    )


def increment_check(sys: InterpolationSystem, tol: float = 1e-6) -> IncrementReport:
    """Both routes for every consecutive pair of nodes."""
    betas = np.array(sys.beta.betas)
    values = np.asarray(eval_F(sys, betas).value, dtype=float)
    f1 = pulled_back_derivative(sys)
    records = []
    for k in range(1, sys.K):
        difference = float(values[k] - values[k - 1])
        lo, hi = 1.0 / betas[k], 1.0 / betas[k - 1]
        quadrature = integrate(f1, lo, hi, tol=1e-12, rel_tol=1e-13).value
        records.append(IncrementRecord(k, sys.bits[k], difference, quadrature))
    bit_error = max((max(abs(r.difference - r.bit), abs(r.quadrature - r.bit)) for r in records), default=0.0)
    gap = max((abs(r.difference - r.quadrature) for r in records), default=0.0)
    convention_ok = not sys.bits or sys.bits[0] == 0
    holds = bit_error <= tol and gap <= tol
    logger.info("increment check for %s: bit error %.3g, route gap %.3g", sys.sequence, bit_error, gap)
    return IncrementReport(tuple(records), holds, convention_ok, float(bit_error), float(gap))
