"""Unit-mass partition 1 = α_0 > α_1 > ... > α_K > 0 of a witness."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from src.errors import PreconditionFailed, RangeExhausted
from src.quad.improper import l1_classify
from src.quad.panels import integrate
from src.quad.results import L1Verdict
from src.witness.bundle import WitnessBundle

logger = logging.getLogger(__name__)

_RESIDUAL_LIMIT = 1e-9


@dataclass(frozen=True)
class DivergenceCheck:
    """Whether a witness τ is ruled out of L1 near 0.

    ``reason`` is the L1 verdict of τ; only "L1" fails the check.
    """

    label: str
    verdict: L1Verdict

    @property
    def ok(self) -> bool:
        return self.verdict is not L1Verdict.L1

    @property
    def reason(self) -> str:
        return f"witness {self.label} is {self.verdict.value}"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "tau": self.label, "reason": self.verdict.value}


@dataclass(frozen=True)
class PartitionSequence:
    """Points with θ(α_k) = k, where θ(x) = ∫_x^1 τ.

    Attributes:
        alphas: α_0 = 1 > α_1 > ... > α_K.
        residuals: |θ(α_k) - k| for each k.
        bundle: The witness the partition was built from.
    """

    alphas: tuple[float, ...]
    residuals: tuple[float, ...]
    bundle: WitnessBundle = field(repr=False, compare=False)

    @property
    def K(self) -> int:
        return len(self.alphas) - 1

    def window(self, n: int) -> tuple[float, float]:
        """The n-th window [α_{n+1}, α_n]."""
        if not 0 <= n < self.K:
            raise IndexError(f"window {n} outside 0..{self.K - 1}")
        return self.alphas[n + 1], self.alphas[n]

    def unit_masses(self, tol: float | None = None) -> list[float]:
        """∫ τ over each window, by fresh quadrature rather than the mass table."""
        return [integrate(self.bundle.tau, *self.window(n), tol=tol).value for n in range(self.K)]

    def to_dict(self) -> dict:
        return {"K": self.K, "alphas": list(self.alphas), "residuals": list(self.residuals)}


def build_partition(bundle: WitnessBundle, K: int | None = None) -> PartitionSequence:
    """Solve θ(α_k) = k for k = 1..K on the bundle's mass table.

    Args:
        bundle: Witness bundle with a tabulated mass.
        K: Partition depth; None takes every whole unit the table reaches.

    Raises:
        PreconditionFailed: If τ is classified L1, so θ stays bounded.
        RangeExhausted: If θ(floor) < K.
    """
    if K is not None and K < 0:
        raise ValueError(f"K must be nonnegative, got {K}")
    check = DivergenceCheck(bundle.tau.label, l1_classify(bundle.tau))
    if not check.ok:
        raise PreconditionFailed(check)
    reachable = bundle.mass.total
    if K is None:
        K = math.floor(reachable)
    if K > reachable:
        raise RangeExhausted(K, reachable)

    trace = [value for _, value in bundle.divergence_trace()]
    if any(b <= a for a, b in zip(trace, trace[1:])):
        logger.warning("divergence trace of %s is not strictly increasing", bundle.tau.label)

    alphas = [1.0]
    residuals = [0.0]
    floor = bundle.floor
    for k in range(1, K + 1):
        upper = alphas[-1]
        if bundle.theta(floor) <= k:
            alpha = floor
        else:
            alpha = brentq(lambda x: bundle.theta(x) - k, floor, upper,
                           xtol=1e-300, rtol=4.5 * 2.0**-52, maxiter=200)
        residual = abs(bundle.theta(alpha) - k)
        if residual >= _RESIDUAL_LIMIT:
            logger.warning("alpha_%d = %.17g misses unit mass by %.3g", k, alpha, residual)
        alphas.append(float(alpha))
        residuals.append(float(residual))
    logger.info("partition of %s: K=%d, alpha_K=%.6g", bundle.tau.label, K, alphas[-1])
    return PartitionSequence(alphas=tuple(alphas), residuals=tuple(residuals), bundle=bundle)
