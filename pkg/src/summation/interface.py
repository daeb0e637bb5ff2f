"""From an antiderivative to a summation operator.

For a bit sequence a, the windows (α_{n+1}, α_n) with a_n = 0 form an open
set O_a. A profile h is 1 on the remaining windows and vanishes on O_a away
from short transitions, so

    x_{k;a} = -([P(τh)](α_k) + ∫_{α_N}^{α_k} (χ_{O_a^c} τ - τh))

changes by exactly a_k between consecutive windows. S(a)_k = x_{k+1;a} then
equals Σ(a)_k plus a constant.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.errors import PartitionTooShallow
from src.quad.panels import integrate
from src.realfunc.antiderivative import AnchoredAntiderivative
from src.realfunc.gluing import GluingProfile, make_semigroup_element
from src.realfunc.handle import FunctionHandle
from src.summation.operators import standard_sum
from src.summation.sequences import BinarySeq
from src.witness.bundle import WitnessBundle
from src.witness.partition import PartitionSequence

logger = logging.getLogger(__name__)

_TRANSITION_SHARE = 0.25
_MAX_SAMPLES = 257


def _window_sup(tau: FunctionHandle, lo: float, hi: float) -> float:
    xs = np.geomspace(lo, hi, _MAX_SAMPLES)
    arches = tau.breakpoints(lo, hi)
    if len(arches) > 4 * _MAX_SAMPLES:
        arches = arches[:: len(arches) // (4 * _MAX_SAMPLES)]
    return float(np.max(tau.raw(np.concatenate([xs, arches]))))


def _runs(bits: tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal index ranges [i, j] with bits[i..j] all 1."""
    runs, start = [], None
    for n, bit in enumerate(bits + (0,)):
        if bit and start is None:
            start = n
        elif not bit and start is not None:
            runs.append((start, n - 1))
            start = None
    return runs


def build_mask(a: BinarySeq, part: PartitionSequence, bundle: WitnessBundle) -> GluingProfile:
    """Profile equal to 1 on the windows with a_n = 1 and vanishing on the others.

    Transitions reach into zero windows by δ_n = min(w_n/4, 2^-(n+3) / (2 sup τ)),
    so their total τ-mass stays below 1/2.

    Raises:
        PartitionTooShallow: If the partition has fewer windows than the prefix of a.
    """
    if part.K < max(len(a.prefix), 1):
        raise PartitionTooShallow(max(len(a.prefix), 1), part.K)
    bits = a.bits(part.K)
    alphas = part.alphas
    delta = {}
    for n, bit in enumerate(bits):
        if bit:
            continue
        lo, hi = part.window(n)
        peak = _window_sup(bundle.tau, lo, hi)
        limit = 2.0 ** -(n + 3) / (2.0 * peak) if peak > 0 else math.inf
        delta[n] = min(_TRANSITION_SHARE * (hi - lo), limit)

    cores, widths = [], []
    for i, j in _runs(bits):
        below = delta.get(j + 1, 0.5 * alphas[-1])
        above = delta[i - 1] if i > 0 else _TRANSITION_SHARE
        cores.append((alphas[j + 1], alphas[i]))
        widths.append((below, above))
    logger.debug("mask for %s: %d cores over %d windows", a, len(cores), part.K)
    if not cores:
        return GluingProfile(cores=np.empty((0, 2)), widths=np.empty((0, 2)))
    return GluingProfile.from_intervals(cores, widths)


def mask_defect(a: BinarySeq, part: PartitionSequence, bundle: WitnessBundle,
                profile: GluingProfile | None = None, tol: float | None = None) -> float:
    """∫_{α_K}^1 |χ_{O_a^c} τ - τh|: the τh mass left inside the zero windows."""
    profile = build_mask(a, part, bundle) if profile is None else profile
    masked = make_semigroup_element(bundle.tau, profile, tol=tol)
    bits = a.bits(part.K)
    return math.fsum(integrate(masked, *part.window(n), tol=tol).value
                     for n, bit in enumerate(bits) if not bit)


@dataclass(frozen=True)
class SummationTrace:
    """The values x_{k;a} and the resulting summation S(a).

    Attributes:
        sequence: The input bits.
        N: Truncation depth.
        x_values: x_{0;a}, ..., x_{N;a}.
        increments: x_{k+1;a} - x_{k;a}, expected to equal a_k.
        s_terms: S(a)_k = x_{k+1;a} for k < N.
        standard: Σ(a) truncated to N terms.
        constant_estimate: Mean of S(a) - Σ(a).
        mask_defect: τh mass inside the zero windows.
        anchor: Anchor of the antiderivative used.
    """

    sequence: BinarySeq
    N: int
    x_values: tuple[float, ...]
    increments: tuple[float, ...]
    s_terms: tuple[float, ...]
    standard: tuple[float, ...]
    constant_estimate: float
    mask_defect: float
    anchor: float

    @property
    def increment_error(self) -> float:
        """Largest |x_{k+1;a} - x_{k;a} - a_k|."""
        bits = self.sequence.bits(self.N)
        return max((abs(d - b) for d, b in zip(self.increments, bits)), default=0.0)

    def to_dict(self) -> dict:
        return {
            "sequence": str(self.sequence),
            "N": self.N,
            "x_values": list(self.x_values),
            "increments": list(self.increments),
            "s_terms": list(self.s_terms),
            "standard": list(self.standard),
            "constant_estimate": self.constant_estimate,
            "mask_defect": self.mask_defect,
            "increment_error": self.increment_error,
            "anchor": self.anchor,
        }


def interface_sum(a: BinarySeq, part: PartitionSequence, bundle: WitnessBundle,
                  P: AnchoredAntiderivative | None = None, N: int | None = None,
                  tol: float | None = None) -> SummationTrace:
    """Summation of a produced by the antiderivative P through a masked witness.

    Args:
        a: Input bits.
        part: Unit-mass partition of the bundle's τ.
        bundle: The witness.
        P: Antiderivative; anchored at α_N with zero constant when None.
        N: Truncation depth; the partition depth when None.
        tol: Quadrature tolerance.

    Raises:
        PartitionTooShallow: If N exceeds the partition or the mask cannot be built.
    """
    N = part.K if N is None else N
    if not 1 <= N <= part.K:
        raise PartitionTooShallow(N, part.K)
    profile = build_mask(a, part, bundle)
    masked = make_semigroup_element(bundle.tau, profile, tol=tol)
    alphas = np.array(part.alphas[: N + 1])
    P = AnchoredAntiderivative(anchor=float(alphas[-1]), tol=tol) if P is None else P
    primitive = P(masked)
    p_values = np.atleast_1d(primitive(alphas))

    bits = a.bits(N)
    inside = [integrate(masked, *part.window(n), tol=tol).value if not bits[n] else 0.0
              for n in range(N)]
    # ∫_{α_N}^{α_k} (χ τ - τh) = -(τh mass of the zero windows between α_N and α_k)
    correction = [-math.fsum(inside[k:]) for k in range(N + 1)]
    x_values = [-(float(p) + c) for p, c in zip(p_values, correction)]
    increments = tuple(float(d) for d in np.diff(x_values))
    s_terms = tuple(x_values[1:])
    standard = tuple(standard_sum(a, N))
    constant = float(np.mean(np.subtract(s_terms, standard)))
    defect = math.fsum(inside) + math.fsum(
        integrate(masked, *part.window(n), tol=tol).value
        for n, bit in enumerate(a.bits(part.K)) if n >= N and not bit
    )
    logger.info("interface sum of %s over %d windows: constant %.12g, defect %.3g",
                a, N, constant, defect)
    return SummationTrace(
        sequence=a,
        N=N,
        x_values=tuple(x_values),
        increments=increments,
        s_terms=s_terms,
        standard=standard,
        constant_estimate=constant,
        mask_defect=defect,
        anchor=P.anchor,
    )
