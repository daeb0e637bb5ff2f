"""Divergence witnesses: nonnegative τ with ∫_0^1 τ = ∞, and their weight specs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.config import settings
from src.quad.panels import CumulativeIntegral, integrate
from src.realfunc.gluing import GluingProfile
from src.realfunc.handle import FunctionHandle


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """A weight w > 0 on (0, 1] and an exponent p in [1, ∞].

    Attributes:
        p: Integrability exponent; ``math.inf`` for the sup norm.
        w: Weight handle.
    """

    p: float
    w: FunctionHandle

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must lie in [1, inf], got {self.p!r}")
        samples = self.w.raw(np.geomspace(settings.epsilon_min, 1.0, 256))
        if not np.all(samples > 0):
            raise ValueError(f"weight {self.w.label} is not strictly positive at sampled points")

    @property
    def q(self) -> float:
        """Conjugate exponent p/(p-1)."""
        if math.isinf(self.p):
            return 1.0
        if self.p == 1:
            return math.inf
        return self.p / (self.p - 1.0)

    def power_of_weight(self, exponent: float, label: str) -> FunctionHandle:
        """Handle of x -> w(x)^exponent."""
        return FunctionHandle(
            fn=lambda x: np.power(self.w.raw(x), exponent),
            label=label,
            domain=self.w.domain,
            phase=self.w.phase,
            knots=self.w.knots,
            smoothness_order=self.w.smoothness_order,
            parent=self.w,
        )

    def to_dict(self) -> dict:
        return {"p": "inf" if math.isinf(self.p) else self.p, "w": self.w.label}


@dataclass(frozen=True, eq=False)
class WitnessBundle:
    """A witness τ with its construction data and tabulated mass θ(x) = ∫_x^1 τ.

    Attributes:
        tau: The witness handle.
        source: "L10" (built from f), "P44" (built from a weight) or "direct".
        mass: Table of θ on [floor, 1].
        profile: Gluing profile with τ = profile·base (L10 only).
        intervals: Core intervals (b_j, c_j).
        epsilons: Transition widths below each core.
        sign: +1 when built from f, -1 when built from -f.
        base: The handle glued (f or -f) for L10 bundles.
        weight: The weight spec for P44 bundles.
        details: Criterion verdicts and other construction facts.
    """

    tau: FunctionHandle
    source: str
    mass: CumulativeIntegral
    profile: GluingProfile | None = None
    intervals: tuple[tuple[float, float], ...] = ()
    epsilons: tuple[float, ...] = ()
    sign: int = 1
    base: FunctionHandle | None = None
    weight: WeightSpec | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tau(cls, tau: FunctionHandle, floor: float | None = None,
                 tol: float | None = None) -> "WitnessBundle":
        """Bundle for a τ given directly, e.g. x -> 1/x."""
        floor = settings.epsilon_min if floor is None else floor
        samples = tau.raw(np.geomspace(floor, 1.0, 10_000))
        if np.any(samples < -1e-12):
            raise ValueError(f"{tau.label} is negative at sampled points")
        mass = CumulativeIntegral.build(tau, floor, 1.0, tol=tol)
        return cls(tau=tau, source="direct", mass=mass)

    @property
    def floor(self) -> float:
        return self.mass.floor

    def theta(self, x: float | np.ndarray) -> float | np.ndarray:
        return self.mass(x)

    def divergence_trace(self, n_start: int = 4) -> tuple[tuple[float, float], ...]:
        """Pairs (2^-n, ∫_{2^-n}^1 τ) for every dyadic ε inside the table."""
        n_stop = math.floor(-math.log2(self.floor))
        eps = np.array([2.0**-n for n in range(n_start, n_stop + 1)])
        return tuple(zip(eps.tolist(), np.atleast_1d(self.mass(eps)).tolist()))

    def residual_mass(self, lo: float = 1e-6) -> float:
        """∫_lo^1 (base⁺ - τ): the mass of the divergent part left outside the cores."""
        if self.base is None:
            raise ValueError("residual mass is defined for bundles glued from a function")
        plus = self.base.positive_part()
        gap = FunctionHandle(
            fn=lambda x: plus.raw(x) - self.tau.raw(x),
            label=f"({self.base.label})+ - tau",
            domain=self.tau.domain,
            phase=self.tau.phase,
            knots=self.tau.knots,
        )
        return integrate(gap, lo, 1.0).value

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "tau": self.tau.label,
            "sign": self.sign,
            "floor": self.floor,
            "core_count": len(self.intervals),
            "intervals": [list(iv) for iv in self.intervals],
            "epsilons": list(self.epsilons),
            "weight": None if self.weight is None else self.weight.to_dict(),
            "divergence_trace": [list(p) for p in self.divergence_trace()],
            "details": {k: (v.to_dict() if hasattr(v, "to_dict") else v) for k, v in self.details.items()},
        }
