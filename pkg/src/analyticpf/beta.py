"""Geometric interpolation nodes β_k = base^k with base > 5."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.errors import BaseTooSmall

MIN_BASE = 5.0


@dataclass(frozen=True)
class BetaSequence:
    """Nodes β_1 < ... < β_K with β_k = base^k > 5^k.

    The generator G(k) = base^k has inverse g(x) = log_base(x), and the
    companion weight is W(t) = t^(2g(t) - 1).
    """

    base: float
    K: int

    def value(self, k: int) -> float:
        return float(self.base) ** k

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(self.value(k) for k in range(1, self.K + 1))

    @property
    def alphas(self) -> tuple[float, ...]:
        """Reciprocal nodes α_k = 1/β_k on the x-side."""
        return tuple(1.0 / b for b in self.betas)

    @property
    def description(self) -> str:
        return f"G(k) = {self.base:g}^k"

    def g(self, x: float | np.ndarray) -> float | np.ndarray:
        return np.log(x) / math.log(self.base)

    def W(self, t: float | np.ndarray) -> float | np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.power(t, 2.0 * self.g(t) - 1.0)

    def to_dict(self) -> dict:
        return {"base": self.base, "K": self.K, "betas": list(self.betas), "generator": self.description}


def make_beta(K: int, base: float = 6.0) -> BetaSequence:
    """β_k = base^k for k = 1..K.

    Raises:
        BaseTooSmall: If base <= 5.
    """
    if not base > MIN_BASE:
        raise BaseTooSmall(base)
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    return BetaSequence(float(base), int(K))
