"""Finite parts of integrals of Laurent polynomials on (0, x]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from src.errors import DomainError
from src.realfunc.handle import FunctionHandle, eval_deriv


@dataclass(frozen=True)
class LaurentData:
    """Finitely many coefficients c_n of Σ c_n x^n, stored as sorted (n, c_n) pairs."""

    terms: tuple[tuple[int, float], ...]

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, float]) -> "LaurentData":
        return cls(tuple(sorted((int(n), float(c)) for n, c in coefficients.items() if c != 0)))

    @classmethod
    def random(cls, rng: np.random.Generator, N: int, M: int | None = None) -> "LaurentData":
        M = N if M is None else M
        return cls.from_mapping({n: float(rng.normal()) for n in range(-N, M + 1)})

    @property
    def coefficients(self) -> dict[int, float]:
        return dict(self.terms)

    @property
    def pole_order(self) -> int:
        return max([0] + [-n for n, _ in self.terms])

    def coefficient(self, n: int) -> float:
        return self.coefficients.get(n, 0.0)

    def __add__(self, other: "LaurentData") -> "LaurentData":
        merged = self.coefficients
        for n, c in other.terms:
            merged[n] = merged.get(n, 0.0) + c
        return LaurentData.from_mapping(merged)

    def scale(self, factor: float) -> "LaurentData":
        return LaurentData.from_mapping({n: factor * c for n, c in self.terms})

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        x = np.asarray(x, dtype=float)
        return sum((c * x**n for n, c in self.terms), np.zeros_like(x))

    def to_dict(self) -> dict:
        return {"coefficients": {str(n): c for n, c in self.terms}, "pole_order": self.pole_order}


@dataclass(frozen=True)
class MeromorphicPF:
    """p.f.∫_0^x Σ c_n s^n ds = finite_part + log_coefficient·log x."""

    finite_part: float
    log_coefficient: float

    def to_dict(self) -> dict:
        return {"finite_part": self.finite_part, "log_coefficient": self.log_coefficient}


def _finite_part(L: LaurentData, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return sum((c * x ** (n + 1) / (n + 1) for n, c in L.terms if n != -1), np.zeros_like(x))


def pf_meromorphic(L: LaurentData, x: float) -> MeromorphicPF:
    """Termwise antiderivative with the endpoint values at 0 discarded.

    Raises:
        DomainError: If x is outside (0, 1].
    """
    if not 0.0 < x <= 1.0:
        raise DomainError(x, (0.0, 1.0), "laurent")
    return MeromorphicPF(float(_finite_part(L, np.array(x))), L.coefficient(-1))


def derivative_residual(L: LaurentData, xs: np.ndarray | None = None) -> float:
    """max |d/dx finite_part + c_{-1}/x - Σ c_n x^n| / max(1, |Σ c_n x^n|) at interior points."""
    xs = np.linspace(0.1, 0.9, 17) if xs is None else np.asarray(xs, dtype=float)
    handle = FunctionHandle(fn=lambda x: _finite_part(L, x), label="pf", numeric_fallback=True)
    derivative = np.asarray(eval_deriv(handle, 1, xs).value)
    target = np.asarray(L(xs))
    residual = np.abs(derivative + L.coefficient(-1) / xs - target) / np.maximum(1.0, np.abs(target))
    return float(residual.max()) if residual.size else 0.0
