"""Smooth gluing profiles and the multiplicative semigroup generated by a function."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.config import settings
from src.errors import ProfileOutOfRange
from src.realfunc.handle import FunctionHandle

logger = logging.getLogger(__name__)


def smooth_step(t: float | np.ndarray) -> np.ndarray:
    """C-infinity transition: 0 for t <= 0, 1 for t >= 1.

    Ratio ψ(t)/(ψ(t) + ψ(1-t)) with ψ(t) = exp(-1/t) on t > 0 and 0 elsewhere.
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        up = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        down = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return up / (up + down)


class Profile(ABC):
    """A smooth multiplier h on (0, 1]."""

    @abstractmethod
    def __call__(self, x: float | np.ndarray) -> np.ndarray:
        ...

    def knots(self, lo: float, hi: float) -> np.ndarray:
        """Edges of transitions inside (lo, hi)."""
        return np.empty(0)

    def __mul__(self, other: "Profile") -> "ProfileProduct":
        return ProfileProduct((self, other))


@dataclass(frozen=True, eq=False)
class ProfileProduct(Profile):
    """Pointwise product of profiles."""

    factors: tuple[Profile, ...]

    def __call__(self, x):
        out = np.ones_like(np.asarray(x, dtype=float))
        for factor in self.factors:
            out = out * factor(x)
        return out

    def knots(self, lo, hi):
        return np.unique(np.concatenate([f.knots(lo, hi) for f in self.factors]))


@dataclass(frozen=True, eq=False)
class GluingProfile(Profile):
    """Equal to 1 on each core [b_j, c_j], 0 outside the cores inflated by their widths.

    Cores are kept sorted by left endpoint so that evaluation only inspects the
    two cores around each point, which keeps profiles with 10^5 cores cheap.

    Attributes:
        cores: Array of shape (m, 2) with rows (b_j, c_j), ascending.
        widths: Array of shape (m, 2) with the transition widths below b_j and above c_j.
        terminal: When True the lowest core extends down to 0.
        amplitude: Scale of the profile; values lie in [0, amplitude].
    """

    cores: np.ndarray
    widths: np.ndarray
    terminal: bool = False
    amplitude: float = 1.0

    def __post_init__(self):
        cores = np.asarray(self.cores, dtype=float).reshape(-1, 2)
        widths = np.asarray(self.widths, dtype=float).reshape(-1, 2)
        order = np.argsort(cores[:, 0], kind="stable")
        cores, widths = cores[order], widths[order]
        if len(cores) != len(widths):
            raise ValueError("each core needs a pair of transition widths")
        if np.any(cores[:, 1] < cores[:, 0]) or np.any(widths <= 0):
            raise ValueError("cores need b <= c and positive transition widths")
        if len(cores) > 1:
            gap = (cores[1:, 0] - widths[1:, 0]) - (cores[:-1, 1] + widths[:-1, 1])
            if np.any(gap < 0):
                raise ValueError("inflated cores overlap")
        if self.terminal and len(cores):
            cores[0, 0] = 0.0
        edges = np.column_stack([
            cores[:, 0] - widths[:, 0], cores[:, 0], cores[:, 1], cores[:, 1] + widths[:, 1],
        ]).ravel()
        object.__setattr__(self, "cores", cores)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "_edges", np.sort(edges[np.isfinite(edges)]))

    @classmethod
    def from_intervals(cls, cores: Sequence[tuple[float, float]],
                       widths: Sequence[tuple[float, float]] | Sequence[float],
                       terminal: bool = False) -> "GluingProfile":
        """Build from (b, c) pairs and either one width per core or (below, above) pairs."""
        w = np.asarray(widths, dtype=float)
        if w.ndim == 1:
            w = np.column_stack([w, w])
        return cls(cores=np.asarray(cores, dtype=float), widths=w, terminal=terminal)

    @classmethod
    def identity(cls) -> "GluingProfile":
        return cls(cores=np.array([[0.0, np.inf]]), widths=np.array([[1.0, 1.0]]), terminal=True)

    def __len__(self) -> int:
        return len(self.cores)

    def __call__(self, x: float | np.ndarray) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        flat = arr.ravel()
        out = np.zeros_like(flat)
        if len(self.cores) == 0:
            return out.reshape(arr.shape)
        b, c = self.cores[:, 0], self.cores[:, 1]
        below, above = self.widths[:, 0], self.widths[:, 1]
        idx = np.searchsorted(b, flat, side="right") - 1

        # at or above b_idx: only the falling edge of core idx matters
        mask = idx >= 0
        i = idx[mask]
        with np.errstate(invalid="ignore"):
            out[mask] += smooth_step((c[i] + above[i] - flat[mask]) / above[i])

        # below b_{idx+1}: only its rising edge matters
        j = idx + 1
        mask = j < len(b)
        j = j[mask]
        out[mask] += smooth_step((flat[mask] - (b[j] - below[j])) / below[j])
        return (self.amplitude * out).reshape(arr.shape)

    def knots(self, lo: float, hi: float) -> np.ndarray:
        edges = self._edges
        return edges[np.searchsorted(edges, lo, side="right"):np.searchsorted(edges, hi, side="left")]

    def to_dict(self) -> dict:
        return {
            "cores": self.cores.tolist(),
            "widths": self.widths.tolist(),
            "terminal": self.terminal,
        }


def _profile_samples(f: FunctionHandle, h: Profile, grid: int) -> np.ndarray:
    lo, hi = f.domain
    top = hi if np.isfinite(hi) else max(1.0, 2.0 * lo)
    bottom = max(lo, settings.epsilon_min) if lo > 0 else settings.epsilon_min
    xs = np.geomspace(bottom, top, grid)
    return np.concatenate([xs, h.knots(lo, top)])


def make_semigroup_element(f: FunctionHandle, h: Profile, grid: int = 512,
                           tol: float | None = None) -> FunctionHandle:
    """Return the handle x -> h(x)·f(x), an element of the semigroup generated by f.

    Raises:
        ProfileOutOfRange: If some sampled |h| exceeds 1 + tol.
    """
    tol = settings.tolerance if tol is None else tol
    xs = _profile_samples(f, h, grid)
    values = np.abs(h(xs))
    worst = int(np.argmax(values)) if len(values) else 0
    if len(values) and values[worst] > 1.0 + tol:
        raise ProfileOutOfRange(float(xs[worst]), float(values[worst]))

    def knots(lo: float, hi: float) -> np.ndarray:
        return np.unique(np.concatenate([f.breakpoints(lo, hi), h.knots(lo, hi)]))

    logger.debug("semigroup element of %s with %d sampled profile points", f.label, len(xs))
    return FunctionHandle(
        fn=lambda x: h(x) * f.raw(x),
        smoothness_order=f.smoothness_order,
        label=f"h*{f.label}",
        domain=f.domain,
        phase=f.phase,
        knots=knots,
        numeric_fallback=f.numeric_fallback,
        parent=f,
        profile=h,
    )
