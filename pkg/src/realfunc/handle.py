"""Function handles on a half-open interval (lo, hi], with derivatives and germs."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import comb

from src.config import settings
from src.errors import DomainError, OrderUnavailable

logger = logging.getLogger(__name__)

RealMap = Callable[[np.ndarray], np.ndarray]
KnotMap = Callable[[float, float], np.ndarray]

_EMPTY = np.empty(0, dtype=float)


@dataclass(frozen=True, eq=False)
class PhaseMap:
    """Monotone oscillation phase with its inverse.

    Arch points are the preimages of the multiples of π. Quadrature panels and
    level-set scans are aligned to them so that every panel sees at most one
    half-oscillation.

    Attributes:
        phase: Vectorized monotone map x -> φ(x).
        inverse: Vectorized inverse u -> φ^{-1}(u).
        description: Human-readable form of φ.
    """

    phase: RealMap
    inverse: RealMap
    description: str = "phi"

    @classmethod
    def reciprocal_power(cls, scale: float = 1.0, power: float = 1.0) -> "PhaseMap":
        """Phase φ(x) = scale·x^(-power), the phase of sin(scale/x^power)."""
        if scale <= 0 or power <= 0:
            raise ValueError(f"scale and power must be positive, got {scale!r}, {power!r}")
        return cls(
            phase=lambda x: scale * np.power(np.asarray(x, dtype=float), -power),
            inverse=lambda u: np.power(np.asarray(u, dtype=float) / scale, -1.0 / power),
            description=f"{scale!r}*x^(-{power!r})",
        )

    def arch_count(self, lo: float, hi: float) -> float:
        """Number of half-oscillations between lo and hi."""
        u = np.asarray(self.phase(np.array([lo, hi], dtype=float)), dtype=float)
        return abs(float(u[1] - u[0])) / math.pi

    def arch_points(self, lo: float, hi: float) -> np.ndarray:
        """Sorted points x in (lo, hi) where φ(x) is a multiple of π."""
        u = np.asarray(self.phase(np.array([lo, hi], dtype=float)), dtype=float)
        k_lo = math.ceil(float(u.min()) / math.pi)
        k_hi = math.floor(float(u.max()) / math.pi)
        if k_hi < k_lo:
            return _EMPTY
        x = np.asarray(self.inverse(np.arange(k_lo, k_hi + 1, dtype=float) * math.pi), dtype=float)
        return np.sort(x[(x > lo) & (x < hi)])


@dataclass(frozen=True)
class DerivativeEstimate:
    """A derivative value with its error estimate.

    Attributes:
        value: Derivative at the queried point(s).
        error_estimate: Zero for exact derivatives, else the Richardson spread.
        exact: True when a supplied closed-form derivative was used.
    """

    value: float | np.ndarray
    error_estimate: float | np.ndarray
    exact: bool


@dataclass(frozen=True, eq=False)
class FunctionHandle:
    """An evaluable real function on (lo, hi] with optional exact derivatives.

    Handles are immutable and shareable between workers. Every derived handle
    (negation, positive part, semigroup element) keeps a ``parent`` link.

    Attributes:
        fn: Vectorized map accepting and returning numpy arrays.
        derivs: Exact derivatives of orders 1..k, in order.
        smoothness_order: Largest order for which finite differences are
            meaningful; ``None`` means infinitely differentiable.
        label: Display name used in logs and reports.
        domain: The interval (lo, hi]; hi may be infinite.
        phase: Optional oscillation phase used for arch-aligned subdivision.
        knots: Optional map (lo, hi) -> interior points where the handle has
            kinks or steep transitions.
        numeric_fallback: Finite-difference fallback switch; ``None`` defers to
            ``settings.numeric_derivatives``.
        parent: The handle this one was derived from.
        profile: The gluing profile applied to ``parent``, when any.
    """

    fn: RealMap
    derivs: tuple[RealMap, ...] = ()
    smoothness_order: int | None = None
    label: str = "f"
    domain: tuple[float, float] = (0.0, 1.0)
    phase: PhaseMap | None = None
    knots: KnotMap | None = None
    numeric_fallback: bool | None = None
    parent: "FunctionHandle | None" = field(default=None, repr=False)
    profile: object | None = field(default=None, repr=False)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def check_domain(self, x: float | np.ndarray) -> np.ndarray:
        """Return x as a float array, raising DomainError for outside points."""
        arr = np.asarray(x, dtype=float)
        lo, hi = self.domain
        bad = ~((arr > lo) & (arr <= hi))
        if np.any(bad):
            raise DomainError(float(arr[bad].flat[0]), self.domain, self.label)
        return arr

    def raw(self, x: np.ndarray) -> np.ndarray:
        """Evaluate without domain checks, always returning an array shaped like x."""
        arr = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            y = np.asarray(self.fn(arr), dtype=float)
        if y.shape != arr.shape:
            y = np.broadcast_to(y, arr.shape).copy()
        return y

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        arr = self.check_domain(x)
        y = self.raw(arr)
        return float(y) if arr.ndim == 0 else y

    # ------------------------------------------------------------------
    # Derivatives
    # ------------------------------------------------------------------

    @property
    def exact_orders(self) -> int:
        return len(self.derivs)

    @property
    def allows_numeric(self) -> bool:
        if self.numeric_fallback is None:
            return settings.numeric_derivatives
        return self.numeric_fallback

    def has_order(self, order: int) -> bool:
        """Whether ``eval_deriv`` can deliver the given order."""
        if order <= self.exact_orders:
            return True
        if not self.allows_numeric:
            return False
        return self.smoothness_order is None or order <= self.smoothness_order

    def derivative(self, order: int) -> "FunctionHandle":
        """Handle of the order-th derivative, exact when available."""
        if order == 0:
            return self
        if not self.has_order(order):
            raise OrderUnavailable(order, self.exact_orders, self.label)
        label = f"{self.label}^({order})"
        smooth = None if self.smoothness_order is None else self.smoothness_order - order
        if order <= self.exact_orders:
            return FunctionHandle(
                fn=self.derivs[order - 1],
                derivs=self.derivs[order:],
                smoothness_order=smooth,
                label=label,
                domain=self.domain,
                phase=self.phase,
                knots=self.knots,
                numeric_fallback=self.numeric_fallback,
                parent=self,
            )
        return FunctionHandle(
            fn=lambda x, _n=order: _numeric_derivative(self, _n, np.asarray(x, dtype=float))[0],
            smoothness_order=smooth,
            label=label,
            domain=self.domain,
            phase=self.phase,
            knots=self.knots,
            numeric_fallback=self.numeric_fallback,
            parent=self,
        )

    # ------------------------------------------------------------------
    # Subdivision hints
    # ------------------------------------------------------------------

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Sorted interior points in (lo, hi) from the phase map and the knots."""
        parts = []
        if self.phase is not None:
            parts.append(self.phase.arch_points(lo, hi))
        if self.knots is not None:
            k = np.asarray(self.knots(lo, hi), dtype=float)
            parts.append(k[(k > lo) & (k < hi)])
        if not parts:
            return _EMPTY
        return np.unique(np.concatenate(parts))

    # ------------------------------------------------------------------
    # Derived handles
    # ------------------------------------------------------------------

    def _derived(self, fn: RealMap, label: str, derivs: tuple[RealMap, ...] = (),
                 smoothness_order: int | None = 0) -> "FunctionHandle":
        return FunctionHandle(
            fn=fn,
            derivs=derivs,
            smoothness_order=smoothness_order,
            label=label,
            domain=self.domain,
            phase=self.phase,
            knots=self.knots,
            numeric_fallback=self.numeric_fallback,
            parent=self,
        )

    def scaled(self, c: float) -> "FunctionHandle":
        derivs = tuple((lambda x, _d=d: c * _d(x)) for d in self.derivs)
        return self._derived(lambda x: c * self.raw(x), f"{c!r}*{self.label}", derivs,
                             self.smoothness_order)

    def negated(self) -> "FunctionHandle":
        derivs = tuple((lambda x, _d=d: -np.asarray(_d(x), dtype=float)) for d in self.derivs)
        return self._derived(lambda x: -self.raw(x), f"-({self.label})", derivs,
                             self.smoothness_order)

    def positive_part(self) -> "FunctionHandle":
        return self._derived(lambda x: np.maximum(self.raw(x), 0.0), f"({self.label})+")

    def negative_part(self) -> "FunctionHandle":
        return self._derived(lambda x: np.maximum(-self.raw(x), 0.0), f"({self.label})-")

    def absolute(self) -> "FunctionHandle":
        return self._derived(lambda x: np.abs(self.raw(x)), f"|{self.label}|")

    def times(self, weight: RealMap, label: str | None = None) -> "FunctionHandle":
        """Pointwise product with a vectorized weight; derivatives fall back to numerics."""
        return self._derived(
            lambda x: np.asarray(weight(x), dtype=float) * self.raw(x),
            label or f"w*{self.label}",
            smoothness_order=self.smoothness_order,
        )


def linear_combination(terms: Sequence[tuple[float, FunctionHandle]],
                       label: str | None = None) -> FunctionHandle:
    """Σ c_i·f_i on the intersection of the domains; exact derivatives up to the common order."""
    if not terms:
        raise ValueError("linear_combination needs at least one term")
    coeffs = [float(c) for c, _ in terms]
    handles = [h for _, h in terms]
    common = min(h.exact_orders for h in handles)

    def combine(getter):
        def fn(x):
            return sum(c * np.asarray(getter(h)(x), dtype=float) for c, h in zip(coeffs, handles))
        return fn

    derivs = tuple(combine(lambda h, _j=j: h.derivs[_j]) for j in range(common))
    orders = [h.smoothness_order for h in handles if h.smoothness_order is not None]
    knot_sources = [h for h in handles if h.phase is not None or h.knots is not None]
    lo = max(h.domain[0] for h in handles)
    hi = min(h.domain[1] for h in handles)
    return FunctionHandle(
        fn=combine(lambda h: h.raw),
        derivs=derivs,
        smoothness_order=min(orders) if orders else None,
        label=label or " + ".join(f"{c!r}*{h.label}" for c, h in zip(coeffs, handles)),
        domain=(lo, hi),
        knots=(lambda a, b: np.concatenate([h.breakpoints(a, b) for h in knot_sources]))
        if knot_sources else None,
        numeric_fallback=all(h.allows_numeric for h in handles),
    )


# ----------------------------------------------------------------------------
# Finite differences
# ----------------------------------------------------------------------------

_RICHARDSON_LEVELS = 3


def _difference(f: FunctionHandle, order: int, x: np.ndarray, h: np.ndarray,
                central: np.ndarray) -> np.ndarray:
    """n-th central (or backward) difference quotient, elementwise."""
    total = np.zeros_like(x)
    for j in range(order + 1):
        shift = np.where(central, order / 2.0 - j, -float(j))
        total += (-1) ** j * comb(order, j, exact=True) * f.raw(x + shift * h)
    return total / h**order


def _numeric_derivative(f: FunctionHandle, order: int,
                        x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Richardson-extrapolated differences with step max(1e-5, 1e-3·x).

    Central differences are used where the stencil fits in the domain, backward
    differences at the right edge. The step shrinks near the open left endpoint.
    """
    lo, hi = f.domain
    x = np.asarray(x, dtype=float)
    h = np.maximum(1e-5, 1e-3 * np.abs(x))
    central = x + 0.5 * order * h <= hi
    room = np.where(central, 2.0 * (x - lo) / (order + 1), (x - lo) / (order + 1))
    h = np.minimum(h, room)
    rate = np.where(central, 2.0, 1.0)

    table = [_difference(f, order, x, h / 2**i, central) for i in range(_RICHARDSON_LEVELS)]
    previous = table[-1]
    for level in range(1, _RICHARDSON_LEVELS):
        # central quotients only carry even powers of h
        factor = 2.0 ** (rate * level)
        previous = table[-1]
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    best = table[0]
    return best, np.abs(best - previous)


def eval_deriv(f: FunctionHandle, order: int, x: float | np.ndarray) -> DerivativeEstimate:
    """Derivative of the given order at x.

    Args:
        f: Function handle.
        order: Derivative order (0 returns the value itself).
        x: Point or array of points inside the handle's domain.

    Returns:
        DerivativeEstimate with an exact flag and an error estimate.

    Raises:
        DomainError: If some x lies outside the domain.
        OrderUnavailable: If the order is not exposed and numerics are disabled.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    arr = f.check_domain(x)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if order == 0:
        value, err, exact = f.raw(arr), np.zeros_like(arr), True
    elif order <= f.exact_orders:
        value, err, exact = np.asarray(f.derivs[order - 1](arr), dtype=float), np.zeros_like(arr), True
        value = np.broadcast_to(value, arr.shape).copy()
    elif f.has_order(order):
        value, err = _numeric_derivative(f, order, arr)
        exact = False
    else:
        raise OrderUnavailable(order, f.exact_orders, f.label)
    if scalar:
        return DerivativeEstimate(float(value[0]), float(err[0]), exact)
    return DerivativeEstimate(value, err, exact)


@dataclass(frozen=True)
class DerivativeCheck:
    """Cross-check of one supplied derivative against finite differences."""

    order: int
    max_residual: float
    tolerance: float
    passed: bool


def verify_derivatives(f: FunctionHandle, points: int = 32, seed: int = 0) -> list[DerivativeCheck]:
    """Compare each supplied derivative with differences of the previous order.

    Points are drawn uniformly from the interior of the domain (capped at unit
    length). A residual passes when it is within ten times the Richardson
    spread plus 1e-7 relative.
    """
    rng = np.random.default_rng(seed)
    lo, hi = f.domain
    top = min(hi, lo + 1.0)
    xs = lo + (top - lo) * rng.uniform(0.1, 0.9, size=points)
    checks = []
    for order in range(1, f.exact_orders + 1):
        base = FunctionHandle(
            fn=f.raw if order == 1 else f.derivs[order - 2],
            label=f.label,
            domain=f.domain,
            numeric_fallback=True,
        )
        numeric, spread = _numeric_derivative(base, 1, xs)
        exact = np.broadcast_to(np.asarray(f.derivs[order - 1](xs), dtype=float), xs.shape)
        residual = np.abs(numeric - exact)
        allowed = 10.0 * spread + 1e-7 * (1.0 + np.abs(exact))
        checks.append(DerivativeCheck(
            order=order,
            max_residual=float(residual.max()),
            tolerance=float(allowed.max()),
            passed=bool(np.all(residual <= allowed)),
        ))
        logger.debug("derivative check %s order %d: residual %.3e", f.label, order, residual.max())
    return checks


# ----------------------------------------------------------------------------
# Germs
# ----------------------------------------------------------------------------


def germ_grid(a: float, grid: int, floor: float | None = None) -> np.ndarray:
    """Geometric grid from a down toward 0 (to ``epsilon_min`` by default)."""
    floor = settings.epsilon_min if floor is None else floor
    floor = min(floor, a * 1e-3)
    return np.geomspace(a, floor, grid)


def germ_equal(f: FunctionHandle, g: FunctionHandle, a: float, grid: int = 256,
               tol: float | None = None, rel_tol: float | None = None) -> bool:
    """Sampled test of f = g on (0, a].

    This is sound only in the negative direction: False proves the germs
    differ, True means no difference was seen on the geometric grid.
    """
    if not 0 < a <= 1 or grid < 2:
        raise ValueError(f"need a in (0,1] and grid >= 2, got a={a!r}, grid={grid}")
    tol = settings.tolerance if tol is None else tol
    rel_tol = settings.rel_tolerance if rel_tol is None else rel_tol
    lo = max(f.domain[0], g.domain[0])
    xs = germ_grid(a, grid)
    xs = xs[xs > lo]
    fv, gv = f.raw(xs), g.raw(xs)
    same_inf = np.isinf(fv) & (fv == gv)
    close = np.abs(fv - gv) <= tol + rel_tol * np.maximum(np.abs(fv), np.abs(gv))
    return bool(np.all(close | same_inf))
