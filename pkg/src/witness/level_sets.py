"""Witnesses glued from a function's own divergent part.

Given f with ∫_0^1 f⁺ = ∞, the cores [b_j, c_j] are stretches running from
the largest point of {f ≥ 1/2} below the previous core down to the largest
point of {f ≤ 1/4} below that. A profile h equal to 1 on each core and 0 a
little away from it gives τ = h·f ≥ 0 with ∫ τ = ∞ and ∫ (f⁺ - τ) ≤ 1/2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.errors import LevelSetNotFound, NotDivergentPositive
from src.quad.improper import improper_integral
from src.quad.panels import CumulativeIntegral
from src.quad.results import VerdictKind
from src.realfunc.gluing import GluingProfile, make_semigroup_element
from src.realfunc.handle import FunctionHandle
from src.witness.bundle import WitnessBundle

logger = logging.getLogger(__name__)

HIGH_LEVEL = 0.5
LOW_LEVEL = 0.25
_EPSILON_FACTOR = 0.4
_FLOOR_CLOSURE = 0.05


@dataclass(frozen=True)
class _Scan:
    """f sampled on a descending grid, with index arrays of the level sets."""

    xs: np.ndarray
    values: np.ndarray
    high: np.ndarray
    low: np.ndarray
    nonpositive: np.ndarray

    def first_at_or_after(self, indices: np.ndarray, start: int) -> int | None:
        k = int(np.searchsorted(indices, start, side="left"))
        return int(indices[k]) if k < len(indices) else None

    def last_before(self, indices: np.ndarray, stop: int, start: int) -> int | None:
        """Largest index in [start, stop)."""
        k = int(np.searchsorted(indices, stop, side="left")) - 1
        if k >= 0 and indices[k] >= start:
            return int(indices[k])
        return None


def scan_grid(f: FunctionHandle, floor: float, top: float = 1.0,
              per_octave: int = 64, per_arch: int = 8) -> np.ndarray:
    """Descending sample points on [floor, top]: geometric, plus phase-aligned for oscillating f."""
    octaves = max(1, math.ceil(math.log2(top / floor)))
    parts = [np.geomspace(floor, top, octaves * per_octave + 1)]
    if f.phase is not None:
        u = np.asarray(f.phase.phase(np.array([floor, top])), dtype=float)
        steps = math.ceil(abs(u[1] - u[0]) / math.pi * per_arch)
        if steps > 0:
            grid = np.asarray(f.phase.inverse(np.linspace(u.min(), u.max(), steps + 1)), dtype=float)
            parts.append(grid[(grid > floor) & (grid < top)])
    if f.knots is not None:
        knots = np.asarray(f.knots(floor, top), dtype=float)
        parts.append(knots[(knots > floor) & (knots < top)])
    return np.unique(np.concatenate(parts))[::-1]


def _scan(f: FunctionHandle, xs: np.ndarray) -> _Scan:
    values = f.raw(xs)
    return _Scan(
        xs=xs,
        values=values,
        high=np.flatnonzero(values >= HIGH_LEVEL),
        low=np.flatnonzero(values <= LOW_LEVEL),
        nonpositive=np.flatnonzero(values <= 0.0),
    )


def bisect_boundary(f: FunctionHandle, inside: np.ndarray, outside: np.ndarray,
                    predicate, max_iterations: int = 80) -> np.ndarray:
    """Vectorized bisection keeping ``inside`` in the set where predicate(f) holds.

    Returns the inside ends once every bracket has shrunk to rounding level.
    """
    inside = np.array(inside, dtype=float)
    outside = np.array(outside, dtype=float)
    if inside.size == 0:
        return inside
    for _ in range(max_iterations):
        width = np.abs(outside - inside)
        if np.all(width <= 4.0 * np.finfo(float).eps * np.abs(inside)):
            break
        mid = 0.5 * (inside + outside)
        hit = predicate(f.raw(mid))
        inside = np.where(hit, mid, inside)
        outside = np.where(hit, outside, mid)
    return inside


def _walk(scan: _Scan) -> dict[str, list]:
    """Index brackets for c_j, b_j and the zeros bounding each gap."""
    xs = scan.xs
    found = {"c": [], "c_out": [], "b": [], "b_out": [], "z_hi": [], "z_lo": [], "closed": False}
    start = 0
    previous_b: float | None = None
    while True:
        i_c = scan.first_at_or_after(scan.high, start)
        if i_c is None:
            break
        upper = xs[0] if i_c == 0 else xs[i_c - 1]
        if previous_b is not None:
            upper = min(upper, previous_b)
        found["c"].append(xs[i_c])
        found["c_out"].append(upper if i_c > 0 else xs[0])

        i_b = scan.first_at_or_after(scan.low, i_c + 1)
        if i_b is None:
            found["closed"] = True
            break
        found["b"].append(xs[i_b])
        found["b_out"].append(xs[i_b - 1])

        next_c = scan.first_at_or_after(scan.high, i_b + 1)
        stop = len(xs) if next_c is None else next_c
        z_hi = scan.first_at_or_after(scan.nonpositive, i_b)
        z_lo = scan.last_before(scan.nonpositive, stop, i_b)
        found["z_hi"].append(None if z_hi is None or z_hi >= stop else (xs[z_hi], xs[z_hi - 1]))
        found["z_lo"].append(None if z_lo is None or next_c is None else (xs[z_lo], xs[z_lo + 1]))
        previous_b = xs[i_b]
        start = i_b + 1
    return found


def _refine_pairs(f: FunctionHandle, pairs: list, predicate, fallback: float) -> np.ndarray:
    """Bisect the non-empty brackets in ``pairs``; empty ones take ``fallback``."""
    present = [i for i, p in enumerate(pairs) if p is not None]
    out = np.full(len(pairs), fallback, dtype=float)
    if present:
        inside = np.array([pairs[i][0] for i in present])
        outside = np.array([pairs[i][1] for i in present])
        out[present] = bisect_boundary(f, inside, outside, predicate)
    return out


def _cores(f: FunctionHandle, scan: _Scan, floor: float) -> tuple[np.ndarray, np.ndarray, bool]:
    """Core intervals (b_j, c_j), widths (below, above) and whether the last core is terminal."""
    found = _walk(scan)
    if not found["c"]:
        raise LevelSetNotFound(HIGH_LEVEL, 0)

    c = bisect_boundary(f, np.array(found["c"]), np.array(found["c_out"]), lambda v: v >= HIGH_LEVEL)
    b = bisect_boundary(f, np.array(found["b"]), np.minimum(np.array(found["b_out"]), c[: len(found["b"])]),
                        lambda v: v <= LOW_LEVEL)

    if len(scan.low) == 0:
        logger.info("%s stays above %g down to %g: terminal core", f.label, LOW_LEVEL, floor)
        cores = np.array([[0.0, c[0]]])
        width = _top_width(f, scan, c[0], floor)
        return cores, np.array([[width, width]]), True

    m = len(b)
    terminal = False
    if found["closed"]:
        closing = floor * (1.0 + 2.0 * _FLOOR_CLOSURE)
        if c[-1] > closing:
            b = np.append(b, closing)
            m += 1
        else:
            c = c[:-1]
    c = c[:m]
    if m == 0:
        raise LevelSetNotFound(LOW_LEVEL, 0)

    z_hi = _refine_pairs(f, found["z_hi"][:m] + [None] * (m - len(found["z_hi"])),
                         lambda v: v <= 0.0, -np.inf)
    z_lo = _refine_pairs(f, found["z_lo"][:m] + [None] * (m - len(found["z_lo"])),
                         lambda v: v <= 0.0, np.inf)

    next_c = np.append(c[1:], floor)
    gap_limits = np.vstack([
        c - b,
        b - next_c,
        b - z_hi,
        z_lo - next_c,
    ])
    eps = _EPSILON_FACTOR * gap_limits.min(axis=0)

    above = np.empty(m)
    above[1:] = eps[:-1]
    above[0] = _top_width(f, scan, c[0], b[0])
    widths = np.column_stack([eps, above])
    return np.column_stack([b, c]), widths, terminal


def _top_width(f: FunctionHandle, scan: _Scan, c0: float, b0: float) -> float:
    """Transition width above the first core, kept clear of zeros between c_0 and the top."""
    top = float(scan.xs[0])
    room = _EPSILON_FACTOR * (c0 - b0)
    if c0 >= top:
        return room
    above = np.flatnonzero((scan.xs > c0) & (scan.values <= 0.0))
    limit = top - c0
    if len(above):
        k = int(above[-1])
        zero = bisect_boundary(f, np.array([scan.xs[k]]), np.array([scan.xs[k + 1]]), lambda v: v <= 0.0)
        limit = min(limit, float(zero[0]) - c0)
    return min(room, _EPSILON_FACTOR * limit)


def divergent_part(f: FunctionHandle, tol: float | None = None) -> tuple[FunctionHandle, int]:
    """Return (f, +1) when ∫ f⁺ = ∞, else (-f, -1) when ∫ f⁻ = ∞.

    Raises:
        NotDivergentPositive: If neither part diverges.
    """
    plus = improper_integral(f.positive_part(), tol)
    if plus.kind is VerdictKind.DIVERGENT_PLUS:
        return f, 1
    minus = improper_integral(f.negative_part(), tol)
    if minus.kind is VerdictKind.DIVERGENT_PLUS:
        return f.negated(), -1
    raise NotDivergentPositive(f.label, plus, minus)


def build_tau_L10(f: FunctionHandle, depth: int = 12, tol: float | None = None,
                  per_octave: int = 64, per_arch: int = 8) -> WitnessBundle:
    """Glue a witness τ = h·f (or h·(-f)) from the divergent part of f.

    Args:
        f: Handle with ∫ f⁺ = ∞ or ∫ f⁻ = ∞ near 0.
        depth: Dyadic scales covered; the scan floor is 2^-depth. Twelve
            scales reach x ≈ 2.4e-4; 21 or more carry the cores down past 1e-6.
        tol: Quadrature tolerance.
        per_octave: Geometric scan density.
        per_arch: Scan points per half-oscillation when f declares a phase.

    Raises:
        NotDivergentPositive: If f⁺ and f⁻ are both integrable.
        LevelSetNotFound: If f never reaches 1/2.
    """
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    base, sign = divergent_part(f, tol)
    floor = max(2.0**-depth, settings.epsilon_min)
    scan = _scan(base, scan_grid(base, floor, 1.0, per_octave, per_arch))
    cores, widths, terminal = _cores(base, scan, floor)
    profile = GluingProfile(cores=cores, widths=widths, terminal=terminal)
    tau = make_semigroup_element(base, profile, tol=tol)
    tau = FunctionHandle(
        fn=tau.fn, smoothness_order=tau.smoothness_order, label=f"tau[{f.label}]",
        domain=tau.domain, phase=tau.phase, knots=tau.knots,
        numeric_fallback=tau.numeric_fallback, parent=base, profile=profile,
    )
    mass = CumulativeIntegral.build(tau, floor, 1.0, tol=tol)
    logger.info("L10 witness for %s: %d cores down to %g, sign %+d, mass %.6g",
                f.label, len(profile), floor, sign, mass.total)
    return WitnessBundle(
        tau=tau,
        source="L10",
        mass=mass,
        profile=profile,
        intervals=tuple((float(b), float(c)) for b, c in profile.cores),
        epsilons=tuple(float(w) for w in profile.widths[:, 0]),
        sign=sign,
        base=base,
        details={"depth": depth, "terminal": terminal, "scan_points": int(len(scan.xs))},
    )
