"""Unit tests for src/witness/level_sets.py module."""

import numpy as np
import pytest

from src.cli.checks import RESIDUAL_BOUND
from src.errors import LevelSetNotFound, NotDivergentPositive
from src.realfunc.handle import FunctionHandle
from src.witness.level_sets import bisect_boundary, build_tau_L10, divergent_part, scan_grid


class TestScanGrid:
    """Tests for the descending scan grid."""

    def test_descending_from_top_to_floor(self, reciprocal_handle):
        """The grid should run from top down to floor."""
        grid = scan_grid(reciprocal_handle, 2.0**-10, 1.0)

        assert grid[0] == 1.0
        assert grid[-1] == pytest.approx(2.0**-10)
        assert np.all(np.diff(grid) < 0)

    def test_density_per_octave(self, reciprocal_handle):
        """Ten octaves at 64 points each should give 641 points."""
        assert len(scan_grid(reciprocal_handle, 2.0**-10, 1.0)) == 641

    def test_oscillating_handle_gets_phase_points(self, oscillating_handle, reciprocal_handle):
        """A declared phase should add points per half-oscillation."""
        plain = scan_grid(reciprocal_handle, 2.0**-10, 1.0)
        oscillating = scan_grid(oscillating_handle, 2.0**-10, 1.0)

        assert len(oscillating) > len(plain) + 1000


class TestBisectBoundary:
    """Tests for vectorized level-set bisection."""

    def test_converges_to_crossing(self):
        """Bisection on f(x) = x with f <= 1/2 should find 1/2."""
        f = FunctionHandle(fn=lambda x: x, label="x")

        found = bisect_boundary(f, np.array([0.2, 0.1]), np.array([0.8, 0.9]), lambda v: v <= 0.5)

        np.testing.assert_allclose(found, 0.5, rtol=1e-14)
        assert np.all(f.raw(found) <= 0.5)

    def test_empty_input(self):
        """Empty brackets should return an empty array."""
        f = FunctionHandle(fn=lambda x: x)

        assert bisect_boundary(f, np.array([]), np.array([]), lambda v: v <= 0.5).size == 0


class TestDivergentPart:
    """Tests for choosing f or -f."""

    def test_positive_divergence(self, reciprocal_handle):
        """1/x has a divergent positive part."""
        base, sign = divergent_part(reciprocal_handle)

        assert base is reciprocal_handle
        assert sign == 1

    def test_negative_divergence(self, reciprocal_handle):
        """-1/x should be flipped to 1/x with sign -1."""
        base, sign = divergent_part(reciprocal_handle.negated())

        assert sign == -1
        assert base.raw(np.array([0.5]))[0] == pytest.approx(2.0)

    def test_integrable_input(self, cos_handle):
        """cos has no divergent part."""
        with pytest.raises(NotDivergentPositive):
            divergent_part(cos_handle)


class TestBuildTauL10:
    """Tests for witnesses glued from a function."""

    def test_positive_function_glues_to_itself(self, reciprocal_handle):
        """For 1/x, which never drops to 1/4, one terminal core should give τ = 1/x."""
        bundle = build_tau_L10(reciprocal_handle, depth=10)
        xs = np.geomspace(2.0**-10, 1.0, 200)

        np.testing.assert_allclose(bundle.tau.raw(xs), 1.0 / xs, rtol=1e-12)
        assert bundle.details["terminal"] is True
        assert bundle.source == "L10"

    def test_oscillating_witness(self, oscillating_handle):
        """sin(1/x)/x should give a nonnegative τ with a growing trace and small residual mass."""
        bundle = build_tau_L10(oscillating_handle, depth=10)
        xs = np.geomspace(bundle.floor, 1.0, 5000)

        assert np.all(bundle.tau.raw(xs) >= 0.0)
        assert np.all(np.abs(bundle.profile(xs)) <= 1.0)
        assert len(bundle.intervals) > 10
        values = [v for _, v in bundle.divergence_trace()]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] > values[0]
        assert bundle.residual_mass(bundle.floor) <= RESIDUAL_BOUND

    def test_cores_are_disjoint_and_ordered(self, oscillating_handle):
        """Cores should be sorted and separated by their transition widths."""
        bundle = build_tau_L10(oscillating_handle, depth=8)
        cores = np.array(bundle.intervals)

        assert np.all(cores[:, 0] <= cores[:, 1])
        assert np.all(cores[1:, 0] > cores[:-1, 1])

    def test_level_never_reached(self):
        """0.1/x stays below 1/2 on [1/2, 1]: no core can start."""
        f = FunctionHandle(fn=lambda x: 0.1 / x, label="0.1/x")

        with pytest.raises(LevelSetNotFound):
            build_tau_L10(f, depth=1)

    def test_default_depth_is_twelve_scales(self, reciprocal_handle):
        """Without a depth the scan should stop at 2^-12."""
        bundle = build_tau_L10(reciprocal_handle)

        assert bundle.details["depth"] == 12
        assert bundle.floor == pytest.approx(2.0**-12, rel=1e-12)

    def test_invalid_depth(self, reciprocal_handle):
        """depth < 1 should raise ValueError."""
        with pytest.raises(ValueError):
            build_tau_L10(reciprocal_handle, depth=0)
