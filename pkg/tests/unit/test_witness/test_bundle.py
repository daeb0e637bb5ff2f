"""Unit tests for src/witness/bundle.py and src/witness/partition.py modules."""

import math

import numpy as np
import pytest

from src.errors import RangeExhausted
from src.realfunc.handle import FunctionHandle
from src.witness.bundle import WeightSpec, WitnessBundle
from src.witness.partition import build_partition


class TestWeightSpec:
    """Tests for weight specifications."""

    def test_conjugate_exponents(self):
        """q should be p/(p-1), with 1 <-> inf."""
        w = FunctionHandle(fn=lambda x: x, label="x")

        assert WeightSpec(2.0, w).q == 2.0
        assert WeightSpec(4.0, w).q == pytest.approx(4.0 / 3.0)
        assert WeightSpec(math.inf, w).q == 1.0
        assert WeightSpec(1.0, w).q == math.inf

    def test_p_below_one(self):
        """p < 1 should raise ValueError."""
        with pytest.raises(ValueError):
            WeightSpec(0.5, FunctionHandle(fn=lambda x: x))

    def test_nonpositive_weight(self):
        """A weight that vanishes somewhere should raise ValueError."""
        with pytest.raises(ValueError, match="positive"):
            WeightSpec(2.0, FunctionHandle(fn=lambda x: x - 0.5, label="x-1/2"))

    def test_to_dict_infinite_exponent(self):
        """p = inf should serialize as the string "inf"."""
        spec = WeightSpec(math.inf, FunctionHandle(fn=lambda x: x, label="x"))

        assert spec.to_dict() == {"p": "inf", "w": "x"}


class TestWitnessBundle:
    """Tests for directly given witnesses."""

    def test_from_tau_mass(self, reciprocal_bundle):
        """θ(x) for τ = 1/x should be -log x."""
        assert reciprocal_bundle.theta(0.1) == pytest.approx(math.log(10.0), abs=1e-9)
        assert reciprocal_bundle.source == "direct"

    def test_divergence_trace_grows(self, reciprocal_bundle):
        """The trace ∫_{2^-n}^1 τ should grow by log 2 per step."""
        trace = reciprocal_bundle.divergence_trace()
        values = np.array([v for _, v in trace])

        np.testing.assert_allclose(np.diff(values), math.log(2.0), atol=1e-9)
        assert trace[0][0] == 2.0**-4

    def test_from_tau_rejects_negative(self):
        """A negative τ should raise ValueError."""
        with pytest.raises(ValueError, match="negative"):
            WitnessBundle.from_tau(FunctionHandle(fn=lambda x: -1.0 / x, label="-1/x"))

    def test_residual_mass_requires_base(self, reciprocal_bundle):
        """Directly given witnesses have no base function."""
        with pytest.raises(ValueError):
            reciprocal_bundle.residual_mass()

    def test_to_dict(self, reciprocal_bundle):
        """to_dict should carry the source and the divergence trace."""
        data = reciprocal_bundle.to_dict()

        assert data["source"] == "direct"
        assert data["weight"] is None
        assert len(data["divergence_trace"]) > 30


class TestPartition:
    """Tests for unit-mass partitions."""

    def test_reciprocal_closed_form(self, reciprocal_partition):
        """For τ = 1/x the points should be α_k = e^-k."""
        expected = np.exp(-np.arange(21))

        np.testing.assert_allclose(reciprocal_partition.alphas, expected, rtol=1e-9)
        assert reciprocal_partition.K == 20

    def test_strictly_decreasing(self, reciprocal_partition):
        """1 = α_0 > α_1 > ... > α_K > 0."""
        alphas = np.array(reciprocal_partition.alphas)

        assert alphas[0] == 1.0
        assert np.all(np.diff(alphas) < 0)
        assert alphas[-1] > 0

    def test_unit_masses(self, reciprocal_partition):
        """Every window should carry mass 1 by fresh quadrature."""
        masses = reciprocal_partition.unit_masses()

        np.testing.assert_allclose(masses, 1.0, atol=1e-9)

    def test_residuals_small(self, reciprocal_partition):
        """Residuals of θ(α_k) = k should be below 1e-9."""
        assert max(reciprocal_partition.residuals) < 1e-9

    def test_window(self, reciprocal_partition):
        """window(n) should be (α_(n+1), α_n)."""
        lo, hi = reciprocal_partition.window(0)

        assert hi == 1.0
        assert lo == pytest.approx(math.exp(-1.0))

    def test_window_out_of_range(self, reciprocal_partition):
        """Windows beyond K should raise IndexError."""
        with pytest.raises(IndexError):
            reciprocal_partition.window(20)

    def test_default_depth_uses_whole_units(self, reciprocal_bundle):
        """K = None should take floor(θ(floor)) points."""
        part = build_partition(reciprocal_bundle)

        assert part.K == math.floor(reciprocal_bundle.mass.total)

    def test_range_exhausted(self, reciprocal_bundle):
        """Asking for more mass than the table holds should raise RangeExhausted."""
        with pytest.raises(RangeExhausted) as exc_info:
            build_partition(reciprocal_bundle, 100)

        assert exc_info.value.requested == 100

    def test_to_dict(self, reciprocal_partition):
        """to_dict should list K, alphas and residuals."""
        data = reciprocal_partition.to_dict()

        assert data["K"] == 20
        assert len(data["alphas"]) == 21
