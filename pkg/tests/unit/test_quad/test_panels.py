"""Unit tests for src/quad/panels.py module."""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy.special import sici

from src.errors import DomainError, MaxSubdivisions, NonFiniteSample
from src.quad.panels import CumulativeIntegral, initial_edges, integrate, local_gauss
from src.realfunc.handle import FunctionHandle


class TestIntegrate:
    """Tests for the adaptive integral."""

    def test_smooth_integrand(self, cos_handle):
        """∫_0.1^1 cos should match sin(1) - sin(0.1)."""
        result = integrate(cos_handle, 0.1, 1.0)

        assert result.value == pytest.approx(math.sin(1.0) - math.sin(0.1), abs=1e-13)
        assert result.converged
        assert result.subdivisions >= 1

    def test_oscillating_integrand(self, oscillating_handle):
        """∫_0.01^1 sin(1/x)/x should equal Si(100) - Si(1)."""
        result = integrate(oscillating_handle, 0.01, 1.0)

        expected = sici(100.0)[0] - sici(1.0)[0]
        assert result.value == pytest.approx(expected, abs=1e-9)

    def test_empty_interval(self, cos_handle):
        """Equal bounds should give zero without evaluating."""
        result = integrate(cos_handle, 0.5, 0.5)

        assert result.value == 0.0
        assert result.subdivisions == 0

    def test_lower_bound_at_domain_edge(self, cos_handle):
        """lo = 0 is outside (0, 1] and should raise DomainError."""
        with pytest.raises(DomainError):
            integrate(cos_handle, 0.0, 1.0)

    def test_upper_bound_outside_domain(self, cos_handle):
        """hi > 1 should raise DomainError."""
        with pytest.raises(DomainError):
            integrate(cos_handle, 0.5, 1.5)

    def test_reversed_bounds(self, cos_handle):
        """hi < lo should raise ValueError."""
        with pytest.raises(ValueError, match="reversed"):
            integrate(cos_handle, 0.8, 0.2)

    def test_non_finite_sample(self):
        """A nan inside the interval should raise NonFiniteSample."""
        f = FunctionHandle(fn=lambda x: np.where(x < 0.5, np.nan, 1.0), label="holey")

        with pytest.raises(NonFiniteSample) as exc_info:
            integrate(f, 0.1, 1.0)

        assert exc_info.value.x < 0.5

    def test_panel_budget(self, oscillating_handle):
        """Too many arches for the budget should raise MaxSubdivisions."""
        with pytest.raises(MaxSubdivisions):
            integrate(oscillating_handle, 1e-6, 1.0, max_subdivisions=10)

    def test_result_to_dict(self, cos_handle):
        """QuadResult.to_dict should expose all four fields."""
        data = integrate(cos_handle, 0.1, 1.0).to_dict()

        assert set(data) == {"value", "abs_error_estimate", "subdivisions", "converged"}

    @hsettings(max_examples=40, deadline=None)
    @given(
        k=st.integers(min_value=0, max_value=6),
        lo=st.floats(min_value=1e-4, max_value=0.5),
        width=st.floats(min_value=1e-3, max_value=0.5),
    )
    def test_monomials(self, k, lo, width):
        """Monomials should integrate to (b^(k+1) - a^(k+1))/(k+1)."""
        hi = lo + width
        f = FunctionHandle(fn=lambda x: x**k, label=f"x^{k}")

        result = integrate(f, lo, hi)

        exact = (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
        assert result.value == pytest.approx(exact, abs=1e-13, rel=1e-12)


class TestInitialEdges:
    """Tests for the initial subdivision."""

    def test_geometric_grid_toward_zero(self, cos_handle):
        """A long ratio hi/lo should add a geometric grid."""
        edges = initial_edges(cos_handle, 1e-6, 1.0)

        assert edges[0] == 1e-6
        assert edges[-1] == 1.0
        assert len(edges) > 10

    def test_arch_points_included(self, oscillating_handle):
        """Arch points of the phase should be edges."""
        edges = initial_edges(oscillating_handle, 0.1, 1.0)

        for point in 1.0 / (np.arange(1, 4) * math.pi):
            assert np.min(np.abs(edges - point)) < 1e-15


class TestLocalGauss:
    """Tests for single 21-point panels."""

    def test_polynomial_exact(self):
        """A degree-10 polynomial should be integrated exactly with zero error."""
        f = FunctionHandle(fn=lambda x: x**10, label="x^10")

        value, error = local_gauss(f, np.array([0.0]), np.array([1.0]))

        assert value[0] == pytest.approx(1.0 / 11.0, abs=1e-15)
        assert error[0] < 1e-14


class TestCumulativeIntegral:
    """Tests for the tabulated tail mass."""

    @pytest.fixture(scope="class")
    def table(self):
        """θ(x) = ∫_x^1 1/s ds = -log x tabulated down to 1e-6."""
        f = FunctionHandle(fn=lambda x: 1.0 / x, label="1/x")
        return CumulativeIntegral.build(f, 1e-6)

    def test_total(self, table):
        """The total mass should be log(1e6)."""
        assert table.total == pytest.approx(math.log(1e6), abs=1e-8)

    def test_interior_point(self, table):
        """θ(1/2) should be log 2."""
        assert table(0.5) == pytest.approx(math.log(2.0), abs=1e-10)

    def test_array_evaluation(self, table):
        """Array input should give -log x elementwise."""
        xs = np.array([0.3, 1e-3, 0.9])

        np.testing.assert_allclose(table(xs), -np.log(xs), atol=1e-9)

    def test_mass_between_points(self, table):
        """mass(1/4, 1/2) should be log 2."""
        assert table.mass(0.25, 0.5) == pytest.approx(math.log(2.0), abs=1e-10)

    def test_below_floor(self, table):
        """Points below the floor should add a fresh integral to the total."""
        assert table(1e-7) == pytest.approx(math.log(1e7), abs=1e-8)

    def test_above_top(self, table):
        """Points above the top should raise DomainError."""
        with pytest.raises(DomainError):
            table(1.5)

    def test_floor_and_top(self, table):
        """floor and top should be the table ends."""
        assert table.floor == 1e-6
        assert table.top == 1.0
