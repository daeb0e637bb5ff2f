"""Unit tests for src/realfunc/gluing.py module."""

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from src.errors import ProfileOutOfRange
from src.realfunc.gluing import GluingProfile, make_semigroup_element, smooth_step


class TestSmoothStep:
    """Tests for the C-infinity transition."""

    def test_endpoints(self):
        """smooth_step should be 0 at or below 0 and 1 at or above 1."""
        values = smooth_step(np.array([-1.0, 0.0, 1.0, 2.0]))

        np.testing.assert_array_equal(values, [0.0, 0.0, 1.0, 1.0])

    def test_midpoint(self):
        """smooth_step(1/2) should be exactly 1/2."""
        assert float(smooth_step(0.5)) == 0.5

    def test_monotone(self):
        """smooth_step should be nondecreasing on [0, 1]."""
        values = smooth_step(np.linspace(0.0, 1.0, 1001))

        assert np.all(np.diff(values) >= 0)

    @hsettings(max_examples=200)
    @given(t=st.floats(min_value=-2.0, max_value=3.0, allow_nan=False))
    def test_symmetry_and_range(self, t):
        """smooth_step(t) + smooth_step(1 - t) should be 1, with values in [0, 1]."""
        a, b = float(smooth_step(t)), float(smooth_step(1.0 - t))

        assert 0.0 <= a <= 1.0
        assert a + b == pytest.approx(1.0, abs=1e-12)


class TestGluingProfile:
    """Tests for profiles built from core intervals."""

    @pytest.fixture
    def profile(self):
        """One core [0.2, 0.4] with transitions of width 0.05."""
        return GluingProfile.from_intervals([(0.2, 0.4)], [0.05])

    def test_one_on_core(self, profile):
        """The profile should be 1 on the core."""
        np.testing.assert_allclose(profile(np.linspace(0.2, 0.4, 11)), 1.0)

    def test_zero_away_from_core(self, profile):
        """The profile should vanish outside the inflated core."""
        np.testing.assert_array_equal(profile(np.array([0.05, 0.14, 0.46, 0.9])), 0.0)

    def test_values_in_unit_interval(self, profile):
        """Every value should lie in [0, 1]."""
        values = profile(np.linspace(0.01, 1.0, 2000))

        assert values.min() >= 0.0
        assert values.max() <= 1.0

    def test_knots_are_transition_edges(self, profile):
        """knots should return the four transition edges inside the range."""
        np.testing.assert_allclose(profile.knots(0.0, 1.0), [0.15, 0.2, 0.4, 0.45])

    def test_cores_are_sorted(self):
        """Cores given out of order should be sorted by left endpoint."""
        profile = GluingProfile.from_intervals([(0.6, 0.7), (0.1, 0.2)], [0.01, 0.01])

        assert profile.cores[0, 0] == 0.1
        assert len(profile) == 2

    def test_overlapping_cores_rejected(self):
        """Inflated cores that overlap should raise ValueError."""
        with pytest.raises(ValueError, match="overlap"):
            GluingProfile.from_intervals([(0.1, 0.2), (0.21, 0.3)], [0.05, 0.05])

    def test_terminal_core_reaches_zero(self):
        """A terminal profile should be 1 all the way down to 0."""
        profile = GluingProfile.from_intervals([(0.1, 0.5)], [0.05], terminal=True)

        np.testing.assert_allclose(profile(np.array([1e-12, 1e-3, 0.3])), 1.0)

    def test_identity(self):
        """The identity profile should be 1 everywhere on (0, 1]."""
        np.testing.assert_allclose(GluingProfile.identity()(np.geomspace(1e-9, 1.0, 50)), 1.0)

    def test_product(self, profile):
        """The product of two profiles should multiply their values."""
        other = GluingProfile.from_intervals([(0.3, 0.8)], [0.05])
        xs = np.linspace(0.1, 0.9, 41)

        np.testing.assert_allclose((profile * other)(xs), profile(xs) * other(xs))

    def test_to_dict(self, profile):
        """to_dict should list cores and widths."""
        data = profile.to_dict()

        assert data["cores"] == [[0.2, 0.4]]
        assert data["terminal"] is False


class TestSemigroupElement:
    """Tests for h·f handles."""

    def test_values_and_parent(self, cos_handle):
        """h·f should multiply pointwise and record its parent and profile."""
        profile = GluingProfile.from_intervals([(0.2, 0.4)], [0.05])

        element = make_semigroup_element(cos_handle, profile)

        xs = np.linspace(0.05, 1.0, 40)
        np.testing.assert_allclose(element.raw(xs), profile(xs) * np.cos(xs))
        assert element.parent is cos_handle
        assert element.profile is profile

    def test_profile_knots_become_breakpoints(self, cos_handle):
        """The profile's transition edges should show up as breakpoints."""
        profile = GluingProfile.from_intervals([(0.2, 0.4)], [0.05])

        element = make_semigroup_element(cos_handle, profile)

        np.testing.assert_allclose(element.breakpoints(0.0, 1.0), [0.15, 0.2, 0.4, 0.45])

    def test_profile_out_of_range(self, cos_handle):
        """A profile with amplitude 2 should raise ProfileOutOfRange."""
        profile = GluingProfile(cores=np.array([[0.2, 0.4]]), widths=np.array([[0.05, 0.05]]),
                                amplitude=2.0)

        with pytest.raises(ProfileOutOfRange) as exc_info:
            make_semigroup_element(cos_handle, profile)

        assert exc_info.value.value == pytest.approx(2.0)
