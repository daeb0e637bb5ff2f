"""Unit tests for src/realfunc/antiderivative.py module."""

import math

import numpy as np
import pytest

from src.errors import NotIntegrable
from src.realfunc.antiderivative import (
    AnchoredAntiderivative,
    AxiomCheck,
    AxiomReport,
    verify_extension_axioms,
    zero_functional,
)
from src.realfunc.handle import FunctionHandle


class TestAnchoredAntiderivative:
    """Tests for x -> ∫_anchor^x g + c(g)."""

    def test_default_anchor_at_one(self, cos_handle):
        """With the default anchor, P(cos)(x) should be sin(x) - sin(1)."""
        primitive = AnchoredAntiderivative()(cos_handle)

        assert primitive(0.5) == pytest.approx(math.sin(0.5) - math.sin(1.0), abs=1e-12)
        assert primitive(1.0) == 0.0

    def test_array_input_on_both_sides_of_anchor(self, cos_handle):
        """Points below and above the anchor should both be integrated from it."""
        primitive = AnchoredAntiderivative(anchor=0.5)(cos_handle)
        xs = np.array([0.9, 0.1, 0.5, 0.3, 0.7])

        values = primitive(xs)

        np.testing.assert_allclose(values, np.sin(xs) - math.sin(0.5), atol=1e-12)

    def test_constant_functional(self, cos_handle):
        """The constant functional should shift every value."""
        P = AnchoredAntiderivative(anchor=1.0, constant=lambda g: 2.5)

        assert P(cos_handle)(1.0) == 2.5

    def test_zero_functional(self, cos_handle):
        """zero_functional should return 0 for any integrand."""
        assert zero_functional(cos_handle) == 0.0

    def test_from_zero_matches_lebesgue_integral(self, cos_handle):
        """from_zero should give x -> ∫_0^x cos = sin(x)."""
        primitive = AnchoredAntiderivative.from_zero()(cos_handle)

        assert primitive(0.5) == pytest.approx(math.sin(0.5), abs=1e-8)

    def test_from_zero_integrable_singularity(self):
        """∫_0^x s^(-1/2) ds should be 2·sqrt(x)."""
        f = FunctionHandle(fn=lambda x: x**-0.5, label="x^-1/2")

        primitive = AnchoredAntiderivative.from_zero()(f)

        assert primitive(0.25) == pytest.approx(1.0, abs=1e-7)

    def test_from_zero_rejects_non_integrable(self, reciprocal_handle):
        """1/x has no integral from 0: NotIntegrable should be raised."""
        with pytest.raises(NotIntegrable) as exc_info:
            AnchoredAntiderivative.from_zero()(reciprocal_handle)

        assert exc_info.value.label == "1/x"


class TestAxiomReport:
    """Tests for AxiomReport aggregation."""

    def test_passed_ignores_skipped(self):
        """Skipped checks should not make a report fail."""
        report = AxiomReport((
            AxiomCheck("III", "f", "pass", 0.0, 1e-8),
            AxiomCheck("IV", "f", "skipped", math.nan, 1e-8),
        ))

        assert report.passed
        assert len(report.by_axiom("IV")) == 1

    def test_failed_check(self):
        """One failed check should fail the report."""
        report = AxiomReport((AxiomCheck("V", "f", "fail", -1.0, 0.0),))

        assert not report.passed


class TestVerifyExtensionAxioms:
    """Tests for the extension-of-the-integral checks."""

    def test_lebesgue_antiderivative_passes(self, cos_handle):
        """The integral from 0 should satisfy every check on integrable inputs."""
        root = FunctionHandle(fn=lambda x: x**-0.5, label="x^-1/2")

        report = verify_extension_axioms(AnchoredAntiderivative.from_zero(), [cos_handle, root], seed=3)

        assert report.passed
        assert {c.axiom for c in report.checks} == {"III", "IV", "V", "derivative"}

    def test_anchored_at_one_fails_positivity(self, cos_handle):
        """∫_1^x cos is negative near 0, so eventual positivity should fail."""
        report = verify_extension_axioms(AnchoredAntiderivative(), [cos_handle], seed=0)

        positivity = report.by_axiom("V")
        assert positivity[0].status == "fail"
        assert not report.passed

    def test_positivity_skipped_for_sign_changing_input(self):
        """Inputs that are not strictly positive near 0 should skip the positivity check."""
        f = FunctionHandle(fn=lambda x: np.sin(100 * x), derivs=(lambda x: 100 * np.cos(100 * x),),
                           label="sin100")

        report = verify_extension_axioms(AnchoredAntiderivative.from_zero(), [f], pairs=0)

        assert report.by_axiom("V")[0].status == "skipped"

    def test_non_integrable_input_recorded_as_failure(self, reciprocal_handle):
        """A non-integrable input to from_zero should become a failed record, not an exception."""
        P = AnchoredAntiderivative.from_zero()

        report = verify_extension_axioms(P, [reciprocal_handle], pairs=0)

        assert report.by_axiom("IV")[0].status == "skipped"
        assert report.by_axiom("V")[0].status == "fail"
        assert report.by_axiom("derivative")[0].status == "fail"
        assert not report.passed

    def test_non_integrable_pair_recorded_as_linearity_failure(self, reciprocal_handle):
        """Linearity on a pair containing 1/x should fail in the report instead of raising."""
        report = verify_extension_axioms(AnchoredAntiderivative.from_zero(), [reciprocal_handle],
                                         seed=1, pairs=2)

        linearity = report.by_axiom("III")
        assert [c.status for c in linearity] == ["fail", "fail"]
        assert linearity[0].subject == "1/x, 1/x"
        assert not report.passed
