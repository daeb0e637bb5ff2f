"""Unit tests for src/analyticpf/beta.py module."""

import pytest

from src.analyticpf.beta import make_beta
from src.errors import BaseTooSmall


class TestMakeBeta:
    """Tests for the geometric nodes."""

    def test_default_base(self):
        """The default nodes should be 6, 36, 216."""
        beta = make_beta(3)

        assert beta.betas == (6.0, 36.0, 216.0)
        assert beta.alphas == pytest.approx((1 / 6, 1 / 36, 1 / 216))

    def test_nodes_exceed_five_to_the_k(self):
        """β_k > 5^k for every k."""
        beta = make_beta(12, base=5.5)

        assert all(b > 5.0**k for k, b in enumerate(beta.betas, start=1))

    @pytest.mark.parametrize("base", [5.0, 4.0, -6.0])
    def test_base_too_small(self, base):
        """base <= 5 should raise BaseTooSmall."""
        with pytest.raises(BaseTooSmall):
            make_beta(3, base=base)

    def test_empty_sequence(self):
        """K < 1 should raise ValueError."""
        with pytest.raises(ValueError):
            make_beta(0)


class TestGenerator:
    """Tests for g and W."""

    def test_inverse_generator(self):
        """g(base^k) should be k."""
        beta = make_beta(4, base=7.0)

        assert beta.g(7.0**3) == pytest.approx(3.0)

    def test_weight(self):
        """W(t) = t^(2g(t) - 1): W(6) = 6 and W(36) = 36^3."""
        beta = make_beta(2)

        assert beta.W(6.0) == pytest.approx(6.0)
        assert beta.W(36.0) == pytest.approx(36.0**3)

    def test_to_dict(self):
        """to_dict should describe the generator."""
        data = make_beta(2).to_dict()

        assert data == {"base": 6.0, "K": 2, "betas": [6.0, 36.0], "generator": "G(k) = 6^k"}
