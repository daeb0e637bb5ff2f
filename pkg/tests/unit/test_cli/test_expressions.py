"""Unit tests for src/cli/expressions.py module."""

import math
import re

import numpy as np
import pytest
import sympy

from src.cli.expressions import X, compile_expression, detect_phase, parse_expression, tokenize
from src.errors import ExpressionError


class TestTokenize:
    """Tests for the tokenizer."""

    def test_kinds_and_positions(self):
        """Numbers, names and operators should carry their offsets."""
        tokens = tokenize("2.5*sin(x)")

        assert [(t.kind, t.text, t.position) for t in tokens] == [
            ("number", "2.5", 0), ("op", "*", 3), ("name", "sin", 4),
            ("op", "(", 7), ("name", "x", 8), ("op", ")", 9), ("end", "", 10),
        ]

    def test_double_star_is_one_token(self):
        """** should not split into two multiplications."""
        assert [t.text for t in tokenize("x**2")][:3] == ["x", "**", "2"]

    def test_scientific_notation(self):
        """1e-3 is a single number."""
        assert tokenize("1e-3")[0].text == "1e-3"

    def test_bad_character(self):
        """An unknown character should raise with its position."""
        with pytest.raises(ExpressionError) as exc_info:
            tokenize("x $ 2")

        assert exc_info.value.position == 2
        assert exc_info.value.category == "parse"


class TestParseExpression:
    """Tests for the recursive-descent parser."""

    @pytest.mark.parametrize("text, expected", [
        ("x^2", X**2),
        ("s**2", X**2),
        ("-x^2", -X**2),
        ("2^3^2", sympy.Integer(512)),
        ("1/(1+t)", 1 / (1 + X)),
        ("sin(1/x)/x", sympy.sin(1 / X) / X),
        ("ln(x) + pi", sympy.log(X) + sympy.pi),
        ("0.5*x", X / 2),
    ])
    def test_grammar(self, text, expected):
        """Precedence, associativity, aliases and exact decimals."""
        assert sympy.simplify(parse_expression(text) - expected) == 0

    @pytest.mark.parametrize("text, fragment", [
        ("", "empty expression"),
        ("x +", "unexpected end of input"),
        ("(x", "expected ')'"),
        ("foo(x)", "unknown name 'foo'"),
        ("x 2", "unexpected '2'"),
        ("1/0", "division by zero"),
    ])
    def test_errors(self, text, fragment):
        """Malformed input should raise ExpressionError naming the problem."""
        with pytest.raises(ExpressionError, match=re.escape(fragment)):
            parse_expression(text)


class TestDetectPhase:
    """Tests for oscillation phase detection."""

    def test_reciprocal_phase(self):
        """sin(1/x) oscillates with phase 1/x."""
        phase = detect_phase(parse_expression("sin(1/x)/x"))

        assert phase is not None
        assert phase.arch_count(0.1, 1.0) == pytest.approx(9.0 / math.pi)

    def test_fastest_factor_wins(self):
        """cos(3/x^2) beats sin(1/x)."""
        phase = detect_phase(parse_expression("sin(1/x) + cos(3/x^2)"))

        assert phase.description.startswith("3.0*x^(-2.0")

    def test_no_phase(self):
        """cos(x) does not oscillate near 0."""
        assert detect_phase(parse_expression("cos(x)")) is None


class TestCompileExpression:
    """Tests for compiled handles."""

    def test_values_and_derivatives(self):
        """x^3 should give 3x^2 and 6x as exact derivatives."""
        f = compile_expression("x^3")
        xs = np.array([0.2, 0.5])

        np.testing.assert_allclose(f.raw(xs), xs**3)
        np.testing.assert_allclose(f.derivs[0](xs), 3 * xs**2)
        np.testing.assert_allclose(f.derivs[1](xs), 6 * xs)
        assert len(f.derivs) == 4

    def test_constant_broadcasts(self):
        """A constant expression should still return an array of the input's shape."""
        f = compile_expression("2")

        np.testing.assert_array_equal(f.raw(np.array([0.1, 0.2, 0.3])), [2.0, 2.0, 2.0])

    def test_label_defaults_to_text(self):
        """The label should be the stripped text unless given."""
        assert compile_expression(" cos(x) ").label == "cos(x)"
        assert compile_expression("cos(x)", label="c").label == "c"

    def test_phase_attached(self):
        """Oscillating expressions should carry their phase."""
        assert compile_expression("sin(1/x)/x").phase is not None

    def test_domain(self):
        """A custom domain should be passed through."""
        assert compile_expression("1/t", domain=(0.0, math.inf)).domain == (0.0, math.inf)
