"""A small expression language for functions of one variable on (0, 1].

Grammar (``^`` and ``**`` are right-associative and bind tighter than unary minus)::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("-" | "+") unary | power
    power := atom (("^" | "**") unary)?
    atom  := number | constant | variable | name "(" expr ")" | "(" expr ")"

The variable may be written ``x``, ``s`` or ``t``. Expressions are compiled
to sympy, differentiated symbolically and lambdified for numpy.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from sympy import lambdify

from src.errors import ExpressionError
from src.realfunc.handle import FunctionHandle, PhaseMap

logger = logging.getLogger(__name__)

X = sympy.Symbol("x", positive=True)

VARIABLES = ("x", "s", "t")
CONSTANTS = {"pi": sympy.pi, "e": sympy.E}
FUNCTIONS = {
    "exp": sympy.exp,
    "log": sympy.log,
    "ln": sympy.log,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "tan": sympy.tan,
    "sqrt": sympy.sqrt,
    "sinh": sympy.sinh,
    "cosh": sympy.cosh,
}

_TOKEN = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split text into number, name and operator tokens, ending with an "end" token."""
    tokens, position = [], 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionError(text, position, f"unexpected character {text[position]!r}")
        tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _fail(self, reason: str, token: Token | None = None) -> ExpressionError:
        token = self.current if token is None else token
        return ExpressionError(self.text, token.position, reason)

    def _accept(self, *ops: str) -> Token | None:
        token = self.current
        if token.kind == "op" and token.text in ops:
            self.index += 1
            return token
        return None

    def _expect(self, op: str) -> None:
        if self._accept(op) is None:
            shown = self.current.text or "end of input"
            raise self._fail(f"expected {op!r}, found {shown!r}")

    def parse(self) -> sympy.Expr:
        if self.current.kind == "end":
            raise self._fail("empty expression")
        result = self.expr()
        if self.current.kind != "end":
            raise self._fail(f"unexpected {self.current.text!r}")
        return result

    def expr(self) -> sympy.Expr:
        result = self.term()
        while (token := self._accept("+", "-")) is not None:
            rhs = self.term()
            result = result + rhs if token.text == "+" else result - rhs
        return result

    def term(self) -> sympy.Expr:
        result = self.unary()
        while (token := self._accept("*", "/")) is not None:
            rhs = self.unary()
            if token.text == "/" and rhs.is_zero:
                raise self._fail("division by zero", token)
            result = result * rhs if token.text == "*" else result / rhs
        return result

    def unary(self) -> sympy.Expr:
        if self._accept("-") is not None:
            return -self.unary()
        if self._accept("+") is not None:
            return self.unary()
        return self.power()

    def power(self) -> sympy.Expr:
        base = self.atom()
        if self._accept("^", "**") is not None:
            return base ** self.unary()
        return base

    def atom(self) -> sympy.Expr:
        token = self.current
        if token.kind == "number":
            self.index += 1
            exact = Fraction(token.text)
            return sympy.Rational(exact.numerator, exact.denominator)
        if token.kind == "name":
            self.index += 1
            name = token.text
            if name in FUNCTIONS:
                self._expect("(")
                argument = self.expr()
                self._expect(")")
                return FUNCTIONS[name](argument)
            if name in VARIABLES:
                return X
            if name in CONSTANTS:
                return CONSTANTS[name]
            raise self._fail(f"unknown name {name!r}", token)
        if self._accept("(") is not None:
            inner = self.expr()
            self._expect(")")
            return inner
        if token.kind == "end":
            raise self._fail("unexpected end of input")
        raise self._fail(f"unexpected {token.text!r}")


def parse_expression(text: str) -> sympy.Expr:
    """Parse text into a sympy expression in the positive symbol ``x``.

    Raises:
        ExpressionError: With the character position of the first problem.
    """
    return _Parser(text).parse()


def detect_phase(expr: sympy.Expr) -> PhaseMap | None:
    """Phase c·x^(-p) of the fastest sin/cos factor whose argument is a reciprocal power."""
    best = None
    for node in expr.atoms(sympy.sin, sympy.cos):
        coefficient, exponent = node.args[0].as_coeff_exponent(X)
        if coefficient.has(X) or not (coefficient.is_number and exponent.is_number):
            continue
        if coefficient == 0 or float(exponent) >= 0:
            continue
        key = (-float(exponent), abs(float(coefficient)))
        if best is None or key > best:
            best = key
    if best is None:
        return None
    power, scale = best
    return PhaseMap.reciprocal_power(scale=scale, power=power)


def _vectorize(expr: sympy.Expr):
    fn = lambdify(X, expr, modules="numpy")
    if expr.has(X):
        return fn
    constant = float(expr)
    return lambda x: np.full(np.shape(x), constant)


def compile_expression(text: str, label: str | None = None, domain: tuple[float, float] = (0.0, 1.0),
                       orders: int = 4) -> FunctionHandle:
    """FunctionHandle for text with exact derivatives of orders 1..orders.

    Raises:
        ExpressionError: If the text does not parse or does not evaluate to a real value.
    """
    expr = parse_expression(text)
    if expr.free_symbols - {X}:
        raise ExpressionError(text, 0, "expression has free symbols other than the variable")
    derivatives = [expr]
    for _ in range(orders):
        derivatives.append(sympy.diff(derivatives[-1], X))
    try:
        fns = [_vectorize(d) for d in derivatives]
    except (TypeError, ValueError) as exc:
        raise ExpressionError(text, 0, f"cannot evaluate: {exc}") from exc
    phase = detect_phase(expr)
    logger.debug("compiled %r to %s (phase: %s)", text, expr, phase and phase.description)
    return FunctionHandle(
        fn=fns[0],
        derivs=tuple(fns[1:]),
        label=label or text.strip(),
        domain=domain,
        phase=phase,
    )
