"""Exact rational functions of one variable ``t`` over the rationals.

Thin value type over :class:`sympy.Poly` with domain ``QQ``.  Instances are
kept reduced (``gcd(num, den) == 1``) with a monic denominator, so equality is
structural and ``is_zero`` is an exact test.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import sympy
from sympy import QQ, Poly

from .geometry import as_rational

T = sympy.Symbol("t")

__all__ = ["T", "RationalFunctionT", "poly_from_coeffs", "poly_coeffs", "eval_poly"]


def _qq(x) -> object:
    x = as_rational(x)
    return QQ(x.numerator, x.denominator)


def poly_from_coeffs(coeffs) -> Poly:
    """Polynomial from coefficients listed low degree first."""
    return Poly.from_list([_qq(c) for c in reversed(list(coeffs))] or [QQ(0)], T, domain=QQ)


def poly_coeffs(p: Poly) -> list[Fraction]:
    """Coefficients low degree first, as Fractions."""
    return [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(p.all_coeffs())]


def eval_poly(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class RationalFunctionT:
    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else poly_from_coeffs([num])
        den = poly_from_coeffs([1]) if den is None else (den if isinstance(den, Poly) else poly_from_coeffs([den]))
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = poly_from_coeffs([1])
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num.exquo(g)
                den = den.exquo(g)
            lc = den.LC()
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.num = num
        self.den = den

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "RationalFunctionT":
        return cls(poly_from_coeffs([c]))

    @classmethod
    def variable(cls) -> "RationalFunctionT":
        return cls(poly_from_coeffs([0, 1]))

    @classmethod
    def from_coeffs(cls, num_coeffs, den_coeffs=(1,)) -> "RationalFunctionT":
        return cls(poly_from_coeffs(num_coeffs), poly_from_coeffs(den_coeffs))

    @classmethod
    def from_expr(cls, expr) -> "RationalFunctionT":
        n, d = sympy.fraction(sympy.together(sympy.sympify(expr)))
        return cls(Poly(n, T, domain=QQ), Poly(d, T, domain=QQ))

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, RationalFunctionT):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunctionT.constant(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunctionT(self.num + o.num, self.den)
        return RationalFunctionT(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionT(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunctionT(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunctionT(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunctionT.constant(1) / self ** (-n)
        return RationalFunctionT(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(self.num_coeffs), tuple(self.den_coeffs)))

    # inspection ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    @cached_property
    def num_coeffs(self) -> list[Fraction]:
        return poly_coeffs(self.num)

    @cached_property
    def den_coeffs(self) -> list[Fraction]:
        return poly_coeffs(self.den)

    def degree(self) -> int:
        """Degree of the numerator (``-1`` for the zero function)."""
        return -1 if self.is_zero else self.num.degree()

    def __call__(self, t) -> Fraction:
        x = as_rational(t)
        d = eval_poly(self.den_coeffs, x)
        if d == 0:
            raise ZeroDivisionError(f"pole at t={x}")
        return eval_poly(self.num_coeffs, x) / d

    def evalf(self, t: float) -> float:
        n = 0.0
        for c in reversed(self.num_coeffs):
            n = n * t + float(c)
        d = 0.0
        for c in reversed(self.den_coeffs):
            d = d * t + float(c)
        return n / d

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def __repr__(self):
        if self.is_polynomial:
            return f"RationalFunctionT({self.num.as_expr()})"
        return f"RationalFunctionT(({self.num.as_expr()})/({self.den.as_expr()}))"
