"""Certified real roots of rational polynomials.

Rational roots come out exactly (from the linear factors over QQ).  The
remaining irreducible factors are isolated with Sturm sequences and refined by
exact bisection, so every reported irrational root sits inside a rational
bracket across which the polynomial changes sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly

from .ratfunc import eval_poly, poly_coeffs

__all__ = ["RealRoot", "sturm_sequence", "count_roots", "real_roots"]


@dataclass(frozen=True)
class RealRoot:
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None

    @property
    def value(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    @property
    def certificate(self) -> str:
        return "rational" if self.exact is not None else "sign-change"


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.diff()]
    while not seq[-1].is_zero and seq[-1].degree() > 0:
        r = -seq[-2].rem(seq[-1])
        if r.is_zero:
            break
        seq.append(r)
    return [q for q in seq if not q.is_zero]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    s = [v for v in signs if v != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def _signs_at(seq_coeffs, x) -> list[int]:
    if x == "inf":
        return [_sign(c[-1]) for c in seq_coeffs]
    if x == "-inf":
        return [_sign(c[-1]) * (-1) ** (len(c) - 1) for c in seq_coeffs]
    return [_sign(eval_poly(c, x)) for c in seq_coeffs]


def count_roots(seq_coeffs, lo, hi) -> int:
    """Distinct real roots in ``(lo, hi]`` (``lo``/``hi`` may be ``"-inf"``/``"inf"``)."""
    return _variations(_signs_at(seq_coeffs, lo)) - _variations(_signs_at(seq_coeffs, hi))


def _cauchy_bound(coeffs) -> Fraction:
    lead = abs(coeffs[-1])
    return 1 + max((abs(c) / lead for c in coeffs[:-1]), default=Fraction(0))


def _isolate_factor(f: Poly, lo, hi, tol: Fraction) -> list[RealRoot]:
    """Roots of a squarefree ``f`` without rational roots inside the open ``(lo, hi)``."""
    seq = [poly_coeffs(q) for q in sturm_sequence(f)]
    coeffs = seq[0]
    bound = _cauchy_bound(coeffs)
    lo_f = -bound if lo is None else max(lo, -bound - 1)
    hi_f = bound if hi is None else min(hi, bound + 1)
    if lo_f >= hi_f:
        return []
    stack = [(lo_f, hi_f)]
    brackets = []
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            brackets.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    out = []
    for a, b in brackets:
        # f has no rational roots, so f(a), f(b) are nonzero with opposite signs
        sa = _sign(eval_poly(coeffs, a))
        while b - a > tol:
            m = (a + b) / 2
            sm = _sign(eval_poly(coeffs, m))
            if sm == sa:
                a = m
            else:
                b = m
        out.append(RealRoot(lo=a, hi=b))
    return out


def real_roots(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None,
               tol: Fraction = Fraction(1, 10**13)) -> list[RealRoot]:
    """Distinct real roots of ``p`` in the open interval ``(lo, hi)``, sorted.

    ``None`` bounds are infinite.  Rational roots are exact; the others are
    bracketed to width ``tol``.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has every number as a root")
    if p.degree() <= 0:
        return []
    _, factors = p.factor_list()
    roots: list[RealRoot] = []
    for f, _mult in factors:
        if f.degree() == 1:
            c0, c1 = poly_coeffs(f)
            r = -c0 / c1
            if (lo is None or r > lo) and (hi is None or r < hi):
                roots.append(RealRoot(lo=r, hi=r, exact=r))
        else:
            roots.extend(_isolate_factor(f, lo, hi, tol))
    roots.sort(key=lambda r: r.lo)
    return roots
