"""Exact Cayley-type closure conditions for a circle and a confocal pencil.

Everything here is exact: coefficients live in :class:`RationalFunctionT`
(polynomials in ``t`` over QQ) and closure conditions are decided by exact
vanishing, so "holds for every ``t``" and "holds at one ``t``" are genuinely
different answers.

Convention: with ``A = a - t``, ``B = b - t`` the normalized cubic is

    p(lam) = -A B det(C(t) + lam G) = 1 + p1 lam + p2 lam^2 + p3 lam^3,

and ``sqrt(p) = sum C_j lam^j``.  A closed ``k``-gon exists iff the Hankel
determinant of ``C_2..`` (odd ``k``) or ``C_3..`` (even ``k``) vanishes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import KTooSmall, NonUnitConstantTerm, OrderTooLow, VerificationFailure
from .geometry import BoundaryCircle, ConfocalPencil, ConicKind, as_rational
from .ratfunc import RationalFunctionT
from .roots import RealRoot, real_roots

__all__ = [
    "PencilCubic",
    "CayleySeries",
    "ClosedForms",
    "Domain",
    "IdenticallyZero",
    "IDENTICALLY_ZERO",
    "CausticRoot",
    "pencil_cubic",
    "sqrt_series",
    "cayley_hankel",
    "cayley_condition",
    "closed_forms",
    "invariant_k4_residual",
    "solve_caustics",
    "bareiss_det",
]

RF = RationalFunctionT


@dataclass(frozen=True, eq=False)
class PencilCubic:
    """Coefficients of ``-(a-t)(b-t) D_t(lam)``, highest power first.

    ``I1`` multiplies ``lam^3`` and ``I4`` is the constant term, which is
    ``1`` in this normalization.  :meth:`bracket` gives the opposite sign
    convention (constant term ``-1``).
    """

    I1: RationalFunctionT
    I2: RationalFunctionT
    I3: RationalFunctionT
    I4: RationalFunctionT
    a: Fraction
    b: Fraction
    x0_sq: Fraction
    y0_sq: Fraction

    @property
    def coeffs(self) -> list[RationalFunctionT]:
        """``[p0, p1, p2, p3]`` (low degree first)."""
        return [self.I4, self.I3, self.I2, self.I1]

    def bracket(self) -> tuple[RationalFunctionT, ...]:
        """``(I1, I2, I3, I4)`` of ``(a-t)(b-t) D_t(lam)``; here ``I4 = -1``."""
        return (-self.I1, -self.I2, -self.I3, -self.I4)

    def at(self, t) -> list[Fraction]:
        return [c(t) for c in self.coeffs]

    def D(self, t, lam) -> Fraction:
        """``D_t(lam) = det(C(t) + lam G)`` evaluated exactly."""
        t, lam = as_rational(t), as_rational(lam)
        p = self.at(t)
        val = p[0] + lam * (p[1] + lam * (p[2] + lam * p[3]))
        return -val / ((self.a - t) * (self.b - t))


def pencil_cubic(circle: BoundaryCircle, pencil: ConfocalPencil) -> PencilCubic:
    a, b = pencil.a, pencil.b
    X, Y = circle.x0_sq, circle.y0_sq
    p1 = RF.from_coeffs([a + b + 1 - X - Y, -2])
    p2 = RF.from_coeffs([a * b - a * Y + a - b * X + b, -a - b + X + Y - 2, 1])
    p3 = RF.from_coeffs([a * b, -(a + b), 1])
    return PencilCubic(I1=p3, I2=p2, I3=p1, I4=RF.constant(1), a=a, b=b, x0_sq=X, y0_sq=Y)


@dataclass(frozen=True, eq=False)
class CayleySeries:
    coefficients: tuple[RationalFunctionT, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, j: int) -> RationalFunctionT:
        return self.coefficients[j]

    def __len__(self) -> int:
        return len(self.coefficients)


def _as_rf(c) -> RationalFunctionT:
    return c if isinstance(c, RationalFunctionT) else RF.constant(as_rational(c))


def sqrt_series(cubic: PencilCubic | Sequence, order: int) -> CayleySeries:
    """Taylor coefficients ``C_0..C_order`` of the square root of a polynomial in lam.

    ``cubic`` is a :class:`PencilCubic` or a low-degree-first coefficient list
    whose constant term is exactly 1.
    """
    if order < 2:
        raise OrderTooLow(f"order must be at least 2, got {order}")
    p = [_as_rf(c) for c in (cubic.coeffs if isinstance(cubic, PencilCubic) else cubic)]
    if not p or p[0] != 1:
        raise NonUnitConstantTerm("the constant term must be exactly 1")
    zero = RF.constant(0)
    c = [RF.constant(1)]
    for n in range(1, order + 1):
        acc = p[n] if n < len(p) else zero
        for i in range(1, n):
            acc = acc - c[i] * c[n - i]
        c.append(acc / 2)
    return CayleySeries(tuple(c))


def bareiss_det(mat: list[list]):
    """Fraction-free determinant; entries need ``+ - *`` and exact ``/``."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return m[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def _hankel_shape(k: int) -> tuple[int, int]:
    if k < 3:
        raise KTooSmall(f"k must be at least 3, got {k}")
    m = (k - 1) // 2
    return m, (2 if k % 2 else 3)


def cayley_hankel(k: int, series: CayleySeries) -> RationalFunctionT:
    """Hankel determinant whose vanishing is the closure condition for ``k``-gons."""
    m, first = _hankel_shape(k)
    if series.order < k - 1:
        raise OrderTooLow(f"k={k} needs coefficients up to C_{k - 1}, series stops at C_{series.order}")
    h = [[series[first + i + j] for j in range(m)] for i in range(m)]
    return bareiss_det(h)


def cayley_condition(k: int, circle: BoundaryCircle, pencil: ConfocalPencil) -> RationalFunctionT:
    """``cayley_hankel(k)`` for the pencil cubic, as an exact function of ``t``."""
    _hankel_shape(k)
    return cayley_hankel(k, sqrt_series(pencil_cubic(circle, pencil), k - 1))


@dataclass(frozen=True)
class ClosedForms:
    """Explicit closure conditions for triangles, quadrilaterals and pentagons.

    ``C_2`` vanishes exactly at ``t3``; ``16 C_3 = alpha4 + beta4 t``;
    ``1024 (C_2 C_4 - C_3^2) = alpha5 + beta5 t + gamma5 t^2 + delta5 t^3``.
    """

    t3: Fraction
    alpha4: Fraction
    beta4: Fraction
    alpha5: Fraction
    beta5: Fraction
    gamma5: Fraction
    delta5: Fraction
    printed_alpha5: Fraction

    @property
    def t4(self) -> Fraction | None:
        return None if self.beta4 == 0 else -self.alpha4 / self.beta4

    def k4_poly(self) -> RationalFunctionT:
        return RF.from_coeffs([self.alpha4, self.beta4])

    def k5_poly(self) -> RationalFunctionT:
        return RF.from_coeffs([self.alpha5, self.beta5, self.gamma5, self.delta5])


def closed_forms(circle: BoundaryCircle, pencil: ConfocalPencil) -> ClosedForms:
    a, b = pencil.a, pencil.b
    X, Y = circle.x0_sq, circle.y0_sq
    t3 = -Fraction(1, 4) * (
        1 - 2 * (a + b) + (a - b) ** 2 - 2 * X * (1 + a - b) - 2 * Y * (1 - a + b) + (X + Y) ** 2
    )
    alpha4 = 8 * a * b + 4 * (X + Y - a - b - 1) * t3
    beta4 = 8 * t3 + 4 * (1 - a - b - X - Y)
    alpha5 = -64 * t3**3 + 128 * a * b * (a + b + 1 - X - Y) * t3 - 256 * a**2 * b**2
    printed = -64 * t3**3 + 128 * a * b * (a + b + 1 - X + Y) * t3 - 256 * a**2 * b**2
    beta5 = (
        192 * t3**2
        - 128 * t3 * (a**2 + 4 * a * b - a * X - a * Y + a + b**2 - b * X - b * Y + b)
        + 128 * a * b * (3 * a + 3 * b + X + Y - 1)
    )
    gamma5 = 64 * (6 * a + 6 * b - 2 * X - 2 * Y - 1) * t3 - 128 * (
        a**2 + 4 * a * b + a * X + a * Y - a + b**2 + b * X + b * Y - b
    )
    delta5 = -256 * t3 + 64 * (2 * a + 2 * b + 2 * X + 2 * Y - 1)
    return ClosedForms(t3, alpha4, beta4, alpha5, beta5, gamma5, delta5, printed)


def invariant_k4_residual(cubic: PencilCubic, t) -> Fraction:
    """``8 I1 I4^2 - 4 I2 I3 I4 + I3^3`` in the bracket convention (``I4 = -1``).

    Equals ``-16 C_3(t)``, so it vanishes exactly where quadrilaterals close.
    """
    I1, I2, I3, I4 = (f(t) for f in cubic.bracket())
    return 8 * I1 * I4**2 - 4 * I2 * I3 * I4 + I3**3


class Domain(str, enum.Enum):
    """Search ranges for caustic parameters.

    ``ALL`` is the whole line minus ``{a, b}``; members with ``t > a`` have no
    real points and are tagged ``imaginary``.  ``REAL_CONICS`` is ``t < a``.
    """

    ELLIPSES = "ellipses"
    HYPERBOLAS = "hyperbolas"
    ALL = "all"
    REAL_CONICS = "real"

    def bounds(self, pencil: ConfocalPencil):
        a, b = pencil.a, pencil.b
        return {
            Domain.ELLIPSES: (None, b),
            Domain.HYPERBOLAS: (b, a),
            Domain.ALL: (None, None),
            Domain.REAL_CONICS: (None, a),
        }[self]


class IdenticallyZero(enum.Enum):
    """The closure condition holds for every member of the pencil."""

    IDENTICALLY_ZERO = "identically-zero"

    def __repr__(self):
        return "IDENTICALLY_ZERO"


IDENTICALLY_ZERO = IdenticallyZero.IDENTICALLY_ZERO


@dataclass(frozen=True)
class CausticRoot:
    root: RealRoot
    kind: ConicKind

    @property
    def t(self) -> float:
        return self.root.value

    @property
    def exact(self) -> Fraction | None:
        return self.root.exact

    @property
    def bracket(self) -> tuple[Fraction, Fraction]:
        return self.root.lo, self.root.hi


def _crosscheck(k: int, cond: RationalFunctionT, cf: ClosedForms) -> None:
    if k == 3:
        ok = cond.degree() == 1 and -cond.num_coeffs[0] / cond.num_coeffs[1] == cf.t3
    elif k == 4:
        ok = cond * 16 == cf.k4_poly()
    elif k == 5:
        ok = cond * 1024 == cf.k5_poly()
    else:
        return
    if not ok:
        raise VerificationFailure(f"k={k}: Hankel condition disagrees with its closed form")


def solve_caustics(k: int, circle: BoundaryCircle, pencil: ConfocalPencil,
                   domain: Domain | str = Domain.ALL, crosscheck: bool = True,
                   tol: Fraction = Fraction(1, 10**13)):
    """Pencil members admitting closed ``k``-gons inscribed in ``circle``.

    Returns :data:`IDENTICALLY_ZERO` when every member works, otherwise the
    sorted list of :class:`CausticRoot` inside ``domain`` (never ``t = a`` or
    ``t = b``).  Rational roots are exact; the rest carry a sign-change bracket
    of width below ``tol``.
    """
    domain = Domain(domain)
    cond = cayley_condition(k, circle, pencil)
    if crosscheck and k in (3, 4, 5):
        _crosscheck(k, cond, closed_forms(circle, pencil))
    if cond.is_zero:
        return IDENTICALLY_ZERO
    if pencil.a == pencil.b and domain is Domain.HYPERBOLAS:
        return []
    lo, hi = domain.bounds(pencil)
    cuts = sorted({pencil.a, pencil.b})
    edges = [lo] + [c for c in cuts if (lo is None or c > lo) and (hi is None or c < hi)] + [hi]
    out = []
    for left, right in zip(edges, edges[1:]):
        for r in real_roots(cond.num, left, right, tol=tol):
            t = r.exact if r.exact is not None else r.lo
            out.append(CausticRoot(root=r, kind=pencil.kind_at(t)))
    return out
