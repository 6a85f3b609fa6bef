"""Painlevé VI residuals for the order-four family of the concentric pencil.

For ``a = b + 1`` and the circle centred at the origin, put ``s = a - t - 1``.
Then ``x = s**2`` and the two branches ``y = -s`` (Picard) and ``y = s``
(its Okamoto image) solve Painlevé VI for two different constant tuples.
Every function accepts floats or :class:`~fractions.Fraction` and stays exact
on rational input.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import OkamotoPole, SingularLocus, SingularParameter
from .geometry import as_rational

__all__ = [
    "PVIConstants",
    "OKAMOTO_CONSTANTS",
    "PICARD_CONSTANTS",
    "SolutionSample",
    "Family",
    "pvi_rhs",
    "pvi_residual",
    "picard_point",
    "okamoto_transform",
    "identity_ratio",
    "family_sample",
    "residual_scan",
    "hitchin_constants",
]


@dataclass(frozen=True)
class PVIConstants:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.alpha, self.beta, self.gamma, self.delta

    @property
    def hitchin(self) -> bool:
        """``alpha + beta = 0`` and ``gamma + delta = 1/2``: the ``y = s, x = s^2`` curve solves these."""
        return self.alpha + self.beta == 0 and self.gamma + self.delta == Fraction(1, 2)


OKAMOTO_CONSTANTS = PVIConstants(Fraction(1, 8), Fraction(-1, 8), Fraction(1, 8), Fraction(3, 8))
PICARD_CONSTANTS = PVIConstants(0, 0, 0, Fraction(1, 2))


def hitchin_constants(alpha, gamma) -> PVIConstants:
    """The tuple ``(alpha, -alpha, gamma, 1/2 - gamma)``."""
    alpha, gamma = as_rational(alpha), as_rational(gamma)
    return PVIConstants(alpha, -alpha, gamma, Fraction(1, 2) - gamma)


@dataclass(frozen=True)
class SolutionSample:
    """A point ``(x, y)`` of a solution with ``y' = dy/dx`` and ``y'' = d^2y/dx^2``."""

    x: float | Fraction
    y: float | Fraction
    yp: float | Fraction
    ypp: float | Fraction

    def __post_init__(self):
        for name in ("x", "y", "yp", "ypp"):
            v = getattr(self, name)
            if isinstance(v, int):
                object.__setattr__(self, name, Fraction(v))
        x, y = self.x, self.y
        if x == 0 or x == 1:
            raise SingularLocus(f"x = {x} is a fixed singularity")
        if y == 0 or y == 1 or y == x:
            raise SingularLocus(f"y = {y} lies on the singular divisor y in {{0, 1, x}}")


def pvi_rhs(c: PVIConstants, x, y, yp):
    """Right-hand side of Painlevé VI at ``(x, y, y')``."""
    quad = (1 / y + 1 / (y - 1) + 1 / (y - x)) * yp * yp / 2
    lin = (1 / x + 1 / (x - 1) + 1 / (y - x)) * yp
    pot = y * (y - 1) * (y - x) / (x * x * (x - 1) ** 2)
    par = c.alpha + c.beta * x / (y * y) + c.gamma * (x - 1) / (y - 1) ** 2 + c.delta * x * (x - 1) / (y - x) ** 2
    return quad - lin + pot * par


def pvi_residual(c: PVIConstants, s: SolutionSample):
    """``y''`` minus the Painlevé VI right-hand side."""
    return s.ypp - pvi_rhs(c, s.x, s.y, s.yp)


def picard_point(a, t):
    """``(x, y0, y0')`` with ``x = (a-t-1)^2``, ``y0 = -(a-t-1)``, ``y0' = 1/(2 y0)``."""
    if not isinstance(a, float):
        a = as_rational(a)
    if not isinstance(t, float):
        t = as_rational(t)
    s = a - t - 1
    x = s * s
    if x == 0 or x == 1:
        raise SingularParameter(f"t = {t} gives x = {x}")
    y0 = -s
    return x, y0, 1 / (2 * y0)


def okamoto_transform(x, y0, y0p):
    """``y0 + y0(y0-1)(y0-x) / (x(x-1)y0' - y0(y0-1))``."""
    den = x * (x - 1) * y0p - y0 * (y0 - 1)
    if den == 0:
        raise OkamotoPole(f"Okamoto denominator vanishes at x = {x}, y0 = {y0}")
    return y0 + y0 * (y0 - 1) * (y0 - x) / den


def identity_ratio(x, y0, y0p):
    """``(y0-1)(y0-x) / (x(x-1)y0' - y0(y0-1))``; equals -2 along the Picard branch."""
    den = x * (x - 1) * y0p - y0 * (y0 - 1)
    if den == 0:
        raise OkamotoPole(f"Okamoto denominator vanishes at x = {x}, y0 = {y0}")
    return (y0 - 1) * (y0 - x) / den


class Family(str, enum.Enum):
    PICARD = "picard"
    OKAMOTO = "okamoto"


def family_sample(family: Family | str, a, t) -> SolutionSample:
    """Closed-form sample: ``y = -+s`` with ``y' = 1/(2y)`` and ``y'' = -1/(4y^3)``."""
    family = Family(family)
    x, y0, _ = picard_point(a, t)
    y = y0 if family is Family.PICARD else -y0
    return SolutionSample(x=x, y=y, yp=1 / (2 * y), ypp=-1 / (4 * y**3))


def residual_scan(c: PVIConstants, family: Family | str, a, t_grid: Iterable) -> float:
    """Largest ``|pvi_residual|`` of the family over ``t_grid``."""
    return max(abs(float(pvi_residual(c, family_sample(family, a, t)))) for t in t_grid)
