"""Blaschke factors and products, their ellipses, and cross-checks with the Cayley engine.

``B_a(z) = (a - z) / (1 - conj(a) z)`` maps the unit circle to itself when
``|a| != 1``.  Solutions of ``B(z) = lam`` on the unit circle are the vertices
of polygons whose sides envelope the Blaschke curve of ``B``; for degree 3 and
for decomposable degree 4 that curve is an ellipse.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .cayley import Domain, solve_caustics
from .dynamics import detect_period, trajectory
from .errors import ExcludedConfiguration, FrameMismatch, NotDecomposable, VerificationFailure
from .geometry import (
    BoundaryCircle,
    ConfocalPencil,
    Conic,
    ConicKind,
    Line,
    as_rational,
    confocal_conic,
    ellipse_from_foci,
    tangents_from_point,
)

__all__ = [
    "BlaschkeFactor",
    "BlaschkeProduct",
    "ExactComplex",
    "blaschke_factor",
    "mobius_identities_check",
    "mobius_bullets",
    "solve_conjugating_c",
    "blaschke_caustic",
    "blaschke_solve",
    "polygon_tangency",
    "pencil_frame",
    "CrosscheckReport",
    "unique_caustic_crosscheck",
    "TriangleConfig",
    "triangle_configuration",
    "outside_focus_search",
]


@dataclass(frozen=True)
class BlaschkeFactor:
    """``z -> (a - z) / (1 - conj(a) z)``; ``exterior`` marks ``|a| > 1`` on purpose."""

    a: complex
    exterior: bool = False

    def __post_init__(self):
        a = complex(self.a)
        object.__setattr__(self, "a", a)
        if abs(a) == 1:
            raise ValueError("a Blaschke factor needs |a| != 1")
        if (abs(a) > 1) != self.exterior:
            raise ValueError("|a| > 1 requires exterior=True (and only then)")

    def __call__(self, z):
        a = self.a
        return (a - z) / (1 - z * np.conj(a))


def blaschke_factor(a, exterior: bool | None = None) -> BlaschkeFactor:
    a = complex(a)
    return BlaschkeFactor(a, abs(a) > 1 if exterior is None else exterior)


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """Product of the factors ``B_{z_i}`` over ``zeros`` (all in the open disk).

    Degree 3 products use zeros ``(0, a, b)``; decomposable degree 4 products
    use ``(0, c, a, b)`` with ``B_c(a) = b``.
    """

    zeros: tuple
    decomposable: bool = False
    _factors: tuple = field(init=False, repr=False)

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        if any(abs(z) >= 1 for z in zs):
            raise ValueError("zeros must lie in the open unit disk")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "_factors", tuple(BlaschkeFactor(z) for z in zs))
        if self.decomposable:
            if len(zs) != 4 or zs[0] != 0:
                raise NotDecomposable("decomposable products here have zeros (0, c, a, b)")
            c, a, b = zs[1], zs[2], zs[3]
            if abs(BlaschkeFactor(c)(a) - b) > 1e-12:
                raise NotDecomposable("B_c(a) != b for the stored c")

    @classmethod
    def degree3(cls, a, b) -> "BlaschkeProduct":
        return cls((0, a, b))

    @classmethod
    def decomposable4(cls, a, b) -> "BlaschkeProduct":
        c = solve_conjugating_c(a, b)
        return cls((0, c, a, b), decomposable=True)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        out = np.ones_like(np.asarray(z, dtype=complex))
        for f in self._factors:
            out = out * f(z)
        return out

    def is_decomposable(self, tol: float = 1e-12) -> bool:
        if self.degree != 4 or self.zeros[0] != 0:
            return False
        c, a, b = self.zeros[1:]
        return abs(BlaschkeFactor(c)(a) - b) <= tol


def mobius_identities_check(z, w, v) -> dict:
    """Residuals of the two-point identity for ``B_w`` and of its ``v = z`` case."""
    z, w, v = complex(z), complex(w), complex(v)
    d1, d2, d3 = 1 - z * w.conjugate(), 1 - v.conjugate() * w, 1 - z * v.conjugate()
    if min(abs(d1), abs(d2), abs(d3)) < 1e-15:
        raise ExcludedConfiguration("a denominator of the identity vanishes")
    B = blaschke_factor(w)
    lhs = (1 - B(z) * np.conj(B(v))) / d3
    rhs = (1 - abs(w) ** 2) / (d1 * d2)
    out = {"lemma": abs(lhs - rhs)}
    if abs(1 - abs(z) ** 2) >= 1e-15:
        lhs2 = (1 - abs(B(z)) ** 2) / (1 - abs(z) ** 2)
        rhs2 = (1 - abs(w) ** 2) / abs(d1) ** 2
        out["diagonal"] = abs(lhs2 - rhs2)
    return out


def _random_disk(rng, n, rmin, rmax):
    r = np.sqrt(rng.uniform(rmin**2, rmax**2, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def mobius_bullets(n: int, rng: np.random.Generator) -> dict:
    """Count violations of the four disk/exterior mapping properties over ``n`` samples each.

    1. ``|z| < 1, |w| < 1  =>  |B_w(z)| < 1``
    2. ``|z| < 1, |w| >= 1 =>  |B_w(z)| >= 1``
    3. ``|z| > 1, |w| < 1  =>  |B_w(z)| > 1``
    4. ``|z| > 1, |w| > 1  =>  |B_w(z)| < 1``
    """

    def Bw(w, z):
        return (w - z) / (1 - z * np.conj(w))

    inside = (0.0, 1.0 - 1e-9)
    outside = (1.0 + 1e-9, 4.0)
    out = {}
    z, w = _random_disk(rng, n, *inside), _random_disk(rng, n, *inside)
    out[1] = int(np.sum(np.abs(Bw(w, z)) >= 1))
    z, w = _random_disk(rng, n, *inside), _random_disk(rng, n, 1.0 + 1e-9, 4.0)
    out[2] = int(np.sum(np.abs(Bw(w, z)) < 1))
    z, w = _random_disk(rng, n, *outside), _random_disk(rng, n, *inside)
    out[3] = int(np.sum(np.abs(Bw(w, z)) <= 1))
    z, w = _random_disk(rng, n, *outside), _random_disk(rng, n, *outside)
    # 1 - z conj(w) vanishes when z = 1/conj(w); drop the measure-zero near-misses
    ok = np.abs(1 - z * np.conj(w)) > 1e-9
    out[4] = int(np.sum(np.abs(Bw(w[ok], z[ok])) >= 1))
    return out


class ExactComplex(NamedTuple):
    re: Fraction
    im: Fraction

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _split(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, tuple):
        return as_rational(x[0]), as_rational(x[1])
    if isinstance(x, complex):
        return as_rational(x.real), as_rational(x.imag)
    return as_rational(x), Fraction(0)


def solve_conjugating_c(a, b, exact: bool = False):
    """The unique ``c`` with ``B_c(a) = b``.

    ``B_c(a) = b`` reads ``c + a b conj(c) = a + b``, a real 2x2 system with
    determinant ``1 - |a|^2 |b|^2``.  With ``exact=True`` the inputs are read as
    rationals (complex numbers as ``(re, im)`` pairs) and the result is an
    :class:`ExactComplex`.
    """
    if exact:
        ar, ai = _split(a)
        br, bi = _split(b)
        p, q = ar * br - ai * bi, ar * bi + ai * br
        r, s = ar + br, ai + bi
        det = 1 - p * p - q * q
        if det == 0:
            raise ExcludedConfiguration("|a b| = 1: no unique solution")
        return ExactComplex(((1 - p) * r - q * s) / det, ((1 + p) * s - q * r) / det)
    a, b = complex(a), complex(b)
    ab = a * b
    p, q = ab.real, ab.imag
    r, s = (a + b).real, (a + b).imag
    det = 1 - p * p - q * q
    if det == 0:
        raise ExcludedConfiguration("|a b| = 1: no unique solution")
    return complex(((1 - p) * r - q * s) / det, ((1 + p) * s - q * r) / det)


def blaschke_solve(product: BlaschkeProduct, lam) -> np.ndarray:
    """All solutions of ``B(z) = lam``, sorted by argument.

    Clears denominators to ``prod(a_i - z) - lam prod(1 - conj(a_i) z) = 0`` and
    solves by companion-matrix eigenvalues, then applies one Newton correction
    per root.
    """
    lam = complex(lam)
    num = np.poly1d([1.0 + 0j])
    den = np.poly1d([1.0 + 0j])
    for a in product.zeros:
        num = num * np.poly1d([-1.0, a])
        den = den * np.poly1d([-np.conj(a), 1.0])
    P = num - lam * den
    dP = P.deriv()
    roots = np.roots(P.coeffs)
    roots = np.array([z - P(z) / dP(z) if dP(z) != 0 else z for z in roots])
    scale = np.abs(P.coeffs).sum()
    back = max(abs(P(z)) for z in roots) / scale
    if back > 1e-12:
        raise VerificationFailure(f"backward error {back:.3g} exceeds 1e-12")
    return roots[np.argsort(np.angle(roots))]


def _pt(z) -> np.ndarray:
    return np.array([z.real, z.imag])


def polygon_tangency(vertices: Sequence[complex], caustic: Conic) -> float:
    """Largest dual-conic residual over the sides of the closed polygon."""
    n = len(vertices)
    return max(caustic.tangency_residual(Line.through(_pt(vertices[i]), _pt(vertices[(i + 1) % n])))
               for i in range(n))


def blaschke_caustic(product: BlaschkeProduct) -> Conic:
    """Ellipse enveloped by the polygons ``B(z) = lam``.

    Degree 3, zeros ``(0, a, b)``: foci ``a, b`` and major axis ``|1 - conj(a) b|``.
    Decomposable degree 4, zeros ``(0, c, a, b)``: foci ``a, b``; the major axis
    is the distance from ``a`` to the mirror image of ``b`` in a side of the
    quadrilateral for ``lam = 1``.
    """
    z = product.zeros
    if product.degree == 3:
        if z[0] != 0:
            raise ValueError("degree 3 products here have zeros (0, a, b)")
        a, b = z[1], z[2]
        return ellipse_from_foci(_pt(a), _pt(b), abs(1 - a.conjugate() * b))
    if product.degree == 4:
        if not product.is_decomposable():
            raise NotDecomposable("degree 4 product without the B_c(a) = b relation")
        a, b = z[2], z[3]
        v = blaschke_solve(product, 1.0)
        d = v[1] - v[0]
        u = d / abs(d)
        # reflect b across the line through v[0] with direction u
        rel = b - v[0]
        b_ref = v[0] + u * (u * rel.conjugate())
        return ellipse_from_foci(_pt(a), _pt(b), abs(a - b_ref))
    raise ValueError("only degrees 3 and 4 have Blaschke ellipses here")


# ------------------------------------------------------------ cross-checks


@dataclass(frozen=True)
class Frame:
    """Similarity taking the foci ``a, b`` to ``(+-c, 0)``: ``w -> e^{-i phi}(w - m)``."""

    m: complex
    phi: float
    circle: BoundaryCircle
    pencil: ConfocalPencil

    def to_disk(self, x, y) -> complex:
        return self.m + cmath.exp(1j * self.phi) * complex(x, y)


def pencil_frame(a, b) -> Frame:
    """Pencil with foci ``a, b`` and the unit circle in the pencil's axis frame.

    Real inputs stay exact; for complex inputs the rotated centre is rounded
    to the nearest double before the exact engine sees it.
    """
    a, b = complex(a), complex(b)
    m = (a + b) / 2
    phi = cmath.phase(b - a) if a != b else 0.0
    if a.imag == 0 and b.imag == 0:
        ar, br = as_rational(a.real), as_rational(b.real)
        mq = (ar + br) / 2
        c2 = ((ar - br) / 2) ** 2
        circle = BoundaryCircle(x0=-mq if br >= ar else mq, y0=0)
        phi = 0.0 if br >= ar else math.pi
    else:
        ctr = -cmath.exp(-1j * phi) * m
        c2 = as_rational(abs(b - a) / 2) ** 2
        circle = BoundaryCircle(x0=as_rational(ctr.real), y0=as_rational(ctr.imag))
    if c2 == 0:
        pencil = ConfocalPencil(1, 1, concentric=True)
    else:
        pencil = ConfocalPencil(1 + c2, 1)
    return Frame(m=m, phi=phi, circle=circle, pencil=pencil)


@dataclass(frozen=True)
class CrosscheckReport:
    k: int
    t: float
    kind: ConicKind
    admissible_roots: int
    hyperbola_roots: list
    major_axis_cayley: float
    major_axis_blaschke: float
    foci_error: float

    @property
    def axis_error(self) -> float:
        return abs(self.major_axis_cayley - self.major_axis_blaschke)

    def ok(self, tol: float = 1e-9) -> bool:
        return (self.admissible_roots == 1 and self.kind in (ConicKind.ELLIPSE, ConicKind.CIRCLE)
                and self.axis_error <= tol and self.foci_error <= tol and not self.hyperbola_roots)


def unique_caustic_crosscheck(k: int, a, b) -> CrosscheckReport:
    """Compare the Blaschke ellipse with foci ``a, b`` to the Cayley caustics for ``k``.

    Admissible roots are real members (``t < a`` in the pencil frame).  The
    report lists any hyperbola among them separately.
    """
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    a, b = complex(a), complex(b)
    if max(abs(a), abs(b)) >= 1:
        raise ValueError("foci must lie in the open unit disk")
    fr = pencil_frame(a, b)
    roots = solve_caustics(k, fr.circle, fr.pencil, Domain.REAL_CONICS)
    f = fr.pencil.focal_distance
    back = sorted([fr.to_disk(f, 0.0), fr.to_disk(-f, 0.0)], key=lambda z: (z.real, z.imag))
    want = sorted([a, b], key=lambda z: (z.real, z.imag))
    foci_err = max(abs(x - y) for x, y in zip(back, want))
    if foci_err > 1e-9:
        raise FrameMismatch(f"frame maps the pencil foci {foci_err:.3g} away from a, b")
    if k == 3:
        blaschke_axis = abs(1 - a.conjugate() * b)
    else:
        prod = BlaschkeProduct.decomposable4(a, b)
        cc = blaschke_caustic(prod)
        blaschke_axis = 2.0 / math.sqrt(min(np.linalg.eigvalsh(_normalized_block(cc))))
    hyper = [r.t for r in roots if r.kind is ConicKind.HYPERBOLA]
    if not roots:
        return CrosscheckReport(k, math.nan, ConicKind.IMAGINARY, 0, hyper, math.nan, blaschke_axis, foci_err)
    r = roots[0]
    A = fr.pencil.a - (r.exact if r.exact is not None else Fraction((r.root.lo + r.root.hi) / 2))
    axis = 2.0 * math.sqrt(float(A)) if A > 0 else math.nan
    return CrosscheckReport(k, r.t, r.kind, len(roots), hyper, axis, blaschke_axis, foci_err)


def _normalized_block(c: Conic) -> np.ndarray:
    m = c.m
    ctr = c.center()
    k = -(m[2, 2] + m[:2, 2] @ ctr)
    return m[:2, :2] / k


# --------------------------------------------------------- outside focus


@dataclass(frozen=True)
class TriangleConfig:
    """A closed triangle with the crossing tangency pattern, in the circle's own frame."""

    vertices: np.ndarray
    tangency_points: np.ndarray
    foci: tuple
    focus_distances: tuple
    circle: BoundaryCircle
    pencil: ConfocalPencil
    t: Fraction


def _segment_param(p, q, x) -> float:
    d = q - p
    return float((x - p) @ d / (d @ d))


def triangle_configuration(circle: BoundaryCircle, pencil: ConfocalPencil, t,
                           tol: float = 1e-8) -> TriangleConfig | None:
    """The closed triangle for ``C(t)`` if its contact points follow the crossing pattern.

    The pattern: one contact point inside its side ``BC``; on ``AB`` the contact
    point lies beyond ``B``; on ``AC`` it lies beyond ``C``.
    """
    caustic = confocal_conic(pencil, t)
    start = None
    for j in range(360):
        p = circle.point(j / 360)
        if tangents_from_point(p, caustic):
            start = p
            break
    if start is None:
        return None
    tr = trajectory(start, caustic, circle, 4)
    rep = detect_period(tr, tol)
    if rep is None or rep.k != 3:
        return None
    V = tr.vertices[:3]
    T = tr.tangency_points[:3]  # T[i] on side V[i] V[i+1]
    s = [_segment_param(V[i], V[(i + 1) % 3], T[i]) for i in range(3)]
    inside = [i for i in range(3) if 0.0 < s[i] < 1.0]
    if len(inside) != 1:
        return None
    i = inside[0]
    B, C = (i, (i + 1) % 3)
    A = (i + 2) % 3
    # side A-B is side index A (V[A] -> V[B]); side C-A is side index C (V[C] -> V[A])
    s_ab = _segment_param(V[A], V[B], T[A])
    s_ac = _segment_param(V[A], V[C], T[C])
    if not (s_ab > 1.0 and s_ac > 1.0):
        return None
    f = pencil.focal_distance
    F1, F2 = np.array([f, 0.0]), np.array([-f, 0.0])
    c = circle.center
    d = (float(np.hypot(*(F1 - c))), float(np.hypot(*(F2 - c))))
    return TriangleConfig(vertices=V, tangency_points=T, foci=(F1, F2), focus_distances=d,
                          circle=circle, pencil=pencil, t=as_rational(t))


def outside_focus_search(circle: BoundaryCircle | None = None, samples: int = 200,
                         rng: np.random.Generator | None = None):
    """Random closed triangles about ellipses crossing the circle; checks a focus lies outside.

    Pencils are drawn at random (with ``circle`` fixed when given, a random
    centre per sample otherwise) and the triangle member ``t3`` is used
    whenever it is an ellipse.  Raises :class:`VerificationFailure` on a
    configuration with both foci inside.
    """
    from .cayley import closed_forms

    rng = np.random.default_rng(0) if rng is None else rng
    found = []
    for _ in range(samples):
        b = Fraction(int(rng.integers(1, 200)), 100)
        a = b + Fraction(int(rng.integers(1, 300)), 100)
        g = circle if circle is not None else BoundaryCircle(
            Fraction(int(rng.integers(-150, 151)), 100), Fraction(int(rng.integers(-150, 151)), 100))
        p = ConfocalPencil(a, b)
        t3 = closed_forms(g, p).t3
        if not t3 < b:
            continue
        cfg = triangle_configuration(g, p, t3)
        if cfg is None:
            continue
        if max(cfg.focus_distances) <= 1.0:
            raise VerificationFailure(f"both foci inside the circle for a={a}, b={b}, circle={g}")
        found.append(cfg)
    return found
