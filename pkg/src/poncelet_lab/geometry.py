"""Conic and pencil primitives.

Points are plain ``(x, y)`` pairs (tuples or length-2 arrays).  Lines are kept
in normalized homogeneous form ``u x + v y + w = 0`` with ``u**2 + v**2 == 1``
and tangency is always decided against the dual (adjugate) conic, which treats
ellipses, hyperbolas and the degenerate focal members of a confocal pencil the
same way.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegenerateConic,
    DegenerateMember,
    InvalidPencil,
    NoIntersection,
    NotCollinear,
    PointNotOnObjects,
)

__all__ = [
    "as_rational",
    "BoundaryCircle",
    "ConfocalPencil",
    "ConicKind",
    "Conic",
    "Line",
    "confocal_conic",
    "foci",
    "tangents_from_point",
    "second_intersection",
    "cross_ratio",
    "ellipse_from_foci",
    "circle_conic",
    "conic_circle_intersections",
    "adjugate",
]


def as_rational(value) -> Fraction:
    """Convert user input to an exact rational.

    Floats are read through their shortest decimal repr, so ``1.5`` and ``0.3``
    become ``3/2`` and ``3/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "p") and hasattr(value, "q"):  # sympy Rational
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def _sqrt_rational(q: Fraction) -> float:
    return math.sqrt(q.numerator) / math.sqrt(q.denominator) if q >= 0 else math.nan


@dataclass(frozen=True)
class BoundaryCircle:
    """The unit circle centred at ``(x0, y0)``.

    The Cayley machinery only ever needs ``x0**2`` and ``y0**2``; those are
    kept exactly.  Use :meth:`from_squares` when the centre itself is
    irrational (e.g. ``y0 = sqrt(1/2)``).
    """

    x0: float | Fraction = 0
    y0: float | Fraction = 0
    x0_sq: Fraction = field(default=None, repr=False)
    y0_sq: Fraction = field(default=None, repr=False)

    def __post_init__(self):
        if self.x0_sq is None:
            x0 = as_rational(self.x0)
            object.__setattr__(self, "x0", x0)
            object.__setattr__(self, "x0_sq", x0 * x0)
        if self.y0_sq is None:
            y0 = as_rational(self.y0)
            object.__setattr__(self, "y0", y0)
            object.__setattr__(self, "y0_sq", y0 * y0)

    @classmethod
    def from_squares(cls, x0_sq, y0_sq, x_sign: int = 1, y_sign: int = 1) -> "BoundaryCircle":
        xs, ys = as_rational(x0_sq), as_rational(y0_sq)
        if xs < 0 or ys < 0:
            raise ValueError("squared centre coordinates must be non-negative")
        x0 = _exact_root(xs)
        y0 = _exact_root(ys)
        x0 = (x0 if x0 is not None else _sqrt_rational(xs)) * (1 if x_sign >= 0 else -1)
        y0 = (y0 if y0 is not None else _sqrt_rational(ys)) * (1 if y_sign >= 0 else -1)
        return cls(x0=x0, y0=y0, x0_sq=xs, y0_sq=ys)

    @property
    def center(self) -> np.ndarray:
        return np.array([float(self.x0), float(self.y0)])

    @property
    def matrix(self) -> np.ndarray:
        x0, y0 = float(self.x0), float(self.y0)
        return np.array(
            [[1.0, 0.0, -x0], [0.0, 1.0, -y0], [-x0, -y0, float(self.x0_sq + self.y0_sq - 1)]]
        )

    def point(self, angle: float) -> np.ndarray:
        """Point at lifted parameter ``angle`` (in turns, counterclockwise)."""
        th = 2.0 * math.pi * angle
        return self.center + np.array([math.cos(th), math.sin(th)])

    def parameter(self, p) -> float:
        """Parameter in ``[0, 1)`` of a point on the circle."""
        c = self.center
        s = math.atan2(p[1] - c[1], p[0] - c[0]) / (2.0 * math.pi)
        return s % 1.0

    def is_exact(self) -> bool:
        return isinstance(self.x0, Fraction) and isinstance(self.y0, Fraction)


def _exact_root(q: Fraction):
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ConfocalPencil:
    """Confocal family ``x^2/(a-t) + y^2/(b-t) = 1`` with ``a > b > 0``.

    ``a == b`` (concentric circles) is accepted only with ``concentric=True``.
    """

    a: Fraction
    b: Fraction
    concentric: bool = False

    def __post_init__(self):
        a, b = as_rational(self.a), as_rational(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if b <= 0:
            raise InvalidPencil(f"need b > 0, got b={b}")
        if a < b or (a == b and not self.concentric):
            raise InvalidPencil(f"need a > b (got a={a}, b={b}); a == b requires concentric=True")
        if a > b and self.concentric:
            raise InvalidPencil("concentric flag given but a != b")

    @property
    def focal_distance(self) -> float:
        return _sqrt_rational(self.a - self.b)

    def kind_at(self, t) -> "ConicKind":
        t = as_rational(t) if not isinstance(t, float) else t
        if t == self.a or t == self.b:
            return ConicKind.DEGENERATE_PAIR
        if t > self.a:
            return ConicKind.IMAGINARY
        if t < self.b:
            return ConicKind.CIRCLE if self.a == self.b else ConicKind.ELLIPSE
        return ConicKind.HYPERBOLA


class ConicKind(str, enum.Enum):
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    DEGENERATE_PAIR = "degenerate"
    CIRCLE = "circle"
    IMAGINARY = "imaginary"


def adjugate(m: np.ndarray) -> np.ndarray:
    """Adjugate of a 3x3 matrix (transpose of the cofactor matrix)."""
    m = np.asarray(m, dtype=float)
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(m, i, axis=0), j, axis=1)
            cof[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return cof.T


def _classify_matrix(m: np.ndarray) -> ConicKind:
    blk = m[:2, :2]
    det2 = blk[0, 0] * blk[1, 1] - blk[0, 1] ** 2
    scale = max(abs(blk).max(), 1e-300)
    if abs(det2) <= 1e-14 * scale * scale:
        return ConicKind.DEGENERATE_PAIR
    if det2 < 0:
        return ConicKind.HYPERBOLA
    # definite block: real ellipse only if the centre value has the opposite sign
    if abs(np.linalg.det(m)) <= 1e-14 * abs(m).max() ** 3:
        return ConicKind.DEGENERATE_PAIR
    center = np.linalg.solve(blk, -m[:2, 2])
    val = m[2, 2] + m[:2, 2] @ center
    if val * blk[0, 0] > 0:
        return ConicKind.IMAGINARY
    if abs(blk[0, 1]) <= 1e-14 * scale and abs(blk[0, 0] - blk[1, 1]) <= 1e-14 * scale:
        return ConicKind.CIRCLE
    return ConicKind.ELLIPSE


@dataclass(frozen=True, eq=False)
class Conic:
    """Symmetric 3x3 point-conic matrix with its dual and a kind tag."""

    m: np.ndarray
    kind: ConicKind
    dual: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        dual = adjugate(m) if self.dual is None else np.array(self.dual, dtype=float)
        nrm = np.abs(dual).max()
        if nrm > 0:
            dual = dual / nrm
        dual.setflags(write=False)
        object.__setattr__(self, "dual", dual)

    @classmethod
    def from_matrix(cls, m) -> "Conic":
        m = np.asarray(m, dtype=float)
        m = 0.5 * (m + m.T)
        return cls(m=m, kind=_classify_matrix(m))

    @property
    def is_degenerate(self) -> bool:
        return self.kind is ConicKind.DEGENERATE_PAIR

    def value(self, p) -> float:
        """Quadratic form at the point; negative inside an ellipse in standard scaling."""
        h = np.array([p[0], p[1], 1.0])
        return float(h @ self.m @ h)

    def tangency_residual(self, line: "Line") -> float:
        l = line.coeffs
        return abs(float(l @ self.dual @ l))

    def pole(self, line: "Line") -> np.ndarray:
        """Point of contact of a tangent line (the pole of the line)."""
        h = self.dual @ line.coeffs
        if abs(h[2]) < 1e-300:
            return np.array([math.inf, math.inf])
        return h[:2] / h[2]

    def center(self) -> np.ndarray:
        return np.linalg.solve(self.m[:2, :2], -self.m[:2, 2])

    def foci(self):
        """Foci of a central conic (ellipse, circle or hyperbola)."""
        m = self.m
        c = self.center()
        blk = m[:2, :2]
        k = -(m[2, 2] + m[:2, 2] @ c)
        w, vecs = np.linalg.eigh(blk / k)  # x^T (blk/k) x = 1 in centred frame
        # semi-axis^2 along eigenvectors = 1/w (negative for the imaginary axis)
        inv = 1.0 / w
        if self.kind is ConicKind.HYPERBOLA:
            i_real = int(np.argmax(inv))
            f = math.sqrt(abs(inv[0]) + abs(inv[1]))
            d = vecs[:, i_real]
        else:
            i_major = int(np.argmax(inv))
            f = math.sqrt(max(inv[i_major] - inv[1 - i_major], 0.0))
            d = vecs[:, i_major]
        return c + f * d, c - f * d

    def sample(self, n: int = 512, extent: float | None = None):
        """Polylines tracing the real locus (one per ellipse, two per hyperbola)."""
        c = self.center()
        m = self.m
        k = -(m[2, 2] + m[:2, 2] @ c)
        w, vecs = np.linalg.eigh(m[:2, :2] / k)
        if self.kind in (ConicKind.ELLIPSE, ConicKind.CIRCLE):
            th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=True)
            ax = 1.0 / np.sqrt(w)
            local = np.stack([ax[0] * np.cos(th), ax[1] * np.sin(th)], axis=1)
            return [c + local @ vecs.T]
        if self.kind is ConicKind.HYPERBOLA:
            i_real = int(np.argmax(w))
            i_imag = 1 - i_real
            A, B = 1.0 / math.sqrt(w[i_real]), 1.0 / math.sqrt(-w[i_imag])
            umax = math.acosh(max(extent / A, 1.0)) + 0.5 if extent else 3.0
            u = np.linspace(-umax, umax, n)
            out = []
            for s in (1.0, -1.0):
                loc = np.zeros((n, 2))
                loc[:, i_real] = s * A * np.cosh(u)
                loc[:, i_imag] = B * np.sinh(u)
                out.append(c + loc @ vecs.T)
            return out
        return []


@dataclass(frozen=True)
class Line:
    """Normalized homogeneous line ``u x + v y + w = 0``."""

    u: float
    v: float
    w: float

    def __post_init__(self):
        n = math.hypot(self.u, self.v)
        if n == 0:
            raise ValueError("line at infinity / zero line")
        object.__setattr__(self, "u", self.u / n)
        object.__setattr__(self, "v", self.v / n)
        object.__setattr__(self, "w", self.w / n)

    @classmethod
    def from_coeffs(cls, coeffs) -> "Line":
        return cls(float(coeffs[0]), float(coeffs[1]), float(coeffs[2]))

    @classmethod
    def through(cls, p, q) -> "Line":
        c = np.cross([p[0], p[1], 1.0], [q[0], q[1], 1.0])
        return cls.from_coeffs(c)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    @property
    def direction(self) -> np.ndarray:
        return np.array([-self.v, self.u])

    def distance(self, p) -> float:
        return abs(self.u * p[0] + self.v * p[1] + self.w)

    def contains(self, p, tol: float = 1e-10) -> bool:
        return self.distance(p) <= tol

    def same_as(self, other: "Line", tol: float = 1e-9) -> bool:
        a, b = self.coeffs, other.coeffs
        return min(np.abs(a - b).max(), np.abs(a + b).max()) <= tol


def confocal_conic(pencil: ConfocalPencil, t, allow_degenerate: bool = False) -> Conic:
    """Member ``x^2/(a-t) + y^2/(b-t) = 1`` of the pencil.

    The degenerate members ``t in {a, b}`` are available behind
    ``allow_degenerate``; they are stored through their dual (the pencil of
    lines through the two foci for ``t = b``).
    """
    a, b = pencil.a, pencil.b
    tt = t if isinstance(t, float) else as_rational(t)
    if tt == a or tt == b:
        if not allow_degenerate:
            raise DegenerateMember(f"t={t} is a degenerate member of the pencil")
        A, B = float(a - tt), float(b - tt)
        m = np.diag([B, A, -A * B])
        return Conic(m=m, kind=ConicKind.DEGENERATE_PAIR, dual=np.diag([A, B, -1.0]))
    A, B = float(a - tt), float(b - tt)
    m = np.diag([1.0 / A, 1.0 / B, -1.0])
    return Conic(m=m, kind=pencil.kind_at(tt), dual=np.diag([A, B, -1.0]))


def foci(pencil: ConfocalPencil):
    c = pencil.focal_distance
    return (c, 0.0), (-c, 0.0)


def tangents_from_point(p, c: Conic, rel_tol: float = 1e-12) -> list[Line]:
    """Real tangent lines from ``p`` to ``c``: 0 (interior), 1 (on ``c``) or 2."""
    if c.is_degenerate:
        raise DegenerateConic("tangents to a degenerate conic are undefined")
    D = c.dual
    px, py = float(p[0]), float(p[1])
    L1 = np.array([1.0, 0.0, -px])
    L2 = np.array([0.0, 1.0, -py])
    A = L1 @ D @ L1
    B = L1 @ D @ L2
    C = L2 @ D @ L2
    disc = B * B - A * C
    scale = max(B * B, abs(A * C), abs(A) ** 2, abs(C) ** 2, 1e-300)
    if disc < -rel_tol * scale:
        return []
    if abs(disc) <= rel_tol * scale:
        disc = 0.0
    sq = math.sqrt(disc)
    q = -(B + math.copysign(sq, B))
    if q == 0.0:
        roots = [(1.0, 0.0)] if A == 0.0 else [(0.0, 1.0)]
    else:
        roots = [(q, A), (C, q)]
    lines = []
    for s, r in roots:
        coeffs = s * L1 + r * L2
        if math.hypot(coeffs[0], coeffs[1]) == 0:
            continue
        ln = Line.from_coeffs(coeffs)
        if not any(ln.same_as(o) for o in lines):
            lines.append(ln)
    return lines


def second_intersection(l: Line, g: BoundaryCircle, known, tol: float = 1e-10) -> np.ndarray:
    """Other point where ``l`` meets the circle, given one intersection ``known``."""
    c = g.center
    k = np.asarray(known, dtype=float)
    if l.distance(k) > tol or abs(np.hypot(*(k - c)) - 1.0) > tol:
        raise PointNotOnObjects("known point is not on both the line and the circle")
    if l.distance(c) > 1.0 + tol:
        raise NoIntersection("line misses the circle")
    d = l.direction
    s = -2.0 * float(d @ (k - c))
    return k + s * d


def _line_param(p, origin, d):
    """Homogeneous coordinate of a (possibly infinite) point along a line."""
    if len(p) == 3 and p[2] == 0:
        return float(np.dot(p[:2], d)), 0.0
    q = np.array([p[0], p[1]], dtype=float) / (p[2] if len(p) == 3 else 1.0)
    return float(np.dot(q - origin, d)), 1.0


def cross_ratio(p1, p2, p3, p4, tol: float = 1e-10) -> float:
    """Cross-ratio ``(p1-p2)(p3-p4) / ((p1-p4)(p3-p2))`` of four collinear points.

    Points may be ``(x, y)`` or homogeneous ``(x, y, w)``; ``w = 0`` denotes
    the point at infinity in direction ``(x, y)``.
    """
    pts = [np.asarray(p, dtype=float) for p in (p1, p2, p3, p4)]
    finite = [p[:2] / p[2] if len(p) == 3 and p[2] != 0 else p[:2] for p in pts if len(p) == 2 or p[2] != 0]
    if len(finite) < 2:
        raise NotCollinear("need at least two finite points")
    origin = finite[0]
    far = max(finite, key=lambda q: np.hypot(*(q - origin)))
    d = far - origin
    if np.hypot(*d) == 0:
        inf_dirs = [p[:2] for p in pts if len(p) == 3 and p[2] == 0]
        if not inf_dirs:
            raise NotCollinear("points are not distinct")
        d = inf_dirs[0]
    d = d / np.hypot(*d)
    nrm = np.array([-d[1], d[0]])
    for p in pts:
        if len(p) == 3 and p[2] == 0:
            dev = abs(float(p[:2] @ nrm)) / max(np.hypot(*p[:2]), 1e-300)
        else:
            q = p[:2] / (p[2] if len(p) == 3 else 1.0)
            dev = abs(float((q - origin) @ nrm))
        if dev > tol:
            raise NotCollinear(f"deviation {dev:.3g} from the common line")
    h = [_line_param(p, origin, d) for p in pts]

    def br(i, j):
        return h[i][0] * h[j][1] - h[j][0] * h[i][1]

    return (br(0, 1) * br(2, 3)) / (br(0, 3) * br(2, 1))


def ellipse_from_foci(f1, f2, major_axis: float) -> Conic:
    """Ellipse ``|w - f1| + |w - f2| = major_axis``."""
    f1, f2 = np.asarray(f1, dtype=float), np.asarray(f2, dtype=float)
    A = 0.5 * major_axis
    cdist = 0.5 * float(np.hypot(*(f2 - f1)))
    if A <= cdist:
        raise ValueError("major axis must exceed the focal distance")
    B = math.sqrt(A * A - cdist * cdist)
    ctr = 0.5 * (f1 + f2)
    phi = math.atan2(f2[1] - f1[1], f2[0] - f1[0]) if cdist > 0 else 0.0
    R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    Q = R @ np.diag([1.0 / A**2, 1.0 / B**2]) @ R.T
    m = np.zeros((3, 3))
    m[:2, :2] = Q
    m[:2, 2] = m[2, :2] = -Q @ ctr
    m[2, 2] = ctr @ Q @ ctr - 1.0
    kind = ConicKind.CIRCLE if cdist == 0 else ConicKind.ELLIPSE
    return Conic(m=m, kind=kind)


def circle_conic(center, radius: float) -> Conic:
    cx, cy = float(center[0]), float(center[1])
    m = np.array([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [-cx, -cy, cx * cx + cy * cy - radius * radius]])
    return Conic(m=m, kind=ConicKind.CIRCLE)


def conic_circle_intersections(c: Conic, g: BoundaryCircle, samples: int = 4096) -> list[np.ndarray]:
    """Transversal intersection points of a conic with the boundary circle."""
    ctr = g.center

    def f(th):
        return c.value(ctr + np.array([math.cos(th), math.sin(th)]))

    th = np.linspace(0.0, 2.0 * math.pi, samples + 1)
    vals = np.array([f(x) for x in th])
    pts = []
    for i in range(samples):
        if vals[i] == 0.0:
            root = th[i]
        elif vals[i] * vals[i + 1] < 0:
            root = brentq(f, th[i], th[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
        else:
            continue
        pts.append(ctr + np.array([math.cos(root), math.sin(root)]))
    return pts
