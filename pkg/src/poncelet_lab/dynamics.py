"""The Poncelet map on the boundary circle and its rotation number.

The state of the map is a flag ``(vertex, edge line)``.  The next vertex is the
second intersection of the edge with the circle; the next edge is the other
tangent from that vertex to the caustic.  The other tangent is obtained from
the tangency quadratic restricted to the pencil of lines through the new vertex,
written in the basis ``(current edge, its perpendicular)``.  One root of that
quadratic is the current edge, so the wanted root comes out by Vieta without
cancellation.

Angles on the circle are measured in turns, counterclockwise from the
positive x direction at the centre.  Lifts add the increment of each step
reduced mod 1, so they increase by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoRealTangent, StepError, TangentMissesCircle
from .geometry import BoundaryCircle, Conic, Line, tangents_from_point

__all__ = [
    "LiftedTrajectory",
    "PeriodReport",
    "poncelet_step",
    "first_edge",
    "trajectory",
    "detect_period",
    "rotation_number",
    "default_start",
    "lift_batch",
    "lift_extended",
    "orbit_extended",
]

TWO_PI = 2.0 * math.pi


def _turns(x: float, y: float, cx: float, cy: float) -> float:
    return (math.atan2(y - cy, x - cx) / TWO_PI) % 1.0


def _advance(vx, vy, u, v, w, D, cx, cy):
    """One step of the flag map; returns the new vertex, new line and the pole of the old line."""
    # second intersection of the line with the circle
    dx, dy = -v, u
    s = -2.0 * (dx * (vx - cx) + dy * (vy - cy))
    nx, ny = vx + s * dx, vy + s * dy
    rx, ry = nx - cx, ny - cy
    r = math.hypot(rx, ry)
    nx, ny = cx + rx / r, cy + ry / r
    # pole of the old line (its point of contact with the caustic)
    ph = (D[0][0] * u + D[0][1] * v + D[0][2] * w,
          D[1][0] * u + D[1][1] * v + D[1][2] * w,
          D[2][0] * u + D[2][1] * v + D[2][2] * w)
    # other tangent through the new vertex
    w = -(u * nx + v * ny)
    u2, v2 = -v, u
    w2 = -(u2 * nx + v2 * ny)
    l1 = (u, v, w)
    l2 = (u2, v2, w2)
    Dl1 = [D[i][0] * u + D[i][1] * v + D[i][2] * w for i in range(3)]
    Dl2 = [D[i][0] * u2 + D[i][1] * v2 + D[i][2] * w2 for i in range(3)]
    A = l1[0] * Dl1[0] + l1[1] * Dl1[1] + l1[2] * Dl1[2]
    B = l1[0] * Dl2[0] + l1[1] * Dl2[1] + l1[2] * Dl2[2]
    C = l2[0] * Dl2[0] + l2[1] * Dl2[1] + l2[2] * Dl2[2]
    disc = B * B - A * C
    if disc < 0.0:
        disc = 0.0
    q = -(B + math.copysign(math.sqrt(disc), B))
    nu, nv, nw = C * u + q * u2, C * v + q * v2, C * w + q * w2
    if nu == 0.0 and nv == 0.0:
        nu, nv, nw = u, v, w
    n = math.hypot(nu, nv)
    return nx, ny, nu / n, nv / n, nw / n, ph


def _dehomog(h) -> tuple[float, float]:
    if h[2] == 0.0:
        return (math.inf, math.inf)
    return (h[0] / h[2], h[1] / h[2])


def first_edge(v, caustic: Conic, circle: BoundaryCircle, orientation: int = 1) -> Line:
    """Edge leaving ``v``: the tangent whose far end is reached first going around ``orientation``."""
    lines = tangents_from_point(v, caustic)
    if not lines:
        raise NoRealTangent(f"no real tangent from {tuple(np.round(v, 12))} to the caustic")
    c = circle.center
    if any(ln.distance(c) > 1.0 + 1e-10 for ln in lines):
        raise TangentMissesCircle("a tangent line misses the circle")
    th0 = _turns(v[0], v[1], c[0], c[1])

    def increment(ln: Line) -> float:
        d = ln.direction
        s = -2.0 * float(d @ (np.asarray(v, dtype=float) - c))
        w = np.asarray(v, dtype=float) + s * d
        inc = ((_turns(w[0], w[1], c[0], c[1]) - th0) * orientation) % 1.0
        return inc if inc > 0 else 1.0

    return min(lines, key=increment)


def poncelet_step(v, caustic: Conic, circle: BoundaryCircle, prev=None, orientation: int = 1):
    """Next vertex and the point of contact of the edge ``v -> next``.

    Without ``prev`` the orientation rule picks the edge; with ``prev`` the
    edge is the tangent from ``v`` other than the one through ``prev``.
    """
    v = np.asarray(v, dtype=float)
    c = circle.center
    if abs(math.hypot(*(v - c)) - 1.0) > 1e-10:
        raise StepError("vertex is not on the circle")
    if prev is None:
        ln = first_edge(v, caustic, circle, orientation)
    else:
        lines = tangents_from_point(v, caustic)
        if not lines:
            raise NoRealTangent("no real tangent from the vertex")
        prev = np.asarray(prev, dtype=float)
        ln = max(lines, key=lambda l: l.distance(prev))
    d = ln.direction
    s = -2.0 * float(d @ (v - c))
    w = v + s * d
    w = c + (w - c) / math.hypot(*(w - c))
    return w, np.array(_dehomog(caustic.dual @ ln.coeffs))


@dataclass(frozen=True, eq=False)
class LiftedTrajectory:
    """Vertices, contact points and lifted angles (in turns) of a Poncelet polyline."""

    angles: np.ndarray
    vertices: np.ndarray
    tangency_points: np.ndarray
    lines: np.ndarray = field(repr=False)
    orientation: int = 1

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def steps(self) -> int:
        return len(self.vertices) - 1

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.angles)

    def max_tangency_residual(self, caustic: Conic) -> float:
        if len(self.lines) == 0:
            return 0.0
        return float(np.abs(np.einsum("ni,ij,nj->n", self.lines, caustic.dual, self.lines)).max())


def trajectory(start, caustic: Conic, circle: BoundaryCircle, n: int,
               orientation: int = 1) -> LiftedTrajectory:
    """``n`` steps of the Poncelet map from ``start``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    start = np.asarray(start, dtype=float)
    c = circle.center
    cx, cy = float(c[0]), float(c[1])
    try:
        ln = first_edge(start, caustic, circle, orientation)
    except StepError as exc:
        raise type(exc)(str(exc), index=0) from None
    D = caustic.dual.tolist()
    vx, vy = float(start[0]), float(start[1])
    u, v, w = ln.u, ln.v, ln.w
    verts = np.empty((n + 1, 2))
    lines = np.empty((n, 3))
    poles = np.empty((n, 2))
    lift = np.empty(n + 1)
    verts[0] = vx, vy
    th = _turns(vx, vy, cx, cy)
    lift[0] = th
    for i in range(n):
        lines[i] = u, v, w
        if abs(u * cx + v * cy + w) > 1.0 + 1e-9:
            raise TangentMissesCircle("edge line misses the circle", index=i)
        vx, vy, u, v, w, ph = _advance(vx, vy, u, v, w, D, cx, cy)
        poles[i] = _dehomog(ph)
        verts[i + 1] = vx, vy
        th_new = _turns(vx, vy, cx, cy)
        lift[i + 1] = lift[i] + ((th_new - th) * orientation) % 1.0
        th = th_new
    return LiftedTrajectory(angles=lift, vertices=verts, tangency_points=poles, lines=lines,
                            orientation=orientation)


@dataclass(frozen=True)
class PeriodReport:
    """Closure data: ``k`` steps, total winding ``p``.

    ``distinct_vertices`` counts geometrically different vertices among the
    ``k`` (less than ``k`` for orbits that revisit a vertex, e.g. ``N P N Q``).
    """

    k: int
    p: int
    closure_error: float
    distinct_vertices: int

    @property
    def rho(self) -> Fraction:
        return Fraction(self.p, self.k)


def _count_distinct(pts: np.ndarray, tol: float) -> int:
    reps: list[np.ndarray] = []
    for q in pts:
        if not any(np.hypot(*(q - r)) < tol for r in reps):
            reps.append(q)
    return len(reps)


def detect_period(traj: LiftedTrajectory, tol: float = 1e-9) -> PeriodReport | None:
    """Smallest ``k`` at which the flag (vertex, next vertex) returns to its start.

    Comparing flags rather than single vertices keeps orbits such as
    ``N P N Q`` (period 4 with a repeated vertex) from being cut at 2.
    """
    V = traj.vertices
    n = len(V) - 1
    for k in range(1, n + 1):
        e0 = float(np.hypot(*(V[k] - V[0])))
        if e0 >= tol:
            continue
        e1 = float(np.hypot(*(V[k + 1] - V[1]))) if k + 1 <= n else 0.0
        if e1 >= tol:
            continue
        p = int(round(traj.angles[k] - traj.angles[0]))
        return PeriodReport(k=k, p=p, closure_error=max(e0, e1),
                            distinct_vertices=_count_distinct(V[:k], max(tol, 1e-7)))
    return None


def default_start(caustic: Conic, circle: BoundaryCircle, samples: int = 720) -> np.ndarray:
    """Angle-0 point of the circle, or the first sampled point that has real tangents."""
    for j in range(samples):
        p = circle.point(j / samples)
        if tangents_from_point(p, caustic):
            return p
    # the visible arc can be far narrower than the sampling step: climb the
    # tangent discriminant to its maximum instead
    D = caustic.dual
    c = circle.center

    def disc(s):
        px, py = c[0] + math.cos(2 * math.pi * s), c[1] + math.sin(2 * math.pi * s)
        L1, L2 = np.array([1.0, 0.0, -px]), np.array([0.0, 1.0, -py])
        return float((L1 @ D @ L2) ** 2 - (L1 @ D @ L1) * (L2 @ D @ L2))

    vals = [disc(j / samples) for j in range(samples)]
    j = int(np.argmax(vals))
    h = 1.0 / samples
    res = minimize_scalar(lambda s: -disc(s), bounds=(j * h - h, j * h + h), method="bounded",
                          options={"xatol": 1e-15})
    p = circle.point(float(res.x))
    if tangents_from_point(p, caustic):
        return p
    raise NoRealTangent("no point of the circle sees the caustic")


def rotation_number(caustic: Conic, circle: BoundaryCircle, n: int = 100_000,
                    start=None) -> tuple[float, float]:
    """``(lift_n / n, 1 / n)`` for the Poncelet map from ``start``."""
    if start is None:
        start = default_start(caustic, circle)
    tr = trajectory(start, caustic, circle, n)
    return float((tr.angles[-1] - tr.angles[0]) / n), 1.0 / n


def lift_batch(duals: np.ndarray, circle: BoundaryCircle, starts: np.ndarray,
               first_lines: np.ndarray, n: int) -> np.ndarray:
    """Total lifts after ``n`` steps for many independent (caustic, start) pairs.

    ``duals`` has shape ``(N, 3, 3)``; ``starts`` ``(N, 2)``; ``first_lines``
    the initial edges ``(N, 3)``.  Same arithmetic as :func:`trajectory`,
    vectorized across the batch.
    """
    D = np.asarray(duals, dtype=float)
    V = np.array(starts, dtype=float)
    L = np.array(first_lines, dtype=float)
    L /= np.hypot(L[:, 0], L[:, 1])[:, None]
    cx, cy = circle.center
    th = (np.arctan2(V[:, 1] - cy, V[:, 0] - cx) / TWO_PI) % 1.0
    total = np.zeros(len(V))
    for _ in range(n):
        u, v = L[:, 0], L[:, 1]
        s = -2.0 * (-v * (V[:, 0] - cx) + u * (V[:, 1] - cy))
        rx = V[:, 0] + s * (-v) - cx
        ry = V[:, 1] + s * u - cy
        r = np.hypot(rx, ry)
        V = np.stack([cx + rx / r, cy + ry / r], axis=1)
        w = -(u * V[:, 0] + v * V[:, 1])
        l1 = np.stack([u, v, w], axis=1)
        l2 = np.stack([-v, u, v * V[:, 0] - u * V[:, 1]], axis=1)
        Dl2 = np.einsum("nij,nj->ni", D, l2)
        A = np.einsum("ni,nij,nj->n", l1, D, l1)
        B = np.einsum("ni,ni->n", l1, Dl2)
        C = np.einsum("ni,ni->n", l2, Dl2)
        disc = np.maximum(B * B - A * C, 0.0)
        q = -(B + np.copysign(np.sqrt(disc), B))
        L = C[:, None] * l1 + q[:, None] * l2
        nrm = np.hypot(L[:, 0], L[:, 1])
        bad = nrm == 0.0
        if bad.any():
            L[bad] = l1[bad]
            nrm[bad] = np.hypot(L[bad, 0], L[bad, 1])
        L /= nrm[:, None]
        th_new = (np.arctan2(V[:, 1] - cy, V[:, 0] - cx) / TWO_PI) % 1.0
        total += (th_new - th) % 1.0
        th = th_new
    return total


def lift_extended(A, B, cx, cy, n: int, bits: int = 256) -> Fraction:
    """Total lift after ``n`` steps for the caustic with dual ``diag(A, B, -1)``, in MPFR.

    ``A, B, cx, cy`` are exact rationals, or ``(square, sign)`` pairs for
    centre coordinates only known through their squares.  The start is the
    angle-0 point of the circle.  Needed where the caustic is within
    ``2**-50`` of touching the circle or of collapsing onto its focal segment,
    beyond the reach of double precision.
    """
    return orbit_extended(A, B, cx, cy, n, bits=bits)[0]


def orbit_extended(A, B, cx, cy, n: int, start=0, bits: int = 256, keep_vertices: bool = False):
    """``(lift, vertices)`` of ``n`` MPFR steps from the circle point at ``start`` turns.

    Arguments as in :func:`lift_extended`.  ``vertices`` is an ``(n + 1, 2)``
    float array when ``keep_vertices`` is set, else ``None``; the closure gap
    ``|V_n - V_0|`` is computed in MPFR before rounding and returned as the
    third item.
    """
    import gmpy2
    from gmpy2 import mpfr, mpq

    def num(x):
        if isinstance(x, tuple):
            sq, sign = x
            r = gmpy2.sqrt(mpfr(mpq(sq.numerator, sq.denominator)))
            return r if sign >= 0 else -r
        x = Fraction(x)
        return mpfr(mpq(x.numerator, x.denominator))

    with gmpy2.context(gmpy2.get_context(), precision=bits):
        A, B, cx, cy = num(A), num(B), num(cx), num(cy)
        zero = mpfr(0)
        two_pi = 2 * gmpy2.const_pi()

        def turns(x, y):
            d = gmpy2.atan2(y - cy, x - cx) / two_pi
            return d - gmpy2.floor(d)

        def quad(l1, l2):
            return A * l1[0] * l2[0] + B * l1[1] * l2[1] - l1[2] * l2[2]

        def sgn_sqrt(Bq, disc):
            sq = gmpy2.sqrt(disc if disc > 0 else zero)
            return -(Bq + sq) if Bq >= 0 else -(Bq - sq)

        def far_end(vx, vy, u, v):
            s = -2 * (-v * (vx - cx) + u * (vy - cy))
            return vx - s * v, vy + s * u

        s0 = Fraction(start)
        ang = two_pi * mpfr(mpq(s0.numerator, s0.denominator))
        vx, vy = cx + gmpy2.cos(ang), cy + gmpy2.sin(ang)
        x0, y0 = vx, vy
        verts = [(float(vx), float(vy))] if keep_vertices else None
        L1 = (mpfr(1), zero, -vx)
        L2 = (zero, mpfr(1), -vy)
        Aq, Bq, Cq = quad(L1, L1), quad(L1, L2), quad(L2, L2)
        q = sgn_sqrt(Bq, Bq * Bq - Aq * Cq)
        th = turns(vx, vy)
        best = None
        for s1, s2 in ((q, Aq), (Cq, q)):
            u, v = s1, s2
            nn = gmpy2.hypot(u, v)
            if nn == 0:
                continue
            u, v = u / nn, v / nn
            wx, wy = far_end(vx, vy, u, v)
            inc = turns(wx, wy) - th
            inc = inc - gmpy2.floor(inc)
            if inc == 0:
                inc = mpfr(1)
            if best is None or inc < best[0]:
                best = (inc, u, v)
        if best is None:
            raise NoRealTangent("no real tangent from the start point")
        _, u, v = best
        total = zero
        for _ in range(n):
            nx, ny = far_end(vx, vy, u, v)
            rx, ry = nx - cx, ny - cy
            r = gmpy2.hypot(rx, ry)
            vx, vy = cx + rx / r, cy + ry / r
            l1 = (u, v, -(u * vx + v * vy))
            l2 = (-v, u, v * vx - u * vy)
            Aq, Bq, Cq = quad(l1, l1), quad(l1, l2), quad(l2, l2)
            q = sgn_sqrt(Bq, Bq * Bq - Aq * Cq)
            nu, nv = Cq * l1[0] + q * l2[0], Cq * l1[1] + q * l2[1]
            nn = gmpy2.hypot(nu, nv)
            if nn != 0:
                u, v = nu / nn, nv / nn
            if keep_vertices:
                verts.append((float(vx), float(vy)))
            t_new = turns(vx, vy)
            d = t_new - th
            total += d - gmpy2.floor(d)
            th = t_new
        m, e = total.as_integer_ratio()
        gap = float(gmpy2.hypot(vx - x0, vy - y0))
        return Fraction(m, e), (np.array(verts) if keep_vertices else None), gap
