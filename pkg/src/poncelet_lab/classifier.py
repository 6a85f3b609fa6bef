"""Iso-periodic pencils, their certificates, and rotation-number profiles.

A pencil is 4-iso-periodic for the circle exactly when its foci lie on the
circle, when they are mirror images in it, or when the pencil collapses to
concentric circles centred on the circle.  :func:`classify` reads that off
the parameters; :func:`certify_isoperiodic` decides the same thing from the
exact Cayley condition, and the two are tested against each other.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .cayley import cayley_condition, closed_forms, pencil_cubic
from .errors import BranchNotApplicable, FociNotInside, NoRealIntersection
from .geometry import (
    BoundaryCircle,
    ConfocalPencil,
    Conic,
    Line,
    as_rational,
    circle_conic,
    confocal_conic,
    conic_circle_intersections,
    cross_ratio,
)
from .dynamics import default_start, first_edge, lift_batch, lift_extended
from .ratfunc import RationalFunctionT
from .roots import real_roots

__all__ = [
    "IsoTag",
    "IsoPeriodicClass",
    "classify",
    "CertificateAllT",
    "Refutation",
    "certify_isoperiodic",
    "CaseReport",
    "noisorot_case_analysis",
    "foci_inside",
    "tangency_discriminant",
    "T0",
    "locate_t0",
    "profile_positions",
    "Verdict",
    "RhoProfile",
    "rho_profile",
    "Quadrilateral",
    "explicit_quadrilateral",
    "focal_circle_quadrilateral",
]


# ---------------------------------------------------------------- classes


class IsoTag(str, enum.Enum):
    FOCI_ON_CIRCLE = "FociOnCircle"
    FOCI_SYMMETRIC_TO_CIRCLE = "FociSymmetricToCircle"
    CONCENTRIC_CENTER_ON_GAMMA = "ConcentricCirclesCenterOnGamma"
    NOT_ISO_PERIODIC = "NotIsoPeriodic"


@dataclass(frozen=True)
class IsoPeriodicClass:
    """Tag plus the exact values of the three defining relations.

    ``witness`` maps each relation to the value of ``lhs - rhs``; the tag is
    the first relation (in the order above) whose values all vanish.
    """

    tag: IsoTag
    witness: dict

    @property
    def is_isoperiodic(self) -> bool:
        return self.tag is not IsoTag.NOT_ISO_PERIODIC


def classify(circle: BoundaryCircle, pencil: ConfocalPencil) -> IsoPeriodicClass:
    a, b = pencil.a, pencil.b
    X, Y = circle.x0_sq, circle.y0_sq
    w = {
        "foci_on_circle": (X, a - b + Y - 1),
        "foci_symmetric": (Y, X - (a - b + 1)),
        "concentric_on_circle": (a - b, X + Y - 1),
    }
    if a == b:
        tag = IsoTag.CONCENTRIC_CENTER_ON_GAMMA if X + Y == 1 else IsoTag.NOT_ISO_PERIODIC
    elif w["foci_on_circle"] == (0, 0):
        tag = IsoTag.FOCI_ON_CIRCLE
    elif w["foci_symmetric"] == (0, 0):
        tag = IsoTag.FOCI_SYMMETRIC_TO_CIRCLE
    else:
        tag = IsoTag.NOT_ISO_PERIODIC
    return IsoPeriodicClass(tag=tag, witness=w)


@dataclass(frozen=True)
class CertificateAllT:
    """The closure condition for ``k`` vanishes as a rational function of ``t``."""

    k: int

    def __str__(self):
        return "CertificateAllT"


@dataclass(frozen=True)
class Refutation:
    """A member ``t`` at which the closure condition for ``k`` is nonzero."""

    k: int
    t: Fraction
    value: Fraction

    def __str__(self):
        return f"Refutation(t={self.t}, value={self.value})"


def certify_isoperiodic(k: int, circle: BoundaryCircle, pencil: ConfocalPencil):
    cond = cayley_condition(k, circle, pencil)
    if cond.is_zero:
        return CertificateAllT(k)
    # a nonzero polynomial of degree d cannot vanish at d + 1 distinct points
    for j in range(cond.degree() + 2):
        t = Fraction(-j)
        if t in (pencil.a, pencil.b):
            continue
        v = cond(t)
        if v != 0:
            return Refutation(k, t, v)
    raise AssertionError("unreachable: nonzero polynomial vanished everywhere sampled")


# ------------------------------------------------------- case analysis


@dataclass
class CaseReport:
    """Replay of the case split showing that no pencil is iso-periodic for ``k != 4``.

    ``case`` is one of ``"1"``, ``"2"``, ``"2.1"``, ``"2.2"`` or
    ``"concentric"``; ``conclusion`` is ``4`` when the instance reduces to an
    iso-periodic class and ``None`` when the branch ends in a contradiction.
    """

    case: str
    branch: str
    t3: Fraction
    t4: Fraction | None
    alpha4: Fraction
    beta4: Fraction
    conclusion: int | None
    rel1_sign: int | None = None
    rel1_holds: bool | None = None
    factor_values: dict = field(default_factory=dict)
    poly5_identity: bool | None = None
    contradiction_value: Fraction | None = None
    t3_minus_a: Fraction | None = None
    notes: list = field(default_factory=list)


def _poly5_identity(circle, pencil, cf) -> bool:
    a, b = pencil.a, pencil.b
    X, Y = circle.x0_sq, circle.y0_sq
    t = RationalFunctionT.variable()
    rhs = -64 * (a - t) ** 2 * ((t - b) * (2 * a - 2 * b - 2 * X - 2 * Y + 1) + (a - b))
    return cf.k5_poly() == rhs


def noisorot_case_analysis(circle: BoundaryCircle, pencil: ConfocalPencil) -> CaseReport:
    """Walk the instance through the case split for a hypothetical ``k != 4`` pencil.

    Applicable when ``C_3`` vanishes identically, when ``t3`` or ``t4`` is a
    degenerate member, or when ``2a - 2b - 2x0^2 - 2y0^2 + 1 = 0`` (the branch
    that ends in a sign contradiction).
    """
    a, b = pencil.a, pencil.b
    X, Y = circle.x0_sq, circle.y0_sq
    cf = closed_forms(circle, pencil)
    t3, al4, be4 = cf.t3, cf.alpha4, cf.beta4
    t4 = cf.t4
    F = 2 * a - 2 * b - 2 * X - 2 * Y + 1
    cls = classify(circle, pencil)
    base = dict(t3=t3, t4=t4, alpha4=al4, beta4=be4)

    def contradiction(case: str) -> CaseReport:
        lhs = -8 * (2 * a - 2 * b) * Y - 1
        rep = CaseReport(case=case, branch="contradiction", conclusion=None, **base)
        rep.contradiction_value = lhs
        rep.t3_minus_a = t3 - a
        rep.factor_values = {"2a-2b-2x0^2-2y0^2+1": F}
        rep.notes.append("t3 - a equals (-8(2a-2b)y0^2 - 1)/16, which is negative, so t3 != a")
        if t3 - a != lhs / 16:
            raise AssertionError("contradiction expression does not match t3 - a")
        if t3 == a:
            rep.poly5_identity = _poly5_identity(circle, pencil, cf)
        return rep

    if a == b:
        if X + Y != 1:
            raise BranchNotApplicable("concentric pencil whose centre is not on the circle")
        rep = CaseReport(case="concentric", branch=cls.tag.value, conclusion=4, **base)
        rep.poly5_identity = _poly5_identity(circle, pencil, cf) if t3 == a else None
        return rep
    if F == 0 and cls.tag is IsoTag.NOT_ISO_PERIODIC:
        return contradiction("2.2" if cf.delta5 == 0 else "2.1")
    if be4 == 0:
        rep = CaseReport(case="1", branch=cls.tag.value, conclusion=None, **base)
        via = (a + b + X + Y - 1) / 2
        rep.notes.append(f"t3 - beta4/8 = {via}")
        if via != t3 - be4 / 8:
            raise AssertionError("t3 - beta4/8 identity failed")
        rep.rel1_sign = 1 if t3 == b else (-1 if t3 == a else None)
        if rep.rel1_sign is not None:
            rep.rel1_holds = X + Y + rep.rel1_sign * (a - b) == 1
        rep.factor_values = {"y0^2(x0^2+y0^2-1)": Y * (X + Y - 1), "x0^2(x0^2+y0^2-1)": X * (X + Y - 1)}
        if t3 == a:
            rep.poly5_identity = _poly5_identity(circle, pencil, cf)
        if cls.is_isoperiodic:
            rep.conclusion = 4
        elif al4 != 0:
            rep.notes.append("beta4 = 0 but t3 is not degenerate: triangles close for some member")
        return rep
    if t4 is not None and t4 in (a, b):
        rep = CaseReport(case="2", branch=cls.tag.value, conclusion=None, **base)
        rep.factor_values = {"(a-b+x0^2+y0^2-1)(a-t3)": (a - b + X + Y - 1) * (a - t3)}
        if t3 == a:
            rep.poly5_identity = _poly5_identity(circle, pencil, cf)
            if F == 0:
                return contradiction("2.2" if cf.delta5 == 0 else "2.1")
        if t3 == b:
            rep.factor_values["x0^2(x0^2+y0^2-1)"] = X * (X + Y - 1)
        if cls.is_isoperiodic:
            rep.conclusion = 4
        return rep
    if t3 in (a, b):
        rep = CaseReport(case="2", branch=cls.tag.value, conclusion=4 if cls.is_isoperiodic else None, **base)
        if t3 == a:
            rep.poly5_identity = _poly5_identity(circle, pencil, cf)
        return rep
    raise BranchNotApplicable("t3, t4 are regular members and C_3 does not vanish identically")


# ------------------------------------------------------------ profiles


def foci_inside(circle: BoundaryCircle, pencil: ConfocalPencil) -> bool:
    """Both foci strictly inside the circle (decided exactly)."""
    c2 = pencil.a - pencil.b
    s = 1 - c2 - circle.x0_sq - circle.y0_sq
    return s > 0 and s * s > 4 * circle.x0_sq * c2


def tangency_discriminant(circle: BoundaryCircle, pencil: ConfocalPencil) -> RationalFunctionT:
    """Discriminant in ``lam`` of the pencil cubic; vanishes where ``C(t)`` touches the circle."""
    p0, p1, p2, p3 = pencil_cubic(circle, pencil).coeffs
    return 18 * p3 * p2 * p1 - 4 * p2**3 + p2**2 * p1**2 - 4 * p3 * p1**3 - 27 * p3**2


@dataclass(frozen=True)
class T0:
    """Left end of the admissible range, as a rational bracket ``[lo, hi]``.

    ``exact`` tells whether the bracket isolates a root of the tangency
    discriminant (width ``< 1e-80``) or only comes from float bisection.
    """

    lo: Fraction
    hi: Fraction
    exact: bool
    mode: str

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)


_THETA = np.linspace(0.0, 2.0 * math.pi, 513)[:-1]


def _max_on_circle(fun) -> float:
    vals = fun(_THETA)
    i = int(np.argmax(vals))
    h = _THETA[1] - _THETA[0]
    res = minimize_scalar(lambda th: -fun(np.array([th]))[0], bounds=(_THETA[i] - h, _THETA[i] + h),
                          method="bounded", options={"xatol": 1e-14})
    return max(float(vals[i]), -float(res.fun))


def _ellipse_inside(pencil, circle, t) -> bool:
    A, B = math.sqrt(float(pencil.a) - t), math.sqrt(float(pencil.b) - t)
    cx, cy = circle.center

    def dist(th):
        return np.hypot(A * np.cos(th) - cx, B * np.sin(th) - cy)

    return _max_on_circle(dist) <= 1.0


def _circle_inside_ellipse(pencil, circle, t) -> bool:
    A, B = float(pencil.a) - t, float(pencil.b) - t
    cx, cy = circle.center

    def val(th):
        return (cx + np.cos(th)) ** 2 / A + (cy + np.sin(th)) ** 2 / B

    return _max_on_circle(val) < 1.0


def locate_t0(circle: BoundaryCircle, pencil: ConfocalPencil, strict: bool = True,
              tol: float = 1e-12) -> T0:
    """Infimum of the members with a well-defined rotation number.

    ``strict``: the foci must lie inside the circle and ``t0`` is where the
    ellipses stop fitting inside it.  Otherwise, when the foci are not inside,
    ``t0`` is where the ellipses stop containing the circle.  Found by
    bisection, then snapped to the nearby root of the tangency discriminant.
    """
    inside = foci_inside(circle, pencil)
    if strict and not inside:
        raise FociNotInside("the foci of the pencil are not strictly inside the circle")
    b = float(pencil.b)
    if inside:
        mode = "inscribed"
        lo, hi = b - 5.0, b
        good_hi = True  # predicate holds near b

        def pred(t):
            return _ellipse_inside(pencil, circle, t)
    else:
        mode = "containing"
        r = float(np.hypot(*circle.center)) + 1.0
        lo, hi = b - r * r - 2.0, b
        good_hi = False

        def pred(t):
            return _circle_inside_ellipse(pencil, circle, t)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == good_hi:
            hi = mid
        else:
            lo = mid
    disc = tangency_discriminant(circle, pencil)
    if not disc.is_zero:
        win = Fraction(1, 10**8)
        cands = real_roots(disc.num, as_rational(lo) - win, min(as_rational(hi) + win, pencil.b),
                           tol=Fraction(1, 10**90))
        if cands:
            mid = 0.5 * (lo + hi)
            r0 = min(cands, key=lambda r: abs(r.value - mid))
            return T0(lo=r0.lo, hi=r0.hi, exact=True, mode=mode)
    return T0(lo=as_rational(lo), hi=as_rational(hi), exact=False, mode=mode)


def profile_positions(size: int, core: float = 1e-12, tail: float | None = 1e-60) -> list[Fraction]:
    """Relative positions ``f`` in ``(0, 1)`` for a profile over ``(t0, b)``.

    Interior points are uniform in ``log(f / (1 - f))`` between ``core`` and
    ``1 - core``; with ``tail`` the two end points move out to ``tail`` and
    ``1 - tail`` to probe the limits at both ends.
    """
    if size < 3:
        raise ValueError("need at least 3 grid points")
    n_core = size - 2 if tail is not None else size
    lc = math.log(core / (1.0 - core))
    xs = np.linspace(lc, -lc, n_core)
    f = [Fraction(float(1.0 / (1.0 + math.exp(-x)))) for x in xs]
    if tail is not None:
        tq = as_rational(tail)
        f = [tq] + f + [1 - tq]
    return f


class Verdict(str, enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    VIOLATIONS = "Violations"


@dataclass(frozen=True)
class RhoProfile:
    """Sampled rotation numbers ``(t, rho, err)`` over the admissible range."""

    grid: list
    t0: T0
    monotone_verdict: Verdict
    violations: list
    plateaus: list
    strict: bool

    @property
    def rhos(self) -> np.ndarray:
        return np.array([r for _, r, _ in self.grid])


def _monotone(grid) -> tuple[Verdict, list, list]:
    rho = [r for _, r, _ in grid]
    err = [e for _, _, e in grid]
    inc, dec = [], []
    for i in range(len(rho) - 1):
        slack = err[i] + err[i + 1]
        if rho[i + 1] < rho[i] - slack:
            inc.append((i, i + 1, rho[i] - rho[i + 1]))
        if rho[i + 1] > rho[i] + slack:
            dec.append((i, i + 1, rho[i + 1] - rho[i]))
    if not inc:
        verdict, viol = Verdict.INCREASING, []
    elif not dec:
        verdict, viol = Verdict.DECREASING, []
    else:
        verdict, viol = Verdict.VIOLATIONS, inc
    # plateaus: maximal runs of >= 3 points equal within the combined bounds
    plateaus = []
    start = 0
    for i in range(1, len(rho) + 1):
        if i < len(rho) and abs(rho[i] - rho[i - 1]) <= err[i] + err[i - 1]:
            continue
        if i - start >= 3:
            level = float(np.mean(rho[start:i]))
            plateaus.append({"start": start, "stop": i - 1, "rho": level,
                             "isoperiodic_level": abs(level - 0.5) <= 2 * max(err[start:i])})
        start = i
    return verdict, viol, plateaus


def rho_profile(circle: BoundaryCircle, pencil: ConfocalPencil, grid_size: int = 64,
                n_steps: int = 100_000, strict: bool = True, core: float = 1e-12,
                tail: float | None = 1e-60) -> RhoProfile:
    """Rotation number over ``(t0, b)`` with monotonicity and plateau analysis.

    Points closer than ``2**-40`` (relative) to either end run in MPFR; the
    rest run in the vectorized double-precision kernel.  Without foci inside
    the circle (``strict=False``) no limit tails are taken.
    """
    t0 = locate_t0(circle, pencil, strict=strict)
    if t0.mode != "inscribed":
        tail = None
    base = t0.hi if t0.exact else t0.lo
    span = pencil.b - base
    pos = profile_positions(grid_size, core=core, tail=tail)
    ts = [base + f * span for f in pos]
    rho = [0.0] * len(ts)
    fine = [i for i, f in enumerate(pos) if min(f, 1 - f) >= Fraction(1, 2**40)]
    deep = [i for i in range(len(ts)) if i not in set(fine)]
    if fine:
        duals, starts, lines = [], [], []
        for i in fine:
            cc = confocal_conic(pencil, ts[i])
            start = default_start(cc, circle)
            duals.append(cc.dual)
            starts.append(start)
            lines.append(first_edge(start, cc, circle).coeffs)
        lifts = lift_batch(np.array(duals), circle, np.array(starts), np.array(lines), n_steps)
        for i, L in zip(fine, lifts):
            rho[i] = float(L) / n_steps
    for i in deep:
        f = min(pos[i], 1 - pos[i])
        bits = 96 + int(math.log2(1.0 / float(f)) * 1.25)
        cx = circle.x0 if isinstance(circle.x0, Fraction) else (circle.x0_sq, 1 if circle.x0 >= 0 else -1)
        cy = circle.y0 if isinstance(circle.y0, Fraction) else (circle.y0_sq, 1 if circle.y0 >= 0 else -1)
        L = lift_extended(pencil.a - ts[i], pencil.b - ts[i], cx, cy, n_steps, bits=bits)
        rho[i] = float(L) / n_steps
    grid = [(t, r, 1.0 / n_steps) for t, r in zip(ts, rho)]
    verdict, viol, plateaus = _monotone(grid)
    return RhoProfile(grid=grid, t0=t0, monotone_verdict=verdict, violations=viol,
                      plateaus=plateaus, strict=strict)


# -------------------------------------------------------- quadrilaterals


@dataclass(frozen=True, eq=False)
class Quadrilateral:
    """The orbit ``N P N Q`` and the checks that make it a Poncelet quadrilateral."""

    N: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    M: np.ndarray | None
    branch: str
    tangency_residuals: tuple
    cross_ratio: float | None = None
    orthogonality: tuple | None = None

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.N, self.P, self.N, self.Q])

    @property
    def max_tangency_residual(self) -> float:
        return max(self.tangency_residuals)


def _pq(caustic: Conic, circle: BoundaryCircle):
    pts = conic_circle_intersections(caustic, circle)
    if len(pts) != 2:
        raise NoRealIntersection(f"the caustic meets the circle in {len(pts)} points, need 2")
    return pts


def _pick_n(cands, P, Q, caustic):
    def res(N):
        return max(caustic.tangency_residual(Line.through(N, P)), caustic.tangency_residual(Line.through(N, Q)))

    i = int(np.argmin([res(N) for N in cands]))
    return cands[i], cands[1 - i]


def explicit_quadrilateral(circle: BoundaryCircle, pencil: ConfocalPencil, t) -> Quadrilateral:
    """Build ``N P N Q`` for a member of a 4-iso-periodic pencil.

    ``P, Q`` are the points where the member meets the circle.  With the foci
    mirrored in the circle, ``M, N`` are the ends of the diameter on the focal
    line; with the foci on the circle they are the midpoints of the two arcs
    the foci cut out.  ``N`` is whichever makes ``NP`` and ``NQ`` tangent.
    """
    tag = classify(circle, pencil).tag
    if tag not in (IsoTag.FOCI_ON_CIRCLE, IsoTag.FOCI_SYMMETRIC_TO_CIRCLE):
        raise BranchNotApplicable(f"no explicit construction for class {tag.value}")
    caustic = confocal_conic(pencil, t)
    P, Q = _pq(caustic, circle)
    c = circle.center
    f = pencil.focal_distance
    F1, F2 = np.array([f, 0.0]), np.array([-f, 0.0])
    if tag is IsoTag.FOCI_SYMMETRIC_TO_CIRCLE:
        ends = [c + np.array([1.0, 0.0]), c - np.array([1.0, 0.0])]
        N, M = _pick_n(ends, P, Q, caustic)
        cr = cross_ratio(F1, M, F2, N)
        branch = "foci-symmetric"
    else:
        ends = [c + np.array([0.0, 1.0]), c - np.array([0.0, 1.0])]
        N, M = _pick_n(ends, P, Q, caustic)
        cr = None
        branch = "foci-on-circle"
    residuals = (caustic.tangency_residual(Line.through(N, P)), caustic.tangency_residual(Line.through(N, Q)))
    return Quadrilateral(N=N, P=P, Q=Q, M=M, branch=branch, tangency_residuals=residuals, cross_ratio=cr)


def focal_circle_quadrilateral(circle: BoundaryCircle, focus, radius: float) -> Quadrilateral:
    """``N P N Q`` for a circle centred at a point ``F`` of the boundary circle.

    ``N`` is the antipode of ``F``; ``orthogonality`` holds ``|cos|`` of the
    angle between ``NP`` and ``FP`` (and the same for ``Q``).
    """
    F = np.asarray(focus, dtype=float)
    c = circle.center
    if abs(np.hypot(*(F - c)) - 1.0) > 1e-10:
        raise ValueError("the focus must lie on the circle")
    caustic = circle_conic(F, radius)
    P, Q = _pq(caustic, circle)
    N = 2 * c - F

    def cosang(X):
        u, v = X - N, X - F
        return abs(float(u @ v)) / (np.hypot(*u) * np.hypot(*v))

    residuals = (caustic.tangency_residual(Line.through(N, P)), caustic.tangency_residual(Line.through(N, Q)))
    return Quadrilateral(N=N, P=P, Q=Q, M=None, branch="focal-circle", tangency_residuals=residuals,
                         orthogonality=(cosang(P), cosang(Q)))
