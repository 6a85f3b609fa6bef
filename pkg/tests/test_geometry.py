import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poncelet_lab.errors import (DegenerateMember, InvalidPencil, NoIntersection, NotCollinear,
                                 PointNotOnObjects)
from poncelet_lab.geometry import (BoundaryCircle, ConfocalPencil, ConicKind, Line, as_rational,
                                   circle_conic, confocal_conic, cross_ratio, ellipse_from_foci, foci,
                                   second_intersection, tangents_from_point)

UNIT = BoundaryCircle(0, 0)


def test_as_rational_reads_decimal_repr():
    assert as_rational(1.5) == Q(3, 2)
    assert as_rational(0.3) == Q(3, 10)
    assert as_rational("7/4") == Q(7, 4)
    with pytest.raises(TypeError):
        as_rational(True)


def test_pencil_validation():
    with pytest.raises(InvalidPencil):
        ConfocalPencil(1, 2)
    with pytest.raises(InvalidPencil):
        ConfocalPencil(1, 1)
    with pytest.raises(InvalidPencil):
        ConfocalPencil(2, 0)
    assert ConfocalPencil(1, 1, concentric=True).kind_at(0) is ConicKind.CIRCLE


def test_circle_from_squares_keeps_exact_squares():
    g = BoundaryCircle.from_squares(2, 0)
    assert g.x0_sq == 2 and g.y0_sq == 0
    assert g.center[0] == pytest.approx(math.sqrt(2))


def test_confocal_members():
    c = confocal_conic(ConfocalPencil(2, 1), 0)
    assert c.kind is ConicKind.ELLIPSE
    np.testing.assert_allclose(c.m, np.diag([0.5, 1.0, -1.0]))
    assert confocal_conic(ConfocalPencil(2, 1), 1.5).kind is ConicKind.HYPERBOLA
    with pytest.raises(DegenerateMember):
        confocal_conic(ConfocalPencil(2, 1), 1)


def test_foci():
    assert foci(ConfocalPencil(2, 1)) == ((1.0, 0.0), (-1.0, 0.0))
    f1, f2 = foci(ConfocalPencil(Q(3, 2), 1))
    assert f1[0] == pytest.approx(math.sqrt(0.5))
    # both foci lie on the unit circle about (0, sqrt(1/2))
    g = BoundaryCircle.from_squares(0, Q(1, 2))
    for f in (f1, f2):
        assert math.hypot(f[0] - g.center[0], f[1] - g.center[1]) == pytest.approx(1.0, abs=1e-15)
    f1, f2 = foci(ConfocalPencil(1, 1, concentric=True))
    assert f1 == (0.0, 0.0) and abs(f2[0]) == 0.0


def test_tangents_from_external_point():
    c = circle_conic((0, 0), 1)
    lines = tangents_from_point((2, 0), c)
    assert len(lines) == 2
    touch = sorted((tuple(np.round(c.pole(ln), 12)) for ln in lines))
    assert touch[0] == pytest.approx((0.5, -math.sqrt(3) / 2))
    assert touch[1] == pytest.approx((0.5, math.sqrt(3) / 2))
    for ln in lines:
        assert ln.contains((2, 0))
        assert c.tangency_residual(ln) < 1e-12


def test_tangents_on_and_inside():
    c = circle_conic((0, 0), 1)
    (ln,) = tangents_from_point((1, 0), c)
    assert ln.same_as(Line(1, 0, -1))
    assert tangents_from_point((0, 0), c) == []


@pytest.mark.parametrize("line, known, expected", [
    (Line(0, 1, 0), (1, 0), (-1, 0)),
    (Line(1, 0, -1), (1, 0), (1, 0)),
    (Line(1, -1, 0), (math.sqrt(0.5), math.sqrt(0.5)), (-math.sqrt(0.5), -math.sqrt(0.5))),
])
def test_second_intersection(line, known, expected):
    np.testing.assert_allclose(second_intersection(line, UNIT, known), expected, atol=1e-15)


def test_second_intersection_errors():
    with pytest.raises(PointNotOnObjects):
        second_intersection(Line(0, 1, 0), UNIT, (0.5, 0))
    with pytest.raises(PointNotOnObjects):
        second_intersection(Line(0, 1, -2), UNIT, (1, 0))


def test_cross_ratio_examples():
    # foci (+-1, 0) and the diameter endpoints of the circle about (sqrt 2, 0)
    x0 = math.sqrt(2)
    assert cross_ratio((1, 0), (x0 - 1, 0), (-1, 0), (x0 + 1, 0)) == pytest.approx(-1.0, abs=1e-12)
    assert cross_ratio((0, 0), (1, 0), (2, 0), (3, 0)) == pytest.approx((-1 * -1) / (-3 * 1))
    assert cross_ratio((-1, 0), (0, 0), (1, 0), (1, 0, 0)) == pytest.approx(-1.0)
    with pytest.raises(NotCollinear):
        cross_ratio((0, 0), (1, 0), (2, 0), (3, 1))


def test_ellipse_from_foci_string_length():
    c = ellipse_from_foci((0.3, 0), (-0.2, 0), 1.06)
    assert c.kind is ConicKind.ELLIPSE
    f = sorted(c.foci(), key=lambda p: p[0])
    np.testing.assert_allclose(f, [(-0.2, 0), (0.3, 0)], atol=1e-12)


finite = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_second_intersection_is_an_involution(s, u):
    p, q = UNIT.point(s / (2 * math.pi)), UNIT.point(u / (2 * math.pi))
    if np.hypot(*(p - q)) < 1e-3:
        return
    ln = Line.through(p, q)
    r = second_intersection(ln, UNIT, p)
    np.testing.assert_allclose(second_intersection(ln, UNIT, r), p, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4, unique=True), st.floats(0.2, 5), finite, st.floats(0, 3))
def test_cross_ratio_affine_invariance(xs, scale, shift, angle):
    if min(abs(x - y) for i, x in enumerate(xs) for y in xs[i + 1:]) < 1e-2:
        return
    d = np.array([math.cos(angle), math.sin(angle)])
    pts = [(x, 0.0) for x in xs]
    img = [tuple(np.array([shift, 1.0]) + scale * x * d) for x in xs]
    assert cross_ratio(*img) == pytest.approx(cross_ratio(*pts), rel=1e-10, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.fractions(Q(1, 10), 5, max_denominator=50), st.fractions(Q(1, 10), 5, max_denominator=50),
       st.fractions(-5, 5, max_denominator=50))
def test_member_kind_matches_sign_test(x, y, t):
    a, b = max(x, y), min(x, y)
    if a == b or t in (a, b):
        return
    c = confocal_conic(ConfocalPencil(a, b), t)
    expected = {(1, 1): ConicKind.ELLIPSE, (1, -1): ConicKind.HYPERBOLA, (-1, -1): ConicKind.IMAGINARY}
    assert c.kind is expected[(1 if a > t else -1, 1 if b > t else -1)]


@settings(max_examples=60, deadline=None)
@given(st.floats(1.05, 4), st.floats(0.2, 1), st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_tangent_lines_touch_once(a, b, t, ang):
    if t >= b - 1e-3:
        return
    c = confocal_conic(ConfocalPencil(a, b), t)
    r = 1.5 * math.sqrt(a - t)
    p = (r * math.cos(ang), r * math.sin(ang))
    for ln in tangents_from_point(p, c):
        assert c.tangency_residual(ln) < 1e-9
