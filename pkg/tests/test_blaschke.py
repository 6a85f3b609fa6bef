import cmath
import math
from fractions import Fraction as Q

import numpy as np
import pytest

from poncelet_lab.blaschke import (BlaschkeFactor, BlaschkeProduct, ExactComplex, blaschke_caustic,
                                   blaschke_factor, blaschke_solve, mobius_bullets, mobius_identities_check,
                                   outside_focus_search, pencil_frame, polygon_tangency, solve_conjugating_c,
                                   triangle_configuration, unique_caustic_crosscheck)
from poncelet_lab.errors import ExcludedConfiguration, NotDecomposable
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil, ConicKind


def _disk(rng, n, r=0.95):
    return r * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_factor_validation():
    with pytest.raises(ValueError):
        BlaschkeFactor(1.0)
    with pytest.raises(ValueError):
        BlaschkeFactor(2.0)
    assert blaschke_factor(2.0).exterior


def test_factor_preserves_the_circle(rng):
    z = np.exp(2j * np.pi * rng.uniform(size=500))
    for a in _disk(rng, 20):
        assert np.max(np.abs(np.abs(BlaschkeFactor(a)(z)) - 1)) < 1e-12


def test_factor_is_an_involution(rng):
    z = _disk(rng, 100)
    for c in _disk(rng, 10):
        B = BlaschkeFactor(c)
        np.testing.assert_allclose(B(B(z)), z, atol=1e-12)


def test_identity_residuals():
    res = mobius_identities_check(0.3, 0.5, 0.1)
    assert max(res.values()) < 1e-14
    with pytest.raises(ExcludedConfiguration):
        mobius_identities_check(2.0, 0.5, 0.3)


def test_mapping_bullets(rng):
    assert mobius_bullets(1000, rng) == {1: 0, 2: 0, 3: 0, 4: 0}


def test_conjugating_c():
    c = solve_conjugating_c(Q(3, 10), Q(-1, 5), exact=True)
    assert c == ExactComplex(Q(5, 47), Q(0))
    cf = solve_conjugating_c(0.3, -0.2)
    assert abs(BlaschkeFactor(cf)(0.3) - (-0.2)) < 1e-14
    assert solve_conjugating_c(0, 0) == 0
    c = solve_conjugating_c(0.4, 0.4)
    assert abs(BlaschkeFactor(c)(0.4) - 0.4) < 1e-14
    a, b = 0.3 + 0.4j, -0.1 + 0.2j
    assert abs(BlaschkeFactor(solve_conjugating_c(a, b))(a) - b) < 1e-14


def test_products():
    B = BlaschkeProduct.degree3(0.3, -0.2)
    assert np.max(np.abs(B(np.array(B.zeros)))) < 1e-12
    D = BlaschkeProduct.decomposable4(0.3, -0.2)
    assert D.degree == 4 and D.is_decomposable()
    with pytest.raises(NotDecomposable):
        BlaschkeProduct((0, 0.1, 0.3, -0.2), decomposable=True)


def test_solve_cube_roots():
    # each factor carries a sign: zeros (0, 0, 0) give B(z) = -z^3
    z = blaschke_solve(BlaschkeProduct((0, 0, 0)), -1)
    np.testing.assert_allclose(z, np.exp(2j * np.pi * np.array([-1, 0, 1]) / 3), atol=1e-12)


def test_caustic_of_the_triple_zero_is_the_half_circle():
    c = blaschke_caustic(BlaschkeProduct((0, 0, 0)))
    assert c.kind is ConicKind.CIRCLE
    np.testing.assert_allclose(c.m / -c.m[2, 2], np.diag([4.0, 4.0, -1.0]), atol=1e-12)


@pytest.mark.parametrize("product", [BlaschkeProduct.degree3(0.3, -0.2),
                                     BlaschkeProduct.decomposable4(0.3, -0.2),
                                     BlaschkeProduct.degree3(0.2 + 0.5j, -0.4 - 0.1j)])
def test_polygons_are_tangent_to_the_caustic(product):
    c = blaschke_caustic(product)
    for lam in np.exp(2j * np.pi * (np.arange(24) + 0.5) / 24):
        v = blaschke_solve(product, lam)
        assert np.allclose(np.abs(v), 1, atol=1e-12)
        assert polygon_tangency(v, c) < 1e-8


def test_degree3_string_length():
    c = blaschke_caustic(BlaschkeProduct.degree3(0.3, -0.2))
    f = sorted(c.foci(), key=lambda p: p[0])
    np.testing.assert_allclose(f, [(-0.2, 0), (0.3, 0)], atol=1e-12)


def test_frame_maps_foci():
    fr = pencil_frame(0.3, -0.2)
    c = math.sqrt(float(fr.pencil.a - fr.pencil.b))
    got = sorted([fr.to_disk(c, 0), fr.to_disk(-c, 0)], key=lambda z: z.real)
    np.testing.assert_allclose(got, [-0.2, 0.3], atol=1e-15)
    assert fr.pencil.b == 1


@pytest.mark.parametrize("k", [3, 4])
@pytest.mark.parametrize("a, b", [(0.3, -0.2), (0.0, 0.0), (0.7, 0.65), (-0.9, 0.5)])
def test_unique_caustic_crosscheck(k, a, b):
    rep = unique_caustic_crosscheck(k, a, b)
    assert rep.admissible_roots == 1 and rep.hyperbola_roots == []
    assert rep.ok()
    if k == 3:
        assert rep.major_axis_cayley == pytest.approx(abs(1 - a * b), abs=1e-12)


def test_centred_triangle_caustic_is_the_half_circle():
    rep = unique_caustic_crosscheck(3, 0.0, 0.0)
    assert rep.kind is ConicKind.CIRCLE and rep.major_axis_cayley == pytest.approx(1.0)


def test_triangle_with_both_foci_outside():
    cfg = triangle_configuration(BoundaryCircle(0, 0), ConfocalPencil(3, 1), Q(3, 4))
    assert cfg is not None
    assert cfg.focus_distances == pytest.approx((math.sqrt(2), math.sqrt(2)))


def test_crossing_triangle_scene_configuration():
    cfg = triangle_configuration(BoundaryCircle(1, 1), ConfocalPencil(Q(9, 25), Q(4, 25)), 0)
    assert cfg is not None and max(cfg.focus_distances) > 1


def test_ellipse_inside_never_matches():
    # a circle of radius 1/2 about the centre: the triangle is convex
    assert triangle_configuration(BoundaryCircle(0, 0), ConfocalPencil(1, 1, concentric=True), Q(3, 4)) is None


def test_outside_focus_search():
    found = outside_focus_search(BoundaryCircle(0, 0), samples=60, rng=np.random.default_rng(2))
    assert found and all(max(c.focus_distances) > 1 for c in found)
    found = outside_focus_search(samples=60, rng=np.random.default_rng(3))
    assert found and all(max(c.focus_distances) > 1 for c in found)
