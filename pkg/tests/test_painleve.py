from fractions import Fraction as Q

import pytest

from poncelet_lab.errors import OkamotoPole, SingularLocus, SingularParameter
from poncelet_lab.painleve import (OKAMOTO_CONSTANTS, PICARD_CONSTANTS, PVIConstants, SolutionSample,
                                   family_sample, hitchin_constants, identity_ratio, okamoto_transform,
                                   picard_point, pvi_residual, residual_scan)
from poncelet_lab.verification import painleve_grid


def test_named_constants():
    assert OKAMOTO_CONSTANTS.as_tuple() == (Q(1, 8), Q(-1, 8), Q(1, 8), Q(3, 8))
    assert PICARD_CONSTANTS.as_tuple() == (0, 0, 0, Q(1, 2))
    assert OKAMOTO_CONSTANTS.hitchin and PICARD_CONSTANTS.hitchin
    assert not PVIConstants(Q(1, 8), Q(-1, 8), Q(1, 8), Q(1, 2)).hitchin


def test_sqrt_family_samples_are_exact_solutions():
    s = SolutionSample(4, 2, Q(1, 4), Q(-1, 32))
    assert pvi_residual(OKAMOTO_CONSTANTS, s) == 0
    assert pvi_residual(PVIConstants(Q(1, 4), Q(-1, 4), 0, Q(1, 2)), s) == 0
    s = SolutionSample(4, -2, Q(-1, 4), Q(1, 32))
    assert pvi_residual(PICARD_CONSTANTS, s) == 0


def test_float_residual():
    s = SolutionSample(4.0, 2.0, 0.25, -1 / 32)
    assert abs(pvi_residual(OKAMOTO_CONSTANTS, s)) < 1e-12


def test_singular_locus():
    for x, y in [(0, 2), (1, 2), (4, 0), (4, 1), (4, 4)]:
        with pytest.raises(SingularLocus):
            SolutionSample(x, y, 1, 1)


def test_picard_point():
    with pytest.raises(SingularParameter):
        picard_point(2, 0)
    assert picard_point(3, 0) == (4, -2, Q(-1, 4))
    assert picard_point(3, Q(3, 2)) == (Q(1, 4), Q(-1, 2), -1)


def test_okamoto_transform_flips_sign():
    assert okamoto_transform(4, -2, Q(-1, 4)) == 2
    assert okamoto_transform(Q(1, 4), Q(-1, 2), -1) == Q(1, 2)
    assert okamoto_transform(0.25, -0.5, -1.0) == pytest.approx(0.5)
    with pytest.raises(OkamotoPole):
        okamoto_transform(Q(1, 2), 1, 0)


def test_identity_ratio_is_minus_two():
    for j in range(1, 38):
        if j == 20:
            continue
        assert identity_ratio(*picard_point(3, Q(j, 20))) == -2


def test_involution():
    for t in (Q(1, 7), Q(3, 4), Q(13, 10)):
        x, y0, y0p = picard_point(3, t)
        y = okamoto_transform(x, y0, y0p)
        assert okamoto_transform(x, y, 1 / (2 * y)) == y0


def test_derivative_matches_finite_difference():
    h = 1e-5
    for t in (0.2, 0.7, 1.6):
        x, y0, y0p = picard_point(3.0, t)
        s = 3.0 - t - 1
        # y0 = -sqrt(x) on this branch (s > 0)
        f = (lambda xx: -xx**0.5) if s > 0 else (lambda xx: xx**0.5)
        fd = (f(x + h) - f(x - h)) / (2 * h)
        assert abs(fd - y0p) < 1e-8


def test_scans():
    grid = painleve_grid(3)
    assert len(grid) == 50 and 1.0 not in grid
    assert residual_scan(PICARD_CONSTANTS, "picard", 3, grid) < 1e-10
    assert residual_scan(OKAMOTO_CONSTANTS, "okamoto", 3, grid) < 1e-10
    assert residual_scan(PVIConstants(Q(1, 8), Q(-1, 8), Q(1, 8), Q(1, 2)), "okamoto", 3, grid) > 1e-3


def test_hitchin_grid():
    grid = painleve_grid(3)
    for al in (Q(-1, 4), 0, Q(1, 3)):
        for ga in (Q(-1, 2), Q(1, 8), 1):
            c = hitchin_constants(al, ga)
            assert c.hitchin
            assert residual_scan(c, "okamoto", 3, grid) < 1e-10


def test_family_sample_exact():
    s = family_sample("okamoto", 3, Q(1, 3))
    assert pvi_residual(OKAMOTO_CONSTANTS, s) == 0
    assert pvi_residual(PICARD_CONSTANTS, family_sample("picard", 3, Q(1, 3))) == 0
