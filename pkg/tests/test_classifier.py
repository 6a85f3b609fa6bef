import math
from fractions import Fraction as Q

import numpy as np
import pytest

from poncelet_lab.classifier import (CertificateAllT, IsoTag, Refutation, Verdict, certify_isoperiodic,
                                     classify, explicit_quadrilateral, focal_circle_quadrilateral,
                                     foci_inside, locate_t0, noisorot_case_analysis, profile_positions,
                                     rho_profile, tangency_discriminant)
from poncelet_lab.dynamics import poncelet_step
from poncelet_lab.errors import BranchNotApplicable, FociNotInside
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil, confocal_conic
from poncelet_lab.verification import random_pencil

ON = (BoundaryCircle.from_squares(0, Q(1, 2)), ConfocalPencil(Q(3, 2), 1))
SYM = (BoundaryCircle.from_squares(2, 0), ConfocalPencil(2, 1))
CONC = (BoundaryCircle(Q(3, 5), Q(4, 5)), ConfocalPencil(1, 1, concentric=True))


@pytest.mark.parametrize("g, p, tag", [
    (*ON, IsoTag.FOCI_ON_CIRCLE),
    (*SYM, IsoTag.FOCI_SYMMETRIC_TO_CIRCLE),
    (*CONC, IsoTag.CONCENTRIC_CENTER_ON_GAMMA),
    (BoundaryCircle(Q(3, 10), 0), ConfocalPencil(2, 1), IsoTag.NOT_ISO_PERIODIC),
])
def test_classify(g, p, tag):
    assert classify(g, p).tag is tag


def test_certificates():
    assert isinstance(certify_isoperiodic(4, *ON), CertificateAllT)
    ref = certify_isoperiodic(3, BoundaryCircle(Q(3, 10), 0), ConfocalPencil(2, 1))
    assert isinstance(ref, Refutation) and ref.value != 0
    assert isinstance(certify_isoperiodic(5, *SYM), Refutation)
    assert isinstance(certify_isoperiodic(3, *ON), Refutation)


def test_classify_agrees_with_certificate():
    rng = np.random.default_rng(11)
    for _ in range(150):
        g, p = random_pencil(rng)
        iso = classify(g, p).is_isoperiodic
        assert iso == isinstance(certify_isoperiodic(4, g, p), CertificateAllT)


def test_case_analysis_branches():
    rep = noisorot_case_analysis(*ON)
    assert (rep.case, rep.conclusion) == ("1", 4)
    rep = noisorot_case_analysis(*CONC)
    assert (rep.case, rep.conclusion) == ("concentric", 4)
    # 2a - 2b - 2x0^2 - 2y0^2 + 1 = 0 without an iso-periodic relation
    rep = noisorot_case_analysis(BoundaryCircle.from_squares(Q(1, 2), Q(1, 2)), ConfocalPencil(Q(3, 2), 1))
    assert rep.branch == "contradiction" and rep.conclusion is None
    assert rep.contradiction_value < 0 and rep.t3_minus_a == rep.contradiction_value / 16
    with pytest.raises(BranchNotApplicable):
        noisorot_case_analysis(BoundaryCircle.from_squares(Q(1, 4), Q(1, 4)), ConfocalPencil(2, 1))


def test_foci_inside_and_t0():
    g, p = BoundaryCircle(Q(1, 5), Q(1, 10)), ConfocalPencil(Q(1, 2), Q(1, 5))
    assert foci_inside(g, p) and not foci_inside(*ON)
    t0 = locate_t0(g, p)
    assert t0.exact and t0.mode == "inscribed"
    assert tangency_discriminant(g, p).num.eval(t0.lo) * tangency_discriminant(g, p).num.eval(t0.hi) <= 0
    with pytest.raises(FociNotInside):
        locate_t0(*ON)
    assert locate_t0(*ON, strict=False).mode == "containing"


def test_t0_on_centred_circle():
    t0 = locate_t0(BoundaryCircle(0, 0), ConfocalPencil(Q(1, 2), Q(1, 5)))
    assert (t0.lo, t0.hi) == (Q(-1, 2), Q(-1, 2))


def test_profile_positions():
    pos = profile_positions(64)
    assert len(pos) == 64 and pos == sorted(pos)
    assert pos[0] == Q(1, 10**60) and pos[-1] == 1 - Q(1, 10**60)
    assert len(profile_positions(8, tail=None)) == 8


def test_small_rho_profile():
    g, p = BoundaryCircle(Q(1, 5), Q(1, 10)), ConfocalPencil(Q(1, 2), Q(1, 5))
    pr = rho_profile(g, p, grid_size=12, n_steps=5000)
    r = pr.rhos
    assert r[0] < 0.02 and r[-1] > 0.48
    assert pr.monotone_verdict is Verdict.INCREASING and not pr.violations
    assert [t for t, _, _ in pr.grid] == sorted(t for t, _, _ in pr.grid)


def test_isoperiodic_profile_is_flat():
    pr = rho_profile(*ON, grid_size=8, n_steps=4000, strict=False)
    assert np.max(np.abs(pr.rhos - 0.5)) <= 1 / 4000


def _step_set(q, g, c):
    V, prev = [q.N], None
    for _ in range(4):
        w, _ = poncelet_step(V[-1], c, g, prev=prev)
        prev = V[-1]
        V.append(w)
    return V


@pytest.mark.parametrize("g, p, t", [(*ON, Q(1, 2)), (*SYM, Q(0))])
def test_explicit_quadrilateral(g, p, t):
    q = explicit_quadrilateral(g, p, t)
    assert q.max_tangency_residual < 1e-9
    c = confocal_conic(p, t)
    V = _step_set(q, g, c)
    np.testing.assert_allclose(V[4], V[0], atol=1e-8)
    key = lambda pts: sorted(map(tuple, np.round(np.asarray(pts), 8)))
    assert key(V[:4]) == key(q.vertices)
    if q.branch == "foci-symmetric":
        assert q.cross_ratio == pytest.approx(-1.0, abs=1e-12)


def test_focal_circle_quadrilateral_is_orthogonal():
    q = focal_circle_quadrilateral(BoundaryCircle(0, 0), (1.0, 0.0), 0.8)
    assert max(q.orthogonality) < 1e-12
    assert q.max_tangency_residual < 1e-9
