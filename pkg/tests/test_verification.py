from fractions import Fraction as Q

import numpy as np
import pytest

from poncelet_lab.cayley import Domain, solve_caustics
from poncelet_lab.classifier import IsoTag, classify
from poncelet_lab.geometry import BoundaryCircle, ConfocalPencil
from poncelet_lab.verification import (ALL_CHECKS, ISO_CLASSES, KNOWN_DEVIATIONS, _closure, iso_pencil,
                                       random_pencil, verify_all)


@pytest.mark.parametrize("tag", ISO_CLASSES, ids=lambda t: t.value)
def test_iso_pencils_land_in_their_class(tag):
    rng = np.random.default_rng(1)
    for _ in range(10):
        assert classify(*iso_pencil(tag, rng)).tag is tag


def test_random_pencils_avoid_the_classes():
    rng = np.random.default_rng(1)
    for _ in range(20):
        assert classify(*random_pencil(rng)).tag is IsoTag.NOT_ISO_PERIODIC


def test_quick_run_covers_every_check(tmp_path):
    checks = verify_all(seed=0, quick=True, out_dir=tmp_path)
    assert [c.number for c in checks] == list(ALL_CHECKS)
    failing = {c.number for c in checks if not c.passed}
    assert failing <= KNOWN_DEVIATIONS
    assert len(list(tmp_path.glob("*.svg"))) == 3


def test_slowly_separating_member():
    # a Cayley root whose neighbours at distance 1e-3 still close to within 1e-4:
    # the orbit gap grows only like 8e-2 * |dt| here, a genuine small sensitivity
    g, p = BoundaryCircle(Q(11, 10), Q(-1, 2)), ConfocalPencil(Q(48, 25), Q(6, 25))
    (r,) = solve_caustics(4, g, p, Domain.REAL_CONICS, tol=Q(1, 10**40))
    t = (r.root.lo + r.root.hi) / 2
    assert _closure(g, p, t, 4) < 1e-30
    for dt in (Q(-1, 1000), Q(1, 1000)):
        assert 5e-5 < _closure(g, p, t + dt, 4) < 1e-4
