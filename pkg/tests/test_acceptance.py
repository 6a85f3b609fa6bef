"""Acceptance suite: the nine criteria at full size with seed 0.

Each criterion prints one ``[PASS]`` or ``[FAIL]`` line (also collected into the
terminal summary).  Criteria 3 and 4 contain a clause that no correct
implementation can meet; those clauses run as strict xfails next to tests for
the attainable remainder.
"""
import time
from functools import lru_cache

import numpy as np
import pytest

from poncelet_lab.classifier import CertificateAllT, certify_isoperiodic
from poncelet_lab.verification import ALL_CHECKS, ISO_CLASSES, check_no_other_k, iso_pencil

from conftest import ACCEPTANCE_LINES

SEED = 0


def _rng(num):
    return np.random.default_rng([SEED, num])


@lru_cache(maxsize=None)
def run(num):
    t = time.perf_counter()
    chk = ALL_CHECKS[num]() if num in (8, 9) else ALL_CHECKS[num](rng=_rng(num))
    chk.seconds = time.perf_counter() - t
    line = chk.line()
    print(line)
    ACCEPTANCE_LINES[num] = line
    return chk


@pytest.mark.parametrize("num", [1, 2, 5, 6, 7, 8, 9])
def test_criterion(num):
    chk = run(num)
    assert chk.passed, chk.detail


def test_isoperiodic_certificates_and_refutations():
    d = run(3).detail
    assert not d["certificate_failures"]
    assert not d["refutation_failures"]
    # every sampled orbit closes after four steps
    assert d["all_close_at_k4"], d["periods_observed"]


@pytest.mark.xfail(strict=True, reason="iso-periodic orbits wind twice: period (4, 2), not (4, 1)")
def test_isoperiodic_periods_literal():
    chk = run(3)
    assert chk.passed, chk.detail


def test_no_other_k_through_seven():
    chk = check_no_other_k(_rng(4), ks=(3, 5, 6, 7))
    assert chk.passed, chk.detail
    assert chk.detail["pencils"] == 260


@pytest.mark.xfail(strict=True, reason="a 4-iso-periodic pencil is 8-iso-periodic as well")
def test_no_other_k_literal():
    chk = run(4)
    assert chk.passed, chk.detail


@pytest.mark.parametrize("tag", ISO_CLASSES, ids=lambda t: t.value)
def test_eight_is_certified_on_class_pencils(tag):
    # the reason the literal k = 8 clause cannot hold
    g, p = iso_pencil(tag, np.random.default_rng(3))
    assert isinstance(certify_isoperiodic(8, g, p), CertificateAllT)
