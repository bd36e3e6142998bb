import numpy as np
import pytest

from vortexlab import (ConfigRegion, DegeneracyError, WeightProfile,
                       bent_phi_field, brouwer_degree, degree_jump_check,
                       expected_degree, meanfield_degree, strip_degree,
                       strip_fields)
from vortexlab.fields import linear_weight
from conftest import thresholds_and_bending


def test_expected_degree_values():
    assert expected_degree(1, 1) == 1
    assert expected_degree(1, 2) == 0
    assert expected_degree(0, 1) == 0
    assert expected_degree(-1, 1) == -1
    assert expected_degree(-1, 2) == 2
    assert expected_degree(-2, 3) == -24


def test_meanfield_degree_binomial():
    assert meanfield_degree(1, 0) == 1
    # chi = 1 (disk-like): the count drops to 0 past the first threshold
    for n in range(1, 7):
        assert meanfield_degree(1, n) == 0
    # chi = 0 (annulus-like): the count stays 1 at every level
    for n in range(7):
        assert meanfield_degree(0, n) == 1
    assert meanfield_degree(-1, 2) == 3
    assert meanfield_degree(-2, 2) == 6


def test_degree_jump_identity_exact():
    for chi in range(-3, 2):
        rows = degree_jump_check(chi, 6)
        assert len(rows) == 6
        for r in rows:
            assert r["jump"] == r["predicted"]


def test_interior_region_sampling(annulus):
    th, _ = thresholds_and_bending(annulus)
    region = ConfigRegion.interior(annulus, 2, th)
    pts = region.sample(50, seed=1)
    assert len(pts) == 50
    for x in pts:
        assert region.contains(x)


def _interior_report(domain, evaluator, n, tilt, starts=200, seed=0):
    th, bend = thresholds_and_bending(domain)
    h, hg = linear_weight(*tilt)
    w = WeightProfile(h=h, h_grad=hg)
    f = bent_phi_field(domain, evaluator, n, bend, weights=w)
    region = ConfigRegion.interior(domain, n, th)
    oracle = expected_degree(domain.euler_characteristic, n)
    return brouwer_degree(f, region, starts=starts, seed=seed, oracle=oracle)


def test_annulus_single_point_degree_and_dedup(annulus, annulus_green):
    rep = _interior_report(annulus, annulus_green, 1, (0.05, 0.0))
    assert rep.signed_total == 0
    # dedup soundness: quadrupling the starts must not change the census
    rep4 = _interior_report(annulus, annulus_green, 1, (0.05, 0.0),
                            starts=800, seed=3)
    assert rep4.signed_total == rep.signed_total
    assert len(rep4.zeros) == len(rep.zeros)


def test_weight_invariance_annulus(annulus, annulus_green):
    totals = set()
    for tilt in ((0.05, 0.0), (0.03, 0.04)):
        totals.add(_interior_report(annulus, annulus_green, 1,
                                    tilt).signed_total)
    assert totals == {0}


def test_zero_records_are_consistent(annulus, annulus_green):
    rep = _interior_report(annulus, annulus_green, 1, (0.05, 0.0))
    for z in rep.zeros:
        assert z.hessian_det_sign in (-1, 1)
        assert z.gradient_norm < 1e-8
        assert 0 <= z.morse_index <= 2
        # sign of the Hessian determinant matches the parity of the index
        assert z.hessian_det_sign == (1 if z.morse_index % 2 == 0 else -1)


def test_excision_accounting_annulus(annulus, annulus_green, tilt_weight):
    """Signed counts compose: interior census plus both strip censuses
    reproduce the whole-region count for two points on the annulus."""
    th, bend = thresholds_and_bending(annulus)
    interior = _interior_report(annulus, annulus_green, 2, (0.05, 0.0))
    strip_totals = []
    for j in (1, 2):
        hat, _ = strip_fields(annulus, annulus_green, j, bend,
                              weights=tilt_weight)
        strip_totals.append(strip_degree(hat, annulus, j, th,
                                         starts=200, seed=0).signed_total)
    assert interior.signed_total + sum(strip_totals) \
        == expected_degree(0, 2) == 0


def test_jump_check_rejects_bad_input():
    with pytest.raises(ValueError):
        degree_jump_check(0, 0)
