import numpy as np
import pytest

from vortexlab import (BendingProfile, RegionThresholds, WeightProfile,
                       build_domain, make_evaluator)
from vortexlab.fields import linear_weight


@pytest.fixture(scope="session")
def disk():
    return build_domain({"kind": "disk", "R": 1.0})


@pytest.fixture(scope="session")
def annulus():
    return build_domain({"kind": "annulus", "r_in": 0.35, "r_out": 1.0})


@pytest.fixture(scope="session")
def two_hole():
    return build_domain({"kind": "disk_with_holes", "R": 1.0,
                         "holes": [{"center": [-0.45, 0.0], "radius": 0.18},
                                   {"center": [0.45, 0.1], "radius": 0.15}]})


@pytest.fixture(scope="session")
def disk_green(disk):
    return make_evaluator(disk)


@pytest.fixture(scope="session")
def annulus_green(annulus):
    return make_evaluator(annulus)


@pytest.fixture(scope="session")
def tilt_weight():
    h, hg = linear_weight(0.05, 0.0)
    return WeightProfile(h=h, h_grad=hg)


def thresholds_and_bending(domain):
    th = RegionThresholds.defaults(domain)
    bend = BendingProfile(delta_tilde=th.delta_tilde,
                          delta_prime=th.delta_prime)
    return th, bend
