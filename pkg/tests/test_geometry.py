import math

import numpy as np
import pytest

from vortexlab import (ClosedCurve, Configuration, MalformedDomainError,
                       RegionThresholds, build_domain, config_space_euler)
from vortexlab.geometry import in_delta_region


def test_euler_characteristics(disk, annulus, two_hole):
    assert disk.euler_characteristic == 1
    assert annulus.euler_characteristic == 0
    assert two_hole.euler_characteristic == -1
    assert disk.num_holes == 0
    assert annulus.num_holes == 1
    assert two_hole.num_holes == 2


def test_build_domain_rejects_bad_specs():
    with pytest.raises(MalformedDomainError):
        build_domain({"kind": "disk", "R": -1.0})
    with pytest.raises(MalformedDomainError):
        build_domain({"kind": "annulus", "r_in": 1.0, "r_out": 0.5})
    with pytest.raises(MalformedDomainError):
        build_domain({"kind": "nonsense"})


def test_circle_curve_exact_quantities():
    c = ClosedCurve.circle((0.5, -0.2), 0.7)
    assert c.signed_area() == pytest.approx(math.pi * 0.49, rel=1e-12)
    assert c.winding_number(np.array([0.5, -0.2])) == 1
    assert c.winding_number(np.array([2.0, 0.0])) == 0
    # distance from an interior point to the circle
    d = c.distance(np.array([0.5, 0.0]))
    assert d == pytest.approx(0.5, abs=1e-10)


def test_domain_distance_and_containment(annulus):
    x = np.array([0.7, 0.0])
    assert annulus.contains(x)
    assert annulus.distance_to_boundary(x) == pytest.approx(0.3, abs=1e-10)
    assert not annulus.contains(np.array([0.1, 0.0]))
    assert annulus.inradius == pytest.approx(0.325, abs=1e-12)


def test_configuration_margins(disk):
    cfg = Configuration(np.array([[0.0, 0.0], [0.5, 0.0]]))
    assert cfg.min_pair_distance() == pytest.approx(0.5)
    assert cfg.min_boundary_distance(disk) == pytest.approx(0.5, abs=1e-10)
    assert in_delta_region(cfg, disk, 0.4)
    assert not in_delta_region(cfg, disk, 0.6)


def test_threshold_ladder(disk):
    th = RegionThresholds.defaults(disk)
    assert th.delta > th.delta_prime > th.delta_tilde > th.delta_pp > 0
    with pytest.raises(ValueError):
        RegionThresholds(delta=1.0, delta_prime=0.9, delta_tilde=0.8,
                         delta_pp=0.7)


def test_config_space_euler_product_recursion():
    for chi in range(-4, 2):
        prev = 1
        for n in range(1, 7):
            val = config_space_euler(chi, n)
            assert val == prev * (chi - (n - 1))
            prev = val
