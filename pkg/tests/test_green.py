import math

import numpy as np
import pytest

from vortexlab import (AnnulusGreen, BoundaryIntegralGreen, DiskGreen,
                       HalfPlaneGreen, build_domain, make_evaluator,
                       rescaled_green_error)

TWO_PI = 2 * math.pi


def test_disk_green_closed_form(disk_green):
    x = np.array([0.3, 0.1])
    y = np.array([-0.2, 0.4])
    # image formula on the unit disk
    ref = (math.log(np.linalg.norm(x * np.linalg.norm(y)
                                   - y / np.linalg.norm(y)))
           - math.log(np.linalg.norm(x - y))) / TWO_PI
    assert disk_green.green(x, y) == pytest.approx(ref, abs=1e-14)
    assert disk_green.green(x, y) == pytest.approx(disk_green.green(y, x),
                                                   abs=1e-13)
    assert disk_green.robin(np.zeros(2)) == pytest.approx(0.0, abs=1e-14)


def test_disk_green_vanishes_on_boundary(disk_green):
    y = np.array([0.25, -0.1])
    for th in np.linspace(0, TWO_PI, 7):
        x = 0.999999 * np.array([math.cos(th), math.sin(th)])
        assert abs(disk_green.green(x, y)) < 1e-5


def test_halfplane_reflection_identity():
    dom = build_domain({"kind": "half_plane", "L": 1.0})
    ev = HalfPlaneGreen(dom)
    rng = np.random.default_rng(3)
    for _ in range(50):
        z = rng.uniform((-2, -3), (2, 0.9))
        e = rng.uniform((-2, -3), (2, 0.9))
        if np.linalg.norm(z - e) < 1e-3:
            continue
        mirror = np.array([e[0], 2.0 - e[1]])
        ref = (math.log(np.linalg.norm(z - mirror))
               - math.log(np.linalg.norm(z - e))) / TWO_PI
        assert ev.green(z, e) == pytest.approx(ref, abs=1e-13)


def test_annulus_green_symmetry_and_boundary(annulus_green):
    x = np.array([0.6, 0.1])
    y = np.array([-0.2, -0.5])
    assert annulus_green.green(x, y) == pytest.approx(
        annulus_green.green(y, x), abs=1e-12)
    for r in (0.3500001, 0.9999999):
        b = r * np.array([math.cos(0.7), math.sin(0.7)])
        assert abs(annulus_green.green(b, y)) < 1e-5


def test_boundary_integral_matches_disk(disk):
    bie = make_evaluator(disk, method="boundary_integral")
    exact = DiskGreen(disk)
    src = np.array([0.3, 0.2])
    worst = 0.0
    for x in np.linspace(-0.9, 0.9, 12):
        for y in np.linspace(-0.9, 0.9, 12):
            p = np.array([x, y])
            if np.hypot(x, y) > 0.9 or np.linalg.norm(p - src) < 0.05:
                continue
            worst = max(worst, abs(bie.green(p, src) - exact.green(p, src)))
    assert worst < 1e-6


def test_boundary_integral_matches_annulus(annulus):
    bie = make_evaluator(annulus, method="boundary_integral")
    exact = AnnulusGreen(annulus)
    src = np.array([0.6, 0.1])
    for p in ([0.5, -0.4], [-0.7, 0.2], [0.0, 0.55]):
        p = np.array(p)
        assert bie.green(p, src) == pytest.approx(exact.green(p, src),
                                                  abs=1e-6)
        assert bie.robin(p) == pytest.approx(exact.robin(p), abs=1e-6)


def test_green_gradients_match_finite_differences(annulus_green):
    x = np.array([0.55, 0.25])
    y = np.array([-0.3, -0.45])
    h = 1e-6
    for k in range(2):
        dx = np.zeros(2)
        dx[k] = h
        fd = (annulus_green.green(x + dx, y)
              - annulus_green.green(x - dx, y)) / (2 * h)
        assert annulus_green.green_grad(x, y)[k] == pytest.approx(fd,
                                                                  abs=1e-7)
        fd_r = (annulus_green.robin(x + dx)
                - annulus_green.robin(x - dx)) / (2 * h)
        assert annulus_green.robin_grad(x)[k] == pytest.approx(fd_r,
                                                               abs=1e-6)


def test_rescaled_deviation_shrinks_with_zoom(disk_green):
    zs = [np.array(p) for p in [(0.3, 0.1), (-0.4, 0.2), (0.1, -0.5)]]
    devs = [rescaled_green_error(disk_green, (0.2, 0.1), r, zs,
                                 regime="plane")["max_deviation"]
            for r in (0.2, 0.1, 0.05)]
    assert devs[0] > devs[1] > devs[2]
