import math

import numpy as np
import pytest
from scipy.special import jn_zeros

from vortexlab import (NoZeroError, RegimeError, beta_curve,
                       excess_energy_fit, expected_excess, shoot)


def test_profile_invariants():
    for p, gamma in ((2.0, 3.0), (2.0, 6.0), (1.5, 5.0)):
        s = shoot(gamma, p)
        assert s.u[0] == pytest.approx(gamma)
        assert abs(s.u[-1]) < 1e-10
        assert s.r[0] == 0.0 and s.r[-1] == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.diff(s.u) < 1e-12)   # monotone decreasing
        assert s.lam > 0 and s.beta > 0


def test_small_amplitude_linearization():
    # gamma -> 0 at p = 2: the equation linearizes to the first radial
    # Dirichlet eigenfunction, lambda -> j01^2 / 2
    s = shoot(0.005, 2.0)
    assert s.lam == pytest.approx(jn_zeros(0, 1)[0] ** 2 / 2, rel=1e-4)
    assert s.beta < 1e-3


def test_energy_equals_constraint_expression_at_p2():
    for gamma in (2.0, 6.0, 10.0):
        s = shoot(gamma, 2.0)
        assert abs(s.beta - s.beta_def) < 1e-8


def test_scaling_invariance():
    a = shoot(6.0, 2.0, lam_hat=1.0)
    b = shoot(6.0, 2.0, lam_hat=5.0)
    assert a.lam == pytest.approx(b.lam, rel=1e-10)
    assert abs(a.beta - b.beta) < 1e-10


def test_tolerance_halving_stability():
    a = shoot(6.0, 2.0)
    b = shoot(6.0, 2.0, rtol=5e-12, atol=5e-14)
    assert abs(a.beta - b.beta) < 1e-9


def test_input_validation():
    with pytest.raises(ValueError):
        shoot(-1.0, 2.0)
    with pytest.raises(ValueError):
        shoot(1.0, 2.5)
    with pytest.raises(OverflowError):
        shoot(30.0, 2.0)                   # exp(gamma^2) overflows
    with pytest.raises(ValueError):
        beta_curve([3.0, 2.0], 2.0)        # grid must increase


def test_excess_above_4pi_in_bubble_regime():
    rows, _ = beta_curve(np.geomspace(4, 8, 9), 2.0)
    for s in rows:
        assert s.beta > 4 * math.pi
    rows, _ = beta_curve(np.geomspace(4, 8, 5), 1.5)
    for s in rows:
        assert s.beta > 4 * math.pi        # Dirichlet energy, always above


def test_fit_regime_guard():
    rows, _ = beta_curve(np.geomspace(0.5, 1.5, 5), 2.0)
    with pytest.raises(RegimeError):
        excess_energy_fit(rows, 2.0, gamma_min=0.5)


def test_asymptotic_rate_emerges_at_large_amplitude():
    # the predicted decay rate -2p of beta_def - 4 pi is reached slowly;
    # deep windows recover it within 5 percent
    rows, _ = beta_curve(np.geomspace(20, 75, 9), 1.5)
    slope, _ = excess_energy_fit(rows, 1.5, gamma_min=20)
    assert slope == pytest.approx(-3.0, rel=0.05)
    a = shoot(18.0, 2.0)
    b = shoot(25.0, 2.0)
    local = (math.log(b.beta - 4 * math.pi)
             - math.log(a.beta - 4 * math.pi)) / math.log(25.0 / 18.0)
    assert local == pytest.approx(-4.0, rel=0.1)


def test_expected_excess_values():
    assert expected_excess(2.0) == (-4.0, pytest.approx(4 * math.pi))
    s, c = expected_excess(1.5)
    assert s == -3.0
    assert c == pytest.approx(4 * math.pi * 8 / 9)
