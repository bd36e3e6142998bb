import math

import numpy as np
import pytest
from scipy.special import jn_zeros

from vortexlab import (MeshError, blowup_diagnostics, bubble_profile_error,
                       continue_branch, dirichlet_lambda1, liouville_beta,
                       liouville_exact, liouville_lambda, solve_meanfield,
                       triangulate)
from vortexlab.meanfield import interpolate, p1_matrices


@pytest.fixture(scope="module")
def disk_mesh(disk):
    return triangulate(disk, h_max=0.05)


def test_mesh_quality(disk, annulus):
    for dom, h in ((disk, 0.05), (annulus, 0.04)):
        mesh = triangulate(dom, h_max=h)
        assert mesh.min_angle() >= 20.0
        assert abs(mesh.areas().sum()
                   - (math.pi if dom.kind == "disk"
                      else math.pi * (1 - 0.35**2))) < 0.02


def test_mesh_rejections(disk, two_hole):
    with pytest.raises(MeshError):
        triangulate(disk, h_max=0.5)      # too coarse vs the inradius
    with pytest.raises(MeshError):
        triangulate(two_hole, h_max=0.05)  # generic domains unsupported


def test_stiffness_matrix_annihilates_constants(disk_mesh):
    K, m = p1_matrices(disk_mesh)
    ones = np.ones(len(disk_mesh.vertices))
    assert np.abs(K @ ones).max() < 1e-12
    assert m.sum() == pytest.approx(disk_mesh.areas().sum(), rel=1e-12)


def test_dirichlet_eigenvalue_oracle(disk_mesh):
    lam1 = dirichlet_lambda1(disk_mesh)
    assert lam1 == pytest.approx(jn_zeros(0, 1)[0] ** 2, rel=0.01)


def test_liouville_oracle_on_default_mesh(disk):
    mesh = triangulate(disk)              # default resolution
    sol = solve_meanfield(mesh, 2 * math.pi)
    assert abs(sol.max_u - 2 * math.log(2)) < 1e-3
    # compare the whole profile, not just the peak
    mu = 1.0
    pts = np.array([[r, 0.0] for r in (0.0, 0.3, 0.6, 0.9)])
    vals = interpolate(mesh, sol.u, pts)
    exact = [liouville_exact(mu, r) for r in (0.0, 0.3, 0.6, 0.9)]
    assert np.abs(vals - exact).max() < 2e-3
    assert sol.beta == pytest.approx(liouville_beta(mu), rel=1e-3)
    assert sol.lam == pytest.approx(liouville_lambda(mu), rel=1e-3)


def test_second_order_convergence(disk):
    errs = []
    for h in (0.1, 0.05, 0.025):
        mesh = triangulate(disk, h_max=h)
        sol = solve_meanfield(mesh, 2 * math.pi)
        errs.append(abs(sol.max_u - 2 * math.log(2)))
    assert errs[0] / errs[1] > 3.0        # ~4 for a second-order method
    assert errs[1] / errs[2] > 3.0


def test_discrete_maximum_principle(disk_mesh):
    sol = solve_meanfield(disk_mesh, 2 * math.pi)
    assert sol.u.min() >= -1e-12
    assert not disk_mesh.boundary[np.argmax(sol.u)]


def test_branch_respects_eigenvalue_bound(disk_mesh):
    branch = continue_branch(disk_mesh, 1.0, beta_start=0.5,
                             beta_target=100.0, amplitude_target=6.0)
    lam1 = dirichlet_lambda1(disk_mesh)
    for s in branch.solutions:
        assert 0 < 2 * s.lam <= lam1 * (1 + 1e-10)
        assert abs(2 * s.beta - s.lam * s.mass) < 1e-9


def test_annulus_branch_runs(annulus):
    mesh = triangulate(annulus, h_max=0.05)
    branch = continue_branch(mesh, 1.0, beta_start=0.5, beta_target=6.0,
                             step=0.5)
    assert branch.solutions
    assert branch.solutions[-1].beta >= 6.0 - 1e-8


def test_bubble_profile_matches_liouville(disk):
    mesh = triangulate(disk, h_max=0.05, h_min=2e-4)
    branch = continue_branch(mesh, 1.0, beta_start=0.5, beta_target=100.0,
                             amplitude_target=9.0)
    sol = branch.solutions[-1]
    err, mu = bubble_profile_error(mesh, sol)
    assert err < 1e-2
    # the core scale matches the closed-form one for the disk
    assert mu == pytest.approx(
        math.sqrt(8 / (sol.lam * math.exp(sol.max_u))), rel=1e-9)


def test_blowup_diagnostics_schema(disk):
    mesh = triangulate(disk, h_max=0.05, h_min=2e-4)
    branch = continue_branch(mesh, 1.0, beta_start=0.5, beta_target=100.0,
                             amplitude_target=8.0)
    rows = blowup_diagnostics(branch, mesh)
    assert rows
    for r in rows:
        assert r["quantum_n"] == 1
        assert r["normalization_check"] < 1e-9
