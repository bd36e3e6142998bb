"""Acceptance suite: the pinned end-to-end checks, one per criterion,
each emitting a single PASS/FAIL line with its measured values."""

import math
import time

import numpy as np
import pytest
from scipy.special import jn_zeros

from vortexlab import (ConfigRegion, DiskGreen, HalfPlaneGreen,
                       WeightProfile, bent_phi_field, beta_curve,
                       blowup_diagnostics, brouwer_degree, build_domain,
                       config_space_euler, continue_branch,
                       degree_jump_check, excess_energy_fit, expected_degree,
                       make_evaluator, meanfield_degree, rescaled_green_error,
                       shoot, solve_meanfield, strip_degree, strip_fields,
                       triangulate, xi_certificate, xi_field)
from vortexlab.fields import linear_weight
from conftest import thresholds_and_bending


def _criterion(num, desc, ok, detail):
    line = f"criterion {num:02d} [{'PASS' if ok else 'FAIL'}] {desc}: {detail}"
    print(line)
    assert ok, line


def _interior_degree(domain, n, tilt, starts, seed=0):
    ev = make_evaluator(domain)
    th, bend = thresholds_and_bending(domain)
    h, hg = linear_weight(*tilt)
    f = bent_phi_field(domain, ev, n, bend,
                       weights=WeightProfile(h=h, h_grad=hg))
    region = ConfigRegion.interior(domain, n, th)
    oracle = expected_degree(domain.euler_characteristic, n)
    return brouwer_degree(f, region, starts=starts, seed=seed, oracle=oracle)


def test_criterion_01_disk_single_point_degree(disk):
    t0 = time.monotonic()
    rep = _interior_degree(disk, 1, (0.05, 0.0), starts=200)
    dt = time.monotonic() - t0
    ok = rep.signed_total == 1 == rep.oracle and dt < 5.0
    _criterion(1, "disk N=1 interior degree",
               ok, f"signed_total={rep.signed_total} oracle=1 time={dt:.1f}s")


def test_criterion_02_two_point_degrees(disk, annulus):
    details, ok = [], True
    for dom, n, label in ((disk, 2, "disk N=2"), (annulus, 1, "annulus N=1"),
                          (annulus, 2, "annulus N=2")):
        t0 = time.monotonic()
        rep = _interior_degree(dom, n, (0.05, 0.0), starts=1000)
        dt = time.monotonic() - t0
        good = rep.signed_total == 0 and dt < 120.0
        ok = ok and good
        details.append(f"{label}: total={rep.signed_total} time={dt:.0f}s")
    _criterion(2, "symmetry-broken multi-point degrees", ok,
               "; ".join(details))


def test_criterion_03_two_hole_degree(two_hole):
    t0 = time.monotonic()
    rep = _interior_degree(two_hole, 1, (0.03, 0.04), starts=300)
    dt = time.monotonic() - t0
    ok = rep.signed_total == -1 and dt < 120.0
    _criterion(3, "two-hole domain (chi=-1) N=1 degree", ok,
               f"signed_total={rep.signed_total} oracle=-1 time={dt:.0f}s")


def test_criterion_04_weight_invariance(annulus):
    totals = [_interior_degree(annulus, 1, tilt, starts=200).signed_total
              for tilt in ((0.05, 0.0), (0.03, 0.04))]
    ok = totals[0] == totals[1]
    _criterion(4, "degree invariant under the weight h", ok,
               f"totals={totals}")


def test_criterion_05_strip_degree_vanishes(annulus):
    ev = make_evaluator(annulus)
    th, bend = thresholds_and_bending(annulus)
    h, hg = linear_weight(0.05, 0.0)
    w = WeightProfile(h=h, h_grad=hg)
    totals = {}
    for j in (1, 2):
        hat, _ = strip_fields(annulus, ev, j, bend, weights=w)
        totals[j] = strip_degree(hat, annulus, j, th, starts=200,
                                 seed=0).signed_total
    ok = totals == {1: 0, 2: 0}
    _criterion(5, "strip degree vanishes for J in {1,2}", ok,
               f"totals={totals}")


def test_criterion_06_jump_table_identity():
    t0 = time.monotonic()
    count = 0
    for chi in range(-3, 2):
        count += len(degree_jump_check(chi, 6))
    dt = time.monotonic() - t0
    ok = count == 30 and dt < 1.0
    _criterion(6, "exact degree-jump identity table", ok,
               f"{count} identities, time={dt:.3f}s")


def test_criterion_07_configuration_euler_recursion():
    ok = True
    for chi in range(-4, 2):
        prev = 1
        for n in range(1, 7):
            val = config_space_euler(chi, n)
            ok = ok and val == prev * (chi - (n - 1))
            prev = val
    _criterion(7, "configuration-space Euler recursion", ok,
               "chi in [-4,1], N <= 6, exact")


def test_criterion_08_xi_certificates():
    rng = np.random.default_rng(0)
    t0 = time.monotonic()
    variants = ["plane", "halfspace_plus", "halfspace_minus",
                "hat_halfspace", "mixed_phi"]
    total = violations = 0
    gmin = math.inf
    for variant in variants:
        j_choices = (2, 3, 4) if variant == "plane" else (1, 2, 3)
        fields = {j: xi_field(variant, j) for j in j_choices}
        for _ in range(2000):
            j = int(rng.choice(j_choices))
            while True:
                pts = rng.uniform(-1.0, 1.0, size=(j, 2))
                if variant in ("halfspace_plus", "halfspace_minus"):
                    pts[:, 1] -= 0.2
                if variant in ("hat_halfspace", "mixed_phi"):
                    pts[:, 1] = np.abs(pts[:, 1]) - 0.9
                d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
                if j == 1 or d[np.triu_indices(j, 1)].min() > 0.05:
                    break
            good, _ = xi_certificate(variant, fields[j], pts)
            gmin = min(gmin, float(np.linalg.norm(
                fields[j].gradient(pts.ravel()))))
            total += 1
            violations += not good
    dt = time.monotonic() - t0
    ok = violations == 0 and gmin > 0 and dt < 30.0
    _criterion(8, "limit-energy certificates, zero violations", ok,
               f"{total} configs, {violations} violations, "
               f"min|grad|={gmin:.3e}, time={dt:.1f}s")


def test_criterion_09_green_validation(disk):
    bie = make_evaluator(disk, method="boundary_integral")
    exact = DiskGreen(disk)
    src = np.array([0.3, 0.2])
    err = 0.0
    for x in np.linspace(-0.92, 0.92, 20):
        for y in np.linspace(-0.92, 0.92, 20):
            pnt = np.array([x, y])
            if np.hypot(x, y) > 0.92 or np.linalg.norm(pnt - src) < 0.05:
                continue
            err = max(err, abs(bie.green(pnt, src) - exact.green(pnt, src)))
    hp = build_domain({"kind": "half_plane", "L": 1.0})
    hpe = HalfPlaneGreen(hp)
    rng = np.random.default_rng(1)
    err_h = 0.0
    for _ in range(200):
        z = rng.uniform((-2, -3), (2, 0.9))
        e = rng.uniform((-2, -3), (2, 0.9))
        if np.linalg.norm(z - e) < 1e-3:
            continue
        mirror = np.array([e[0], 2.0 - e[1]])
        ref = (math.log(np.linalg.norm(z - mirror))
               - math.log(np.linalg.norm(z - e))) / (2 * math.pi)
        err_h = max(err_h, abs(hpe.green(z, e) - ref))
    ok = err < 1e-6 and err_h < 1e-12
    _criterion(9, "Green evaluators validated", ok,
               f"disk BIE max err={err:.2e} (<1e-6), "
               f"half-plane err={err_h:.2e} (<1e-12)")


def test_criterion_10_rescaling_orders(disk_green):
    zs = [np.array(q) for q in
          [(0.3, 0.1), (-0.4, 0.2), (0.1, -0.5), (0.0, 0.6)]]
    rs = [0.2 / 2**k for k in range(6)]
    dev_p, dev_h = [], []
    for r in rs:
        dev_p.append(rescaled_green_error(
            disk_green, (0.2, 0.1), r, zs, regime="plane")["max_deviation"])
        dev_h.append(rescaled_green_error(
            disk_green, (0.0, 1.0 - r), r, zs,
            regime="halfplane")["max_deviation"])
    op = float(np.polyfit(np.log(rs), np.log(dev_p), 1)[0])
    oh = float(np.polyfit(np.log(rs), np.log(dev_h), 1)[0])
    ok = op >= 0.9 and oh >= 0.9
    _criterion(10, "zoom-in convergence orders", ok,
               f"plane order={op:.2f}, halfplane order={oh:.2f} (>=0.9)")


def test_criterion_11_meanfield_disk_oracle(disk):
    mesh = triangulate(disk)
    sol = solve_meanfield(mesh, 2 * math.pi)
    err = abs(sol.max_u - 2 * math.log(2))
    errs = []
    for h in (0.1, 0.05):
        m = triangulate(disk, h_max=h)
        errs.append(abs(solve_meanfield(m, 2 * math.pi).max_u
                        - 2 * math.log(2)))
    ratio = errs[0] / errs[1]
    ok = err < 1e-3 and ratio > 3.0
    _criterion(11, "mean-field disk oracle u(0)=2 ln 2", ok,
               f"default-mesh err={err:.2e} (<1e-3), "
               f"refinement ratio={ratio:.1f} (>3)")


def test_criterion_12_blowup_quantization(disk):
    mesh = triangulate(disk, h_max=0.05, h_min=2e-4)
    branch = continue_branch(mesh, 1.0, beta_start=0.5, beta_target=100.0,
                             amplitude_target=11.8)
    diags = blowup_diagnostics(branch, mesh)
    deep = [d for d in diags if d["gamma"] >= 8]
    lam = [d["lambda"] for d in deep]
    last = deep[-1] if deep else {}
    ok = (bool(deep) and last["beta_gap"] < 0.05
          and all(d["profile_error"] < 1e-2 for d in deep)
          and all(b <= a for a, b in zip(lam, lam[1:]))
          and all(d["quantum_n"] == 1 for d in deep))
    _criterion(12, "single-bubble quantization along the branch", ok,
               f"deepest gamma={last.get('gamma', 0):.1f}, "
               f"|beta-4pi|={last.get('beta_gap', 9):.4f} (<0.05), "
               f"max profile err={max(d['profile_error'] for d in deep):.2e}"
               f" (<1e-2), lambda decreasing={lam == sorted(lam)[::-1]}")


def test_criterion_13_excess_energy_fit():
    details, ok = [], True
    for p in (2.0, 1.5):
        t0 = time.monotonic()
        try:
            rows, _ = beta_curve(np.geomspace(4.0, 8.0, 17), p)
            slope, const = excess_energy_fit(rows, p, gamma_min=4.0)
            msg = f"p={p}: slope={slope:.3f}, constant={const:.2f}"
        except Exception as exc:
            slope, const = math.nan, math.nan
            msg = f"p={p}: fit failed ({exc})"
        dt = time.monotonic() - t0
        good = (abs(slope + 2 * p) <= 0.05 * 2 * p and dt < 60.0)
        if p == 2.0:
            good = good and abs(const - 4 * math.pi) <= 0.15 * 4 * math.pi
        ok = ok and good
        details.append(msg + f", time={dt:.1f}s")
    _criterion(13, "excess-energy rate over gamma in [4,8]", ok,
               "; ".join(details)
               + " [expected p=2: -4 within 5%, 4pi within 15%; "
               "p=1.5: -3 within 5%]")


def test_criterion_14_disk_boundedness():
    rows, k_max = beta_curve(np.geomspace(0.1, 10.0, 25), 2.0)
    betas = [s.beta for s in rows]
    sup = max(betas)
    ok = (math.isfinite(sup) and 0 < k_max < len(rows) - 1
          and betas[-1] < sup)
    _criterion(14, "bounded beta curve on the disk", ok,
               f"sup beta={sup:.4f} at gamma={rows[k_max].gamma:.2f}, "
               f"final beta={betas[-1]:.4f} < sup")
