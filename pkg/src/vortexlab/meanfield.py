"""Finite-element solver and pseudo-arclength continuation for the
mean-field problem

    Delta u = 2 beta h e^u / int_Omega h e^u,   u = 0 on the boundary,

(nonnegative-Laplacian convention) with blow-up and quantization
diagnostics: peak extraction, rescaled bubble profiles against
2 ln(1 + |z|^2), and the energy parameter's approach to 4 pi N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh, splu

from .geometry import MalformedDomainError


class MeshError(ValueError):
    """Triangulation failed or is unsupported for this domain kind."""


class NonconvergenceError(RuntimeError):
    """Newton failed to converge; carries the last iterate."""

    def __init__(self, msg, last_iterate=None):
        super().__init__(msg)
        self.last_iterate = last_iterate


@dataclass
class Mesh:
    """Conforming P1 triangulation with boundary marks.

    vertices: (nv, 2); triangles: (nt, 3) int; boundary: (nv,) bool."""
    vertices: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    h_max: float

    @property
    def n_vertices(self):
        return len(self.vertices)

    def min_angle(self):
        """Smallest interior angle over all triangles, in degrees."""
        p = self.vertices[self.triangles]
        best = 180.0
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            cosang = np.einsum("ij,ij->i", a, b) / (
                np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
            ang = np.degrees(np.arccos(np.clip(cosang, -1, 1)))
            best = min(best, float(ang.min()))
        return best

    def areas(self):
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def _ring_points(radii, center_spacing_angle=None):
    """Vertices on concentric circles with near-unit-aspect triangles:
    the angular count on each ring matches the local radial spacing, and
    alternate rings are staggered by half a cell."""
    pts = []
    ring_of = []
    for k, r in enumerate(radii):
        if k == 0:
            dr = radii[1] - radii[0] if len(radii) > 1 else r
        elif k == len(radii) - 1:
            dr = radii[-1] - radii[-2]
        else:
            dr = 0.5 * (radii[k + 1] - radii[k - 1])
        n = max(8, int(math.ceil(2 * math.pi * r / max(dr, 1e-12))))
        offs = 0.5 * (k % 2) * 2 * math.pi / n
        ang = offs + 2 * math.pi * np.arange(n) / n
        pts.append(np.c_[r * np.cos(ang), r * np.sin(ang)])
        ring_of.extend([k] * n)
    return np.vstack(pts), np.array(ring_of)


def _graded_radii(r_out, h_max, h_min, r_in=0.0):
    """Radial nodes from r_in to r_out: spacing h_max away from the inner
    end, geometrically refined down to h_min approaching it (h_min=h_max
    gives a uniform mesh)."""
    radii = [r_out]
    r = r_out
    while r > r_in + 1e-12:
        # the 0.1 growth factor keeps ~10 cells across any annular scale,
        # enough to resolve a concentrating core wherever it sits
        step = min(h_max, max(h_min, 0.1 * (r - r_in)))
        r = max(r_in, r - step)
        radii.append(r)
        if r - r_in <= h_min * 1.5:
            radii.append(r_in)
            break
    radii = np.unique(np.array(radii))
    return radii


def triangulate(domain, h_max=0.02, h_min=None):
    """Triangulate a disk or annulus with concentric vertex rings joined
    by Delaunay; `h_min` < `h_max` grades the disk mesh geometrically
    toward the center (used to resolve concentrating solutions)."""
    from scipy.spatial import Delaunay

    if h_max >= domain.inradius / 4:
        raise MeshError("h_max must be < inradius/4")
    h_min = h_max if h_min is None else h_min
    if domain.kind == "disk":
        R = domain.params["R"]
        radii = _graded_radii(R, h_max, h_min)
        pts, _ = _ring_points(radii[radii > 0])
        if radii[0] == 0.0:
            pts = np.vstack([[[0.0, 0.0]], pts])
        tri = Delaunay(pts)
        tris = tri.simplices
        bnd = np.abs(np.linalg.norm(pts, axis=1) - R) < 1e-9
    elif domain.kind == "annulus":
        a, b = domain.params["r_in"], domain.params["r_out"]
        nr = max(3, int(math.ceil((b - a) / h_max)))
        radii = np.linspace(a, b, nr + 1)
        pts, _ = _ring_points(radii)
        tri = Delaunay(pts)
        tris = tri.simplices
        # drop hole triangles (Delaunay fills the convex hull)
        cent = pts[tris].mean(axis=1)
        tris = tris[np.linalg.norm(cent, axis=1) > a]
        bnd = (np.abs(np.linalg.norm(pts, axis=1) - a) < 1e-9) \
            | (np.abs(np.linalg.norm(pts, axis=1) - b) < 1e-9)
    else:
        raise MeshError(f"triangulation not implemented for kind "
                        f"{domain.kind!r} (disk and annulus only)")
    mesh = Mesh(vertices=pts, triangles=tris, boundary=bnd, h_max=h_max)
    if mesh.min_angle() < 20.0:
        raise MeshError(f"mesh quality too low: min angle "
                        f"{mesh.min_angle():.1f} deg < 20 deg")
    return mesh


def p1_matrices(mesh):
    """P1 stiffness matrix and lumped mass vector (vertex areas)."""
    pts, tris = mesh.vertices, mesh.triangles
    nv = len(pts)
    p = pts[tris]
    # gradients of barycentric basis functions
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    area = 0.5 * np.abs(det)
    # grad lambda_i: rows of inverse Jacobian assembly
    g = np.empty((len(tris), 3, 2))
    g[:, 1, 0] = d2[:, 1] / det
    g[:, 1, 1] = -d2[:, 0] / det
    g[:, 2, 0] = -d1[:, 1] / det
    g[:, 2, 1] = d1[:, 0] / det
    g[:, 0] = -g[:, 1] - g[:, 2]
    rows, cols, vals = [], [], []
    for i in range(3):
        for j in range(3):
            rows.append(tris[:, i])
            cols.append(tris[:, j])
            vals.append(area * np.einsum("kd,kd->k", g[:, i], g[:, j]))
    K = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(nv, nv))
    m = np.zeros(nv)
    for i in range(3):
        np.add.at(m, tris[:, i], area / 3.0)
    return K, m


@dataclass
class MFSolution:
    """One converged nodal solution of the discrete mean-field problem."""
    u: np.ndarray
    beta: float
    lam: float
    mass: float
    max_u: float
    peak: np.ndarray
    residual: float

    def summary(self):
        return {"beta": self.beta, "lambda": self.lam, "mass": self.mass,
                "max_u": self.max_u, "peak": self.peak.tolist(),
                "residual": self.residual}


@dataclass
class Branch:
    solutions: list = dc_field(default_factory=list)
    steps: list = dc_field(default_factory=list)
    folds: list = dc_field(default_factory=list)
    terminated: str = ""


class _Discretization:
    """Interior-DOF reduction of the nonlocal Newton system."""

    def __init__(self, mesh, h):
        self.mesh = mesh
        self.K, self.m = p1_matrices(mesh)
        self.interior = ~mesh.boundary
        self.idx = np.flatnonzero(self.interior)
        self.Kii = self.K[self.idx][:, self.idx].tocsc()
        self.hv = np.array([float(h(x)) for x in mesh.vertices]) \
            if callable(h) else np.full(mesh.n_vertices, float(h))
        if np.any(self.hv <= 0):
            raise ValueError("weight h must be positive on the mesh")

    def residual(self, u, beta):
        w = self.m * self.hv * np.exp(u)
        S = w.sum()
        r = self.K @ u - 2 * beta * w / S
        return r[self.idx], S

    def newton(self, u0, beta, tol=1e-10, max_iter=60):
        """Newton with the full Jacobian of the nonlocal term
        K - 2 beta [diag(w)/S - w w^T / S^2], w = m h e^u (the rank-one
        part keeps convergence quadratic near folds)."""
        u = u0.copy()
        u[~self.interior] = 0.0
        for _ in range(max_iter):
            w = self.m * self.hv * np.exp(u)
            S = w.sum()
            r = (self.K @ u - 2 * beta * w / S)[self.idx]
            rn = float(np.linalg.norm(r, np.inf))
            if rn < tol:
                return u, rn
            wi = w[self.idx]
            J = self.Kii - 2 * beta * sparse.diags(wi) / S
            lu = splu(J.tocsc())
            # rank-one correction by Sherman-Morrison: J_full = J + c a a^T
            a = wi
            c = 2 * beta / S**2
            y = lu.solve(-r)
            z = lu.solve(a)
            du = y - c * (a @ y) / (1 + c * (a @ z)) * z
            # line search on the residual norm
            lam_ls, ok = 1.0, False
            for _ in range(30):
                un = u.copy()
                un[self.idx] += lam_ls * du
                wn = self.m * self.hv * np.exp(un)
                rn2 = float(np.linalg.norm(
                    (self.K @ un - 2 * beta * wn / wn.sum())[self.idx], np.inf))
                if rn2 < rn * (1 - 1e-4 * lam_ls) or rn2 < tol:
                    u = un
                    ok = True
                    break
                lam_ls *= 0.5
            if not ok:
                raise NonconvergenceError(
                    f"Newton stalled at residual {rn:.3e}", u)
        raise NonconvergenceError(
            f"Newton did not reach {tol:.1e} in {max_iter} iterations", u)

    def package(self, u, beta):
        w = self.m * self.hv * np.exp(u)
        S = float(w.sum())
        r, _ = self.residual(u, beta)
        kpeak = int(np.argmax(u))
        return MFSolution(u=u, beta=float(beta), lam=2 * beta / S, mass=S,
                          max_u=float(u[kpeak]),
                          peak=self.mesh.vertices[kpeak].copy(),
                          residual=float(np.linalg.norm(r, np.inf)))


def solve_meanfield(mesh, beta, h=1.0, initial=None, tol=1e-10):
    """Solve the discrete problem at fixed beta from the given nodal
    guess (zero by default)."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    disc = _Discretization(mesh, h)
    u0 = np.zeros(mesh.n_vertices) if initial is None else \
        np.asarray(initial, float).copy()
    if not np.all(np.isfinite(u0)):
        raise ValueError("initial guess must be finite")
    u, _ = disc.newton(u0, beta, tol=tol)
    return disc.package(u, beta)


def dirichlet_lambda1(mesh):
    """Smallest discrete Dirichlet eigenvalue (lumped mass)."""
    K, m = p1_matrices(mesh)
    idx = np.flatnonzero(~mesh.boundary)
    Kii = K[idx][:, idx].tocsc()
    M = sparse.diags(m[idx]).tocsc()
    vals = eigsh(Kii, k=1, M=M, sigma=0, which="LM",
                 return_eigenvectors=False)
    return float(vals[0])


def continue_branch(mesh, h, beta_start, beta_target, step=0.5,
                    max_steps=400, amplitude_target=None, tol=1e-10):
    """Pseudo-arclength continuation from a cold solve at beta_start
    toward beta_target (or until max_u exceeds amplitude_target).

    The bordered system is [F(u, beta); arclength constraint] with a
    secant predictor; Newton failures halve the step, and the branch
    terminates (with a report, not an exception) if the step underflows
    below 1e-8.  Folds are recorded where the beta-component of the
    secant tangent changes sign."""
    disc = _Discretization(mesh, h)
    branch = Branch()

    u, _ = disc.newton(np.zeros(mesh.n_vertices), beta_start, tol=tol)
    sol = disc.package(u, beta_start)
    branch.solutions.append(sol)
    branch.steps.append({"ds": 0.0, "beta": sol.beta})

    nsc = 1.0 / math.sqrt(max(1, len(disc.idx)))   # u-norm scaling

    def corrector(u_pred, beta_pred, u_ref, beta_ref, tu, tb, ds):
        """Newton on the bordered system at fixed arclength."""
        u_c, b_c = u_pred.copy(), float(beta_pred)
        for _ in range(40):
            w = disc.m * disc.hv * np.exp(u_c)
            S = w.sum()
            r = (disc.K @ u_c - 2 * b_c * w / S)[disc.idx]
            arc = nsc**2 * float(tu @ (u_c[disc.idx] - u_ref[disc.idx])) \
                + tb * (b_c - beta_ref) - ds
            if max(float(np.linalg.norm(r, np.inf)), abs(arc)) < tol:
                return u_c, b_c
            wi = w[disc.idx]
            J = disc.Kii - 2 * b_c * sparse.diags(wi) / S
            lu = splu(J.tocsc())
            a = wi
            c = 2 * b_c / S**2

            def jsolve(rhs):
                y = lu.solve(rhs)
                z = lu.solve(a)
                return y - c * (a @ y) / (1 + c * (a @ z)) * z

            dFdb = -2 * w[disc.idx] / S
            # bordered elimination: solve [J dFdb; tu^T tb] [du; db] = -[r; arc]
            s1 = jsolve(-r)
            s2 = jsolve(-dFdb)
            denom = tb + nsc**2 * float(tu @ s2)
            if abs(denom) < 1e-14:
                raise NonconvergenceError("singular bordered system", u_c)
            db = (-arc - nsc**2 * float(tu @ s1)) / denom
            du = s1 + db * s2
            u_c[disc.idx] += du
            b_c += db
        raise NonconvergenceError("bordered Newton did not converge", u_c)

    # initial tangent: continuation in beta, in the stepping direction
    direction = 1.0 if beta_target >= beta_start else -1.0
    tu = np.zeros(len(disc.idx))
    tb = direction
    prev_tb = tb
    ds = step
    for _ in range(max_steps):
        last = branch.solutions[-1]
        done_beta = (direction > 0 and last.beta >= beta_target) or \
                    (direction < 0 and last.beta <= beta_target)
        done_amp = amplitude_target is not None and last.max_u >= amplitude_target
        if done_beta or done_amp:
            break
        while True:
            try:
                u_pred = last.u.copy()
                u_pred[disc.idx] += ds * tu
                b_pred = last.beta + ds * tb
                u_n, b_n = corrector(u_pred, b_pred, last.u, last.beta,
                                     tu, tb, ds)
                break
            except NonconvergenceError:
                ds *= 0.5
                if ds < 1e-8:
                    branch.terminated = "step underflow below 1e-8"
                    return branch
        sol = disc.package(u_n, b_n)
        # secant tangent for the next step, normalized in the scaled norm;
        # the tangent is kept in the stepping direction (direction applied
        # by the predictor), so a sign flip of its beta-component is a fold
        du = (sol.u - last.u)[disc.idx]
        db = sol.beta - last.beta
        nrm = math.sqrt(nsc**2 * float(du @ du) + db * db)
        tu, tb = du / nrm, db / nrm
        if (tb > 0) != (prev_tb > 0):
            branch.folds.append(len(branch.solutions))
        prev_tb = tb
        branch.solutions.append(sol)
        branch.steps.append({"ds": ds, "beta": sol.beta})
        ds = min(ds * 1.4, step)
    return branch


def interpolate(mesh, u, points):
    """P1 interpolation of nodal values at arbitrary points."""
    from scipy.interpolate import LinearNDInterpolator
    interp = LinearNDInterpolator(mesh.vertices, u)
    return interp(np.asarray(points, float))


def bubble_profile_error(mesh, sol, window=2.0, nrad=12, nang=16):
    """Sup distance of the rescaled peak profile to 2 ln(1 + |z|^2).

    The core scale is mu = sqrt(8 / (lambda h(peak) e^gamma)), for which
    the local model u(peak) - u(peak + mu z) = 2 ln(1 + |z|^2) is exact
    for the single-bubble family."""
    gamma = sol.max_u
    x0 = sol.peak
    hv = 1.0
    mu = math.sqrt(8.0 / (sol.lam * hv * math.exp(gamma)))
    zr = np.linspace(0.2, window, nrad)
    za = 2 * math.pi * np.arange(nang) / nang
    zz = np.array([[r * math.cos(a), r * math.sin(a)]
                   for r in zr for a in za])
    pts = x0[None, :] + mu * zz
    vals = interpolate(mesh, sol.u, pts)
    model = 2 * np.log1p((zz**2).sum(axis=1))
    err = np.abs((gamma - vals) - model)
    return float(np.nanmax(err)), mu


def blowup_diagnostics(branch, mesh, threshold=6.0):
    """Quantization report along a branch: for every solution with peak
    amplitude above the threshold, the rescaled bubble-profile error,
    the distance of beta to the nearest 4 pi N, and the normalization
    identity 2 beta = lambda * mass."""
    rows = []
    for sol in branch.solutions:
        if sol.max_u < threshold:
            continue
        perr, mu = bubble_profile_error(mesh, sol)
        n_near = max(1, round(sol.beta / (4 * math.pi)))
        rows.append({
            "beta": sol.beta,
            "lambda": sol.lam,
            "gamma": sol.max_u,
            "core_scale": mu,
            "profile_error": perr,
            "nearest_quantum": 4 * math.pi * n_near,
            "quantum_n": int(n_near),
            "beta_gap": abs(sol.beta - 4 * math.pi * n_near),
            "normalization_check": abs(2 * sol.beta - sol.lam * sol.mass),
        })
    return rows


def liouville_exact(mu, r):
    """Closed-form single-bubble family on the unit disk:
    u(r) = 2 ln((1+mu)/(1+mu r^2)), with beta = 4 pi mu/(1+mu) and
    lambda = 8 mu/(1+mu)^2."""
    r = np.asarray(r, float)
    return 2 * np.log((1 + mu) / (1 + mu * r**2))


def liouville_beta(mu):
    return 4 * math.pi * mu / (1 + mu)


def liouville_lambda(mu):
    return 8 * mu / (1 + mu) ** 2
