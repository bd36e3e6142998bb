"""Dirichlet Green's functions, regular parts and Robin functions.

Convention: with the positive Laplacian (-d_xx - d_yy), the Green's
function is

    G(x, y) = (1/2pi) ln(1/|x-y|) + H(x, y),   G = 0 on the boundary,

so G > 0 inside and the Robin function x -> H(x, x) tends to -infinity at
the boundary. Closed formulas cover the disk and half-plane, a Fourier
mode series covers the annulus, and a double-layer Nystrom solver covers
generic smooth multiply connected domains.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .geometry import CURVE_NODES, Domain, build_domain

TWO_PI = 2 * math.pi


class DomainError(ValueError):
    pass


class SingularityError(ValueError):
    pass


class GreenEvaluator:
    """Base interface: green / green_grad / robin / robin_grad on one domain."""

    method = "abstract"

    def __init__(self, domain: Domain):
        self.domain = domain

    def _check(self, *points, distinct=None):
        for p in points:
            if self.domain.distance_to_boundary(p) <= 0:
                raise DomainError(f"point {tuple(p)} outside the open domain")
        if distinct is not None:
            a, b = distinct
            if np.hypot(a[0] - b[0], a[1] - b[1]) == 0.0:
                raise SingularityError("green is singular at x = y")

    def green(self, x, y):
        raise NotImplementedError

    def green_grad(self, x, y):
        raise NotImplementedError

    def robin(self, x):
        raise NotImplementedError

    def robin_grad(self, x):
        raise NotImplementedError


class DiskGreen(GreenEvaluator):
    """Image-formula evaluator for the disk of radius R centered at 0."""

    method = "exact_disk"

    def __init__(self, domain):
        super().__init__(domain)
        self.R = domain.params["R"]

    def green(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        R = self.R
        ry = np.linalg.norm(y)
        if ry == 0.0:
            return math.log(R / np.linalg.norm(x)) / TWO_PI
        ystar = y * (R**2 / ry**2)
        return math.log(ry * np.linalg.norm(x - ystar) / (R * np.linalg.norm(x - y))) / TWO_PI

    def green_grad(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        ry = np.linalg.norm(y)
        if ry == 0.0:
            return -x / (TWO_PI * np.dot(x, x))
        ystar = y * (self.R**2 / ry**2)
        return ((x - ystar) / np.dot(x - ystar, x - ystar)
                - (x - y) / np.dot(x - y, x - y)) / TWO_PI

    def robin(self, x):
        self._check(x)
        x = np.asarray(x, float)
        r2 = float(np.dot(x, x))
        return math.log((self.R**2 - r2) / self.R) / TWO_PI

    def robin_grad(self, x):
        self._check(x)
        x = np.asarray(x, float)
        r2 = float(np.dot(x, x))
        return -2 * x / (TWO_PI * (self.R**2 - r2))


class HalfPlaneGreen(GreenEvaluator):
    """Mirror-point evaluator for the half-plane {y < L}."""

    method = "exact_halfplane"

    def __init__(self, domain):
        super().__init__(domain)
        self.L = domain.params["L"]

    @staticmethod
    def _mirror(eta, L):
        return np.array([eta[0], 2 * L - eta[1]])

    def green(self, z, eta):
        self._check(z, eta, distinct=(z, eta))
        z = np.asarray(z, float)
        eta = np.asarray(eta, float)
        es = self._mirror(eta, self.L)
        return math.log(np.linalg.norm(z - es) / np.linalg.norm(z - eta)) / TWO_PI

    def green_grad(self, z, eta):
        self._check(z, eta, distinct=(z, eta))
        z = np.asarray(z, float)
        eta = np.asarray(eta, float)
        es = self._mirror(eta, self.L)
        return ((z - es) / np.dot(z - es, z - es)
                - (z - eta) / np.dot(z - eta, z - eta)) / TWO_PI

    def regular_part(self, z, eta):
        z = np.asarray(z, float)
        es = self._mirror(np.asarray(eta, float), self.L)
        return math.log(np.linalg.norm(z - es)) / TWO_PI

    def robin(self, z):
        self._check(z)
        d = self.L - z[1]
        return math.log(2 * d) / TWO_PI

    def robin_grad(self, z):
        self._check(z)
        d = self.L - z[1]
        return np.array([0.0, -1.0 / (TWO_PI * d)])


# block signs of the four annulus reflection families, and the sign of
# dx/dr within each family (the last two image radii scale like 1/r)
_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])
_RSIGNS = np.array([1.0, 1.0, -1.0, -1.0])


class AnnulusGreen(GreenEvaluator):
    """Image-series evaluator for the annulus r_in < |x| < r_out.

    Repeated reflection across both circles gives the harmonic corrector as
    a sum of log kernels at image radii a^{2m} s r, a^{2m+2} r/s,
    a^{2m+2} s/r, a^{2m+2}/(s r) (unit-normalized annulus a < r < 1), plus
    the log-log circulation term. The series converges geometrically at
    rate a^2 uniformly up to the boundary; it is truncated when the next
    image block drops below the tolerance.
    """

    method = "image_series_annulus"


    def __init__(self, domain, tol=1e-15):
        super().__init__(domain)
        self.a = domain.params["r_in"] / domain.params["r_out"]
        self.scale = domain.params["r_out"]
        self.n_images = int(math.ceil(math.log(tol) / math.log(self.a**2))) + 2
        self._a2m = self.a ** (2 * np.arange(self.n_images, dtype=float))

    @staticmethod
    def _logabs(x, c):
        # ln|1 - x e^{i theta}| with c = cos(theta), vectorized over x
        return 0.5 * np.log1p(x * (x - 2 * c))

    def _corrector(self, r, s, dtheta, want_grad=False):
        """H and (optionally) its (d/dr, d/dtheta), unit-normalized annulus."""
        a = self.a
        aa = a * a
        # image radii: rows are the four reflection families, columns the
        # reflection level; signs +--+ and the sign of d(x)/dr per family
        x = np.outer([s * r, aa * r / s, aa * s / r, aa / (s * r)],
                     self._a2m)
        c = math.cos(dtheta)
        d0 = math.log(s) / math.log(a)
        xq = x * (x - 2 * c)
        q = 1.0 + xq
        val = (d0 * math.log(r)
               + 0.5 * float(_SIGNS @ np.sum(np.log1p(xq), axis=1))) / TWO_PI
        if not want_grad:
            return val
        w = x / q
        dr = (d0 / r + float((_SIGNS * _RSIGNS) @ np.sum(
            (x - c) / q * x, axis=1)) / r) / TWO_PI
        dth = math.sin(dtheta) * float(_SIGNS @ np.sum(w, axis=1)) / TWO_PI
        return val, dr, dth

    def _polar(self, x):
        r = float(np.hypot(x[0], x[1]))
        return r, math.atan2(x[1], x[0])

    def regular_part(self, x, y):
        self._check(x, y)
        sc = self.scale
        r, th = self._polar(np.asarray(x, float) / sc)
        s, ph = self._polar(np.asarray(y, float) / sc)
        return self._corrector(r, s, th - ph) - math.log(sc) / TWO_PI

    def green(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        return math.log(1.0 / np.linalg.norm(x - y)) / TWO_PI + self.regular_part(x, y)

    def green_grad(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        sc = self.scale
        r, th = self._polar(x / sc)
        s, ph = self._polar(y / sc)
        _, dr, dth = self._corrector(r, s, th - ph, want_grad=True)
        # polar -> cartesian, including the 1/sc chain factor
        er = np.array([math.cos(th), math.sin(th)])
        et = np.array([-math.sin(th), math.cos(th)])
        gradH = (dr * er + (dth / r) * et) / sc
        d = x - y
        return -d / (TWO_PI * np.dot(d, d)) + gradH

    def robin(self, x):
        self._check(x)
        sc = self.scale
        r, _ = self._polar(np.asarray(x, float) / sc)
        return self._corrector(r, r, 0.0) - math.log(sc) / TWO_PI

    def robin_grad(self, x):
        self._check(x)
        x = np.asarray(x, float)
        sc = self.scale
        r, th = self._polar(x / sc)
        _, dr, _ = self._corrector(r, r, 0.0, want_grad=True)
        # d/dx H(x,x) = 2 grad_1 H(x,y)|_{y=x} by symmetry; angular part vanishes
        er = np.array([math.cos(th), math.sin(th)])
        return 2 * dr * er / sc


class BoundaryIntegralGreen(GreenEvaluator):
    """Double-layer Nystrom evaluator for generic smooth multiply connected domains.

    Representation: harmonic corrector = D[mu] + sum_k A_k ln|x - c_k| with
    one log source per hole and zero-mean density constraints on the hole
    curves. The Nystrom matrix is factorized once; each source point costs
    a pair of triangular solves. Near-boundary targets switch to a 4x
    upsampled quadrature of the trig-interpolated density.
    """

    method = "boundary_integral"

    def __init__(self, domain, upsample=4):
        super().__init__(domain)
        curves = [domain.outer] + list(domain.holes)
        self.curves = curves
        self.upsample = upsample
        dt = TWO_PI / CURVE_NODES
        xs, nrm, w, kdiag = [], [], [], []
        for cur in curves:
            z = cur.nodes
            dz = cur.node_tangents
            ddz = cur.derivative(cur.node_params, 2)
            speed = np.abs(dz)
            normal = np.c_[dz.imag, -dz.real] / speed[:, None]
            xs.append(np.c_[z.real, z.imag])
            nrm.append(normal)
            w.append(speed * dt)
            nddz = normal[:, 0] * ddz.real + normal[:, 1] * ddz.imag
            kdiag.append(-nddz / (2 * TWO_PI * speed**2))
        self.nodes = np.vstack(xs)
        self.normals = np.vstack(nrm)
        self.weights = np.concatenate(w)
        self.kdiag = np.concatenate(kdiag)
        self.hole_centers = [self._interior_point(h) for h in domain.holes]
        self._assemble()
        self._build_fine()

    @staticmethod
    def _interior_point(curve):
        z = curve.nodes
        return np.array([z.real.mean(), z.imag.mean()])

    @staticmethod
    def _kernel(targets, sources, normals):
        """Double-layer kernel (1/2pi) n_xi.(xi - x)/|xi - x|^2, rows = targets."""
        d = sources[None, :, :] - targets[:, None, :]
        r2 = np.einsum("ijk,ijk->ij", d, d)
        num = np.einsum("ijk,jk->ij", d, normals)
        return num / (TWO_PI * r2)

    def _assemble(self):
        n = len(self.nodes)
        m = len(self.hole_centers)
        with np.errstate(invalid="ignore", divide="ignore"):
            K = self._kernel(self.nodes, self.nodes, self.normals)
        np.fill_diagonal(K, self.kdiag)
        A = np.zeros((n + m, n + m))
        A[:n, :n] = K * self.weights[None, :]
        A[:n, :n] += 0.5 * np.eye(n)
        for k, c in enumerate(self.hole_centers):
            A[:n, n + k] = np.log(np.linalg.norm(self.nodes - c[None, :], axis=1))
            lo = CURVE_NODES * (1 + k)
            hi = lo + CURVE_NODES
            A[n + k, lo:hi] = self.weights[lo:hi]
        self.n_nodes = n
        self.n_holes = m
        self.lu = scipy.linalg.lu_factor(A)

    def _build_fine(self):
        up = self.upsample
        dt = TWO_PI / (CURVE_NODES * up)
        t = np.linspace(0.0, TWO_PI, CURVE_NODES * up, endpoint=False)
        xs, nrm, w = [], [], []
        for cur in self.curves:
            z = cur.point(t)
            dz = cur.derivative(t)
            speed = np.abs(dz)
            xs.append(np.c_[z.real, z.imag])
            nrm.append(np.c_[dz.imag, -dz.real] / speed[:, None])
            w.append(speed * dt)
        self.fine_nodes = np.vstack(xs)
        self.fine_normals = np.vstack(nrm)
        self.fine_weights = np.concatenate(w)
        spacing = self.weights.reshape(len(self.curves), -1).max(axis=1)
        self.near_cutoff = 3 * spacing.max()

    def _solve_density(self, y):
        g = np.log(np.linalg.norm(self.nodes - np.asarray(y, float)[None, :], axis=1)) / TWO_PI
        rhs = np.concatenate([g, np.zeros(self.n_holes)])
        sol = scipy.linalg.lu_solve(self.lu, rhs)
        return sol[: self.n_nodes], sol[self.n_nodes:]

    def _upsampled(self, mu):
        out = []
        for i in range(len(self.curves)):
            seg = mu[i * CURVE_NODES: (i + 1) * CURVE_NODES]
            c = np.fft.fft(seg)
            pad = np.zeros(CURVE_NODES * self.upsample, dtype=complex)
            h = CURVE_NODES // 2
            pad[:h] = c[:h]
            pad[-h:] = c[-h:]
            out.append(np.fft.ifft(pad).real * self.upsample)
        return np.concatenate(out)

    def _eval_corrector(self, mu, amps, x, want_grad=False):
        x = np.atleast_2d(np.asarray(x, float))
        dist = np.linalg.norm(self.nodes - x[0], axis=1).min()
        if dist < self.near_cutoff:
            nodes, normals, w = self.fine_nodes, self.fine_normals, self.fine_weights
            mu = self._upsampled(mu)
        else:
            nodes, normals, w = self.nodes, self.normals, self.weights
        d = nodes[None, :, :] - x[:, None, :]
        r2 = np.einsum("ijk,ijk->ij", d, d)
        num = np.einsum("ijk,jk->ij", d, normals)
        val = float(((num / (TWO_PI * r2)) * (w * mu)[None, :]).sum())
        for A, c in zip(amps, self.hole_centers):
            val += A * math.log(np.linalg.norm(x[0] - c))
        if not want_grad:
            return val
        # grad_x of kernel: (1/2pi) [ -n/r2 + 2 (n.d) d / r4 ], with d = xi - x
        gk = (-normals[None, :, :] / r2[:, :, None]
              + 2 * num[:, :, None] * d / (r2**2)[:, :, None]) / TWO_PI
        grad = np.einsum("ijk,j->k", gk, w * mu)
        for A, c in zip(amps, self.hole_centers):
            dc = x[0] - c
            grad += A * dc / np.dot(dc, dc)
        return val, grad

    def regular_part(self, x, y):
        self._check(x, y)
        mu, amps = self._solve_density(y)
        return self._eval_corrector(mu, amps, x)

    def green(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        return math.log(1.0 / np.linalg.norm(x - y)) / TWO_PI + self.regular_part(x, y)

    def green_grad(self, x, y):
        self._check(x, y, distinct=(x, y))
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        mu, amps = self._solve_density(y)
        _, grad = self._eval_corrector(mu, amps, x, want_grad=True)
        d = x - y
        return -d / (TWO_PI * np.dot(d, d)) + grad

    def robin(self, x):
        self._check(x)
        mu, amps = self._solve_density(x)
        return self._eval_corrector(mu, amps, x)

    def robin_grad(self, x):
        self._check(x)
        mu, amps = self._solve_density(x)
        _, grad = self._eval_corrector(mu, amps, x, want_grad=True)
        return 2 * grad


def make_evaluator(domain, method=None):
    """Evaluator for a Domain; exact kinds get closed formulas by default."""
    if method == "boundary_integral" or domain.kind == "generic":
        if domain.kind in ("disk", "annulus"):
            # rebuild as generic curves so the Nystrom path can be validated
            spec = {"kind": "generic", "curves": [
                {"center": [0, 0], "radius": domain.params.get("R", domain.params.get("r_out"))}]}
            if domain.kind == "annulus":
                spec["curves"].append({"center": [0, 0], "radius": domain.params["r_in"]})
            domain = build_domain(spec)
        return BoundaryIntegralGreen(domain)
    if domain.kind == "disk":
        return DiskGreen(domain)
    if domain.kind == "annulus":
        return AnnulusGreen(domain)
    if domain.kind == "half_plane":
        return HalfPlaneGreen(domain)
    raise DomainError(f"no evaluator for domain kind {domain.kind!r}")


def rescaled_green_error(evaluator, x0, r, sample_points, regime=None):
    """Deviation of the zoomed-in Green data at x0, scale r, from its limit kernel.

    Zooming by r at x0 maps the domain to r^-1(Omega - x0), whose Green
    data is G_k(z, eta) = G(x0 + r z, x0 + r eta) and H_k(z, z) =
    H(x0+rz, x0+rz) - (1/2pi) ln r.  Two regimes:

    - "plane" (r much smaller than d(x0, boundary)): the limit is the free
      log kernel; the deviation is the sup of |grad_z H_k(z, z)|.
    - "halfplane" (d/r order one): the limit is the half-plane with offset
      L = d/r, oriented by the inward normal at the nearest boundary point;
      the deviation is the sup of |H_k(z,z) - H_halfplane(z,z)|.

    Returns a dict with the max deviation, the ratio r/d, and the regime.
    """
    x0 = np.asarray(x0, float)
    d = evaluator.domain.distance_to_boundary(x0)
    if regime is None:
        regime = "plane" if r < 0.2 * d else "halfplane"
    devs = []
    if regime == "plane":
        for z in sample_points:
            x = x0 + r * np.asarray(z, float)
            g = r * evaluator.robin_grad(x)
            devs.append(float(np.linalg.norm(g)))
    else:
        L = d / r
        # inward unit normal: direction from the nearest boundary point to x0
        h = 1e-6 * evaluator.domain.inradius
        grad_d = np.array([
            (evaluator.domain.distance_to_boundary(x0 + [h, 0])
             - evaluator.domain.distance_to_boundary(x0 - [h, 0])) / (2 * h),
            (evaluator.domain.distance_to_boundary(x0 + [0, h])
             - evaluator.domain.distance_to_boundary(x0 - [0, h])) / (2 * h)])
        grad_d /= np.linalg.norm(grad_d)
        # rotate so grad_d maps to (0, -1): then the limit is {y < L}
        rot = np.array([[grad_d[1], -grad_d[0]], [-grad_d[0], -grad_d[1]]])
        for z in sample_points:
            z = np.asarray(z, float)
            x = x0 + r * (rot.T @ z)
            hk = evaluator.robin(x) - math.log(r) / TWO_PI
            hh = math.log(2 * (L - z[1])) / TWO_PI
            devs.append(abs(hk - hh))
    return {"regime": regime, "ratio_r_over_d": r / d if d > 0 else math.inf,
            "max_deviation": max(devs)}
