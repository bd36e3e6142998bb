"""Point-interaction energies and vector fields on configuration space.

The basic object is the N-point interaction energy

    Phi(x_1..x_N) = sum_{i!=j} alpha_ij G(x_i, x_j)
                  + sum_i beta_i H(x_i, x_i) + t sum_i ln h(x_i),

(default weights 8pi / 4pi, ordered-pair sum) together with its boundary-
bent variant, the strip-modified variants with a log barrier, and the
limiting whole-plane / half-plane energies that appear after zooming in at
a degenerating configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Configuration, SingularConfigurationError

FOUR_PI = 4 * math.pi
EIGHT_PI = 8 * math.pi


def smoothstep(u):
    """Quintic smoothstep: 0 -> 1 on [0,1] with vanishing first two derivatives."""
    u = min(max(u, 0.0), 1.0)
    return u**3 * (10 + u * (-15 + 6 * u))


def smoothstep_d(u):
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return 30 * u**2 * (1 - u) ** 2


@dataclass(frozen=True)
class WeightProfile:
    """Pair weights alpha_ij, self weights beta_i, barrier weights gamma_i, weight h."""

    alpha: float | np.ndarray = EIGHT_PI
    beta: float | np.ndarray = FOUR_PI
    gamma: float | np.ndarray = 1.0
    h: object = None          # callable x -> value, positive; None means h == 1
    h_grad: object = None     # callable x -> 2-vector

    def alpha_at(self, i, j):
        a = self.alpha
        val = float(a[i, j]) if isinstance(a, np.ndarray) else float(a)
        if val <= 0:
            raise ValueError("pair weights must be positive")
        return val

    def beta_at(self, i):
        b = self.beta
        val = float(b[i]) if isinstance(b, np.ndarray) else float(b)
        if val <= 0:
            raise ValueError("self weights must be positive")
        return val

    def gamma_at(self, i):
        g = self.gamma
        val = float(g[i]) if isinstance(g, np.ndarray) else float(g)
        if val < 0:
            raise ValueError("barrier weights must be nonnegative")
        return val

    def log_h(self, x):
        if self.h is None:
            return 0.0, np.zeros(2)
        hv = self.h(x)
        if hv <= 0:
            raise ValueError("weight function h must be positive")
        if self.h_grad is not None:
            g = np.asarray(self.h_grad(x), float)
        else:
            eps = 1e-6
            g = np.array([
                (self.h(np.add(x, [eps, 0])) - self.h(np.add(x, [-eps, 0]))) / (2 * eps),
                (self.h(np.add(x, [0, eps])) - self.h(np.add(x, [0, -eps]))) / (2 * eps)])
        return math.log(hv), g / hv


def linear_weight(ax, ay, c=1.0):
    """Weight h(x) = c + ax*x1 + ay*x2 with its exact gradient."""
    return (lambda x: c + ax * x[0] + ay * x[1],
            lambda x: np.array([ax, ay]))


@dataclass(frozen=True)
class BendingProfile:
    """Cutoff tau (-1 / +1 plateaus) and barrier sigma (0 then log) with scales."""

    delta_tilde: float
    delta_prime: float

    def tau(self, t):
        if t >= 0.5:
            return 1.0
        if t <= 0.25:
            return -1.0
        return -1.0 + 2.0 * smoothstep((t - 0.25) / 0.25)

    def tau_d(self, t):
        if t >= 0.5 or t <= 0.25:
            return 0.0
        return 2.0 * smoothstep_d((t - 0.25) / 0.25) / 0.25

    def sigma(self, t):
        if t <= 1.0:
            return 0.0
        if t >= 2.0:
            return math.inf
        f = -math.log(2.0 - t)
        if t >= 1.5:
            return f
        return smoothstep((t - 1.0) / 0.5) * f

    def sigma_d(self, t):
        if t <= 1.0:
            return 0.0
        if t >= 2.0:
            return math.inf
        fp = 1.0 / (2.0 - t)
        f = -math.log(2.0 - t)
        if t >= 1.5:
            return fp
        u = (t - 1.0) / 0.5
        return smoothstep_d(u) / 0.5 * f + smoothstep(u) * fp


class PointField:
    """Scalar energy on 2N-dimensional configuration space with gradient/Hessian.

    ``value_grad(config)`` is the single primitive; value, gradient and a
    finite-difference Hessian of the analytic gradient derive from it.
    """

    def __init__(self, n, value_grad, label, singular_guard=None, fd_step=1e-6,
                 grad_fn=None):
        self.n = n
        self.dim = 2 * n
        self._value_grad = value_grad
        self.label = label
        self._guard = singular_guard
        self.fd_step = fd_step
        self._grad_fn = grad_fn

    def _config(self, x):
        if isinstance(x, Configuration):
            cfg = x
        else:
            cfg = Configuration.from_flat(x)
        if cfg.n != self.n:
            raise SingularConfigurationError(
                f"field {self.label} expects {self.n} points, got {cfg.n}")
        if self._guard is not None:
            self._guard(cfg)
        return cfg

    def value(self, x):
        return self._value_grad(self._config(x))[0]

    def gradient(self, x):
        cfg = self._config(x)
        if self._grad_fn is not None:
            return self._grad_fn(cfg)
        return self._value_grad(cfg)[1]

    def value_and_gradient(self, x):
        return self._value_grad(self._config(x))

    def hessian(self, x, step=None):
        """Symmetrized central differences of the analytic gradient.

        Pass a smaller `step` when classifying zeros whose soft curvatures
        sit orders of magnitude below the stiff ones: the truncation error
        grows with the cube of the stiff scale and can otherwise drown the
        small eigenvalues."""
        v = self._config(x).flat()
        h = step if step is not None else self.fd_step
        H = np.empty((self.dim, self.dim))
        for k in range(self.dim):
            vp = v.copy()
            vp[k] += h
            vm = v.copy()
            vm[k] -= h
            H[:, k] = (self.gradient(vp) - self.gradient(vm)) / (2 * h)
        return (H + H.T) / 2


def _domain_guard(domain, min_sep=1e-9):
    def guard(cfg):
        if cfg.n >= 2 and cfg.min_pair_distance() < min_sep:
            raise SingularConfigurationError("configuration has colliding points")
        if cfg.min_boundary_distance(domain) < min_sep:
            raise SingularConfigurationError("configuration touches the boundary")
    return guard


def _boundary_distance_grad(domain, x, step=None):
    """d(x, boundary) and its gradient (unit vector away from the boundary)."""
    d = domain.distance_to_boundary(x)
    if domain.kind == "disk":
        r = np.linalg.norm(x)
        g = -x / r if r > 0 else np.array([1.0, 0.0])
        return d, g
    if domain.kind == "annulus":
        r = np.linalg.norm(x)
        if r - domain.params["r_in"] < domain.params["r_out"] - r:
            return d, x / r
        return d, -x / r
    if domain.kind == "half_plane":
        return d, np.array([0.0, -1.0])
    h = step or 1e-7 * domain.inradius
    g = np.array([
        (domain.distance_to_boundary(np.add(x, [h, 0]))
         - domain.distance_to_boundary(np.add(x, [-h, 0]))) / (2 * h),
        (domain.distance_to_boundary(np.add(x, [0, h]))
         - domain.distance_to_boundary(np.add(x, [0, -h]))) / (2 * h)])
    nrm = np.linalg.norm(g)
    return d, g / nrm if nrm > 0 else np.array([1.0, 0.0])


def phi_field(domain, evaluator, n, weights=None, t=1.0):
    """Interaction energy Phi with homotopy parameter t on the ln h term."""
    w = weights or WeightProfile()

    def value_grad(cfg):
        pts = cfg.points
        val = 0.0
        grad = np.zeros((cfg.n, 2))
        for i in range(cfg.n):
            for j in range(cfg.n):
                if i == j:
                    continue
                a = w.alpha_at(i, j)
                val += a * evaluator.green(pts[i], pts[j])
                # ordered-pair sum: d/dx_i picks up both (i,j) and (j,i)
                grad[i] += (a + w.alpha_at(j, i)) / 2 * 2 * evaluator.green_grad(pts[i], pts[j])
            b = w.beta_at(i)
            val += b * evaluator.robin(pts[i])
            grad[i] += b * evaluator.robin_grad(pts[i])
            if t != 0.0:
                lh, lg = w.log_h(pts[i])
                val += t * lh
                grad[i] += t * lg
        return val, grad.ravel()

    def grad_only(cfg):
        pts = cfg.points
        grad = np.zeros((cfg.n, 2))
        for i in range(cfg.n):
            for j in range(cfg.n):
                if i == j:
                    continue
                grad[i] += (w.alpha_at(i, j) + w.alpha_at(j, i)) \
                    * evaluator.green_grad(pts[i], pts[j])
            grad[i] += w.beta_at(i) * evaluator.robin_grad(pts[i])
            if t != 0.0:
                grad[i] += t * w.log_h(pts[i])[1]
        return grad.ravel()

    return PointField(n, value_grad, f"phi[N={n},t={t}]",
                      singular_guard=_domain_guard(domain), grad_fn=grad_only)


def bent_phi_field(domain, evaluator, n, bending, weights=None, t=1.0):
    """Phi with the Robin self-term bent upward near the boundary."""
    w = weights or WeightProfile()
    dt = bending.delta_tilde

    def value_grad(cfg):
        pts = cfg.points
        val = 0.0
        grad = np.zeros((cfg.n, 2))
        for i in range(cfg.n):
            for j in range(cfg.n):
                if i == j:
                    continue
                a = w.alpha_at(i, j)
                val += a * evaluator.green(pts[i], pts[j])
                grad[i] += (a + w.alpha_at(j, i)) * evaluator.green_grad(pts[i], pts[j])
            b = w.beta_at(i)
            d, gd = _boundary_distance_grad(domain, pts[i])
            tau = bending.tau(d / dt)
            taud = bending.tau_d(d / dt)
            rb = evaluator.robin(pts[i])
            val += b * rb * tau
            grad[i] += b * (tau * evaluator.robin_grad(pts[i]) + rb * taud / dt * gd)
            if t != 0.0:
                lh, lg = w.log_h(pts[i])
                val += t * lh
                grad[i] += t * lg
        return val, grad.ravel()

    def grad_only(cfg):
        pts = cfg.points
        grad = np.zeros((cfg.n, 2))
        for i in range(cfg.n):
            for j in range(cfg.n):
                if i == j:
                    continue
                grad[i] += (w.alpha_at(i, j) + w.alpha_at(j, i)) \
                    * evaluator.green_grad(pts[i], pts[j])
            b = w.beta_at(i)
            d, gd = _boundary_distance_grad(domain, pts[i])
            tau = bending.tau(d / dt)
            taud = bending.tau_d(d / dt)
            grad[i] += b * tau * evaluator.robin_grad(pts[i])
            if taud != 0.0:
                grad[i] += b * evaluator.robin(pts[i]) * taud / dt * gd
            if t != 0.0:
                grad[i] += t * w.log_h(pts[i])[1]
        return grad.ravel()

    return PointField(n, value_grad, f"bent_phi[N={n}]",
                      singular_guard=_domain_guard(domain), grad_fn=grad_only)


def strip_fields(domain, evaluator, j, bending, weights=None, t=1.0):
    """Strip-modified energies: bent Phi plus the sigma log barrier, and the
    unbent Phi plus the same barrier. Both live on near-boundary strips."""
    w = weights or WeightProfile()
    dp = bending.delta_prime
    base_bent = bent_phi_field(domain, evaluator, j, bending, weights=w, t=t)
    base_plain = phi_field(domain, evaluator, j, weights=w, t=t)

    def barrier(cfg):
        val = 0.0
        grad = np.zeros((cfg.n, 2))
        for i in range(cfg.n):
            d, gd = _boundary_distance_grad(domain, cfg.points[i])
            val += bending.sigma(d / dp)
            # cap the barrier slope: a huge finite push keeps solvers and
            # sign tests well-defined where the barrier value is infinite
            sd = min(bending.sigma_d(d / dp), 1e12)
            grad[i] += sd / dp * gd
        return val, grad.ravel()

    def hat_vg(cfg):
        v1, g1 = base_bent.value_and_gradient(cfg)
        v2, g2 = barrier(cfg)
        return v1 + v2, g1 + g2

    def psi_vg(cfg):
        v1, g1 = base_plain.value_and_gradient(cfg)
        v2, g2 = barrier(cfg)
        return v1 + v2, g1 + g2

    def hat_grad(cfg):
        return base_bent._grad_fn(cfg) + barrier(cfg)[1]

    def psi_grad(cfg):
        return base_plain._grad_fn(cfg) + barrier(cfg)[1]

    guard = _domain_guard(domain)
    hat = PointField(j, hat_vg, f"hat_phi[J={j}]", singular_guard=guard,
                     grad_fn=hat_grad)
    psi = PointField(j, psi_vg, f"psi[J={j}]", singular_guard=guard,
                     grad_fn=psi_grad)
    return hat, psi


def xi_field(variant, j, weights=None, L=1.0, L_hat=1.0, phi=None, phi_grad=None):
    """Limiting energies of degenerating configurations.

    variant:
      - "plane":           sum alpha_ij ln(1/|z_i - z_j|) on the whole plane (J >= 2)
      - "halfspace_plus":  pair Green terms + self terms on {y < L}
      - "halfspace_minus": pair Green terms - self terms on {y < L}
      - "hat_halfspace":   plane interaction + gamma_i ln(1/d(z_i, boundary))
                           on {y > -L_hat}
      - "mixed_phi":       halfspace_plus + gamma_i phi(z_i), with
                           d(phi)/dy <= 0 (default phi = -y)
    """
    w = weights or WeightProfile(alpha=1.0, beta=1.0, gamma=1.0)
    if variant == "plane" and j < 2:
        raise ValueError("plane variant needs at least two points")
    if phi is None:
        phi = lambda z: -z[1]
        phi_grad = lambda z: np.array([0.0, -1.0])

    def pair_terms(pts, grad, val):
        for i in range(len(pts)):
            for jj in range(len(pts)):
                if i == jj:
                    continue
                a = w.alpha_at(i, jj)
                d = pts[i] - pts[jj]
                r2 = float(np.dot(d, d))
                val += a * (-0.5) * math.log(r2)
                grad[i] += -(a + w.alpha_at(jj, i)) * d / r2
        return val

    def guard_distinct(cfg):
        if cfg.n >= 2 and cfg.min_pair_distance() < 1e-12:
            raise SingularConfigurationError("colliding points")

    if variant == "plane":

        def vg(cfg):
            grad = np.zeros((cfg.n, 2))
            val = pair_terms(cfg.points, grad, 0.0)
            return val, grad.ravel()

        return PointField(j, vg, "xi_plane", singular_guard=guard_distinct)

    if variant in ("halfspace_plus", "halfspace_minus", "mixed_phi"):
        sign = -1.0 if variant == "halfspace_minus" else 1.0
        from .green import HalfPlaneGreen
        from .geometry import build_domain
        hp = HalfPlaneGreen(build_domain({"kind": "half_plane", "L": L}))

        def guard(cfg):
            guard_distinct(cfg)
            if any(p[1] >= L for p in cfg.points):
                raise SingularConfigurationError("point outside the half-space")
            if variant == "mixed_phi" and any(p[1] <= -L_hat for p in cfg.points):
                raise SingularConfigurationError("point outside the lower half-space")

        def vg(cfg):
            pts = cfg.points
            val = 0.0
            grad = np.zeros((cfg.n, 2))
            for i in range(cfg.n):
                for jj in range(cfg.n):
                    if i == jj:
                        continue
                    a = w.alpha_at(i, jj)
                    val += a * hp.green(pts[i], pts[jj])
                    grad[i] += (a + w.alpha_at(jj, i)) * hp.green_grad(pts[i], pts[jj])
                b = w.beta_at(i)
                val += sign * b * hp.robin(pts[i])
                grad[i] += sign * b * hp.robin_grad(pts[i])
                if variant == "mixed_phi":
                    g = w.gamma_at(i)
                    val += g * phi(pts[i])
                    grad[i] += g * np.asarray(phi_grad(pts[i]), float)
            return val, grad.ravel()

        return PointField(j, vg, f"xi_{variant}", singular_guard=guard)

    if variant == "hat_halfspace":

        def guard(cfg):
            guard_distinct(cfg)
            if any(p[1] <= -L_hat for p in cfg.points):
                raise SingularConfigurationError("point outside the half-space")

        def vg(cfg):
            pts = cfg.points
            grad = np.zeros((cfg.n, 2))
            val = pair_terms(pts, grad, 0.0) if cfg.n >= 2 else 0.0
            for i in range(cfg.n):
                g = w.gamma_at(i)
                d = pts[i][1] + L_hat
                val += g * (-math.log(d))
                grad[i] += g * np.array([0.0, -1.0 / d])
            return val, grad.ravel()

        return PointField(j, vg, "xi_hat_halfspace", singular_guard=guard)

    raise ValueError(f"unknown xi variant {variant!r}")


def xi_certificate(variant, field, config):
    """Check the directional no-critical-point certificate at one configuration.

    Returns (ok, info): the sign condition that forces a nonzero gradient,
    evaluated from the analytic gradient components.

    - plane: at a convex-hull vertex, the derivative in an outward
      supporting direction is strictly negative.
    - hat_halfspace: at a point farthest from the boundary (largest y), the
      y-derivative is strictly negative.
    - halfspace_plus / mixed_phi: if the leftmost point is strictly left of
      some other point, its x-derivative is strictly positive; otherwise
      (vertical stacks, J = 1) the y-derivative at the topmost point is
      strictly negative.
    - halfspace_minus: same x-certificate; in the vertical case the
      y-derivative at the bottom point is strictly positive.
    """
    pts = np.atleast_2d(np.asarray(config, float))
    grad = field.gradient(pts.ravel()).reshape(-1, 2)
    jn = len(pts)
    if variant == "plane":
        if jn == 2:
            i = 0
            v = pts[0] - pts[1]
            v = v / np.linalg.norm(v)
        else:
            from scipy.spatial import ConvexHull, QhullError
            try:
                hull = ConvexHull(pts)
                i = int(hull.vertices[0])
                # outward normal of a facet through vertex i
                for eq, simplex in zip(hull.equations, hull.simplices):
                    if i in simplex:
                        v = eq[:2]
                        break
            except QhullError:
                # collinear: the extreme point along the line is a hull
                # vertex with the line direction as supporting direction
                c = pts - pts.mean(axis=0)
                _, _, vt = np.linalg.svd(c)
                v = vt[0]
                i = int(np.argmax(c @ v))
        dd = float(np.dot(grad[i], v))
        return dd < 0, {"directional_derivative": dd, "point": i}
    if variant == "hat_halfspace":
        i = int(np.argmax(pts[:, 1]))
        return grad[i, 1] < 0, {"dy_at_top": float(grad[i, 1])}
    if variant in ("halfspace_plus", "mixed_phi", "halfspace_minus"):
        i_left = int(np.argmin(pts[:, 0]))
        if jn > 1 and pts[i_left, 0] < pts[:, 0].max() - 1e-12:
            return grad[i_left, 0] > 0, {"dx_at_left": float(grad[i_left, 0])}
        if variant == "halfspace_minus":
            i = int(np.argmin(pts[:, 1]))
            return grad[i, 1] > 0, {"dy_at_bottom": float(grad[i, 1])}
        i = int(np.argmax(pts[:, 1]))
        return grad[i, 1] < 0, {"dy_at_top": float(grad[i, 1])}
    raise ValueError(f"unknown xi variant {variant!r}")
