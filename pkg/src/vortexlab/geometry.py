"""Planar domains with holes, configurations of points, and delta-regions.

Domains are smoothly bounded, possibly multiply connected. Exact kinds
(disk, annulus, half_plane) get closed-form distance functions; generic
domains carry trigonometric-polynomial boundary curves sampled on a fixed
spectral grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

CURVE_NODES = 256


class MalformedDomainError(ValueError):
    """Raised when hole curves overlap, escape the outer curve, etc."""


class SingularConfigurationError(ValueError):
    """Raised when a configuration leaves the allowed product region."""


class ClosedCurve:
    """Smooth closed curve stored as a complex Fourier series z(t), t in [0,2pi).

    Coefficient array ``coeffs`` maps to z(t) = sum_k coeffs[k] e^{i k t}
    with k ordered as in numpy.fft (0, 1, ..., -1).
    """

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 1 or len(coeffs) < 3:
            raise MalformedDomainError("curve needs at least 3 Fourier coefficients")
        self.coeffs = coeffs
        self._t = np.linspace(0.0, 2 * np.pi, CURVE_NODES, endpoint=False)
        self._z = self.point(self._t)
        self._dz = self.derivative(self._t)

    @classmethod
    def from_samples(cls, pts):
        pts = np.asarray(pts, dtype=float)
        z = pts[:, 0] + 1j * pts[:, 1]
        return cls(np.fft.fft(z) / len(z))

    @classmethod
    def circle(cls, center, radius, orientation=1):
        c = np.zeros(3, dtype=complex)
        c[0] = complex(center[0], center[1])
        if orientation >= 0:
            c[1] = radius
        else:
            c[-1] = radius
        return cls(c)

    @classmethod
    def from_real_coeffs(cls, xc, yc):
        """Build from cosine/sine coefficient lists [a0, a1, b1, a2, b2, ...]."""
        xc = np.asarray(xc, dtype=float)
        yc = np.asarray(yc, dtype=float)
        kmax = max((len(xc) - 1 + 1) // 2, (len(yc) - 1 + 1) // 2, 1)
        c = np.zeros(2 * kmax + 1, dtype=complex)

        def add(coeffs, unit):
            c[0] += unit * coeffs[0]
            for k in range(1, kmax + 1):
                a = coeffs[2 * k - 1] if 2 * k - 1 < len(coeffs) else 0.0
                b = coeffs[2 * k] if 2 * k < len(coeffs) else 0.0
                # a cos(kt) + b sin(kt) in exponential form
                c[k] += unit * (a - 1j * b) / 2
                c[-k] += unit * (a + 1j * b) / 2

        add(xc, 1.0)
        add(yc, 1j)
        return cls(c)

    def _modes(self):
        n = len(self.coeffs)
        return np.fft.fftfreq(n, d=1.0 / n)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        k = self._modes()
        z = np.exp(1j * np.multiply.outer(t, k)) @ self.coeffs
        return z

    def derivative(self, t, order=1):
        t = np.asarray(t, dtype=float)
        k = self._modes()
        c = self.coeffs * (1j * k) ** order
        return np.exp(1j * np.multiply.outer(t, k)) @ c

    @property
    def nodes(self):
        return self._z

    @property
    def node_params(self):
        return self._t

    @property
    def node_tangents(self):
        return self._dz

    def signed_area(self):
        # shoelace via quadrature of x y' over the spectral grid
        z, dz = self._z, self._dz
        return float(np.sum(z.real * dz.imag - z.imag * dz.real) / 2 * (2 * np.pi / CURVE_NODES))

    def winding_number(self, x):
        """Winding of the curve around point x=(a,b), from angle increments."""
        w = self._z - complex(x[0], x[1])
        ang = np.angle(np.roll(w, -1) / w)
        return int(round(np.sum(ang) / (2 * np.pi)))

    def distance(self, x, refine=True):
        """Distance from x to the curve, coarse grid plus Newton on the parameter."""
        zx = complex(x[0], x[1])
        d2 = np.abs(self._z - zx)
        i = int(np.argmin(d2))
        t = self._t[i]
        if refine:
            for _ in range(30):
                z = self.point(t)
                dz = self.derivative(t)
                ddz = self.derivative(t, 2)
                diff = z - zx
                f = (diff * np.conj(dz)).real
                fp = (np.abs(dz) ** 2 + (diff * np.conj(ddz)).real)
                if fp == 0:
                    break
                step = f / fp
                t -= step
                if abs(step) < 1e-14:
                    break
            d_newton = abs(self.point(t) - zx)
            return min(float(d2[i]), float(d_newton))
        return float(d2[i])


@dataclass(frozen=True)
class Domain:
    """Planar domain: outer boundary curve plus hole curves.

    ``kind`` is one of {"disk", "annulus", "half_plane", "generic"}; exact
    kinds carry their defining numbers in ``params``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    outer: ClosedCurve | None = None
    holes: tuple = ()

    @property
    def euler_characteristic(self):
        return 1 - self.num_holes

    @property
    def num_holes(self):
        if self.kind == "disk":
            return 0
        if self.kind == "annulus":
            return 1
        if self.kind == "half_plane":
            return 0
        return len(self.holes)

    @property
    def inradius(self):
        if self.kind == "disk":
            return self.params["R"]
        if self.kind == "annulus":
            return (self.params["r_out"] - self.params["r_in"]) / 2
        if self.kind == "half_plane":
            return self.params["L"]
        return self.params["inradius"]

    def distance_to_boundary(self, x):
        """Distance to the boundary; clamped to 0 outside the closed domain."""
        x = np.asarray(x, dtype=float)
        if self.kind == "disk":
            return max(self.params["R"] - float(np.hypot(x[0], x[1])), 0.0)
        if self.kind == "annulus":
            r = float(np.hypot(x[0], x[1]))
            return max(min(r - self.params["r_in"], self.params["r_out"] - r), 0.0)
        if self.kind == "half_plane":
            return max(self.params["L"] - float(x[1]), 0.0)
        if not self.contains(x):
            return 0.0
        d = self.outer.distance(x)
        for h in self.holes:
            d = min(d, h.distance(x))
        return d

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind in ("disk", "annulus", "half_plane"):
            return self.distance_to_boundary(x) > 0.0
        if self.outer.winding_number(x) == 0:
            return False
        return all(h.winding_number(x) == 0 for h in self.holes)

    def bounding_box(self):
        if self.kind == "disk":
            R = self.params["R"]
            return (-R, -R, R, R)
        if self.kind == "annulus":
            R = self.params["r_out"]
            return (-R, -R, R, R)
        if self.kind == "half_plane":
            L = self.params["L"]
            return (-10 * L, -10 * L, 10 * L, L)
        z = self.outer.nodes
        return (z.real.min(), z.imag.min(), z.real.max(), z.imag.max())


def _validate_generic(outer, holes):
    if outer.signed_area() <= 0:
        raise MalformedDomainError("outer curve must be positively oriented")
    for h in holes:
        for z in h.nodes:
            if outer.winding_number((z.real, z.imag)) == 0:
                raise MalformedDomainError("hole curve escapes the outer curve")
    for i, hi in enumerate(holes):
        for hj in holes[i + 1:]:
            mind = min(hi.distance((z.real, z.imag), refine=False) for z in hj.nodes[::8])
            if mind <= 0 or any(hi.winding_number((z.real, z.imag)) != 0 for z in hj.nodes[::16]):
                raise MalformedDomainError("hole curves intersect or overlap")


def _estimate_inradius(outer, holes):
    # coarse interior scan; adequate for threshold defaults on desk-scale domains
    z = outer.nodes
    xs = np.linspace(z.real.min(), z.real.max(), 40)
    ys = np.linspace(z.imag.min(), z.imag.max(), 40)
    best = 0.0
    dom = Domain(kind="generic", params={"inradius": 1.0}, outer=outer, holes=tuple(holes))
    for x in xs:
        for y in ys:
            if dom.contains((x, y)):
                d = outer.distance((x, y), refine=False)
                for h in holes:
                    d = min(d, h.distance((x, y), refine=False))
                best = max(best, d)
    return best


def build_domain(spec):
    """Build a Domain from a dict description (or JSON string).

    Accepted forms::

        {"kind": "disk", "R": 1.0}
        {"kind": "annulus", "r_in": 0.4, "r_out": 1.0}
        {"kind": "half_plane", "L": 1.0}
        {"kind": "generic", "curves": [curve, curve, ...]}   # first = outer
        {"kind": "disk_with_holes", "R": 1.0,
         "holes": [{"center": [x, y], "radius": r}, ...]}

    Generic curves are either {"x": [...], "y": [...]} real Fourier
    coefficient lists or {"center": [...], "radius": r} circles.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec["kind"]
    if kind == "disk":
        R = float(spec["R"])
        if R <= 0:
            raise MalformedDomainError("disk radius must be positive")
        return Domain(kind="disk", params={"R": R},
                      outer=ClosedCurve.circle((0, 0), R))
    if kind == "annulus":
        a, b = float(spec["r_in"]), float(spec["r_out"])
        if not 0 < a < b:
            raise MalformedDomainError("annulus needs 0 < r_in < r_out")
        return Domain(kind="annulus", params={"r_in": a, "r_out": b},
                      outer=ClosedCurve.circle((0, 0), b),
                      holes=(ClosedCurve.circle((0, 0), a, orientation=-1),))
    if kind == "half_plane":
        L = float(spec["L"])
        if L <= 0:
            raise MalformedDomainError("half_plane offset must be positive")
        return Domain(kind="half_plane", params={"L": L})
    if kind == "disk_with_holes":
        R = float(spec["R"])
        curves = [{"center": [0.0, 0.0], "radius": R}]
        curves += list(spec["holes"])
        spec = {"kind": "generic", "curves": curves}
        kind = "generic"
    if kind == "generic":
        built = []
        for i, c in enumerate(spec["curves"]):
            orient = 1 if i == 0 else -1
            if "center" in c:
                built.append(ClosedCurve.circle(c["center"], c["radius"], orientation=orient))
            else:
                cur = ClosedCurve.from_real_coeffs(c["x"], c["y"])
                if (cur.signed_area() > 0) != (orient > 0):
                    cur = ClosedCurve.from_samples(
                        np.c_[cur.nodes.real[::-1], cur.nodes.imag[::-1]])
                built.append(cur)
        outer, holes = built[0], built[1:]
        _validate_generic(outer, holes)
        inr = _estimate_inradius(outer, holes)
        return Domain(kind="generic", params={"inradius": inr},
                      outer=outer, holes=tuple(holes))
    raise MalformedDomainError(f"unknown domain kind {kind!r}")


class Configuration:
    """Ordered tuple of N distinct interior points, stored as an (N, 2) array."""

    def __init__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != 2:
            raise SingularConfigurationError("points must be planar")
        self.points = pts

    @classmethod
    def from_flat(cls, vec):
        return cls(np.asarray(vec, dtype=float).reshape(-1, 2))

    @property
    def n(self):
        return len(self.points)

    def flat(self):
        return self.points.ravel().copy()

    def min_pair_distance(self):
        if self.n < 2:
            return math.inf
        d = np.linalg.norm(self.points[:, None, :] - self.points[None, :, :], axis=-1)
        iu = np.triu_indices(self.n, 1)
        return float(d[iu].min())

    def min_boundary_distance(self, domain):
        return min(domain.distance_to_boundary(p) for p in self.points)

    def validate(self, domain, guard=1e-9):
        if self.min_pair_distance() < guard:
            raise SingularConfigurationError("points collide")
        if self.min_boundary_distance(domain) < guard:
            raise SingularConfigurationError("point outside or on the boundary")


@dataclass(frozen=True)
class RegionThresholds:
    """Separation scales delta > delta' > delta~ > delta'' for the region zoo."""

    delta: float
    delta_prime: float
    delta_tilde: float
    delta_pp: float

    def __post_init__(self):
        ok = (0 < self.delta_pp < self.delta_tilde / 2
              < self.delta_prime / 4 < self.delta / 8)
        if not ok:
            raise ValueError("thresholds must satisfy "
                             "0 < delta'' < delta~/2 < delta'/4 < delta/8")

    @classmethod
    def defaults(cls, domain):
        d = 0.2 * domain.inradius
        return cls(delta=d, delta_prime=d / 4, delta_tilde=d / 16, delta_pp=d / 64)


def in_delta_region(config, domain, delta):
    """True iff all pairwise and boundary distances exceed delta."""
    if config.n >= 2 and config.min_pair_distance() <= delta:
        return False
    return config.min_boundary_distance(domain) > delta


def config_space_euler(chi, n):
    """Euler characteristic of the space of n distinct points: falling factorial."""
    if n < 1:
        raise ValueError("need at least one point")
    out = 1
    for k in range(n):
        out *= chi - k
    return out
