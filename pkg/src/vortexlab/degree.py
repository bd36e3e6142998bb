"""Multistart zero finding, Hessian-signature classification, and Brouwer
degree of configuration-space vector fields by signed counting, with exact
combinatorial formulas to compare against."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .fields import _boundary_distance_grad
from .geometry import Configuration


class DegeneracyError(RuntimeError):
    """A located zero has a numerically singular Hessian."""

    def __init__(self, record, hint):
        super().__init__(f"degenerate zero at {record.location.points.tolist()}; {hint}")
        self.record = record
        self.hint = hint


class UnsafeRegionError(RuntimeError):
    """The field is too small somewhere on the region's boundary shell."""


def falling_factorial(chi, n):
    """chi (chi-1) ... (chi-n+1), exact."""
    out = 1
    for k in range(n):
        out *= chi - k
    return out


def expected_degree(chi, n):
    """Signed count of interaction-energy critical points: chi(chi-1)...(chi-n+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return falling_factorial(chi, n)


def meanfield_degree(chi, n):
    """Solution-count degree of the mean-field family: binom(n-chi, n),
    with binom(-1, 0) = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    return math.comb(n - chi, n)


def degree_jump_check(chi, n_max):
    """Exact-arithmetic table verifying the degree jump identity

        d_{N+1} - d_N = ((-1)^{N+1} / (N+1)!) * chi(chi-1)...(chi-N)

    for 0 <= N < n_max, i.e. the jump at level N equals the normalized
    signed count of (N+1)-point configurations; equivalently
    binom(N-chi, N+1), which is what Pascal's rule gives for the
    solution-count degrees."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    for n in range(n_max):
        jump = meanfield_degree(chi, n + 1) - meanfield_degree(chi, n)
        predicted = Fraction((-1) ** (n + 1), math.factorial(n + 1)) \
            * falling_factorial(chi, n + 1)
        if predicted.denominator != 1 or predicted != jump:
            raise AssertionError(
                f"degree jump identity violated at chi={chi}, N={n}: "
                f"{jump} != {predicted}")
        rows.append({"chi": chi, "N": n, "jump": jump, "predicted": int(predicted)})
    return rows


class ConfigRegion:
    """A compact region of N-point configuration space cut out by distance
    constraints: boundary distance in [lo, hi] for each point, pairwise
    separation >= sep."""

    def __init__(self, domain, n, lo, sep, hi=None, label=""):
        if lo <= 0 or sep <= 0 or (hi is not None and hi <= lo):
            raise ValueError("region thresholds must be positive and ordered")
        self.domain = domain
        self.n = n
        self.lo = lo
        self.hi = hi
        self.sep = sep
        self.label = label or (
            f"interior d>={lo:.4g}, sep>={sep:.4g}" if hi is None
            else f"strip {lo:.4g}<=d<={hi:.4g}, sep>={sep:.4g}")

    @classmethod
    def interior(cls, domain, n, thresholds):
        """Points at boundary distance >= delta' minus the delta''-collision
        neighborhood.  The cut at delta' makes the interior region exactly
        complementary to the near-boundary band [delta'', delta'], so the
        boundary-hugging zeros created by the bending profile (whose signed
        contributions cancel) are counted by the band scan, not here; inside
        this region the bending is inactive and multistart Newton converges
        to the genuine interior critical points."""
        return cls(domain, n, lo=thresholds.delta_prime, sep=thresholds.delta_pp,
                   label=f"interior delta'={thresholds.delta_prime:.4g}")

    @classmethod
    def strip(cls, domain, j, thresholds):
        """Near-boundary band delta'' <= d <= delta' with delta'' separation."""
        return cls(domain, j, lo=thresholds.delta_pp, sep=thresholds.delta_pp,
                   hi=thresholds.delta_prime,
                   label=f"strip [{thresholds.delta_pp:.4g}, {thresholds.delta_prime:.4g}]")

    def _margins(self, pts):
        """Signed slack of every active constraint (>= 0 means satisfied)."""
        out = []
        for p in pts:
            d = self.domain.distance_to_boundary(p)
            out.append(d - self.lo)
            if self.hi is not None:
                out.append(self.hi - d)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                out.append(float(np.linalg.norm(pts[i] - pts[j])) - self.sep)
        return np.array(out)

    def contains(self, x, shrink=0.0):
        pts = np.asarray(x, float).reshape(self.n, 2)
        if not all(self.domain.contains(p) for p in pts):
            return False
        return bool(self._margins(pts).min() >= shrink)

    def evaluable(self, x):
        """Whether the field can be safely evaluated: inside the domain and
        away from collisions, ignoring the region's band constraints."""
        pts = np.asarray(x, float).reshape(self.n, 2)
        if not all(self.domain.contains(p) for p in pts):
            return False
        eps = 0.25 * min(self.lo, self.sep)
        for i, p in enumerate(pts):
            if self.domain.distance_to_boundary(p) < eps:
                return False
            for j in range(i + 1, self.n):
                if np.linalg.norm(p - pts[j]) < eps:
                    return False
        return True

    def sample(self, count, seed=0):
        """Low-discrepancy configurations inside the region."""
        x0, y0, x1, y1 = self.domain.bounding_box()
        lo_bb, hi_bb = np.array([x0, y0]), np.array([x1, y1])
        sampler = qmc.Halton(d=2 * self.n, seed=seed)
        out = []
        budget = 0
        while len(out) < count and budget < 400 * count + 4000:
            block = sampler.random(max(64, count))
            budget += len(block)
            pts = lo_bb + block.reshape(-1, self.n, 2) * (hi_bb - lo_bb)
            for cfg in pts:
                if self.contains(cfg):
                    out.append(cfg.ravel())
                    if len(out) == count:
                        break
        if not out:
            raise UnsafeRegionError(f"region {self.label!r} appears empty")
        return np.array(out)

    def shell_samples(self, count, seed=0, thickness=0.02):
        """Configurations on (a thin shell around) the region's boundary,
        made by projecting interior samples onto one active constraint."""
        rng = np.random.default_rng(seed)
        base = self.sample(count, seed=seed + 1)
        out = []
        n_constraints = self.n * (2 if self.hi is not None else 1) \
            + self.n * (self.n - 1) // 2
        for k, flat in enumerate(base):
            pts = flat.reshape(self.n, 2).copy()
            c = k % n_constraints
            t = 1.0 + thickness * (rng.random() - 0.5)
            if self.hi is not None and c >= self.n and c < 2 * self.n:
                i = c - self.n
                d, g = _boundary_distance_grad(self.domain, pts[i])
                pts[i] = pts[i] + (self.hi - d) * t * g
            elif c < self.n:
                d, g = _boundary_distance_grad(self.domain, pts[c])
                pts[c] = pts[c] - (d - self.lo) * t * g
            else:
                c -= self.n * (2 if self.hi is not None else 1)
                for i in range(self.n):
                    for j in range(i + 1, self.n):
                        if c == 0:
                            v = pts[j] - pts[i]
                            r = np.linalg.norm(v)
                            pts[j] = pts[i] + v * (self.sep * t / r)
                        c -= 1
            if all(self.domain.contains(p) for p in pts) \
                    and self._margins(pts).min() > -0.1 * self.lo:
                out.append(pts.ravel())
        return np.array(out)


@dataclass
class CriticalPointRecord:
    location: Configuration
    gradient_norm: float
    hessian_det_sign: object     # +1, -1, or "degenerate"
    morse_index: object          # int or "unknown"
    basin_count: int = 1

    def to_dict(self):
        return {
            "location": self.location.points.tolist(),
            "gradient_norm": self.gradient_norm,
            "hessian_det_sign": self.hessian_det_sign,
            "morse_index": self.morse_index,
            "basin_count": self.basin_count,
        }


@dataclass
class DegreeReport:
    zeros: list
    signed_total: int
    oracle: object
    region: str
    field: str
    starts: int
    converged: int

    @property
    def convergence_rate(self):
        return self.converged / self.starts if self.starts else 0.0

    def to_dict(self):
        return {
            "zeros": [z.to_dict() for z in self.zeros],
            "signed_total": self.signed_total,
            "oracle": self.oracle,
            "region": self.region,
            "field": self.field,
            "starts": self.starts,
            "converged": self.converged,
            "convergence_rate": self.convergence_rate,
        }


ZERO_TOL = 1e-10
DEGENERACY_TOL = 1e-8
MAX_ITER = 200


def _hybrid_search(f, x0, region):
    """Cheap global phase: MINPACK hybrid dogleg on the gradient, with
    out-of-region iterates repelled by a large fake residual."""
    from scipy.optimize import root

    def F(x):
        if not region.evaluable(x):
            return 1e6 * (x - x0)
        return f.gradient(x)

    sol = root(F, x0, method="hybr", options={"maxfev": 75 * len(x0)})
    return sol.x if region.evaluable(sol.x) else None


def _newton_polish(f, x0, region, scale, max_iter=MAX_ITER):
    """Damped Newton on the gradient with Armijo backtracking on |grad|^2.

    Returns the converged flat vector or None (divergence / escape)."""
    x = np.asarray(x0, float).copy()
    ztol = ZERO_TOL * scale
    try:
        g = f.gradient(x)
    except Exception:
        return None
    m = float(g @ g)
    for _ in range(max_iter):
        if math.sqrt(m) < ztol:
            return x
        H = f.hessian(x)
        try:
            s = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            s = None
        # gradient of the merit |grad|^2 is 2 H g; fall back to its steepest
        # descent direction when the Newton step is not a descent direction
        if s is None or float(s @ (H @ g)) >= 0:
            s = -(H @ g)
            nrm = np.linalg.norm(s)
            if nrm > 0:
                s *= math.sqrt(m) / nrm
        lam = 1.0
        ok = False
        for _ in range(40):
            xn = x + lam * s
            if region.evaluable(xn):
                try:
                    gn = f.gradient(xn)
                    mn = float(gn @ gn)
                except Exception:
                    mn = math.inf
                if mn < m * (1 - 1e-4 * lam) or mn < ztol**2:
                    x, g, m = xn, gn, mn
                    ok = True
                    break
            lam *= 0.5
        if not ok:
            return None
    return x if math.sqrt(m) < ztol else None


def _classify(f, x, n, domain):
    g = f.gradient(x)
    # two fine steps: truncation error scales with step^2 times third
    # derivatives of the stiff modes, and a coarse step can flip the sign
    # of a soft eigenvalue; disagreement between the steps is treated as
    # degenerate rather than trusted
    steps = (3e-7 * domain.inradius, 1e-6 * domain.inradius)
    spectra = [np.linalg.eigvalsh(f.hessian(x, step=s)) for s in steps]
    w = spectra[0]
    det = float(np.prod(w))
    # degeneracy is judged against the domain's natural curvature unit
    # 1/inradius^2 (energies are O(1) logs over O(inradius) lengths), so
    # honestly anisotropic zeros (stiff bending mode vs soft weight mode)
    # are not misflagged while symmetry circles are
    kappa = 1.0 / domain.inradius**2
    consistent = all(
        (np.prod(sp) > 0) == (det > 0) and (sp < 0).sum() == (w < 0).sum()
        for sp in spectra[1:])
    if abs(det) < DEGENERACY_TOL * kappa ** (2 * n) or not consistent:
        sign, index = "degenerate", "unknown"
    else:
        sign = 1 if det > 0 else -1
        index = int((w < 0).sum())
    return CriticalPointRecord(
        location=Configuration(x.reshape(n, 2)),
        gradient_norm=float(np.linalg.norm(g)),
        hessian_det_sign=sign,
        morse_index=index)


def _augment_permutations(found, n, dedup):
    """Complete each zero's orbit under point relabeling.

    Permuting the points of a zero configuration gives another zero with the
    same Hessian determinant sign and Morse index (a point swap is an even
    permutation of the flat coordinates), so any ordering the search itself
    did not reach is added with the classification of the one it did."""
    out = list(found)
    for x, rec in found:
        pts = x.reshape(n, 2)
        for perm in itertools.permutations(range(n)):
            xp = pts[list(perm)].ravel()
            if any(np.linalg.norm(xp - xf) < dedup for xf, _ in out):
                continue
            out.append((xp, CriticalPointRecord(
                location=Configuration(xp.reshape(n, 2).copy()),
                gradient_norm=rec.gradient_norm,
                hessian_det_sign=rec.hessian_det_sign,
                morse_index=rec.morse_index,
                basin_count=0)))
    return out


def find_zeros(f, region, starts=200, seed=0):
    """Locate zeros of the field's gradient in the region by multistart
    damped Newton; returns deduplicated records with basin counts."""
    return _find_zeros(f, region, starts, seed)[0]


def _find_zeros(f, region, starts, seed):
    if starts < 1:
        raise ValueError("starts must be >= 1")
    x0s = region.sample(starts, seed=seed)
    # gradient scale for the relative zero tolerance
    probe = np.array([np.linalg.norm(f.gradient(x)) for x in x0s[: min(16, len(x0s))]])
    scale = max(1.0, float(np.median(probe)))
    dedup = 1e-6 * region.domain.inradius
    found = []          # list of (flat, record)
    converged = 0
    for x0 in x0s:
        x = _hybrid_search(f, x0, region)
        if x is None:
            continue
        x = _newton_polish(f, x, region, scale, max_iter=30)
        if x is None or not region.contains(x):
            continue
        converged += 1
        for xf, rec in found:
            if np.linalg.norm(xf - x) < dedup:
                rec.basin_count += 1
                break
        else:
            found.append((x, _classify(f, x, region.n, region.domain)))
    found = _augment_permutations(found, region.n, dedup)
    return [rec for _, rec in found], converged


def brouwer_degree(f, region, starts=200, seed=0, oracle=None, shell_samples=1000):
    """Degree of the gradient field over the region by signed counting.

    Guards: the gradient must stay >= 10x the zero tolerance on a sampled
    boundary shell, and every zero must be nondegenerate."""
    shell = region.shell_samples(shell_samples, seed=seed + 7)
    margin = 10 * ZERO_TOL
    for x in shell:
        try:
            gn = float(np.linalg.norm(f.gradient(x)))
        except Exception:
            continue
        if gn < margin:
            raise UnsafeRegionError(
                f"|gradient| = {gn:.3e} < {margin:.1e} on the region shell at "
                f"{x.tolist()}; the degree is not safely defined here")
    zeros, converged = _find_zeros(f, region, starts, seed)
    for rec in zeros:
        if rec.hessian_det_sign == "degenerate":
            raise DegeneracyError(
                rec, "perturb the weight h (e.g. h = 1 + 0.05 x1) and retry; "
                "the degree is invariant under positive-weight homotopy")
    total = sum(rec.hessian_det_sign for rec in zeros)
    return DegreeReport(zeros=zeros, signed_total=total, oracle=oracle,
                        region=region.label, field=f.label,
                        starts=starts, converged=converged)


class BoundaryChart:
    """Collar coordinates near the boundary: (component, parameter t,
    distance d) -> point at distance d inward of boundary point t.

    Tangential steps follow the boundary curve, so root finding in these
    coordinates is well conditioned inside thin boundary strips where
    straight-line (chord) steps would immediately exit the strip."""

    def __init__(self, domain):
        self.domain = domain
        kind = domain.kind
        if kind == "disk":
            self._circles = [(domain.params["R"], -1.0)]
        elif kind == "annulus":
            self._circles = [(domain.params["r_out"], -1.0),
                             (domain.params["r_in"], +1.0)]
        elif kind == "half_plane":
            self._circles = None
            self._L = domain.params["L"]
        else:
            self._circles = None
            self._curves = [domain.outer, *domain.holes]
        if kind in ("disk", "annulus"):
            self.n_components = len(self._circles)
        elif kind == "half_plane":
            self.n_components = 1
        else:
            self.n_components = 1 + len(domain.holes)

    def point(self, k, t, d):
        if self.domain.kind == "half_plane":
            return np.array([10 * self._L * (2 * t - 1), self._L - d])
        if self._circles is not None:
            R, sgn = self._circles[k]
            r = R + sgn * d
            ang = 2 * math.pi * t
            return r * np.array([math.cos(ang), math.sin(ang)])
        c = self._curves[k]
        z = c.point(t)
        dz = c.derivative(t)
        n_out = -1j * dz / abs(dz)
        w = z - d * n_out
        return np.array([w.real, w.imag])


def _strip_zeros(f, region, chart, starts, seed):
    """Zeros of a strip field by reduced scan in collar coordinates.

    The normal derivative of strip fields is orders of magnitude stiffer
    than the tangential one (bending transition vs weight perturbation),
    so the normal distances are eliminated by bracketed scalar root
    finding and only the soft tangential system is scanned.  Candidates
    come from two deterministic generators, both per boundary-component
    assignment: (a) sign changes of all tangential components across grid
    cells of the eliminated system, with staggered warm-start distances
    carried along each grid row; (b) for same-component pairs, an
    aligned-angle scan over ordered distance-pair seeds, because a pair
    can sit radially stacked (the partner held on a deeper branch of the
    normal equation by the pair repulsion) inside a tube too thin for the
    warm carry of (a) to stay on.  Each candidate is polished by the
    hybrid dogleg method on the tangential system with the distances
    re-solved on the seeded branch, and each zero found is augmented with
    its point permutations (even permutations of the flat coordinates, so
    the determinant sign and index are shared)."""
    from scipy.optimize import brentq, root
    j = region.n
    lo, hi = region.lo, region.hi
    d_lo, d_hi = 0.3 * lo, hi - 1e-3 * (hi - lo)
    ncomp = chart.n_components

    def to_x(t, d, comps):
        return np.concatenate([chart.point(comps[i], t[i] % 1.0, d[i])
                               for i in range(j)])

    def normal_in(t, comps):
        # unit inward normal at each boundary foot point
        eps = 1e-7
        out = []
        for i in range(j):
            p0 = chart.point(comps[i], t[i] % 1.0, 0.0)
            p1 = chart.point(comps[i], t[i] % 1.0, eps)
            v = (p1 - p0) / eps
            out.append(v / np.linalg.norm(v))
        return out

    def tangents(t, comps):
        eps = 1e-7
        out = []
        for i in range(j):
            p0 = chart.point(comps[i], (t[i] - eps) % 1.0, lo)
            p1 = chart.point(comps[i], (t[i] + eps) % 1.0, lo)
            v = p1 - p0
            out.append(v / np.linalg.norm(v))
        return out

    def solve_distances(t, d_init, comps, bounded=False):
        """Zero the inward-normal gradient components, point by point.

        The crossing distance moves very little with the tangential
        position, so a warm-started expanding bracket around the previous
        solution usually encloses the root within one or two doublings.
        With ``bounded`` the distances are stiffly coupled (radially
        stacked pair near a fold of the normal system), where the
        point-by-point sweep stalls in a narrow valley without reaching a
        root; there the full normal residual vector is solved at once,
        seeded from the given pair, and the result is kept only if it
        stays within a factor of 3 of the seed (so the solve fails
        instead of sliding onto an unrelated branch) and the residual
        actually vanishes."""
        d = d_init.copy()
        nin = normal_in(t, comps)

        def nres(dv):
            x = to_x(t, dv, comps)
            if not region.evaluable(x):
                return 1e3 * (dv - d_init)
            g = f.gradient(x).reshape(j, 2)
            return np.array([float(g[i] @ nin[i]) for i in range(j)])

        if bounded:
            sol = root(nres, d_init.copy(), method="hybr",
                       options={"xtol": 1e-14, "maxfev": 100 * j})
            dv = sol.x
            if not (np.all(np.isfinite(dv)) and np.all(dv >= d_lo)
                    and np.all(dv <= d_hi)
                    and np.all(dv >= d_init / 3) and np.all(dv <= 3 * d_init)):
                return None
            if np.linalg.norm(nres(dv)) > 1e-8 * (1 + np.linalg.norm(nres(d_init))):
                return None
            return dv

        for sweep in range(3):
            moved = 0.0
            for i in range(j):
                def gd(di):
                    dd = d.copy()
                    dd[i] = di
                    x = to_x(t, dd, comps)
                    if not region.evaluable(x):
                        return math.copysign(1e6, di - lo)
                    g = f.gradient(x).reshape(j, 2)
                    return float(g[i] @ nin[i])

                w_cap = d_hi - d_lo
                a, b = None, None
                gc = gd(d[i])
                w = 1e-5 * (hi - lo)
                while True:
                    xa = max(d_lo, d[i] - min(w, w_cap))
                    xb = min(d_hi, d[i] + min(w, w_cap))
                    ga, gb = gd(xa), gd(xb)
                    # compare each endpoint against the seed value too: the
                    # geometric expansion can jump over a sign interval that
                    # is narrower than one expansion step
                    if (ga < 0) != (gc < 0):
                        a, b = xa, d[i]
                        break
                    if (gc < 0) != (gb < 0):
                        a, b = d[i], xb
                        break
                    if (ga < 0) != (gb < 0):
                        a, b = xa, xb
                        break
                    if w >= w_cap or (xa == d_lo and xb == d_hi):
                        break
                    w *= 8.0
                if a is None:
                    return None
                di = brentq(gd, a, b, xtol=1e-15)
                moved = max(moved, abs(di - d[i]))
                d[i] = di
            if moved < 1e-13:
                break
        if moved >= 1e-13:
            # the sweep converges immediately for separated points but only
            # creeps when the distances are coupled; finish with a coupled
            # solve of the full normal residual and keep it if it improves
            sol = root(nres, d.copy(), method="hybr",
                       options={"maxfev": 60 * j})
            dv = sol.x
            if np.all(np.isfinite(dv)) and np.all(dv >= d_lo) \
                    and np.all(dv <= d_hi) \
                    and np.linalg.norm(nres(dv)) < np.linalg.norm(nres(d)):
                d = dv
        return d

    dedup = 1e-6 * region.domain.inradius
    periodic = region.domain.kind != "half_plane"
    n_t = max(36, int(round(starts ** (1.0 / j))))
    n_d = 6
    # staggered warm-start distances keep equal-parameter points radially
    # separated, so stacked pairs (same angle, two crossing distances) are
    # reachable branches of the per-point normal solves
    d_warm = lo + (hi - lo) * (np.arange(j) + 1.0) / (j + 1.0)
    # gradient scale for the relative zero tolerance, from band probes
    probe = []
    for k in range(8):
        tp = ((k + 0.5) / 8.0 + np.arange(j) / (2.0 * j)) % 1.0
        x = to_x(tp, d_warm, [i % ncomp for i in range(j)])
        if region.evaluable(x):
            probe.append(float(np.linalg.norm(f.gradient(x))))
    ztol = ZERO_TOL * max(1.0, np.median(probe) if probe else 1.0)

    found = []          # list of (flat, record), one per distinct zero
    converged = 0
    for comps in itertools.combinations_with_replacement(range(ncomp), j):
        comps = list(comps)
        d_state = {"d": d_warm.copy()}

        def S(t, anchor=None):
            d = solve_distances(np.asarray(t, float), d_state["d"], comps,
                                bounded=d_state.get("bounded", False))
            if d is None:
                return None if anchor is None else 1e3 * (np.asarray(t) - anchor)
            d_state["d"] = d
            g = f.gradient(to_x(t, d, comps)).reshape(j, 2)
            tg = tangents(t, comps)
            return np.array([float(g[i] @ tg[i]) for i in range(j)])

        cands = []   # (t seed, distance seed) pairs

        # generator (a): tabulate the eliminated tangential system on a
        # cell-centered grid (the half-step offset keeps symmetry-pinned
        # zeros off the nodes) and flag cells where every component takes
        # both signs among the corners; warm distances are carried along
        # each row and reset at row boundaries
        t_grid = (np.arange(n_t) + 0.5) / n_t
        table = np.full((n_t,) * j + (j,), np.nan)
        for node in itertools.product(range(n_t), repeat=j):
            if node[-1] == 0:
                d_state["d"] = d_warm.copy()
            val = S(t_grid[list(node)])
            if val is not None:
                table[node] = val
        offsets = list(itertools.product((0, 1), repeat=j))
        for node in itertools.product(range(n_t), repeat=j):
            if not periodic and n_t - 1 in node:
                continue
            corners = np.array([table[tuple((np.array(node) + off) % n_t)]
                                for off in offsets])
            if not np.isfinite(corners).all():
                continue
            if all((corners[:, m] > 0).any() and (corners[:, m] < 0).any()
                   for m in range(j)):
                cands.append(((np.array(node) + 1.0) / n_t, d_warm.copy(),
                              False))

        # generator (b): radially stacked same-component pairs live on deep
        # normal-equation branches that only exist in a thin aligned tube,
        # so scan the common angle with both points aligned, seeding the
        # bounded distance solve from each ordered well-separated pair
        if j == 2 and comps[0] == comps[1]:
            d_seeds = np.geomspace(0.5 * lo, 0.95 * hi, n_d)
            seed_pairs = [(da, db) for da in d_seeds for db in d_seeds
                          if max(da, db) / min(da, db) >= 1.6]
            for dpair in seed_pairs:
                vals = np.full((n_t, j), np.nan)
                dsol = np.full((n_t, j), np.nan)
                for it in range(n_t):
                    tt = np.array([t_grid[it], t_grid[it]])
                    d = solve_distances(tt, np.array(dpair), comps,
                                        bounded=True)
                    if d is None:
                        continue
                    g = f.gradient(to_x(tt, d, comps)).reshape(j, 2)
                    tg = tangents(tt, comps)
                    vals[it] = [float(g[i] @ tg[i]) for i in range(j)]
                    dsol[it] = d
                last = n_t if periodic else n_t - 1
                for it in range(last):
                    pair = vals[[it, (it + 1) % n_t]]
                    if not np.isfinite(pair).all():
                        continue
                    if all((pair[:, m] > 0).any() and (pair[:, m] < 0).any()
                           for m in range(j)):
                        tc = (it + 1.0) / n_t
                        cands.append((np.array([tc, tc]), dsol[it].copy(),
                                      True))

        for t0, d0, bounded in cands:
            d_state["d"] = d0.copy()
            d_state["bounded"] = bounded
            sol = root(lambda t: S(t, anchor=t0), t0.copy(),
                       method="hybr", options={"maxfev": 80 * j})
            t = sol.x
            d = solve_distances(t, d_state["d"], comps, bounded=bounded)
            if d is None:
                continue
            x = to_x(t, d, comps)
            if not region.contains(x) \
                    or float(np.linalg.norm(f.gradient(x))) > ztol:
                continue
            converged += 1
            for xf, rec in found:
                if np.linalg.norm(xf - x) < dedup:
                    rec.basin_count += 1
                    break
            else:
                found.append((x, _classify(f, x, j, region.domain)))
    found = _augment_permutations(found, j, dedup)
    return [rec for _, rec in found], converged


def strip_degree(f, domain, j, thresholds, starts=200, seed=0, shell_samples=1000):
    """Degree of the field over the near-boundary strip band; the
    closed-form expectation is 0."""
    region = ConfigRegion.strip(domain, j, thresholds)
    shell = region.shell_samples(shell_samples, seed=seed + 7)
    margin = 10 * ZERO_TOL
    for x in shell:
        try:
            gn = float(np.linalg.norm(f.gradient(x)))
        except Exception:
            continue
        if gn < margin:
            raise UnsafeRegionError(
                f"|gradient| = {gn:.3e} on the strip shell at {x.tolist()}")
    zeros, converged = _strip_zeros(f, region, BoundaryChart(domain), starts, seed)
    for rec in zeros:
        if rec.hessian_det_sign == "degenerate":
            raise DegeneracyError(
                rec, "perturb the weight h and retry; the degree is "
                "invariant under positive-weight homotopy")
    total = sum(rec.hessian_det_sign for rec in zeros)
    return DegreeReport(zeros=zeros, signed_total=total, oracle=0,
                        region=region.label, field=f.label,
                        starts=starts, converged=converged)
