"""Fibers and non-properness of polynomial maps.

Exact side: certified real fiber counts and a degree-drop probe on the
x-eliminant.  Numeric side: a tracer that scans large source spheres for
points whose image stays bounded and follows those channels outward.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import EmptyCloud, InsufficientDegreeBound
from .exact import MPoly, as_rat
from .exact.system import bezout_bound, eliminant, real_solutions

DEFAULT_BOUND = 1e4
DEFAULT_CLUSTER_RADIUS = 1e-2
PROBE_PAD = 5


def _components(pmap):
    if hasattr(pmap, "components"):
        P, Q = pmap.components
    else:
        P, Q = pmap
    _, P, Q = P._align(Q)
    for v in ("x", "y"):
        if v not in P.vars:
            P, Q = P.with_vars(P.vars + (v,)), Q.with_vars(Q.vars + (v,))
    return P, Q


# fibers ------------------------------------------------------------------------

@dataclass
class FiberReport:
    target: tuple
    count: int
    boxes: list
    certified: bool
    order: tuple = ("x", "y")
    undecided: list = field(default_factory=list)

    def to_json(self) -> dict:
        def enc(v):
            v = Fraction(v)
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

        return {
            "target": [enc(v) for v in self.target],
            "count": self.count,
            "certified": self.certified,
            "order": list(self.order),
            "boxes": [{self.order[0]: bx.to_json(), self.order[1]: by.to_json()}
                      for bx, by in self.boxes],
        }


def fiber_count(pmap, target, order=("x", "y")) -> FiberReport:
    """Certified count of real solutions of (P, Q) = (a, b).

    ``order`` fixes which variable labels the first box coordinate; swapping
    it must not change the count.
    """
    a, b = (as_rat(v) for v in target)
    P, Q = _components(pmap)
    sol = real_solutions(P - a, Q - b, tuple(order))
    return FiberReport((a, b), len(sol.boxes), sol.boxes, sol.certified, tuple(order),
                       sol.undecided)


# the degree-drop probe ----------------------------------------------------------

_SWAP = {"x": "y", "y": "x"}


def probe_degree_bound(P: MPoly, Q: MPoly, direction: str) -> int:
    """deg_elim(Q) deg_dir(P) + deg_elim(P) deg_dir(Q), padded by 5."""
    return bezout_bound(P, Q, direction, _SWAP[direction]) + PROBE_PAD


@lru_cache(maxsize=32)
def generic_degree(P: MPoly, Q: MPoly, direction: str) -> int:
    """Degree of the eliminant at generic targets (max over two seeded ones)."""
    rng = random.Random(20240601)
    bound = probe_degree_bound(P, Q, direction)
    degs = []
    for _ in range(2):
        a = Fraction(rng.randint(-997, 997), rng.randint(1, 97))
        b = Fraction(rng.randint(-997, 997), rng.randint(1, 97))
        degs.append(eliminant(P - a, Q - b, direction, _SWAP[direction], bound).degree)
    return max(degs)


def probe_eliminant(pmap, target, direction: str = "x"):
    P, Q = _components(pmap)
    a, b = (as_rat(v) for v in target)
    bound = probe_degree_bound(P, Q, direction)
    return eliminant(P - a, Q - b, direction, _SWAP[direction], bound)


def leading_coeff_probe(pmap, target, direction: str = "x") -> Fraction:
    """Coefficient of the generic top degree in the eliminant for ``direction``.

    For direction x this is Res_y(P - a, Q - b) as a polynomial in x.  Zero
    means a root of the fiber system escapes to infinity in that direction.
    """
    if direction not in _SWAP:
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")
    P, Q = _components(pmap)
    gdeg = generic_degree(P, Q, direction)
    r = probe_eliminant((P, Q), target, direction)
    if r.degree > gdeg:
        raise InsufficientDegreeBound(
            f"eliminant degree {r.degree} exceeds the generic degree {gdeg}")
    return r.coeff(gdeg)


# numeric tracing ------------------------------------------------------------------

def scaled(beta):
    return beta / (1 + abs(beta))


def sphere_point(angles, sign: int, R: float, dim: int) -> np.ndarray:
    """A point of the radius-R sphere in R^dim from chart angles.

    dim 2: xi = sign*R*(sin a, cos a), a in [-pi/2, pi/2].
    dim >= 3: xi_n = sign*R*cos a1 with a1 in [0, pi/2]; the remaining
    coordinates are sign*R*sin a1 times a standard point of S^{dim-2}.
    The two charts keep the poles away from angle pi, where sin loses
    all relative precision.
    """
    if dim == 2:
        (a,) = angles
        return sign * R * np.array([math.sin(a), math.cos(a)])
    a1, rest = angles[0], angles[1:]
    out = np.empty(dim)
    out[-1] = math.cos(a1)
    rad = math.sin(a1)
    # standard hyperspherical coordinates on the remaining sphere
    for k, ang in enumerate(rest[:-1]):
        out[k] = rad * math.cos(ang)
        rad *= math.sin(ang)
    out[dim - 3] = rad * math.cos(rest[-1])
    out[dim - 2] = rad * math.sin(rest[-1])
    return sign * R * out


def _angle_bounds(dim):
    if dim == 2:
        return [(-math.pi / 2, math.pi / 2)]
    return [(0.0, math.pi / 2)] + [(0.0, math.pi)] * (dim - 3) + [(0.0, 2 * math.pi)]


def _grid(dim, n):
    bounds = _angle_bounds(dim)
    per = max(2, int(round(n ** (1.0 / (dim - 1)))))
    axes = [np.linspace(lo, hi, per) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), per


@dataclass
class Channel:
    """A direction on the source sphere along which the image stays bounded."""

    sign: int
    angles: tuple
    core: float          # min |F| at this radius
    history: list = field(default_factory=list)   # core values at earlier radii
    images: list = field(default_factory=list)    # sampled images with |F| <= M


@dataclass
class TraceCloud:
    radius_schedule: list
    points: list
    bound: float
    per_radius: dict = field(default_factory=dict)     # R -> list of image points
    clusters: dict = field(default_factory=dict)       # R -> list of representatives
    dropped: int = 0

    def final_clusters(self):
        return self.clusters.get(self.radius_schedule[-1], []) if self.radius_schedule else []

    def to_json(self) -> dict:
        return {
            "radius_schedule": list(self.radius_schedule),
            "bound": self.bound,
            "points": [list(map(float, p)) for p in self.points],
            "clusters": {repr(float(R)): [list(map(float, p)) for p in reps]
                         for R, reps in self.clusters.items()},
            "dropped_channels": self.dropped,
        }


class _Sphere:
    def __init__(self, fmap, dim, R):
        self.fmap, self.dim, self.R = fmap, dim, R

    def image(self, angles, sign):
        xi = sphere_point(angles, sign, self.R, self.dim)
        return np.array([float(v) for v in self.fmap(*xi)])

    def norm(self, angles, sign):
        v = self.image(angles, sign)
        n = float(np.hypot.reduce(v)) if v.size else 0.0
        return n if math.isfinite(n) else math.inf

    def objective(self, angles, sign):
        return math.log1p(self.norm(angles, sign))


def _local_min(sph, sign, start, width):
    """Bounded local minimisation of log(1+|F|) around ``start``."""
    bounds = _angle_bounds(sph.dim)
    if sph.dim == 2:
        lo = max(bounds[0][0], start[0] - width)
        hi = min(bounds[0][1], start[0] + width)
        r = minimize_scalar(lambda a: sph.objective((a,), sign), bounds=(lo, hi),
                            method="bounded", options={"xatol": 1e-16, "maxiter": 500})
        best = (float(r.x),)
    else:
        box = [(max(b[0], s - width), min(b[1], s + width)) for b, s in zip(bounds, start)]
        r = minimize(lambda a: sph.objective(tuple(a), sign), np.array(start, float),
                     method="Nelder-Mead", bounds=box,
                     options={"xatol": 1e-14, "fatol": 1e-14, "maxiter": 600})
        best = tuple(float(v) for v in r.x)
    cand = [tuple(start), best]
    return min(cand, key=lambda a: sph.norm(a, sign))


def _bracket(sph, sign, angles, axis, direction, M):
    """Largest offset d along one angle with |F| <= M at offset d (bisection)."""
    bounds = _angle_bounds(sph.dim)[axis]
    limit = (bounds[1] - angles[axis]) if direction > 0 else (angles[axis] - bounds[0])
    if limit <= 0:
        return 0.0

    def ok(d):
        a = list(angles)
        a[axis] += direction * d
        return sph.norm(a, sign) <= M

    step = min(limit, 2.0 ** -1000)
    if not ok(step):
        return 0.0
    while step < limit and ok(min(2 * step, limit)):
        step = min(2 * step, limit)
    if step >= limit:
        return limit
    lo, hi = step, min(2 * step, limit)
    for _ in range(60):
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _sample_channel(sph, ch, M, n_samples):
    images = []
    for axis in range(sph.dim - 1):
        lo = _bracket(sph, ch.sign, ch.angles, axis, -1, M)
        hi = _bracket(sph, ch.sign, ch.angles, axis, +1, M)
        for d in np.linspace(-lo, hi, n_samples):
            a = list(ch.angles)
            a[axis] += d
            v = sph.image(a, ch.sign)
            if np.all(np.isfinite(v)) and np.hypot.reduce(v) <= M:
                images.append(tuple(float(c) for c in v))
    return images


def _scaled_point(p):
    return tuple(p[:-1]) + (scaled(p[-1]),)


def cluster_points(points, radius):
    """Greedy clustering in scaled coordinates (last coordinate squashed).

    Points are visited in sorted order; each joins the first cluster whose
    seed lies within ``radius``.  The representative is the member nearest
    the cluster's scaled centroid.
    """
    seeds, members = [], []
    for p in sorted(points):
        sp = np.array(_scaled_point(p))
        for k, s in enumerate(seeds):
            if np.linalg.norm(sp - s) <= radius:
                members[k].append(p)
                break
        else:
            seeds.append(sp)
            members.append([p])
    reps = []
    for group in members:
        sc = np.array([_scaled_point(p) for p in group])
        c = sc.mean(axis=0)
        reps.append(group[int(np.argmin(np.linalg.norm(sc - c, axis=1)))])
    return reps


def trace_asymptotic(fmap, radii, samples_per_radius: int = 20000, bound: float = DEFAULT_BOUND,
                     dim: int = 2, cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
                     max_channels: int = 40, channel_samples: int = 25,
                     growth: float = 2.0, floor: float = 1.0,
                     match_distance: float = 0.25) -> TraceCloud:
    """Scan the spheres |xi| = R for bounded images and follow the channels.

    ``fmap`` takes ``dim`` float coordinates and returns the image
    coordinates.  At every radius, channels start at the smallest local
    minima of |F| over an angle grid (plus the carried channels,
    re-minimised in a window shrinking like 1/R) and are polished by bounded
    local minimisation.  From the second radius on, a channel must continue
    a carried one: same chart, unit source direction within
    ``match_distance``, and core |F| at most ``growth`` times the previous
    core (anything below ``floor`` passes).  Channels whose minimum image
    keeps growing escape to infinity and are dropped.
    """
    radii = [float(R) for R in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be a nonempty increasing sequence")
    if bound <= 0:
        raise ValueError("bound must be positive")
    grid, per = _grid(dim, samples_per_radius)
    spacing = max((hi - lo) / (per - 1) for lo, hi in _angle_bounds(dim))
    cloud = TraceCloud(radius_schedule=radii, points=[], bound=float(bound))
    carried: list = []
    for k, R in enumerate(radii):
        sph = _Sphere(fmap, dim, R)
        found = []
        for sign in (1, -1):
            vals = _grid_objective(sph, grid, sign)
            picked = 0
            for idx in np.argsort(vals, kind="stable"):
                if picked >= max_channels or not math.isfinite(vals[idx]):
                    break
                if not _is_grid_local_min(vals, idx, per, dim):
                    continue
                picked += 1
                a = _local_min(sph, sign, tuple(grid[idx]), spacing)
                found.append(Channel(sign, a, sph.norm(a, sign)))
        window = spacing * radii[0] / R
        for ch in carried:
            a = _local_min(sph, ch.sign, ch.angles, window)
            found.append(Channel(ch.sign, a, sph.norm(a, ch.sign)))
        found = _dedupe([ch for ch in found if ch.core <= bound], sph)
        if k > 0:
            kept = []
            for ch in found:
                pred = _predecessor(ch, carried, dim, match_distance)
                if pred is None or ch.core > max(growth * pred.core, floor):
                    cloud.dropped += 1
                    continue
                ch.history = pred.history + [pred.core]
                kept.append(ch)
            found = kept
        pts = []
        for ch in found:
            ch.images = _sample_channel(sph, ch, bound, channel_samples)
            pts.extend(ch.images)
        cloud.per_radius[R] = pts
        cloud.clusters[R] = cluster_points(pts, cluster_radius) if pts else []
        carried = found
    # only channels that survive the whole schedule are accumulation candidates
    cloud.points = list(cloud.per_radius[radii[-1]])
    if not cloud.points:
        raise EmptyCloud("no bounded-image channel survives the radius schedule", cloud)
    return cloud


def _grid_objective(sph, grid, sign):
    vals = np.empty(len(grid))
    for i, a in enumerate(grid):
        vals[i] = sph.objective(tuple(a), sign)
    return vals


def _predecessor(ch, carried, dim, limit):
    u = sphere_point(ch.angles, ch.sign, 1.0, dim)
    best, best_d = None, limit
    for c in carried:
        d = float(np.linalg.norm(u - sphere_point(c.angles, c.sign, 1.0, dim)))
        if d <= best_d:
            best, best_d = c, d
    return best


def _is_grid_local_min(vals, idx, per, dim):
    if dim == 2:
        n = len(vals)
        return all(vals[idx] <= vals[j] for j in (idx - 1, idx + 1) if 0 <= j < n)
    shape = (per,) * (dim - 1)
    pos = np.unravel_index(idx, shape)
    grid = vals.reshape(shape)
    for ax in range(dim - 1):
        for d in (-1, 1):
            q = list(pos)
            q[ax] += d
            if 0 <= q[ax] < per and grid[tuple(q)] < vals[idx]:
                return False
    return True


def _dedupe(channels, sph):
    out = []
    seen = set()
    for ch in sorted(channels, key=lambda c: (c.sign, c.angles)):
        key = (ch.sign, tuple(round(float(v), 14) for v in sph_key(sph, ch)))
        if key in seen:
            continue
        seen.add(key)
        out.append(ch)
    return out


def sph_key(sph, ch):
    return sphere_point(ch.angles, ch.sign, 1.0, sph.dim)


# distance to a parametrised curve ----------------------------------------------------

def curve_distance(point, curve, span: float = None) -> float:
    """Scaled distance from a target point (alpha, beta) to s -> (p(s), q(s)).

    Coordinates are compared as (alpha, beta / (1 + |beta|)).  For the
    Pinchuk curve p = s^2 - 1, so the parameter range adapts to alpha.
    """
    from .pinchuk import curve_eval_float

    alpha, beta = float(point[0]), float(point[1])
    if span is None:
        span = math.sqrt(abs(alpha) + 1) + 3
    target = np.array([alpha, scaled(beta)])

    def d(s):
        p, q = curve_eval_float(curve, s)
        return math.hypot(p - target[0], scaled(q) - target[1])

    ss = np.linspace(-span, span, 8001)
    p, q = curve_eval_float(curve, ss)
    dd = np.hypot(p - target[0], q / (1 + np.abs(q)) - target[1])
    best = int(np.argmin(dd))
    h = ss[1] - ss[0]
    r = minimize_scalar(d, bounds=(ss[best] - h, ss[best] + h), method="bounded",
                        options={"xatol": 1e-14})
    return min(float(dd[best]), float(r.fun))


def axis_line_map(x, y, z):
    """The real map (x, y, (x^2 + y^2) z) of the three-dimensional example."""
    return x, y, (x * x + y * y) * z


def identity_map(*xs):
    return xs


__all__ = [
    "FiberReport",
    "TraceCloud",
    "Channel",
    "fiber_count",
    "leading_coeff_probe",
    "probe_eliminant",
    "generic_degree",
    "probe_degree_bound",
    "trace_asymptotic",
    "cluster_points",
    "curve_distance",
    "sphere_point",
    "scaled",
    "axis_line_map",
    "identity_map",
]
