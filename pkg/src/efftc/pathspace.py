"""Geometric configuration spaces, sampled paths and broken paths.

Paths are uniformly sampled polylines.  Broken paths are tuples of legs
whose consecutive break points lie in a common orbit of the attached
symmetry; validation reports residuals rather than raising, so planner
verification can treat failures as results.

All point sets are numpy arrays whose last axis is the model coordinate:
spheres use unit vectors, flat tori coordinates in [0,1) per axis, wedges
pairs (branch index, angle).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import GeodesicDegeneracyError, PathJoinError
from .symmetry import FiniteGroup

JOINT_TOL = 1e-6
ENDPOINT_TOL = 1e-6
ISOMETRY_TOL = 1e-9


def sampling_seed() -> int:
    """The recorded seed for every randomized sampling (EFFTC_SEED)."""
    return int(os.environ.get("EFFTC_SEED", "20250810"))


class Space:
    """Base class: a metric model with deterministic verification grids."""

    name = "space"
    point_dim = 1

    def dist(self, p, q):
        raise NotImplementedError

    def geodesic(self, p, q, n):
        """Shortest constant-speed path; batched (M,d),(M,d) -> (M,n,d)."""
        raise NotImplementedError

    def grid(self, resolution):
        raise NotImplementedError

    def grid_neighbor_pairs(self, resolution):
        """Combinatorial adjacency on grid(resolution), as an (E,2) array."""
        raise NotImplementedError

    def random_points(self, rng, m):
        raise NotImplementedError

    def check_point(self, p, tol=1e-9) -> bool:
        return True

    def supdiff(self, a, b):
        """Max over the sample axis of dist(a, b); a, b shaped (..., n, d)."""
        return self.dist(a, b).max(axis=-1)

    def supdiff_pairs(self, leg, ia, ib):
        """supdiff(leg[ia], leg[ib]) without materializing the gathers."""
        return self.supdiff(leg[ia], leg[ib])

    def constant_path(self, p, n):
        p = np.asarray(p, dtype=float)
        return np.repeat(p[..., None, :], n, axis=-2)


def _as_batch(p):
    p = np.asarray(p, dtype=float)
    return (p[None, :], True) if p.ndim == 1 else (p, False)


class PointSpace(Space):
    name = "point"
    point_dim = 1

    def dist(self, p, q):
        p, q = np.asarray(p, float), np.asarray(q, float)
        return np.zeros(np.broadcast(p[..., 0], q[..., 0]).shape)

    def geodesic(self, p, q, n):
        p, single = _as_batch(p)
        out = np.zeros((p.shape[0], n, 1))
        return out[0] if single else out

    def grid(self, resolution):
        return np.zeros((1, 1))

    def grid_neighbor_pairs(self, resolution):
        return np.zeros((0, 2), dtype=np.intp)

    def random_points(self, rng, m):
        return np.zeros((m, 1))


class Sphere(Space):
    """Unit sphere S^n in (n+1)-space with the geodesic (angle) metric."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("sphere dimension must be >= 1")
        self.n = n
        self.point_dim = n + 1
        self.name = f"sphere{n}"

    def dist(self, p, q):
        p, q = np.asarray(p, float), np.asarray(q, float)
        chord = np.linalg.norm(p - q, axis=-1)
        return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))

    def geodesic(self, p, q, n):
        p, single_p = _as_batch(p)
        q, _ = _as_batch(q)
        p, q = np.broadcast_arrays(p, q)
        angle = self.dist(p, q)
        if np.any(angle > np.pi - 1e-6):
            raise GeodesicDegeneracyError("antipodal endpoints have no unique arc")
        from ._kernels import slerp_batch
        pts = slerp_batch(p, q, n)
        return pts[0] if single_p and pts.shape[0] == 1 else pts

    def check_point(self, p, tol=1e-9) -> bool:
        return bool(abs(np.linalg.norm(np.asarray(p, float)) - 1.0) <= tol)

    def supdiff(self, a, b):
        chord2 = ((a - b) ** 2).sum(axis=-1).max(axis=-1)
        return 2.0 * np.arcsin(np.clip(np.sqrt(chord2) / 2.0, 0.0, 1.0))

    def supdiff_pairs(self, leg, ia, ib):
        from ._kernels import max_chord2_pairs
        chord2 = max_chord2_pairs(leg, ia, ib)
        if chord2 is None:
            return self.supdiff(leg[ia], leg[ib])
        return 2.0 * np.arcsin(np.clip(np.sqrt(chord2) / 2.0, 0.0, 1.0))

    def _ring_sizes(self, resolution):
        r = resolution + (resolution % 2)
        theta = np.pi * (np.arange(r) + 1) / (r + 1)
        sizes = np.maximum(4, 2 * np.round((r / 2) * np.sin(theta)).astype(int))
        return theta, sizes

    def grid(self, resolution):
        """Deterministic quasi-uniform grid, closed under coordinate sign flips.

        For S^2: latitude rings about the first axis with an even number of
        evenly spaced longitudes proportional to sin(theta) (poles omitted),
        so spacing stays near-isotropic and every catalog involution maps
        grid points to grid points.
        """
        if self.n == 1:
            r = resolution + (resolution % 2)
            ang = 2 * np.pi * np.arange(r) / r
            return np.stack([np.cos(ang), np.sin(ang)], axis=1)
        if self.n == 2:
            theta, sizes = self._ring_sizes(resolution)
            pts = []
            for th, nl in zip(theta, sizes):
                phi = 2 * np.pi * np.arange(nl) / nl
                ring = np.stack([np.full(nl, np.cos(th)),
                                 np.sin(th) * np.cos(phi),
                                 np.sin(th) * np.sin(phi)], axis=-1)
                pts.append(ring)
            return np.concatenate(pts, axis=0)
        raise NotImplementedError("verification grids implemented for S^1, S^2")

    def grid_neighbor_pairs(self, resolution):
        if self.n == 1:
            r = resolution + (resolution % 2)
            return np.array([(k, (k + 1) % r) for k in range(r)], dtype=np.intp)
        if self.n == 2:
            theta, sizes = self._ring_sizes(resolution)
            offsets = np.concatenate([[0], np.cumsum(sizes)])
            pairs = set()
            for j, nl in enumerate(sizes):
                base = offsets[j]
                for k in range(nl):
                    pairs.add((base + k, base + (k + 1) % nl))
                if j + 1 < len(sizes):
                    nxt, base2 = sizes[j + 1], offsets[j + 1]
                    for k in range(nl):
                        k2 = int(np.round(k * nxt / nl)) % nxt
                        pairs.add(tuple(sorted((base + k, base2 + k2))))
                    for k2 in range(nxt):
                        k1 = int(np.round(k2 * nl / nxt)) % nl
                        pairs.add(tuple(sorted((base + k1, base2 + k2))))
            return np.array(sorted(pairs), dtype=np.intp)
        raise NotImplementedError

    def random_points(self, rng, m):
        v = rng.normal(size=(m, self.point_dim))
        return v / np.linalg.norm(v, axis=1, keepdims=True)


class FlatTorus(Space):
    """T^n = [0,1)^n with the wraparound Euclidean metric."""

    def __init__(self, n: int):
        self.n = n
        self.point_dim = n
        self.name = f"torus{n}"

    @staticmethod
    def _min_rep(delta):
        """Coordinatewise minimal representative in [-1/2, 1/2).

        A tie |delta| = 1/2 resolves to -1/2, the lexicographically smaller
        unwrapped endpoint, keeping geodesics deterministic.
        """
        return np.mod(np.asarray(delta, float) + 0.5, 1.0) - 0.5

    def dist(self, p, q):
        rep = self._min_rep(np.asarray(q, float) - np.asarray(p, float))
        return np.linalg.norm(rep, axis=-1)

    def supdiff(self, a, b):
        rep = self._min_rep(b - a)
        return np.sqrt((rep ** 2).sum(axis=-1).max(axis=-1))

    def supdiff_pairs(self, leg, ia, ib):
        from ._kernels import max_torus2_pairs
        d2 = max_torus2_pairs(leg, ia, ib)
        if d2 is None:
            return self.supdiff(leg[ia], leg[ib])
        return np.sqrt(d2)

    def geodesic(self, p, q, n):
        p, single = _as_batch(p)
        q, _ = _as_batch(q)
        p, q = np.broadcast_arrays(p, q)
        rep = self._min_rep(q - p)
        t = np.linspace(0.0, 1.0, n)
        pts = np.mod(p[:, None, :] + t[None, :, None] * rep[:, None, :], 1.0)
        pts[:, -1, :] = np.mod(q, 1.0)
        return pts[0] if single and pts.shape[0] == 1 else pts

    def grid(self, resolution):
        m = self._side(resolution)
        axes = [np.arange(m) / m for _ in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, self.n)

    def _side(self, resolution):
        m = max(4, int(np.ceil(resolution ** (1.0 / self.n))))
        return m + (m % 2)

    def grid_neighbor_pairs(self, resolution):
        m = self._side(resolution)
        shape = (m,) * self.n
        total = m ** self.n
        pairs = []
        for flat in range(total):
            coords = np.unravel_index(flat, shape)
            for axis in range(self.n):
                nxt = list(coords)
                nxt[axis] = (nxt[axis] + 1) % m
                pairs.append((flat, int(np.ravel_multi_index(nxt, shape))))
        return np.array(pairs, dtype=np.intp)

    def random_points(self, rng, m):
        return rng.uniform(0.0, 1.0, size=(m, self.n))


class Circle(Space):
    """A circle of given circumference, coordinate s in [0, L)."""

    def __init__(self, circumference: float):
        self.length = float(circumference)
        self.point_dim = 1
        self.name = f"circle({self.length:g})"

    def _rep(self, delta):
        rep = np.mod(np.asarray(delta, float) + self.length / 2, self.length) - self.length / 2
        return np.where(rep == -self.length / 2, self.length / 2, rep)

    def dist(self, p, q):
        return np.abs(self._rep(np.asarray(q, float) - np.asarray(p, float)))[..., 0]

    def geodesic(self, p, q, n):
        p, single = _as_batch(p)
        q, _ = _as_batch(q)
        p, q = np.broadcast_arrays(p, q)
        rep = self._rep(q - p)
        t = np.linspace(0.0, 1.0, n)
        pts = np.mod(p[:, None, :] + t[None, :, None] * rep[:, None, :], self.length)
        pts[:, -1, :] = np.mod(q, self.length)
        return pts[0] if single and pts.shape[0] == 1 else pts

    def grid(self, resolution):
        r = resolution + (resolution % 2)
        return (self.length * np.arange(r) / r)[:, None]

    def grid_neighbor_pairs(self, resolution):
        r = resolution + (resolution % 2)
        return np.array([(k, (k + 1) % r) for k in range(r)], dtype=np.intp)

    def random_points(self, rng, m):
        return rng.uniform(0.0, self.length, size=(m, 1))


class Arc(Space):
    """A closed interval [0, L] with the absolute-value metric."""

    def __init__(self, length: float):
        self.length = float(length)
        self.point_dim = 1
        self.name = f"arc({self.length:g})"

    def dist(self, p, q):
        return np.abs(np.asarray(q, float) - np.asarray(p, float))[..., 0]

    def geodesic(self, p, q, n):
        p, single = _as_batch(p)
        q, _ = _as_batch(q)
        p, q = np.broadcast_arrays(p, q)
        t = np.linspace(0.0, 1.0, n)
        pts = p[:, None, :] + t[None, :, None] * (q - p)[:, None, :]
        return pts[0] if single and pts.shape[0] == 1 else pts

    def grid(self, resolution):
        return (self.length * np.arange(resolution + 1) / resolution)[:, None]

    def grid_neighbor_pairs(self, resolution):
        return np.array([(k, k + 1) for k in range(resolution)], dtype=np.intp)

    def random_points(self, rng, m):
        return rng.uniform(0.0, self.length, size=(m, 1))


class WedgeCircles(Space):
    """A wedge of unit circles; points are (branch index, angle in [0, 2pi)).

    The basepoint is angle 0 on every branch and is canonicalized to
    branch 0.  The metric is the path metric: within a branch the circle
    arc, across branches through the basepoint.
    """

    def __init__(self, branches: int):
        if branches < 1:
            raise ValueError("need at least one branch")
        self.branches = branches
        self.point_dim = 2
        self.name = f"wedge{branches}"

    @staticmethod
    def canonical(p):
        p = np.asarray(p, dtype=float).copy()
        ang = np.mod(p[..., 1], 2 * np.pi)
        branch = np.where(ang == 0.0, 0.0, p[..., 0])
        return np.stack([branch, ang], axis=-1)

    def _base_dist(self, ang):
        return np.minimum(ang, 2 * np.pi - ang)

    def dist(self, p, q):
        p, q = self.canonical(p), self.canonical(q)
        same = p[..., 0] == q[..., 0]
        d_ang = np.abs(p[..., 1] - q[..., 1])
        circle = np.minimum(d_ang, 2 * np.pi - d_ang)
        through = self._base_dist(p[..., 1]) + self._base_dist(q[..., 1])
        return np.where(same, np.minimum(circle, through), through)

    def geodesic(self, p, q, n):
        p, single = _as_batch(self.canonical(p))
        q, _ = _as_batch(self.canonical(q))
        p, q = np.broadcast_arrays(p, q)
        out = np.zeros((p.shape[0], n, 2))
        t = np.linspace(0.0, 1.0, n)
        for i in range(p.shape[0]):
            out[i] = self._geodesic_one(p[i], q[i], t)
        return out[0] if single and out.shape[0] == 1 else out

    def _geodesic_one(self, p, q, t):
        n = len(t)
        if p[0] == q[0]:
            delta = np.mod(q[1] - p[1] + np.pi, 2 * np.pi) - np.pi
            if delta == -np.pi:
                delta = np.pi
            ang = np.mod(p[1] + t * delta, 2 * np.pi)
            return self.canonical(np.stack([np.full(n, p[0]), ang], axis=-1))
        # through the basepoint: down branch p the short way, then up branch q
        d1 = float(self._base_dist(np.array(p[1])))
        d2 = float(self._base_dist(np.array(q[1])))
        total = d1 + d2
        pts = np.zeros((n, 2))
        for k, tk in enumerate(t):
            s = tk * total
            if s <= d1 and total > 0:
                ang = p[1] - s if p[1] <= np.pi else p[1] + s
                pts[k] = [p[0], np.mod(ang, 2 * np.pi)]
            else:
                u = s - d1
                ang = u if q[1] <= np.pi else -u
                pts[k] = [q[0], np.mod(ang, 2 * np.pi)]
        pts[0] = p
        pts[-1] = q
        return self.canonical(pts)

    def grid(self, resolution):
        pts = [np.array([0.0, 0.0])]
        for b in range(self.branches):
            for k in range(1, resolution):
                pts.append(np.array([float(b), 2 * np.pi * k / resolution]))
        return np.stack(pts, axis=0)

    def grid_neighbor_pairs(self, resolution):
        pairs = []
        per = resolution - 1
        for b in range(self.branches):
            start = 1 + b * per
            pairs.append((0, start))
            for k in range(per - 1):
                pairs.append((start + k, start + k + 1))
            pairs.append((start + per - 1, 0))
        return np.array(pairs, dtype=np.intp)

    def random_points(self, rng, m):
        branch = rng.integers(0, self.branches, size=m).astype(float)
        ang = rng.uniform(0.0, 2 * np.pi, size=m)
        return self.canonical(np.stack([branch, ang], axis=-1))


class SpaceAction:
    """An isometric action of a finite group on a space, as point maps."""

    def __init__(self, space: Space, group: FiniteGroup, point_maps,
                 rng=None, check=True):
        self.space = space
        self.group = group
        self.point_maps = list(point_maps)
        if len(self.point_maps) != group.order:
            raise ValueError("one point map per group element required")
        if check:
            self._check(rng or np.random.default_rng(sampling_seed()))

    def _check(self, rng):
        pts = self.space.random_points(rng, 32)
        qts = self.space.random_points(rng, 32)
        base = self.space.dist(pts, qts)
        ident = self.point_maps[0](pts)
        if np.max(self.space.dist(ident, pts)) > ISOMETRY_TOL:
            raise ValueError("identity element must act as the identity map")
        for g in range(1, self.group.order):
            gp, gq = self.point_maps[g](pts), self.point_maps[g](qts)
            if np.max(np.abs(self.space.dist(gp, gq) - base)) > ISOMETRY_TOL:
                raise ValueError(f"element {g} is not an isometry")

    def act(self, g: int, p):
        return self.point_maps[g](np.asarray(p, dtype=float))

    def orbit(self, p):
        return [self.act(g, p) for g in range(self.group.order)]

    def orbit_dist(self, p, q):
        """min over g of dist(g p, q); broadcasts over leading axes."""
        p, q = np.asarray(p, float), np.asarray(q, float)
        stack = np.stack([self.space.dist(self.act(g, p), q)
                          for g in range(self.group.order)], axis=0)
        return stack.min(axis=0)

    def is_geometrically_free(self, resolution=32) -> bool:
        """Grid test for freeness: an action with a fixed point moves some
        grid point by at most twice the grid spacing."""
        pts = self.space.grid(resolution)
        nbr = self.space.grid_neighbor_pairs(resolution)
        if nbr.size:
            h = float(np.max(self.space.dist(pts[nbr[:, 0]], pts[nbr[:, 1]])))
        else:
            h = 0.0
        threshold = max(2.0 * h, 1e-6)
        for g in range(1, self.group.order):
            if np.min(self.space.dist(self.act(g, pts), pts)) <= threshold:
                return False
        return True


def trivial_space_action(space: Space) -> SpaceAction:
    return SpaceAction(space, FiniteGroup.trivial(), [lambda p: p], check=False)


@dataclass
class SampledPath:
    """Uniformly parameterized polyline; N >= 2 samples."""

    space: Space
    points: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] < 2:
            raise ValueError("a sampled path needs at least two samples")

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    @property
    def samples(self) -> int:
        return self.points.shape[0]

    def max_gap(self) -> float:
        return float(np.max(self.space.dist(self.points[:-1], self.points[1:])))

    def length(self) -> float:
        return float(np.sum(self.space.dist(self.points[:-1], self.points[1:])))

    def to_csv(self, path) -> None:
        np.savetxt(path, self.points, delimiter=",")


def geodesic_arc(space: Space, x, y, n: int = 64) -> SampledPath:
    """Constant-speed shortest path with exact endpoints."""
    return SampledPath(space, space.geodesic(np.asarray(x, float),
                                             np.asarray(y, float), n))


def constant_path(space: Space, x, n: int = 64) -> SampledPath:
    return SampledPath(space, space.constant_path(np.asarray(x, float), n))


def concat(p: SampledPath, q: SampledPath) -> SampledPath:
    if p.space is not q.space and p.space.name != q.space.name:
        raise PathJoinError("cannot concatenate paths in different spaces")
    if float(p.space.dist(p.end, q.start)) > 1e-6:
        raise PathJoinError("endpoint mismatch exceeds 1e-6")
    return SampledPath(p.space, np.concatenate([p.points, q.points], axis=0))


def reverse(p: SampledPath) -> SampledPath:
    return SampledPath(p.space, p.points[::-1].copy())


@dataclass
class BrokenPath:
    """k legs with consecutive break points in a common orbit."""

    legs: list
    action: SpaceAction

    @property
    def stage(self) -> int:
        return len(self.legs)

    @property
    def start(self):
        return self.legs[0].start

    @property
    def end(self):
        return self.legs[-1].end


@dataclass
class ValidationReport:
    joint_residuals: list[float]
    endpoint_residuals: tuple[float, float]
    max_gap: float
    delta: float
    endpoint_tol: float

    @property
    def valid(self) -> bool:
        return (all(r <= self.delta for r in self.joint_residuals)
                and self.endpoint_residuals[0] <= self.endpoint_tol
                and self.endpoint_residuals[1] <= self.endpoint_tol)


def validate_broken_path(bp: BrokenPath, request=None, delta: float = JOINT_TOL,
                         endpoint_tol: float = ENDPOINT_TOL) -> ValidationReport:
    """Per-joint orbit residuals plus endpoint residuals; never raises."""
    action = bp.action
    joints = []
    for i in range(bp.stage - 1):
        joints.append(float(action.orbit_dist(bp.legs[i].end, bp.legs[i + 1].start)))
    if request is not None:
        x, y = request
        res = (float(action.space.dist(bp.start, np.asarray(x, float))),
               float(action.space.dist(bp.end, np.asarray(y, float))))
    else:
        res = (0.0, 0.0)
    gap = max(leg.max_gap() for leg in bp.legs)
    return ValidationReport(joint_residuals=joints, endpoint_residuals=res,
                            max_gap=gap, delta=delta, endpoint_tol=endpoint_tol)


def embed_stage(bp: BrokenPath) -> BrokenPath:
    """Append the constant path at the final endpoint (stage k -> k+1)."""
    last = bp.legs[-1]
    const = constant_path(last.space, last.end, last.samples)
    return BrokenPath(legs=list(bp.legs) + [const], action=bp.action)


def project_to_orbit(bp: BrokenPath, model) -> SampledPath:
    """Project a valid broken path to a single continuous quotient path."""
    report = validate_broken_path(bp)
    if not report.valid:
        raise ValueError(f"broken path invalid: {report}")
    pieces = [model.project(leg.points) for leg in bp.legs]
    return SampledPath(model.quotient_space, np.concatenate(pieces, axis=0))


class QuotientModel:
    """A concrete orbit-space model with projection and optional extras.

    `section` (when not None) is a strict section of the orbit map;
    `any_preimage` supports covering path lifts.
    """

    def __init__(self, action: SpaceAction, quotient_space: Space,
                 project, section=None, any_preimage=None):
        self.action = action
        self.total_space = action.space
        self.quotient_space = quotient_space
        self._project = project
        self._section = section
        self._any_preimage = any_preimage

    def project(self, p):
        return self._project(np.asarray(p, dtype=float))

    @property
    def has_section(self) -> bool:
        return self._section is not None

    def section(self, q):
        if self._section is None:
            raise ValueError("quotient model has no strict section")
        return self._section(np.asarray(q, dtype=float))

    def any_preimage(self, q):
        if self._any_preimage is None:
            raise ValueError("quotient model does not support lifting")
        return self._any_preimage(np.asarray(q, dtype=float))

    def check_section(self, resolution=64, tol=ISOMETRY_TOL) -> float:
        """Max residual of q o s = id over the quotient grid."""
        grid = self.quotient_space.grid(resolution)
        back = self.project(self.section(grid))
        return float(np.max(self.quotient_space.dist(back, grid)))

    def lift_path(self, quotient_points, start):
        """Unique-path-lift through the covering, batched.

        quotient_points: (M, N, dq); start: (M, d) with
        project(start) = quotient_points[:, 0].  Greedy orbit-nearest
        continuation; exactness is checked by the caller.
        """
        q = np.asarray(quotient_points, dtype=float)
        start = np.asarray(start, dtype=float)
        single = q.ndim == 2
        if single:
            q = q[None]
            start = start[None]
        m, n, _ = q.shape
        out = np.zeros((m, n, self.total_space.point_dim))
        out[:, 0] = start
        order = self.action.group.order
        for j in range(1, n):
            base = self.any_preimage(q[:, j])
            cands = np.stack([self.action.act(g, base) for g in range(order)])
            dists = np.stack([self.total_space.dist(cands[g], out[:, j - 1])
                              for g in range(order)])
            best = np.argmin(dists, axis=0)
            out[:, j] = cands[best, np.arange(m)]
        return out[0] if single else out
