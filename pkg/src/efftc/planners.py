"""Executable motion-planner covers.

A cover set carries a clearance function (margin from the set's boundary)
and a batched section map producing the legs of a broken path for every
accepted pair.  Verification accepts a pair into a set only with clearance
at least epsilon, so sections are evaluated strictly inside their domains.

Sphere conventions for the involution scenarios: the involution negates the
first coordinate, its fixed equator is {x0 = 0}, and the pole of the upper
hemisphere is N = e0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import slerp_chain
from .errors import LiftError
from .pathspace import (
    BrokenPath,
    FlatTorus,
    QuotientModel,
    SampledPath,
    Space,
    SpaceAction,
    Sphere,
)


@dataclass
class CoverSet:
    """One open set of a planner cover, as margin + batched section."""

    name: str
    stage: int
    margin: object        # (X, Y) -> (M,) clearance values
    build_legs: object    # (X, Y, n) -> list of (M, n, d) leg arrays

    def section_one(self, action: SpaceAction, x, y, n: int = 64) -> BrokenPath:
        X = np.asarray(x, float)[None, :]
        Y = np.asarray(y, float)[None, :]
        legs = self.build_legs(X, Y, n)
        return BrokenPath(legs=[SampledPath(action.space, leg[0]) for leg in legs],
                          action=action)


@dataclass
class PlannerCover:
    """A stage-k cover of X x X (or of X, when kind == "cat")."""

    action: SpaceAction
    sets: list[CoverSet]
    stage: int
    kind: str = "tc"
    basepoint: np.ndarray | None = None
    name: str = ""

    @property
    def claimed_bound(self) -> int:
        return len(self.sets) - 1

    def plan(self, x, y, epsilon: float = 0.05, n: int = 64):
        """Section of the lowest-index set accepting (x, y)."""
        X = np.asarray(x, float)[None, :]
        Y = np.asarray(y, float)[None, :]
        for cs in self.sets:
            if float(cs.margin(X, Y)[0]) >= epsilon:
                return cs.name, cs.section_one(self.action, x, y, n)
        raise ValueError("pair not covered at the requested margin")


# --------------------------------------------------------------- helpers

def _const_legs(points, n):
    return np.repeat(points[:, None, :], n, axis=1)


def _guard_arc(space, P, Q):
    if np.any(space.dist(P, Q) > np.pi - 1e-6):
        from .errors import GeodesicDegeneracyError
        raise GeodesicDegeneracyError("antipodal endpoints have no unique arc")


def _arc_then_half(space, X, Y, end, field_unit, m):
    """One leg: shortest arc from X to -Y, then the half circle -Y -> Y
    (realized as two quarter arcs through the field direction)."""
    _guard_arc(space, X, -Y)
    return slerp_chain([(X, -Y), (-Y, field_unit), (field_unit, Y)], m)


def _pairing_field(Y):
    """Unit tangent field on an odd sphere: rotate coordinate pairs."""
    V = np.empty_like(Y)
    V[:, 0::2] = -Y[:, 1::2]
    V[:, 1::2] = Y[:, 0::2]
    return V


def _stereo_field(Y, tol=1e-12):
    """Tangent field on an even sphere vanishing only at the south pole -e0.

    Pullback of a constant field under stereographic projection from -e0.
    """
    s = 1.0 + Y[:, 0]
    u = Y[:, 1:] / s[:, None]
    norm2 = 1.0 + np.sum(u * u, axis=1)
    c = np.zeros_like(u)
    c[:, 0] = 1.0
    uc = u[:, 0]
    v0 = -4.0 * uc / norm2 ** 2
    vrest = (2.0 * c * norm2[:, None] - 4.0 * u * uc[:, None]) / (norm2 ** 2)[:, None]
    V = np.concatenate([v0[:, None], vrest], axis=1)
    return V


def _tangent_unit(Y, V):
    """Project V to the tangent space at Y and normalize."""
    W = V - np.sum(V * Y, axis=1, keepdims=True) * Y
    norms = np.linalg.norm(W, axis=1, keepdims=True)
    return W / norms


def _fold(X):
    out = X.copy()
    out[:, 0] = np.abs(out[:, 0])
    return out


def _rotation_leg(X, n):
    """Trajectory of the half-turn rotation fixing e0 (pairs the rest)."""
    d = X.shape[1]
    if (d - 1) % 2 != 0:
        raise ValueError("rotation leg needs an even number of moving coordinates")
    t = np.linspace(0.0, np.pi, n)
    out = np.empty((X.shape[0], n, d))
    out[:, :, 0] = X[:, None, 0]
    for k in range(1, d, 2):
        a, b = X[:, k][:, None], X[:, k + 1][:, None]
        out[:, :, k] = a * np.cos(t)[None, :] - b * np.sin(t)[None, :]
        out[:, :, k + 1] = a * np.sin(t)[None, :] + b * np.cos(t)[None, :]
    out[:, -1, 0] = X[:, 0]
    return out


def detect_sphere_action(action: SpaceAction) -> str:
    """Classify the catalog sphere actions by their sample behaviour."""
    if not isinstance(action.space, Sphere):
        return "other"
    if action.group.order == 1:
        return "trivial"
    if action.group.order != 2:
        return "other"
    pts = action.space.random_points(np.random.default_rng(1), 16)
    img = action.act(1, pts)
    if np.allclose(img, -pts, atol=1e-9):
        return "antipodal"
    codim1 = pts.copy()
    codim1[:, 0] = -codim1[:, 0]
    if np.allclose(img, codim1, atol=1e-9):
        return "codim1"
    return "other"


# ------------------------------------------------------- sphere planners

FIELD_EXCLUSION = 0.45
# clearance kept from an arc's degenerate locus, so that shortest-arc
# sections stay Lipschitz well under the default continuity modulus on the
# accepted region (modulus ~ pi / (2 * clearance))
ARC_EXCLUSION = 0.12


def farber_sphere_cover(action: SpaceAction, name: str = "farber") -> PlannerCover:
    """Stage-1 cover of S^n x S^n: 2 sets for odd n, 3 for even n."""
    space = action.space
    if not isinstance(space, Sphere):
        raise ValueError("farber cover needs a sphere")
    n = space.n

    def margin_u1(X, Y):
        return space.dist(Y, -X) - ARC_EXCLUSION

    def legs_u1(X, Y, m):
        return [space.geodesic(X, Y, m)]

    sets = [CoverSet("U1", 1, margin_u1, legs_u1)]

    if n % 2 == 1:
        def margin_u2(X, Y):
            return space.dist(Y, X) - ARC_EXCLUSION

        def legs_u2(X, Y, m):
            return [_arc_then_half(space, X, Y, Y,
                                   _tangent_unit(Y, _pairing_field(Y)), m)]

        sets.append(CoverSet("U2", 1, margin_u2, legs_u2))
    else:
        south = np.zeros(space.point_dim)
        south[0] = -1.0
        north = -south
        w_dir = np.zeros(space.point_dim)
        w_dir[1] = 1.0

        def margin_u2(X, Y):
            return np.minimum(space.dist(Y, X) - ARC_EXCLUSION,
                              space.dist(Y, south[None, :]) - FIELD_EXCLUSION)

        def legs_u2(X, Y, m):
            return [_arc_then_half(space, X, Y, Y,
                                   _tangent_unit(Y, _stereo_field(Y)), m)]

        def margin_u3(X, Y):
            return np.minimum(space.dist(X, south[None, :]),
                              space.dist(Y, north[None, :])) - FIELD_EXCLUSION

        def legs_u3(X, Y, m):
            north_t = np.broadcast_to(north, X.shape)
            south_t = np.broadcast_to(south, Y.shape)
            w_t = np.broadcast_to(w_dir, X.shape)
            _guard_arc(space, X, north_t)
            _guard_arc(space, south_t, Y)
            return [slerp_chain([(X, north_t), (north_t, w_t),
                                 (w_t, south_t), (south_t, Y)], m)]

        sets.append(CoverSet("U2", 1, margin_u2, legs_u2))
        sets.append(CoverSet("U3", 1, margin_u3, legs_u3))
    return PlannerCover(action=action, sets=sets, stage=1, name=name)


def involution_two_stage_cover(action: SpaceAction,
                               name: str = "involution2") -> PlannerCover:
    """Two-set stage-2 cover for the antipodal or codimension-1 involution.

    The free antipodal case uses the one-jump planner
    (c_x, arc(gx, y)) on {y != x}.  For the codimension-1 involution the
    first leg instead rides the half-turn rotation about the fixed axis, so
    that one orbit jump after it lands exactly on -x; this keeps the set at
    {y != x} and covers the antipodal pairs over the fixed equator.
    """
    kind = detect_sphere_action(action)
    space = action.space
    n = space.n

    def margin_u1(X, Y):
        return space.dist(Y, -X) - ARC_EXCLUSION

    def legs_u1(X, Y, m):
        return [space.geodesic(X, Y, m), _const_legs(Y, m)]

    def margin_u2(X, Y):
        return space.dist(Y, X) - ARC_EXCLUSION

    if kind == "antipodal":
        def legs_u2(X, Y, m):
            return [_const_legs(X, m), space.geodesic(-X, Y, m)]
    elif kind == "codim1":
        if n % 2 == 0:
            def legs_u2(X, Y, m):
                return [_rotation_leg(X, m), space.geodesic(-X, Y, m)]
        else:
            def legs_u2(X, Y, m):
                leg = _arc_then_half(space, X, Y, Y,
                                     _tangent_unit(Y, _pairing_field(Y)), m)
                return [leg, _const_legs(Y, m)]
    else:
        raise ValueError("two-stage involution cover needs the antipodal or "
                         "codimension-1 Z2 action")
    return PlannerCover(action=action,
                        sets=[CoverSet("U1", 2, margin_u1, legs_u1),
                              CoverSet("U2", 2, margin_u2, legs_u2)],
                        stage=2, name=name)


def involution_three_stage_planner(action: SpaceAction,
                                   name: str = "involution3") -> PlannerCover:
    """Single global stage-3 planner through the pole of the upper hemisphere."""
    if detect_sphere_action(action) != "codim1":
        raise ValueError("three-stage planner needs the codimension-1 involution")
    space = action.space
    north = np.zeros(space.point_dim)
    north[0] = 1.0

    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        fx, fy = _fold(X), _fold(Y)
        north_t = np.broadcast_to(north, X.shape)
        _guard_arc(space, fx, north_t)
        _guard_arc(space, north_t, fy)
        mid = slerp_chain([(fx, north_t), (north_t, fy)], m)
        return [_const_legs(X, m), mid, _const_legs(Y, m)]

    return PlannerCover(action=action,
                        sets=[CoverSet("U", 3, margin, legs)],
                        stage=3, name=name)


def adversarial_sphere_cover(action: SpaceAction, honest_membership: bool = False,
                             name: str = "adversarial") -> PlannerCover:
    """A single-set stage-1 "cover" claiming bound 0; verification refutes it."""
    space = action.space
    w = np.zeros(space.point_dim)
    w[1] = 1.0

    def margin(X, Y):
        if honest_membership:
            return space.dist(Y, -X)
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        out = np.empty((X.shape[0], m, space.point_dim))
        ang = space.dist(X, Y)
        good = ang <= np.pi - 1e-6
        if good.any():
            out[good] = space.geodesic(X[good], Y[good], m)
        bad = ~good
        if bad.any():
            # deterministic tie-break: half circle through a fixed direction
            dirs = _tangent_unit(X[bad], np.broadcast_to(w, X[bad].shape).copy())
            t = np.linspace(0.0, 1.0, m)
            out[bad] = (np.cos(np.pi * t)[None, :, None] * X[bad][:, None, :]
                        + np.sin(np.pi * t)[None, :, None] * dirs[:, None, :])
        return [out]

    return PlannerCover(action=action, sets=[CoverSet("U", 1, margin, legs)],
                        stage=1, name=name)


def point_cover(action: SpaceAction, name: str = "point") -> PlannerCover:
    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        return [_const_legs(X, m)]

    return PlannerCover(action=action, sets=[CoverSet("U", 1, margin, legs)],
                        stage=1, name=name)


# -------------------------------------------------- circle / torus covers

def circle_cover(action: SpaceAction, name: str = "circle") -> PlannerCover:
    """Two-set stage-1 planner on a circle or S^1: shortest arc + oriented arc."""
    space = action.space
    if isinstance(space, Sphere) and space.n == 1:
        return farber_sphere_cover(action, name=name)
    length = space.length

    def margin_u1(X, Y):
        return length / 2.0 - space.dist(X, Y)

    def legs_u1(X, Y, m):
        return [space.geodesic(X, Y, m)]

    def margin_u2(X, Y):
        return space.dist(X, Y)

    def legs_u2(X, Y, m):
        delta = np.mod(Y - X, length)
        t = np.linspace(0.0, 1.0, m)
        pts = np.mod(X[:, None, :] + t[None, :, None] * delta[:, None, :], length)
        pts[:, -1, :] = np.mod(Y, length)
        return [pts]

    return PlannerCover(action=action,
                        sets=[CoverSet("U1", 1, margin_u1, legs_u1),
                              CoverSet("U2", 1, margin_u2, legs_u2)],
                        stage=1, name=name)


def arc_cover(action: SpaceAction, name: str = "arc") -> PlannerCover:
    """Single-set stage-1 planner on a contractible arc (claimed bound 0)."""
    space = action.space

    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        return [space.geodesic(X, Y, m)]

    return PlannerCover(action=action, sets=[CoverSet("U", 1, margin, legs)],
                        stage=1, name=name)


def hemisphere_cover(action: SpaceAction, name: str = "hemisphere") -> PlannerCover:
    """Single-set stage-1 planner on the closed upper hemisphere: route
    through the pole (claimed bound 0; the quotient disk is contractible)."""
    dim = action.space.point_dim
    north = np.zeros(dim)
    north[0] = 1.0

    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        north_t = np.broadcast_to(north, X.shape)
        return [slerp_chain([(X, north_t), (north_t, Y)], m)]

    return PlannerCover(action=action, sets=[CoverSet("U", 1, margin, legs)],
                        stage=1, name=name)


def hemisphere_cat_cover(action: SpaceAction, name: str = "hemisphere-cat") -> PlannerCover:
    """Single-set based cover of the hemisphere disk from the pole."""
    dim = action.space.point_dim
    north = np.zeros(dim)
    north[0] = 1.0

    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        north_t = np.broadcast_to(north, Y.shape)
        return [slerp_chain([(north_t, Y)], m)]

    return PlannerCover(action=action, sets=[CoverSet("U", 1, margin, legs)],
                        stage=1, kind="cat", basepoint=north, name=name)


TORUS_CUTS = ((0.5, 0.5), (1.0 / 6.0, 5.0 / 6.0), (5.0 / 6.0, 1.0 / 6.0))


def _circ_dist(vals, cut):
    d = np.abs(np.mod(vals - cut, 1.0))
    return np.minimum(d, 1.0 - d)


def torus_cut_cover(action: SpaceAction, name: str = "torus-cut") -> PlannerCover:
    """Stage-1 cover of T^2 x T^2 by three branch-cut sets (claimed bound 2)."""
    space = action.space
    if not isinstance(space, FlatTorus) or space.n != 2:
        raise ValueError("torus cut cover needs T^2")
    sets = []
    for idx, cuts in enumerate(TORUS_CUTS):
        def margin(X, Y, cuts=cuts):
            d = Y - X
            return np.minimum(_circ_dist(d[:, 0], cuts[0]),
                              _circ_dist(d[:, 1], cuts[1]))

        def legs(X, Y, m, cuts=cuts):
            d = Y - X
            rep = np.empty_like(d)
            for ax in range(2):
                rep[:, ax] = np.mod(d[:, ax] - cuts[ax], 1.0) + cuts[ax] - 1.0
            t = np.linspace(0.0, 1.0, m)
            pts = np.mod(X[:, None, :] + t[None, :, None] * rep[:, None, :], 1.0)
            pts[:, -1, :] = np.mod(Y, 1.0)
            return [pts]

        sets.append(CoverSet(f"V{idx}", 1, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=1, name=name)


# ------------------------------------------------------ cover transfer

def cover_from_strict_section(model: QuotientModel, quotient_cover: PlannerCover,
                              name: str = "strict-section") -> PlannerCover:
    """Stage-3 cover of X x X from a stage-1 cover of X/G and a strict section."""
    if not model.has_section:
        raise ValueError("strict-section transfer needs a strict section")
    residual = model.check_section()
    if residual > 1e-9:
        raise ValueError(f"section check failed: residual {residual:.2e}")
    if quotient_cover.stage != 1:
        raise ValueError("quotient cover must be stage 1")
    action = model.action
    sets = []
    for qset in quotient_cover.sets:
        def margin(X, Y, qset=qset):
            return qset.margin(model.project(X), model.project(Y))

        def legs(X, Y, m, qset=qset):
            qlegs = qset.build_legs(model.project(X), model.project(Y), m)
            lifted = model.section(qlegs[0].reshape(-1, qlegs[0].shape[-1]))
            lifted = lifted.reshape(qlegs[0].shape[0], qlegs[0].shape[1], -1)
            return [_const_legs(X, m), lifted, _const_legs(Y, m)]

        sets.append(CoverSet(qset.name, 3, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=3, name=name)


def cover_from_covering_lift(model: QuotientModel, quotient_cover: PlannerCover,
                             name: str = "covering-lift") -> PlannerCover:
    """Stage-2 cover of X x X for a free action, by unique path lifting."""
    action = model.action
    if not action.is_geometrically_free():
        raise ValueError("covering-lift transfer needs a free action")
    if quotient_cover.stage != 1:
        raise ValueError("quotient cover must be stage 1")
    sets = []
    for qset in quotient_cover.sets:
        def margin(X, Y, qset=qset):
            return qset.margin(model.project(X), model.project(Y))

        def legs(X, Y, m, qset=qset):
            qlegs = qset.build_legs(model.project(X), model.project(Y), m)
            lifted = model.lift_path(qlegs[0], X)
            err = np.max(model.quotient_space.dist(model.project(lifted), qlegs[0]))
            if err > 1e-6:
                raise LiftError(f"lift diverged by {err:.2e}")
            return [lifted, _const_legs(Y, m)]

        sets.append(CoverSet(qset.name, 2, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=2, name=name)


def wedge_planner(model: QuotientModel, base_cover: PlannerCover,
                  name: str = "wedge") -> PlannerCover:
    """Wedge-of-copies planner: strict section onto the identity copy."""
    return cover_from_strict_section(model, base_cover, name=name)


def embed_cover(cover: PlannerCover, name: str | None = None) -> PlannerCover:
    """Stage k -> k+1 embedding: append the constant leg at the endpoint."""
    sets = []
    for cs in cover.sets:
        def legs(X, Y, m, cs=cs):
            base = cs.build_legs(X, Y, m)
            tail = np.repeat(base[-1][:, -1:, :], m, axis=1)
            return base + [tail]

        sets.append(CoverSet(cs.name, cs.stage + 1, cs.margin, legs))
    return PlannerCover(action=cover.action, sets=sets, stage=cover.stage + 1,
                        kind=cover.kind, basepoint=cover.basepoint,
                        name=name or (cover.name + "+embed"))


# ------------------------------------------------------------- cat covers

def cat_cover_from_strict_section(model: QuotientModel,
                                  quotient_cat_cover: PlannerCover,
                                  basepoint,
                                  name: str = "cat-strict-section") -> PlannerCover:
    """Stage-2 based cover of X from a based cover of X/G (strict section)."""
    if not model.has_section:
        raise ValueError("strict-section transfer needs a strict section")
    if model.check_section() > 1e-9:
        raise ValueError("section check failed")
    action = model.action
    basepoint = np.asarray(basepoint, float)
    sets = []
    for qset in quotient_cat_cover.sets:
        def margin(X, Y, qset=qset):
            return qset.margin(model.project(X), model.project(Y))

        def legs(X, Y, m, qset=qset):
            qlegs = qset.build_legs(model.project(X), model.project(Y), m)
            lifted = model.section(qlegs[0].reshape(-1, qlegs[0].shape[-1]))
            lifted = lifted.reshape(qlegs[0].shape[0], qlegs[0].shape[1], -1)
            return [lifted, _const_legs(Y, m)]

        sets.append(CoverSet(qset.name, 2, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=2, kind="cat",
                        basepoint=basepoint, name=name)


def cat_cover_covering_lift(action: SpaceAction, basepoint, centers,
                            radius: float,
                            name: str = "cat-covering-lift") -> PlannerCover:
    """Stage-2 based cover of X for a free action via unique path lifting.

    Each set is the geodesic ball around a point of the basepoint orbit; the
    lift of the projected contraction is realized exactly by the deck
    transformation carrying the center to the basepoint.
    """
    if not action.is_geometrically_free():
        raise ValueError("covering-lift cat cover needs a free action")
    space = action.space
    basepoint = np.asarray(basepoint, float)
    sets = []
    for i, center in enumerate(centers):
        center = np.asarray(center, float)
        deck = None
        for g in range(action.group.order):
            if float(space.dist(action.act(g, center), basepoint)) <= 1e-9:
                deck = g
                break
        if deck is None:
            raise ValueError("cover centers must lie in the basepoint orbit")

        def margin(X, Y, center=center):
            return radius - space.dist(np.broadcast_to(center, Y.shape), Y)

        def legs(X, Y, m, center=center, deck=deck):
            arc = space.geodesic(np.broadcast_to(center, Y.shape), Y, m)
            flat = arc.reshape(-1, arc.shape[-1])
            lifted = action.act(deck, flat).reshape(arc.shape)
            return [lifted, _const_legs(Y, m)]

        sets.append(CoverSet(f"B{i}", 2, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=2, kind="cat",
                        basepoint=basepoint, name=name)


def cat_geodesic_cover(action: SpaceAction, basepoint,
                       name: str = "cat-geodesic") -> PlannerCover:
    """Stage-1 based cover of a sphere: cat(S^n) = 1 with two sets.

    Both sets keep a structural clearance from their degenerate antipode so
    the sections stay uniformly Lipschitz on the accepted region.
    """
    space = action.space
    if not isinstance(space, Sphere):
        raise ValueError("geodesic cat cover implemented for spheres")
    basepoint = np.asarray(basepoint, float)
    w = np.zeros(space.point_dim)
    w[1] = 1.0
    if abs(float(np.dot(w, basepoint))) > 0.9:
        w = np.zeros(space.point_dim)
        w[2 % space.point_dim] = 1.0
    w_dir = w - np.dot(w, basepoint) * basepoint
    w_dir = w_dir / np.linalg.norm(w_dir)

    def margin_a1(X, Y):
        return space.dist(Y, -basepoint[None, :]) - FIELD_EXCLUSION

    def legs_a1(X, Y, m):
        base_t = np.broadcast_to(basepoint, Y.shape)
        _guard_arc(space, base_t, Y)
        return [slerp_chain([(base_t, Y)], m)]

    def margin_a2(X, Y):
        return space.dist(Y, basepoint[None, :]) - FIELD_EXCLUSION

    def legs_a2(X, Y, m):
        base_t = np.broadcast_to(basepoint, Y.shape)
        anti_t = np.broadcast_to(-basepoint, Y.shape)
        w_t = np.broadcast_to(w_dir, Y.shape)
        _guard_arc(space, anti_t, Y)
        return [slerp_chain([(base_t, w_t), (w_t, anti_t), (anti_t, Y)], m)]

    return PlannerCover(action=action,
                        sets=[CoverSet("A1", 1, margin_a1, legs_a1),
                              CoverSet("A2", 1, margin_a2, legs_a2)],
                        stage=1, kind="cat", basepoint=basepoint, name=name)


def cat_torus_cut_cover(action: SpaceAction, basepoint, cuts=TORUS_CUTS,
                        name: str = "cat-cut") -> PlannerCover:
    """Stage-1 based cover of T^2 by branch-cut star sets around basepoint."""
    basepoint = np.asarray(basepoint, float)
    sets = []
    for idx, cut in enumerate(cuts):
        def margin(X, Y, cut=cut):
            d = Y - basepoint[None, :]
            return np.minimum(_circ_dist(d[:, 0], cut[0]),
                              _circ_dist(d[:, 1], cut[1]))

        def legs(X, Y, m, cut=cut):
            d = Y - basepoint[None, :]
            rep = np.empty_like(d)
            for ax in range(2):
                rep[:, ax] = np.mod(d[:, ax] - cut[ax], 1.0) + cut[ax] - 1.0
            t = np.linspace(0.0, 1.0, m)
            pts = np.mod(basepoint[None, None, :] + t[None, :, None] * rep[:, None, :], 1.0)
            pts[:, -1, :] = np.mod(Y, 1.0)
            return [pts]

        sets.append(CoverSet(f"S{idx}", 1, margin, legs))
    return PlannerCover(action=action, sets=sets, stage=1, kind="cat",
                        basepoint=basepoint, name=name)


def restrict_to_cat(cover: PlannerCover, basepoint) -> PlannerCover:
    """Reuse a tc cover as a based (cat) cover by freezing the first factor."""
    return PlannerCover(action=cover.action, sets=cover.sets, stage=cover.stage,
                        kind="cat", basepoint=np.asarray(basepoint, float),
                        name=cover.name + "@base")
