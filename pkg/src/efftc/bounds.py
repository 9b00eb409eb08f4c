"""Certified upper bounds from covers, exact lower bounds, reconciliation.

Upper bounds are grid certifications: every sampled pair must be covered
with clearance epsilon, every section output must validate, and section
outputs at adjacent accepted grid pairs must differ leg-wise by at most
L times the input distance.  A refutation is a result, not an error.

Lower bounds are exact F2 computations on simplicial models and never
depend on sampling parameters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import Cochain, cohomology, coboundary_space, cup_length, f2_cd
from .errors import ContradictionError
from .planners import PlannerCover
from .symmetry import (
    GroupAction,
    fixed_subcomplex,
    quotient_complex,
    saturated_diagonal,
)


# ------------------------------------------------------------ certification

@dataclass
class Certification:
    certified: bool
    bound: int | None
    params: dict
    sets: int
    stage: int
    failure: dict | None = None

    def describe(self) -> str:
        if self.certified:
            return (f"certified bound {self.bound} at resolution "
                    f"(grid={self.params['grid']}, eps={self.params['epsilon']}, "
                    f"delta={self.params['delta']}, L={self.params['modulus']})")
        return f"refuted: {self.failure}"


def _pair_dist(space, x1, y1, x2, y2):
    return np.maximum(space.dist(x1, x2), space.dist(y1, y2))


def verify_cover(cover: PlannerCover, grid: int = 32, epsilon: float = 0.05,
                 delta: float = 1e-6, modulus: float = 10.0,
                 samples: int = 64) -> Certification:
    """Certify or refute a planner cover on the deterministic grid."""
    action = cover.action
    space = action.space
    params = {"grid": grid, "epsilon": epsilon, "delta": delta,
              "modulus": modulus, "samples": samples}
    ypts = space.grid(grid)
    ynbr = space.grid_neighbor_pairs(grid)
    if cover.kind == "cat":
        if cover.basepoint is None:
            raise ValueError("cat cover verification needs a basepoint")
        xpts = np.asarray(cover.basepoint, float)[None, :]
        xnbr = np.zeros((0, 2), dtype=np.intp)
    else:
        xpts = ypts
        xnbr = ynbr

    def fail(reason, **detail):
        return Certification(certified=False, bound=None, params=params,
                             sets=len(cover.sets), stage=cover.stage,
                             failure={"reason": reason, **detail})

    m_y = ypts.shape[0]
    m_x = xpts.shape[0]
    endpoint_tol = 1e-6
    chunk_rows = max(1, 2_000_000 // (m_y * samples))

    # pass 1: x-row chunks; coverage + validation + y-direction continuity
    for start in range(0, m_x, chunk_rows):
        xidx = np.arange(start, min(start + chunk_rows, m_x))
        k = xidx.size
        X = np.repeat(xpts[xidx], m_y, axis=0)
        Y = np.tile(ypts, (k, 1))
        total = k * m_y
        base = np.arange(k) * m_y
        nbr_a = (base[:, None] + ynbr[None, :, 0]).ravel()
        nbr_b = (base[:, None] + ynbr[None, :, 1]).ravel()
        nbr_dist = np.tile(space.dist(ypts[ynbr[:, 0]], ypts[ynbr[:, 1]]), k)
        covered = np.zeros(total, dtype=bool)
        for cs in cover.sets:
            margins = cs.margin(X, Y)
            acc = margins >= epsilon
            covered |= acc
            if not acc.any():
                continue
            rows = np.nonzero(acc)[0]
            legs = cs.build_legs(X[rows], Y[rows], samples)
            for i in range(len(legs) - 1):
                joint = action.orbit_dist(legs[i][:, -1], legs[i + 1][:, 0])
                bad = joint > delta
                if bad.any():
                    r = rows[int(np.argmax(bad))]
                    return fail("validation", set=cs.name,
                                pair=[X[r].tolist(), Y[r].tolist()],
                                joint_residual=float(joint.max()))
            res0 = space.dist(legs[0][:, 0], X[rows])
            res1 = space.dist(legs[-1][:, -1], Y[rows])
            bad = (res0 > endpoint_tol) | (res1 > endpoint_tol)
            if bad.any():
                r = rows[int(np.argmax(bad))]
                return fail("validation", set=cs.name,
                            pair=[X[r].tolist(), Y[r].tolist()],
                            endpoint_residual=float(max(res0.max(), res1.max())))
            pos = np.full(total, -1, dtype=np.intp)
            pos[rows] = np.arange(rows.size)
            both = acc[nbr_a] & acc[nbr_b]
            if both.any():
                a, b = nbr_a[both], nbr_b[both]
                indist = nbr_dist[both]
                supdiff = np.zeros(a.size)
                for leg in legs:
                    supdiff = np.maximum(
                        supdiff, space.supdiff_pairs(leg, pos[a], pos[b]))
                bad = supdiff > modulus * indist
                if bad.any():
                    w = int(np.argmax(bad))
                    return fail("continuity", set=cs.name,
                                pair=[X[a[w]].tolist(), Y[a[w]].tolist()],
                                neighbor=[X[b[w]].tolist(), Y[b[w]].tolist()],
                                supdiff=float(supdiff[w]),
                                allowed=float(modulus * indist[w]))
        if not covered.all():
            r = int(np.argmax(~covered))
            return fail("coverage", pair=[X[r].tolist(), Y[r].tolist()])

    # pass 2: y-row chunks; continuity along the x factor
    if xnbr.size:
        xnbr_dist = space.dist(xpts[xnbr[:, 0]], xpts[xnbr[:, 1]])
        for start in range(0, m_y, chunk_rows):
            yidx = np.arange(start, min(start + chunk_rows, m_y))
            k = yidx.size
            Y = np.repeat(ypts[yidx], m_x, axis=0)
            X = np.tile(xpts, (k, 1))
            total = k * m_x
            base = np.arange(k) * m_x
            nbr_a = (base[:, None] + xnbr[None, :, 0]).ravel()
            nbr_b = (base[:, None] + xnbr[None, :, 1]).ravel()
            nbr_dist = np.tile(xnbr_dist, k)
            for cs in cover.sets:
                margins = cs.margin(X, Y)
                acc = margins >= epsilon
                both = acc[nbr_a] & acc[nbr_b]
                if not both.any():
                    continue
                rows = np.nonzero(acc)[0]
                legs = cs.build_legs(X[rows], Y[rows], samples)
                pos = np.full(total, -1, dtype=np.intp)
                pos[rows] = np.arange(rows.size)
                a, b = nbr_a[both], nbr_b[both]
                indist = nbr_dist[both]
                supdiff = np.zeros(a.size)
                for leg in legs:
                    supdiff = np.maximum(
                        supdiff, space.supdiff_pairs(leg, pos[a], pos[b]))
                bad = supdiff > modulus * indist
                if bad.any():
                    w = int(np.argmax(bad))
                    return fail("continuity", set=cs.name,
                                pair=[X[a[w]].tolist(), Y[a[w]].tolist()],
                                neighbor=[X[b[w]].tolist(), Y[b[w]].tolist()],
                                supdiff=float(supdiff[w]),
                                allowed=float(modulus * indist[w]))

    return Certification(certified=True, bound=cover.claimed_bound, params=params,
                         sets=len(cover.sets), stage=cover.stage)


def verify_cat_cover(cover: PlannerCover, basepoint=None, **params) -> Certification:
    """verify_cover with the first pair coordinate frozen at the basepoint."""
    if cover.kind != "cat":
        from .planners import restrict_to_cat
        if basepoint is None:
            raise ValueError("need a basepoint to restrict a tc cover")
        cover = restrict_to_cat(cover, basepoint)
    elif basepoint is not None:
        cover = PlannerCover(action=cover.action, sets=cover.sets,
                             stage=cover.stage, kind="cat",
                             basepoint=np.asarray(basepoint, float),
                             name=cover.name)
    return verify_cover(cover, **params)


# ------------------------------------------------------------ lower bounds

def _restriction_index(ambient, sub, d):
    return np.array([ambient.index(s) for s in sub.simplices(d)], dtype=np.intp)


def effective_zero_divisors(action: GroupAction):
    """Kernel classes of H^+(X x X) -> H^+(saturated diagonal), as cocycles."""
    diag = saturated_diagonal(action)
    P = diag.ambient
    T = diag.union_complex
    summary = cohomology(P)
    from .f2 import F2Matrix
    kernel_classes: list[Cochain] = []
    for d in range(1, P.dimension + 1):
        reps = summary.representatives[d] if d < len(summary.representatives) else []
        if not reps:
            continue
        if d > T.dimension:
            kernel_classes.extend(reps)
            continue
        idx = _restriction_index(P, T, d)
        cb = coboundary_space(T, d)
        reduced = [cb.reduce(rep.coeffs[idx]) for rep in reps]
        columns = np.stack(reduced, axis=1)
        combos = F2Matrix.from_dense(columns).kernel_basis()
        for combo in combos:
            vec = np.zeros(P.n_simplices(d), dtype=np.uint8)
            for k in np.nonzero(combo)[0]:
                vec ^= reps[int(k)].coeffs
            kernel_classes.append(Cochain(d, vec))
    return diag, P, kernel_classes


def zero_divisor_cup_length(action: GroupAction) -> int:
    """Cup length of ker(H^+(X x X; F2) -> H^+(diagonal saturation); F2).

    A lower bound for the stage-2 effective topological complexity; for a
    free action it also bounds the stabilized value.
    """
    diag, P, kernel_classes = effective_zero_divisors(action)
    if not kernel_classes:
        return 0
    return cup_length(P, kernel_classes)


@dataclass
class CriterionReport:
    verdict: str                       # "positive" | "inconclusive"
    hypothesis_ok: bool
    cd_x: int
    group_order: int
    subgroup_cds: list[tuple[tuple[int, ...], int]]

    @property
    def lower_bound(self) -> int:
        return 1 if self.verdict == "positive" else 0


def cd_positivity_criterion(action: GroupAction) -> CriterionReport:
    """Positivity of stage-2 effective tc from cohomological dimensions.

    Positive when cd(X^H) <= cd(X) for every nontrivial subgroup H and
    |G| <= cd(X); otherwise inconclusive (never "zero").
    """
    cd_x = f2_cd(action.complex)
    details = []
    hypothesis_ok = True
    for H in action.group.subgroups():
        if len(H) == 1:
            continue
        cd_h = f2_cd(fixed_subcomplex(action, sorted(H)))
        details.append((tuple(sorted(H)), cd_h))
        if cd_h > cd_x:
            hypothesis_ok = False
    positive = hypothesis_ok and action.group.order <= cd_x
    return CriterionReport(verdict="positive" if positive else "inconclusive",
                           hypothesis_ok=hypothesis_ok, cd_x=cd_x,
                           group_order=action.group.order,
                           subgroup_cds=details)


@dataclass
class CdBoundReport:
    elements: list[int]
    cd_diagonal: int
    cd_x: int
    bound: int
    hypothesis_ok: bool
    passed: bool


def cd_bound_check(action: GroupAction, elements=None) -> CdBoundReport:
    """Exact check of cd(diagonal slices union) <= cd(X) + |L| - 1."""
    criterion = cd_positivity_criterion(action)
    diag = saturated_diagonal(action, elements)
    cd_t = f2_cd(diag.union_complex)
    cd_x = f2_cd(action.complex)
    bound = cd_x + len(diag.elements) - 1
    return CdBoundReport(elements=list(diag.elements), cd_diagonal=cd_t,
                         cd_x=cd_x, bound=bound,
                         hypothesis_ok=criterion.hypothesis_ok,
                         passed=cd_t <= bound)


def orbit_map_pullback(action: GroupAction):
    """The quotient complex, its cohomology pulled back along the orbit map."""
    Q, vmap, base = quotient_complex(action)
    summary = cohomology(Q)
    K = base.complex
    pullbacks: list[Cochain] = []
    for d in range(1, Q.dimension + 1):
        if d > K.dimension:
            break
        for rep in summary.representatives[d]:
            vec = np.zeros(K.n_simplices(d), dtype=np.uint8)
            for i, s in enumerate(K.simplices(d)):
                image = tuple(sorted({vmap[v] for v in s}))
                if len(image) == len(s):
                    vec[i] = rep.coeffs[Q.index(image)]
            pullbacks.append(Cochain(d, vec))
    return Q, base, pullbacks


def orbit_nilpotency_lower_bound(action: GroupAction) -> int:
    """nil of the image of H^+(X/G; F2) -> H^+(X; F2) under the orbit map."""
    Q, base, pullbacks = orbit_map_pullback(action)
    live = [c for c in pullbacks if not c.is_zero()]
    if not live:
        return 0
    return cup_length(base.complex, live)


# ----------------------------------------------------------- reconciliation

@dataclass
class BoundValue:
    value: int
    source: str


@dataclass
class BoundReport:
    scenario: str
    invariant: str              # "tc" | "cat"
    stage: object               # int or "inf"
    lower: BoundValue
    upper: BoundValue | None
    params: dict
    status: str                 # "consistent" | "contradiction"

    @property
    def label(self) -> str:
        return f"{self.invariant}^{{G,{self.stage}}}"

    def as_dict(self) -> dict:
        return {
            "invariant": self.label,
            "kind": self.invariant,
            "stage": self.stage,
            "scenario": self.scenario,
            "lower": self.lower.value,
            "lower_source": self.lower.source,
            "upper": None if self.upper is None else self.upper.value,
            "upper_source": None if self.upper is None else self.upper.source,
            "params": self.params,
            "status": self.status,
        }


def reconcile(scenario: str, invariant: str, stage, lowers, uppers,
              params=None) -> BoundReport:
    """Max of lowers vs min of uppers; contradiction when they cross."""
    lowers = list(lowers) or [BoundValue(0, "trivial")]
    best_lower = max(lowers, key=lambda b: b.value)
    best_upper = min(uppers, key=lambda b: b.value) if uppers else None
    status = "consistent"
    if best_upper is not None and best_lower.value > best_upper.value:
        status = "contradiction"
    return BoundReport(scenario=scenario, invariant=invariant, stage=stage,
                       lower=best_lower, upper=best_upper,
                       params=params or {}, status=status)


def chain_checks(tc_report: BoundReport, cat_report: BoundReport) -> list[dict]:
    """Consistency assertions between stabilized cat and tc intervals.

    Flags only when the certified intervals force a violation of
    cat <= tc <= 2 cat or of the zero-equivalence.
    """
    checks = []
    tc_up = None if tc_report.upper is None else tc_report.upper.value
    cat_up = None if cat_report.upper is None else cat_report.upper.value
    ok = tc_up is None or cat_report.lower.value <= tc_up
    checks.append({"name": "cat<=tc", "ok": bool(ok),
                   "detail": f"cat lower {cat_report.lower.value}, tc upper {tc_up}"})
    ok = cat_up is None or tc_report.lower.value <= 2 * cat_up
    checks.append({"name": "tc<=2cat", "ok": bool(ok),
                   "detail": f"tc lower {tc_report.lower.value}, cat upper {cat_up}"})
    zero_violation = ((tc_up == 0 and cat_report.lower.value >= 1)
                      or (cat_up == 0 and tc_report.lower.value >= 1))
    checks.append({"name": "zero-equivalence", "ok": not zero_violation,
                   "detail": f"tc upper {tc_up}, cat upper {cat_up}"})
    return checks


def require_consistent(reports: list[BoundReport]) -> None:
    bad = [r for r in reports if r.status == "contradiction"]
    if bad:
        r = bad[0]
        raise ContradictionError(
            f"scenario {r.scenario}: {r.invariant} stage {r.stage} lower "
            f"{r.lower.value} ({r.lower.source}) exceeds upper "
            f"{r.upper.value} ({r.upper.source})")
