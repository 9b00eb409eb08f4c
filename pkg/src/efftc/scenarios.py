"""Scenario runner: builds space/action bundles, executes bound pipelines,
reconciles reports and evaluates golden expectations.

A scenario is a single JSON document; builtin scenarios are addressable by
name.  Bounds from covers propagate across stages by the witness-level
embedding (a stage-k cover certifies every stage >= k); exact lower bounds
target stage 2 and extend to the stabilized invariant only for free
actions.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import bounds as B
from . import models as M
from . import planners as P
from .complexes import read_complex_text
from .pathspace import (
    Arc,
    Circle,
    FlatTorus,
    PointSpace,
    Sphere,
    WedgeCircles,
    sampling_seed,
    trivial_space_action,
)
from .symmetry import read_action_text, trivial_action

DEFAULT_PARAMS = {"grid": 32, "epsilon": 0.05, "delta": 1e-6,
                  "modulus": 10.0, "samples": 64}


def default_seed() -> int:
    return sampling_seed()


@dataclass
class Scenario:
    id: str
    space: dict
    action: str
    complex: str | None = None
    simplicial_action: str | None = None
    basepoint: str | None = None
    pipeline: list = field(default_factory=list)
    expected: list = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        known = {"id", "space", "action", "complex", "simplicial_action",
                 "basepoint", "pipeline", "expected"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**data)


@dataclass
class Bundle:
    scenario: Scenario
    space_action: object | None = None
    group_action: object | None = None
    quotient_model: object | None = None
    basepoint: np.ndarray | None = None


# ----------------------------------------------------------- construction

def _build_space_action(spec: dict, action_name: str):
    kind = spec.get("kind")
    if kind == "point":
        return M.point_trivial()
    if kind == "sphere":
        n = int(spec["n"])
        return {
            "trivial": lambda: M.sphere_trivial(n),
            "antipodal": lambda: M.sphere_antipodal(n),
            "flip": lambda: M.sphere_codim1(n),
            "codim1-involution": lambda: M.sphere_codim1(n),
            "rotation": lambda: M.sphere_rotation(n),
        }[action_name]()
    if kind == "torus":
        return {
            "trivial": lambda: M.torus_trivial(),
            "torus-halfturn": lambda: M.torus_halfturn(),
        }[action_name]()
    if kind == "wedge":
        branches = int(spec["branches"])
        if action_name != "wedge-swap":
            raise ValueError(f"unsupported wedge action {action_name}")
        return M.wedge_swap(branches)
    raise ValueError(f"unknown space kind {kind!r}")


_COMPLEXES = {
    "point": M.point_complex,
    "hexagon": M.hexagon_complex,
    "boundary-delta3": M.boundary_delta3_complex,
    "octahedron": M.octahedron_complex,
    "torus9": M.torus9_complex,
    "torus43": M.torus43_complex,
    "wedge-triangles-2": lambda: M.wedge_triangles_complex(2),
    "wedge-triangles-3": lambda: M.wedge_triangles_complex(3),
}

_SIMPLICIAL_ACTIONS = {
    ("hexagon", "antipodal"): M.hexagon_antipodal_action,
    ("hexagon", "flip"): M.hexagon_reflection_action,
    ("boundary-delta3", "codim1-involution"): M.sphere_swap_action,
    ("octahedron", "antipodal"): M.octahedron_antipodal_action,
    ("octahedron", "rotation"): M.octahedron_rotation_action,
    ("torus43", "torus-halfturn"): M.torus43_halfturn_action,
    ("wedge-triangles-2", "wedge-swap"): lambda: M.wedge_swap_action(2),
    ("wedge-triangles-3", "wedge-swap"): lambda: M.wedge_swap_action(3),
}


def _build_group_action(scenario: Scenario):
    name = scenario.complex
    if name is None:
        return None
    if name.endswith(".cx") or "/" in name:
        K = read_complex_text(name)
    else:
        K = _COMPLEXES[name]()
    act_name = scenario.simplicial_action or "trivial"
    if act_name == "trivial":
        return trivial_action(K)
    if act_name.endswith(".act") or "/" in act_name:
        return read_action_text(K, act_name)
    return _SIMPLICIAL_ACTIONS[(name, act_name)]()


def _build_quotient_model(scenario: Scenario, space_action):
    space = space_action.space
    name = scenario.action
    if isinstance(space, Sphere) and space.n == 1 and name == "antipodal":
        return M.circle_antipodal_quotient(space_action)
    if isinstance(space, Sphere) and space.n == 1 and name in ("flip", "codim1-involution"):
        return M.circle_flip_quotient(space_action)
    if isinstance(space, Sphere) and space.n == 2 and name in ("flip", "codim1-involution"):
        return M.sphere2_codim1_quotient(space_action)
    if isinstance(space, FlatTorus) and name == "torus-halfturn":
        return M.torus_halfturn_quotient(space_action)
    if isinstance(space, WedgeCircles):
        return M.wedge_quotient(space_action)
    return None


def _default_basepoint(space):
    if isinstance(space, Sphere):
        base = np.zeros(space.point_dim)
        base[0] = 1.0
        return base
    if isinstance(space, FlatTorus):
        return np.zeros(space.point_dim)
    if isinstance(space, WedgeCircles):
        return np.zeros(2)
    if isinstance(space, PointSpace):
        return np.zeros(1)
    return None


def build_bundle(scenario: Scenario) -> Bundle:
    space_action = _build_space_action(scenario.space, scenario.action)
    bundle = Bundle(scenario=scenario, space_action=space_action,
                    group_action=_build_group_action(scenario),
                    quotient_model=_build_quotient_model(scenario, space_action),
                    basepoint=_default_basepoint(space_action.space))
    return bundle


# ------------------------------------------------------- planner registry

def _quotient_tc_cover(model):
    q = model.quotient_space
    if isinstance(q, Circle):
        return P.circle_cover(trivial_space_action(q))
    if isinstance(q, Arc):
        return P.arc_cover(trivial_space_action(q))
    if isinstance(q, M.Hemisphere):
        return P.hemisphere_cover(trivial_space_action(q))
    if isinstance(q, FlatTorus):
        return P.torus_cut_cover(trivial_space_action(q))
    raise ValueError(f"no quotient cover for {q.name}")


def _quotient_cat_cover(model):
    q = model.quotient_space
    if isinstance(q, Circle):
        return P.circle_cover(trivial_space_action(q))
    if isinstance(q, Arc):
        return P.arc_cover(trivial_space_action(q))
    if isinstance(q, M.Hemisphere):
        return P.hemisphere_cat_cover(trivial_space_action(q))
    raise ValueError(f"no quotient cat cover for {q.name}")


def build_planner(name: str, bundle: Bundle):
    act = bundle.space_action
    if name == "farber":
        return P.farber_sphere_cover(act)
    if name == "involution2":
        return P.involution_two_stage_cover(act)
    if name == "involution3":
        return P.involution_three_stage_planner(act)
    if name == "strict-section":
        return P.cover_from_strict_section(bundle.quotient_model,
                                           _quotient_tc_cover(bundle.quotient_model))
    if name == "covering-lift":
        return P.cover_from_covering_lift(bundle.quotient_model,
                                          _quotient_tc_cover(bundle.quotient_model))
    if name == "wedge":
        return P.wedge_planner(bundle.quotient_model,
                               _quotient_tc_cover(bundle.quotient_model))
    if name == "torus-cut":
        return P.torus_cut_cover(act)
    if name == "point":
        return P.point_cover(act)
    if name == "adversarial":
        return P.adversarial_sphere_cover(act)
    if name == "cat-strict-section":
        return P.cat_cover_from_strict_section(
            bundle.quotient_model, _quotient_cat_cover(bundle.quotient_model),
            bundle.basepoint)
    if name == "cat-covering-lift":
        space = act.space
        radius = (np.pi / 2 + 0.3) if isinstance(space, Sphere) else 0.7
        centers = [act.act(g, bundle.basepoint)
                   for g in range(act.group.order)]
        return P.cat_cover_covering_lift(act, bundle.basepoint, centers, radius)
    if name == "cat-geodesic":
        return P.cat_geodesic_cover(act, bundle.basepoint)
    if name == "cat-torus-cut":
        return P.cat_torus_cut_cover(act, bundle.basepoint)
    if name == "cat-point":
        return P.restrict_to_cat(P.point_cover(act), bundle.basepoint)
    raise ValueError(f"unknown planner {name!r}")


# ------------------------------------------------------------ the runner

_STAGES = (1, 2, 3, "inf")


def _stage_leq(a, b) -> bool:
    if b == "inf":
        return True
    if a == "inf":
        return False
    return a <= b


@dataclass
class ScenarioResult:
    scenario: Scenario
    params: dict
    reports: list
    checks: list
    expected_results: list

    @property
    def consistent(self) -> bool:
        return all(r.status == "consistent" for r in self.reports)

    @property
    def expected_ok(self) -> bool:
        return all(e["ok"] for e in self.expected_results)

    @property
    def checks_ok(self) -> bool:
        return all(c["ok"] for c in self.checks if c.get("hard", True))

    @property
    def ok(self) -> bool:
        return self.consistent and self.expected_ok and self.checks_ok

    def report_for(self, invariant, stage):
        for r in self.reports:
            if r.invariant == invariant and r.stage == stage:
                return r
        return None

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario.id,
            "params": self.params,
            "reports": [r.as_dict() for r in self.reports],
            "checks": self.checks,
            "expected": self.expected_results,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def csv_rows(self) -> list[str]:
        rows = ["invariant,stage,scenario,lower,lower_source,upper,upper_source,status"]
        for r in self.reports:
            d = r.as_dict()
            rows.append(",".join(str(d[k]) if d[k] is not None else ""
                                 for k in ("invariant", "stage", "scenario",
                                           "lower", "lower_source", "upper",
                                           "upper_source", "status")))
        return rows


def run_scenario_obj(scenario: Scenario, overrides=None) -> ScenarioResult:
    params = dict(DEFAULT_PARAMS)
    params.update(overrides or {})
    params.setdefault("seed", default_seed())
    verify_params = {k: params[k] for k in DEFAULT_PARAMS}
    bundle = build_bundle(scenario)
    free = bundle.group_action.is_free() if bundle.group_action else None

    uppers = {"tc": [], "cat": []}      # (stage, BoundValue)
    lowers = {"tc": [], "cat": []}      # (stage-applicability fn, BoundValue)
    checks: list[dict] = []
    stages_seen = {"tc": set(), "cat": set()}

    for step in scenario.pipeline:
        op = step["op"]
        if op in ("upper", "cat-upper"):
            invariant = "tc" if op == "upper" else "cat"
            cover = build_planner(step["planner"], bundle)
            if invariant == "cat" and cover.kind != "cat":
                cover = P.restrict_to_cat(cover, bundle.basepoint)
            cert = (B.verify_cover(cover, **verify_params) if invariant == "tc"
                    else B.verify_cat_cover(cover, basepoint=bundle.basepoint,
                                            **verify_params))
            detail = cert.describe()
            checks.append({"name": f"{invariant}-cover:{step['planner']}",
                           "ok": cert.certified, "detail": detail})
            if cert.certified:
                source = f"{step['planner']}@stage{cover.stage}"
                uppers[invariant].append((cover.stage, B.BoundValue(cert.bound, source)))
            stages_seen[invariant].add(cover.stage)
        elif op == "lower":
            method = step["method"]
            if bundle.group_action is None:
                raise ValueError("lower bounds need a simplicial model")
            if method == "zero-divisor":
                value = B.zero_divisor_cup_length(bundle.group_action)
                lowers["tc"].append(("stage2", B.BoundValue(value, "zero-divisor")))
                stages_seen["tc"].add(2)
            elif method == "cd-criterion":
                rep = B.cd_positivity_criterion(bundle.group_action)
                checks.append({"name": "cd-criterion", "ok": True, "hard": False,
                               "verdict": rep.verdict,
                               "hypothesis_ok": rep.hypothesis_ok,
                               "cd": rep.cd_x, "group_order": rep.group_order})
                if rep.verdict == "positive":
                    lowers["tc"].append(("stage2", B.BoundValue(1, "cd-criterion")))
                stages_seen["tc"].add(2)
            else:
                raise ValueError(f"unknown lower method {method!r}")
        elif op == "cat-lower":
            if step["method"] != "orbit-nilpotency":
                raise ValueError(f"unknown cat lower {step['method']!r}")
            if bundle.group_action is None:
                raise ValueError("lower bounds need a simplicial model")
            value = B.orbit_nilpotency_lower_bound(bundle.group_action)
            lowers["cat"].append(("all", B.BoundValue(value, "orbit-nilpotency")))
        elif op == "check":
            if step["method"] != "cd-bound":
                raise ValueError(f"unknown check {step['method']!r}")
            if bundle.group_action is None:
                raise ValueError("exact checks need a simplicial model")
            r = B.cd_bound_check(bundle.group_action, step.get("elements"))
            checks.append({"name": "cd-bound", "ok": r.passed,
                           "cd_diagonal": r.cd_diagonal, "bound": r.bound,
                           "hypothesis_ok": r.hypothesis_ok})
        else:
            raise ValueError(f"unknown pipeline op {op!r}")

    reports = []
    for invariant in ("tc", "cat"):
        if not uppers[invariant] and not lowers[invariant] \
                and not stages_seen[invariant]:
            continue
        stage_list = sorted(s for s in stages_seen[invariant] if s != "inf")
        stage_list.append("inf")
        for stage in stage_list:
            ups = [bv for s, bv in uppers[invariant] if _stage_leq(s, stage)]
            lows = [B.BoundValue(0, "trivial")]
            for scope, bv in lowers[invariant]:
                if scope == "all":
                    lows.append(bv)
                elif scope == "stage2":
                    applies = (stage in (1, 2)) or (stage == "inf" and free)
                    if applies:
                        lows.append(bv)
            reports.append(B.reconcile(scenario.id, invariant, stage,
                                       lows, ups, params))

    tc_inf = next((r for r in reports if r.invariant == "tc" and r.stage == "inf"), None)
    cat_inf = next((r for r in reports if r.invariant == "cat" and r.stage == "inf"), None)
    if tc_inf and cat_inf:
        for c in B.chain_checks(tc_inf, cat_inf):
            c["name"] = "chain:" + c["name"]
            checks.append(c)

    expected_results = []
    for exp in scenario.expected:
        expected_results.append(_evaluate_expectation(exp, reports, checks))

    result = ScenarioResult(scenario=scenario, params=params, reports=reports,
                            checks=checks, expected_results=expected_results)
    B.require_consistent(reports)
    return result


def _evaluate_expectation(exp: dict, reports, checks) -> dict:
    out = dict(exp)
    if "criterion" in exp:
        entry = next((c for c in checks if c["name"] == "cd-criterion"), None)
        out["ok"] = entry is not None and entry["verdict"] == exp["criterion"]
        return out
    if "cd_bound" in exp:
        entry = next((c for c in checks if c["name"] == "cd-bound"), None)
        out["ok"] = entry is not None and entry["ok"] == exp["cd_bound"]
        return out
    stage = exp.get("stage", "inf")
    report = next((r for r in reports if r.invariant == exp["invariant"]
                   and r.stage == stage), None)
    if report is None:
        out["ok"] = False
        return out
    ok = True
    if "lower" in exp:
        ok = ok and report.lower.value == exp["lower"]
    if "upper" in exp:
        ok = ok and report.upper is not None and report.upper.value == exp["upper"]
    out["ok"] = bool(ok)
    return out


# --------------------------------------------------------------- builtins

def _builtin_list() -> list[Scenario]:
    scenarios = [
        Scenario(
            id="point",
            space={"kind": "point"}, action="trivial",
            complex="point", simplicial_action="trivial",
            pipeline=[
                {"op": "upper", "planner": "point"},
                {"op": "cat-upper", "planner": "cat-point"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
            ],
            expected=[
                {"invariant": "tc", "stage": "inf", "lower": 0, "upper": 0},
                {"invariant": "cat", "stage": "inf", "lower": 0, "upper": 0},
            ],
        ),
        Scenario(
            id="s1-antipodal",
            space={"kind": "sphere", "n": 1}, action="antipodal",
            complex="hexagon", simplicial_action="antipodal",
            pipeline=[
                {"op": "upper", "planner": "covering-lift"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-covering-lift"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
                {"op": "check", "method": "cd-bound"},
            ],
            expected=[
                {"invariant": "tc", "stage": 2, "lower": 1, "upper": 1},
                {"invariant": "tc", "stage": "inf", "lower": 1, "upper": 1},
                {"criterion": "inconclusive"},
                {"cd_bound": True},
            ],
        ),
        Scenario(
            id="s1-flip",
            space={"kind": "sphere", "n": 1}, action="flip",
            complex="hexagon", simplicial_action="flip",
            pipeline=[
                {"op": "upper", "planner": "strict-section"},
                {"op": "upper", "planner": "involution2"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-strict-section"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
                {"op": "check", "method": "cd-bound"},
            ],
            expected=[
                {"invariant": "tc", "stage": "inf", "lower": 0, "upper": 0},
                {"invariant": "tc", "stage": 2, "lower": 1, "upper": 1},
                {"invariant": "cat", "stage": "inf", "lower": 0, "upper": 0},
                {"criterion": "inconclusive"},
                {"cd_bound": True},
            ],
        ),
        Scenario(
            id="s2-involution",
            space={"kind": "sphere", "n": 2}, action="codim1-involution",
            complex="boundary-delta3", simplicial_action="codim1-involution",
            pipeline=[
                {"op": "upper", "planner": "farber"},
                {"op": "upper", "planner": "involution2"},
                {"op": "upper", "planner": "involution3"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-strict-section"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
            ],
            expected=[
                {"invariant": "tc", "stage": 1, "lower": 1, "upper": 2},
                {"invariant": "tc", "stage": 2, "lower": 1, "upper": 1},
                {"invariant": "tc", "stage": 3, "upper": 0},
                {"invariant": "tc", "stage": "inf", "lower": 0, "upper": 0},
                {"invariant": "cat", "stage": "inf", "lower": 0, "upper": 0},
                {"criterion": "positive"},
            ],
        ),
        Scenario(
            id="s2-antipodal",
            space={"kind": "sphere", "n": 2}, action="antipodal",
            complex="octahedron", simplicial_action="antipodal",
            pipeline=[
                {"op": "upper", "planner": "involution2"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-covering-lift"},
                {"op": "cat-upper", "planner": "cat-geodesic"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
                {"op": "check", "method": "cd-bound"},
            ],
            expected=[
                {"invariant": "tc", "stage": 2, "lower": 1, "upper": 1},
                {"invariant": "tc", "stage": "inf", "lower": 1, "upper": 1},
                {"invariant": "cat", "stage": "inf", "lower": 0, "upper": 1},
                {"criterion": "positive"},
                {"cd_bound": True},
            ],
        ),
        Scenario(
            id="s2-rotation",
            space={"kind": "sphere", "n": 2}, action="rotation",
            complex="octahedron", simplicial_action="rotation",
            pipeline=[
                {"op": "upper", "planner": "farber"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-geodesic"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
                {"op": "check", "method": "cd-bound"},
            ],
            expected=[
                {"invariant": "tc", "stage": 1, "lower": 1, "upper": 2},
                {"invariant": "tc", "stage": "inf", "lower": 0, "upper": 2},
                {"criterion": "positive"},
                {"cd_bound": True},
            ],
        ),
        Scenario(
            id="t2-trivial",
            space={"kind": "torus", "n": 2}, action="trivial",
            complex="torus9", simplicial_action="trivial",
            pipeline=[
                {"op": "upper", "planner": "torus-cut"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "cat-upper", "planner": "cat-torus-cut"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
            ],
            expected=[
                {"invariant": "tc", "stage": 1, "lower": 2, "upper": 2},
                {"invariant": "tc", "stage": "inf", "lower": 2, "upper": 2},
                {"invariant": "cat", "stage": "inf", "lower": 2, "upper": 2},
            ],
        ),
        Scenario(
            id="t2-halfturn",
            space={"kind": "torus", "n": 2}, action="torus-halfturn",
            complex="torus43", simplicial_action="torus-halfturn",
            pipeline=[
                {"op": "upper", "planner": "covering-lift"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "lower", "method": "cd-criterion"},
                {"op": "cat-upper", "planner": "cat-torus-cut"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
                {"op": "check", "method": "cd-bound"},
            ],
            expected=[
                {"invariant": "tc", "stage": 2, "lower": 2, "upper": 2},
                {"invariant": "tc", "stage": "inf", "lower": 2, "upper": 2},
                {"invariant": "cat", "stage": "inf", "lower": 1, "upper": 2},
                {"criterion": "positive"},
                {"cd_bound": True},
            ],
        ),
    ]
    for branches in (2, 3):
        scenarios.append(Scenario(
            id=f"wedge-z{branches}",
            space={"kind": "wedge", "branches": branches}, action="wedge-swap",
            complex=f"wedge-triangles-{branches}", simplicial_action="wedge-swap",
            pipeline=[
                {"op": "upper", "planner": "wedge"},
                {"op": "lower", "method": "zero-divisor"},
                {"op": "cat-upper", "planner": "cat-strict-section"},
                {"op": "cat-lower", "method": "orbit-nilpotency"},
            ],
            expected=[
                {"invariant": "tc", "stage": "inf", "upper": 1},
                {"invariant": "tc", "stage": 2, "lower": 1},
                {"invariant": "cat", "stage": "inf", "lower": 1, "upper": 1},
            ],
        ))
    return scenarios


BUILTINS = {s.id: s for s in _builtin_list()}


def load_scenario(path_or_name: str) -> Scenario:
    if path_or_name in BUILTINS:
        return BUILTINS[path_or_name]
    with open(path_or_name, "r", encoding="utf-8") as fh:
        return Scenario.from_dict(json.load(fh))


def run_scenario(path_or_name: str, overrides=None) -> ScenarioResult:
    return run_scenario_obj(load_scenario(path_or_name), overrides)


# ------------------------------------------------------------------ table

TABLE_ROWS = [
    {"action_class": "free", "n": 1, "scenario": "s1-antipodal",
     "stage": "inf", "reference": 1},
    {"action_class": "free", "n": 2, "scenario": "s2-antipodal",
     "stage": "inf", "reference": 1},
    {"action_class": "r=n-1 linear", "n": 1, "scenario": "s1-flip",
     "stage": "inf", "reference": 0},
    {"action_class": "r=n-1 linear", "n": 2, "scenario": "s2-involution",
     "stage": "inf", "reference": 0},
    {"action_class": "orientation-preserving", "n": 2, "scenario": "s2-rotation",
     "stage": 1, "reference": 2},
]

TABLE_SCENARIOS = sorted({row["scenario"] for row in TABLE_ROWS})


def emit_table(report_dir: str):
    """Assemble the desk-scale sphere table from stored scenario reports.

    Returns (rows, missing); each row gets a match flag
    lower <= reference value <= upper.
    """
    loaded = {}
    for fname in sorted(os.listdir(report_dir)):
        if not fname.endswith(".json"):
            continue
        with open(os.path.join(report_dir, fname), "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if "scenario" in data:
            loaded[data["scenario"]] = data
    rows = []
    missing = []
    for row_spec in TABLE_ROWS:
        data = loaded.get(row_spec["scenario"])
        if data is None:
            missing.append(row_spec["scenario"])
            continue
        report = next((r for r in data["reports"]
                       if r["kind"] == "tc" and r["stage"] == row_spec["stage"]),
                      None)
        if report is None:
            missing.append(row_spec["scenario"])
            continue
        lower, upper = report["lower"], report["upper"]
        match = (lower is not None and upper is not None
                 and lower <= row_spec["reference"] <= upper)
        rows.append({"action_class": row_spec["action_class"],
                     "n": row_spec["n"], "stage": row_spec["stage"],
                     "lower": lower, "upper": upper,
                     "reference": row_spec["reference"], "match": bool(match)})
    return rows, missing


def format_table(rows) -> str:
    header = (f"{'action class':<24}{'n':>3}{'stage':>7}{'lower':>7}"
              f"{'upper':>7}{'ref':>7}  match")
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r['action_class']:<24}{r['n']:>3}{str(r['stage']):>7}"
                     f"{r['lower']:>7}{r['upper']:>7}{r['reference']:>7}  "
                     f"{'yes' if r['match'] else 'NO'}")
    return "\n".join(lines)


def table_csv(rows) -> str:
    out = ["action_class,n,stage,lower,upper,reference,match"]
    for r in rows:
        out.append(f"{r['action_class']},{r['n']},{r['stage']},{r['lower']},"
                   f"{r['upper']},{r['reference']},{int(r['match'])}")
    return "\n".join(out) + "\n"
