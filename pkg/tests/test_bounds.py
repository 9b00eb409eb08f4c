import numpy as np
import pytest

from efftc.bounds import (
    BoundValue,
    cd_bound_check,
    cd_positivity_criterion,
    chain_checks,
    effective_zero_divisors,
    orbit_nilpotency_lower_bound,
    reconcile,
    require_consistent,
    verify_cat_cover,
    verify_cover,
    zero_divisor_cup_length,
)
from efftc.complexes import coboundary_space, cohomology, cup_product
from efftc.errors import ContradictionError
from efftc.models import (
    circle_antipodal_quotient,
    circle_flip_quotient,
    hexagon_antipodal_action,
    hexagon_reflection_action,
    octahedron_antipodal_action,
    octahedron_rotation_action,
    point_complex,
    point_trivial,
    sphere_antipodal,
    sphere_codim1,
    sphere_swap_action,
    torus43_halfturn_action,
    torus9_complex,
    torus_trivial,
    wedge_swap_action,
)
from efftc.pathspace import Arc, Circle, trivial_space_action
from efftc.planners import (
    adversarial_sphere_cover,
    arc_cover,
    circle_cover,
    cover_from_covering_lift,
    cover_from_strict_section,
    farber_sphere_cover,
    point_cover,
    torus_cut_cover,
)
from efftc.symmetry import trivial_action


# ------------------------------------------------------------ verification

def test_point_cover_certifies_zero():
    cert = verify_cover(point_cover(point_trivial()), grid=4)
    assert cert.certified and cert.bound == 0


def test_farber_circle_certifies_one():
    cert = verify_cover(farber_sphere_cover(sphere_antipodal(1)), grid=32)
    assert cert.certified and cert.bound == 1


def test_covering_lift_circle_certifies_one():
    model = circle_antipodal_quotient(sphere_antipodal(1))
    qcover = circle_cover(trivial_space_action(Circle(np.pi)))
    cert = verify_cover(cover_from_covering_lift(model, qcover), grid=32)
    assert cert.certified and cert.bound == 1


def test_strict_section_flip_certifies_zero():
    model = circle_flip_quotient(sphere_codim1(1))
    cover = cover_from_strict_section(
        model, arc_cover(trivial_space_action(Arc(np.pi))))
    cert = verify_cover(cover, grid=32)
    assert cert.certified and cert.bound == 0


def test_torus_cover_certifies_two():
    cert = verify_cover(torus_cut_cover(torus_trivial()), grid=32)
    assert cert.certified and cert.bound == 2


def test_adversarial_refuted_by_continuity():
    adv = adversarial_sphere_cover(sphere_antipodal(2), honest_membership=False)
    cert = verify_cover(adv, grid=16)
    assert not cert.certified
    assert cert.failure["reason"] == "continuity"


def test_adversarial_refuted_by_coverage():
    adv = adversarial_sphere_cover(sphere_antipodal(2), honest_membership=True)
    cert = verify_cover(adv, grid=16)
    assert not cert.certified
    assert cert.failure["reason"] == "coverage"


def test_verify_monotone_in_resolution():
    cover = farber_sphere_cover(sphere_antipodal(1))
    fine = verify_cover(cover, grid=64)
    coarse = verify_cover(cover, grid=16)
    assert fine.certified and coarse.certified


def test_verify_cat_cover_arc_bound_zero():
    from efftc.planners import cat_cover_from_strict_section
    act = sphere_codim1(1)
    model = circle_flip_quotient(act)
    base = np.array([0.0, 1.0])
    qcat = arc_cover(trivial_space_action(Arc(np.pi)))
    cover = cat_cover_from_strict_section(model, qcat, base)
    cert = verify_cat_cover(cover, grid=32)
    assert cert.certified and cert.bound == 0


def test_verify_cat_restricts_tc_cover():
    # a tc cover used as a based cover certifies a cat bound
    cover = farber_sphere_cover(sphere_antipodal(1))
    cert = verify_cat_cover(cover, basepoint=np.array([1.0, 0.0]), grid=32)
    assert cert.certified and cert.bound == 1


def test_validation_refutes_broken_section():
    # a cover whose section jumps to an unrelated point must be refuted
    from efftc.planners import CoverSet, PlannerCover
    act = sphere_antipodal(1)
    space = act.space

    def margin(X, Y):
        return np.full(X.shape[0], np.inf)

    def legs(X, Y, m):
        bad = np.broadcast_to(np.array([0.0, 1.0]), Y.shape)
        return [space.constant_path(X, m), space.constant_path(bad, m)]

    cover = PlannerCover(action=act, sets=[CoverSet("bad", 2, margin, legs)],
                         stage=2)
    cert = verify_cover(cover, grid=8)
    assert not cert.certified
    assert cert.failure["reason"] == "validation"


# ------------------------------------------------------------ lower bounds

def test_zero_divisor_point():
    assert zero_divisor_cup_length(trivial_action(point_complex())) == 0


def test_zero_divisor_trivial_torus_is_two():
    act = trivial_action(torus9_complex())
    # independent oracle: exhaustive products of a kernel basis
    diag, P, kernel = effective_zero_divisors(act)
    cb = {d: coboundary_space(P, d) for d in range(1, P.dimension + 1)}
    deg1 = [c for c in kernel if c.degree == 1]
    assert any(not cb[2].contains(cup_product(P, a, b).coeffs)
               for a in deg1 for b in deg1)
    triple_zero = True
    for a in deg1:
        for b in deg1:
            ab = cup_product(P, a, b)
            if not ab.coeffs.any():
                continue
            for c in deg1:
                abc = cup_product(P, ab, c)
                if abc.degree <= P.dimension and abc.coeffs.any() \
                        and not cb[3].contains(abc.coeffs):
                    triple_zero = False
    assert triple_zero
    assert zero_divisor_cup_length(act) == 2


def test_zero_divisor_hexagon_antipodal_at_least_one():
    assert zero_divisor_cup_length(hexagon_antipodal_action()) == 1


def test_zero_divisor_octahedron_antipodal():
    assert zero_divisor_cup_length(octahedron_antipodal_action()) == 1


def test_zero_divisor_halfturn_torus_is_two():
    assert zero_divisor_cup_length(torus43_halfturn_action()) == 2


def test_criterion_codim1_sphere_positive():
    rep = cd_positivity_criterion(sphere_swap_action())
    assert rep.verdict == "positive"
    assert rep.cd_x == 2
    assert rep.subgroup_cds == [((0, 1), 1)]  # fixed circle
    assert rep.lower_bound == 1


def test_criterion_circle_inconclusive():
    rep = cd_positivity_criterion(hexagon_antipodal_action())
    assert rep.verdict == "inconclusive"
    assert rep.hypothesis_ok
    assert rep.lower_bound == 0


def test_criterion_trivial_group_positive():
    rep = cd_positivity_criterion(trivial_action(torus9_complex()))
    assert rep.verdict == "positive"  # |G| = 1 <= cd = 2


def test_criterion_rotation_positive():
    rep = cd_positivity_criterion(octahedron_rotation_action())
    assert rep.verdict == "positive"
    assert rep.subgroup_cds == [((0, 1), 0)]  # two fixed poles


def test_cd_bound_trivial_group():
    r = cd_bound_check(trivial_action(torus9_complex()))
    assert r.cd_diagonal == r.cd_x == 2
    assert r.passed


@pytest.mark.parametrize("action,expect_cd", [
    (hexagon_antipodal_action, 1),
    (hexagon_reflection_action, 1),
])
def test_cd_bound_hexagons(action, expect_cd):
    r = cd_bound_check(action())
    assert r.cd_diagonal == expect_cd
    assert r.bound == 1 + 2 - 1
    assert r.passed and r.hypothesis_ok


def test_cd_bound_sphere_swap():
    r = cd_bound_check(sphere_swap_action())
    assert r.cd_diagonal == 2
    assert r.bound == 3
    assert r.passed


def test_cd_bound_sublists():
    act = hexagon_antipodal_action()
    for L in ([0], [1], [0, 1]):
        r = cd_bound_check(act, L)
        assert r.passed
        assert r.bound == 1 + len(L) - 1


def test_orbit_nilpotency_values():
    assert orbit_nilpotency_lower_bound(trivial_action(torus9_complex())) == 2
    assert orbit_nilpotency_lower_bound(hexagon_antipodal_action()) == 0
    assert orbit_nilpotency_lower_bound(wedge_swap_action(2)) == 1


def test_orbit_nilpotency_point():
    assert orbit_nilpotency_lower_bound(trivial_action(point_complex())) == 0


# ---------------------------------------------------------- reconciliation

def test_reconcile_consistent():
    r = reconcile("s", "tc", 2, [BoundValue(1, "zd")], [BoundValue(1, "cover")])
    assert r.status == "consistent"
    assert r.lower.value == r.upper.value == 1


def test_reconcile_contradiction_aborts():
    r = reconcile("s", "tc", 2, [BoundValue(2, "zd")], [BoundValue(1, "cover")])
    assert r.status == "contradiction"
    with pytest.raises(ContradictionError):
        require_consistent([r])


def test_reconcile_takes_extremes():
    r = reconcile("s", "tc", "inf",
                  [BoundValue(0, "trivial"), BoundValue(1, "zd")],
                  [BoundValue(3, "a"), BoundValue(2, "b")])
    assert r.lower.value == 1 and r.lower.source == "zd"
    assert r.upper.value == 2 and r.upper.source == "b"


def test_chain_checks_flags_only_forced_violations():
    tc = reconcile("s", "tc", "inf", [BoundValue(0, "t")], [BoundValue(0, "c")])
    cat = reconcile("s", "cat", "inf", [BoundValue(1, "nil")], [BoundValue(1, "c")])
    checks = chain_checks(tc, cat)
    by_name = {c["name"]: c for c in checks}
    assert not by_name["cat<=tc"]["ok"]          # cat lower 1 > tc upper 0
    assert not by_name["zero-equivalence"]["ok"]
    ok_tc = reconcile("s", "tc", "inf", [BoundValue(1, "t")], [BoundValue(1, "c")])
    ok_cat = reconcile("s", "cat", "inf", [BoundValue(0, "t")], [BoundValue(1, "c")])
    assert all(c["ok"] for c in chain_checks(ok_tc, ok_cat))


def test_cd_bound_holds_on_all_catalog_actions():
    # every catalog action satisfying the fixed-set hypothesis passes
    from efftc.scenarios import BUILTINS, build_bundle
    for name in BUILTINS:
        bundle = build_bundle(BUILTINS[name])
        rep = cd_bound_check(bundle.group_action)
        if rep.hypothesis_ok:
            assert rep.passed, (name, rep)
