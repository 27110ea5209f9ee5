"""Evaluator: time/cost model, penalty channels, vetoes, quality scalar."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from printopt.configspace import default_config
from printopt.evaluator import (
    DEFAULT,
    GROUPS,
    PENALTY_NAMES,
    Calibration,
    Evaluator,
    ObjectiveWeights,
    PenaltyReport,
    clamp01,
    group_excess,
    group_scores,
    log_mean_exp,
    logistic,
    objective,
    penalty_staircase,
    penalty_strength,
    penalty_zbond,
    quality_scalar,
)
from printopt.mesh import Orientation, face_slopes, orient


def _cfg(**kw):
    return dataclasses.replace(default_config(), **kw)


def _pens(**kw):
    base = dict.fromkeys(PENALTY_NAMES, 0.0)
    base.update(kw)
    return PenaltyReport(**base)


# ----------------------------------------------------------------- time, cost

def test_cube_default_time_cost_pinned(evaluator_of):
    rep = evaluator_of("cube").evaluate(default_config())
    assert rep.time_s == pytest.approx(249.552, abs=1e-3)
    assert rep.cost_g == pytest.approx(0.57091584, abs=1e-6)


def test_time_is_flow_term_plus_fixed_layer_overhead(evaluator_of):
    # t(v) = volume / v + overhead, so successive halvings of the speed
    # cap double the incremental extrusion share
    ev = evaluator_of("cube")
    t8 = ev.evaluate(_cfg(max_volumetric_speed=8.0)).time_s
    t4 = ev.evaluate(_cfg(max_volumetric_speed=4.0)).time_s
    t2 = ev.evaluate(_cfg(max_volumetric_speed=2.0)).time_s
    assert t2 - t4 == pytest.approx(2 * (t4 - t8), rel=1e-9)
    assert t4 > t8


def test_speed_cap_saturates_at_printer_limit(evaluator_of):
    ev = evaluator_of("cube")
    at_ceiling = ev.evaluate(_cfg(max_volumetric_speed=8.0))
    beyond = ev.evaluate(_cfg(max_volumetric_speed=20.0))
    assert beyond.time_s == at_ceiling.time_s


def test_denser_infill_costs_time_and_material(evaluator_of):
    ev = evaluator_of("cube")
    light = ev.evaluate(_cfg(infill_density=0.1, top_solid_layers=0, bottom_solid_layers=0))
    dense = ev.evaluate(_cfg(infill_density=0.6, top_solid_layers=0, bottom_solid_layers=0))
    assert dense.time_s > light.time_s
    assert dense.cost_g > light.cost_g


def test_brim_adds_first_layer_material(evaluator_of):
    ev = evaluator_of("cube")
    plain = ev.evaluate(default_config())
    brimmed = ev.evaluate(_cfg(brim_width=8.0))
    assert brimmed.cost_g > plain.cost_g
    assert brimmed.time_s >= plain.time_s


def test_support_material_adds_cost_only_when_needed(evaluator_of):
    flat = evaluator_of("cube")
    a = flat.evaluate(default_config())
    b = flat.evaluate(_cfg(support_material=True))
    assert b.cost_g == pytest.approx(a.cost_g)  # nothing to scaffold
    over = evaluator_of("mushroom")
    c = over.evaluate(default_config())
    d = over.evaluate(_cfg(support_material=True))
    assert d.cost_g > c.cost_g


# ------------------------------------------------------------------ penalties

def test_stair_penalty_on_45_degree_ramp(mesh_of):
    slopes = face_slopes(orient(mesh_of("ramp"), Orientation()))
    got = penalty_staircase(slopes, 0.2, DEFAULT)
    c = math.cos(math.radians(45))
    assert got == pytest.approx(0.2 * c * (1 - c) / 0.05, abs=1e-9)
    # thinner layers shrink the terraces proportionally
    assert penalty_staircase(slopes, 0.1, DEFAULT) == pytest.approx(got / 2, abs=1e-9)


def test_stair_penalty_zero_on_axis_aligned_faces(unit_cube):
    slopes = face_slopes(orient(unit_cube, Orientation()))
    # drop the plate-band exclusion so every face counts
    cal = dataclasses.replace(DEFAULT, plate_band_mm=-1.0)
    assert penalty_staircase(slopes, 0.3, cal) == pytest.approx(0.0, abs=1e-12)


def test_stair_penalty_saturates_at_one(mesh_of):
    slopes = face_slopes(orient(mesh_of("ramp"), Orientation()))
    cal = dataclasses.replace(DEFAULT, a_ref=0.001)
    assert penalty_staircase(slopes, 0.3, cal) == 1.0


def test_strength_penalty_endpoints_and_default():
    maxed = _cfg(
        perimeters=6, top_solid_layers=8, bottom_solid_layers=8, infill_density=1.0
    )
    assert penalty_strength(maxed, DEFAULT) == 0.0
    flimsy = _cfg(
        perimeters=1, top_solid_layers=0, bottom_solid_layers=0, infill_density=0.0
    )
    assert penalty_strength(flimsy, DEFAULT) == 1.0
    # default profile: shell 0.12 + 0.225, infill 0.15, shortfall 0.34
    assert penalty_strength(default_config(), DEFAULT) == pytest.approx(0.34, abs=1e-12)


def test_strength_rewards_stronger_infill_patterns():
    rect = penalty_strength(_cfg(infill_pattern="rectilinear"), DEFAULT)
    honey = penalty_strength(_cfg(infill_pattern="honeycomb"), DEFAULT)
    assert honey < rect


def test_zbond_penalty_endpoints():
    calm = _cfg(layer_height=0.05, max_volumetric_speed=2.0)
    # generous layer time keeps every bonding sub-score at zero
    assert penalty_zbond(calm, mean_layer_time_s=60.0, cal=DEFAULT) == 0.0
    hot = _cfg(layer_height=0.30, max_volumetric_speed=20.0)
    p = penalty_zbond(hot, mean_layer_time_s=0.5, cal=DEFAULT)
    assert 0.9 < p <= 1.0


def test_zbond_load_axis_amplifies():
    risky = _cfg(layer_height=0.30, max_volumetric_speed=16.0)
    base = penalty_zbond(risky, mean_layer_time_s=20.0, cal=DEFAULT)
    loaded = penalty_zbond(risky, mean_layer_time_s=20.0, cal=DEFAULT, load_parallel_z=True)
    assert 0 < base < 1
    assert loaded == pytest.approx(min(1.0, base * 1.25))


def test_interior_penalty_vanishes_for_solid_or_all_shell(evaluator_of):
    ev = evaluator_of("cube")
    solid = ev.evaluate(_cfg(infill_density=1.0))
    assert solid.penalties.pi == 0.0
    ring = evaluator_of("ring")
    # 3 mm walls erode away entirely under six perimeters
    shelled = ring.evaluate(_cfg(perimeters=6))
    assert shelled.penalties.pi == 0.0
    hollow = ring.evaluate(_cfg(perimeters=1, infill_density=0.0))
    assert hollow.penalties.pi > 0.0


def test_xy_penalty_monotone_in_compensation(evaluator_of):
    ev = evaluator_of("cube")
    none = ev.evaluate(_cfg(elephant_foot_compensation=0.0, first_layer_height=0.2))
    comped = ev.evaluate(_cfg(elephant_foot_compensation=0.4, first_layer_height=0.2))
    assert none.penalties.xy > 0.0
    assert comped.penalties.xy < none.penalties.xy


def test_stringing_midpoint_and_extremes(evaluator_of):
    assert logistic(0.0) == 0.5
    # one solid body has no island-to-island travel
    cube = evaluator_of("cube").evaluate(default_config())
    assert cube.penalties.stringing == pytest.approx(logistic(-0.08 / 0.03), abs=1e-6)
    two = evaluator_of("disjoint_towers").evaluate(default_config())
    assert two.penalties.stringing > cube.penalties.stringing


def test_seam_placement_scales_travel(evaluator_of):
    ev = evaluator_of("towers")
    nearest = ev.evaluate(_cfg(seam_placement="nearest"))
    rand = ev.evaluate(_cfg(seam_placement="random"))
    assert nearest.penalties.stringing <= rand.penalties.stringing


def test_support_scar_penalty_requires_supports(evaluator_of):
    ev = evaluator_of("mushroom")
    off = ev.evaluate(default_config())
    on = ev.evaluate(_cfg(support_material=True))
    assert off.penalties.support == 0.0
    assert 0.0 < on.penalties.support < 1.0


# --------------------------------------------------------------------- vetoes

def test_flat_part_triggers_nothing(evaluator_of):
    rep = evaluator_of("cube").evaluate(default_config())
    assert rep.triggered_vetoes() == []
    assert not rep.infeasible


def test_floating_body_blocked_without_supports(evaluator_of):
    ev = evaluator_of("floating_cube")
    off = ev.evaluate(default_config())
    assert [v.kind for v in off.triggered_vetoes()] == ["unsupported_island"]
    assert off.infeasible
    assert off.quality == DEFAULT.q_cap
    on = ev.evaluate(_cfg(support_material=True))
    assert "unsupported_island" not in [v.kind for v in on.triggered_vetoes()]


def test_slender_column_blocked(evaluator_of):
    rep = evaluator_of("pillar").evaluate(default_config())
    kinds = [v.kind for v in rep.triggered_vetoes()]
    assert "slender_tower" in kinds
    worst = max(rep.vetoes, key=lambda v: v.risk)
    assert worst.kind == "slender_tower"
    assert worst.risk > 0.99  # 80 mm tall on a 2 mm square


def test_point_contact_blocked_until_brimmed(evaluator_of):
    ev = evaluator_of("sphere")
    bare = ev.evaluate(default_config())
    assert "low_bed_adhesion" in [v.kind for v in bare.triggered_vetoes()]
    brimmed = ev.evaluate(_cfg(brim_width=10.0))
    bare_risk = next(v.risk for v in bare.vetoes if v.kind == "low_bed_adhesion")
    brim_risk = next(v.risk for v in brimmed.vetoes if v.kind == "low_bed_adhesion")
    assert brim_risk < bare_risk


def test_infeasible_quality_cap_orders_below_feasible(evaluator_of):
    bad = evaluator_of("pillar").evaluate(default_config())
    good = evaluator_of("cube").evaluate(default_config())
    assert bad.quality > 1.0 >= good.quality
    assert bad.objective > good.objective


def test_veto_risks_are_probabilities(evaluator_of):
    for name in ("cube", "mushroom", "bridge", "floating_cube"):
        rep = evaluator_of(name).evaluate(default_config())
        assert len(rep.vetoes) == 5
        for v in rep.vetoes:
            assert 0.0 <= v.risk <= 1.0
            assert v.triggered == (v.risk >= 0.5)
            assert v.evidence


# ------------------------------------------------------- aggregation, scoring

def test_smooth_max_bounds():
    vals = [0.1, 0.7, 0.3]
    smax = log_mean_exp(vals, 8.0)
    assert max(vals) - math.log(len(vals)) / 8.0 <= smax <= max(vals)
    assert log_mean_exp([0.5], 8.0) == pytest.approx(0.5)


def test_group_membership_covers_all_penalties():
    members = [n for tag in GROUPS for n in GROUPS[tag]]
    assert sorted(members) == sorted(PENALTY_NAMES)


def test_group_excess_clamps_to_unit_interval():
    scores = {"S": 1.0, "F": 0.25, "P": 0.1}
    e = group_excess(scores, DEFAULT)
    assert e["S"] == 1.0
    assert e["F"] == 0.0
    assert e["P"] == 0.0


def test_quality_worked_example():
    # excesses (0.4, 0.2, 0): 0.4 + (0.5/3)(0.6)(0.6) = 0.46
    e_max = 0.4
    q = e_max + (0.5 / 3.0) * (1 - e_max) * (0.4 + 0.2 + 0.0)
    assert q == pytest.approx(0.46, abs=1e-12)
    # reproduce through the real path with synthetic penalties
    goals = {"S": DEFAULT.goal_s, "F": DEFAULT.goal_f, "P": DEFAULT.goal_p}
    stair = goals["S"] + 0.4 * (1 - goals["S"])
    pens = _pens(stair=stair, strength=goals["F"] + 0.2 * (1 - goals["F"]))
    cal = dataclasses.replace(DEFAULT, q_sharpness=1e5)  # max is effectively hard
    qq, scores, excess = quality_scalar(pens, any_veto=False, cal=cal)
    assert excess["S"] == pytest.approx(0.4, abs=1e-4)
    assert excess["F"] == pytest.approx(0.2, abs=1e-4)
    assert qq == pytest.approx(0.46, abs=1e-3)


def test_quality_extremes():
    q0, _, _ = quality_scalar(_pens(), any_veto=False, cal=DEFAULT)
    assert q0 == 0.0
    q1, _, _ = quality_scalar(
        PenaltyReport(*([1.0] * len(PENALTY_NAMES))), any_veto=False, cal=DEFAULT
    )
    assert q1 == pytest.approx(1.0)
    qv, _, _ = quality_scalar(_pens(), any_veto=True, cal=DEFAULT)
    assert qv == DEFAULT.q_cap


@settings(max_examples=2000, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=7, max_size=7))
def test_quality_bounded_for_random_penalties(vals):
    q, _, _ = quality_scalar(PenaltyReport(*vals), any_veto=False, cal=DEFAULT)
    assert 0.0 <= q <= 1.0


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=7, max_size=7))
def test_quality_reduces_to_max_excess_without_interaction(vals):
    cal = dataclasses.replace(DEFAULT, q_lambda=0.0)
    q, _, excess = quality_scalar(PenaltyReport(*vals), any_veto=False, cal=cal)
    assert q == pytest.approx(max(excess.values()), abs=1e-12)


def test_objective_substitutions():
    w = ObjectiveWeights(t_r=100.0, c_r=10.0)
    # at the references both saturating terms equal 1/2
    assert objective(100.0, 10.0, 0.0, w) == pytest.approx(0.10, abs=1e-12)
    assert objective(0.0, 0.0, 1.0, w) == pytest.approx(0.8, abs=1e-12)
    got = objective(200.0, 10.0, 0.25, w)
    assert got == pytest.approx(0.1 * (2 / 3) + 0.05 + 0.2, abs=1e-12)


def test_objective_weight_validation():
    with pytest.raises(ValueError):
        ObjectiveWeights(w_t=-0.1)
    with pytest.raises(ValueError):
        ObjectiveWeights(t_r=0.0)


# ---------------------------------------------------------------- integration

def test_reports_are_bit_identical_across_calls(mesh_of):
    a = Evaluator(mesh_of("l_bracket")).evaluate(default_config())
    b = Evaluator(mesh_of("l_bracket")).evaluate(default_config())
    assert a.to_dict() == b.to_dict()


def test_references_are_medians_of_a_fixed_probe(mesh_of):
    ev = Evaluator(mesh_of("cube"))
    t_r, c_r = ev.compute_references()
    assert t_r > 0 and c_r > 0
    assert ev.weights.t_r == t_r
    assert ev.weights.c_r == c_r
    again = Evaluator(mesh_of("cube"))
    assert again.compute_references() == (t_r, c_r)


def test_references_grow_with_part_size(mesh_of, unit_cube):
    from printopt.mesh import build_mesh

    big = build_mesh(
        mesh_of("cube").vertices * 2.0, mesh_of("cube").triangles, name="big"
    )
    small_t, small_c = Evaluator(mesh_of("cube")).compute_references()
    big_t, big_c = Evaluator(big).compute_references()
    assert big_t > small_t
    assert big_c > small_c


def test_explicit_references_skip_the_probe(mesh_of):
    w = ObjectiveWeights(t_r=100.0, c_r=1.0)
    ev = Evaluator(mesh_of("cube"), weights=w)
    assert ev.weights.t_r == 100.0
    rep = ev.evaluate(default_config())
    nt = (rep.time_s / 100.0) / (1 + rep.time_s / 100.0)
    nc = rep.cost_g / (1 + rep.cost_g)
    assert rep.objective == pytest.approx(0.1 * nt + 0.1 * nc + 0.8 * rep.quality)


def test_load_axis_only_hurts_vertical_stacking(evaluator_of):
    ev = evaluator_of("cube")
    risky = _cfg(layer_height=0.30, max_volumetric_speed=18.0)
    plain = ev.evaluate(risky)
    z_load = ev.evaluate(risky, load_axis=np.array([0.0, 0.0, 1.0]))
    x_load = ev.evaluate(risky, load_axis=np.array([1.0, 0.0, 0.0]))
    assert z_load.penalties.zbond > plain.penalties.zbond
    assert x_load.penalties.zbond == plain.penalties.zbond


def test_supports_resolve_overhang_failures(evaluator_of):
    ev = evaluator_of("floating_cube")
    off = ev.evaluate(default_config())
    on = ev.evaluate(_cfg(support_material=True))
    assert off.infeasible and not on.infeasible
    assert on.objective < off.objective


def test_report_serializes_to_plain_json_types(evaluator_of):
    import json

    rep = evaluator_of("bridge").evaluate(default_config())
    text = json.dumps(rep.to_dict(), sort_keys=True)
    assert "vetoes" in text and "penalties" in text


def test_calibration_round_trip_rejects_unknown_fields():
    doc = DEFAULT.to_json()
    assert Calibration.from_json(doc) == DEFAULT
    import json

    broken = json.loads(doc)
    broken["nozzle_temp"] = 210
    with pytest.raises(ValueError):
        Calibration.from_json(json.dumps(broken))
