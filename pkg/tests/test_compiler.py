"""Guidance compiler: residual templates, aggregation, V(x), gradients."""

import dataclasses
import json

import numpy as np
import pytest

from printopt.compiler import (
    Clause,
    action_weight,
    aggregate_clauses,
    clause_residual,
    compile_guidance,
    default_magnitude,
    from_clauses,
    normalize,
)
from printopt.configspace import ENCODED_DIM, decode, default_config, encode, snap
from printopt.errors import ActionCompileError
from printopt.guidance import CATALOG, CorrectiveAction


def _values(**kw):
    def value_of(name):
        return kw[name]

    return value_of


def _indicator(selected):
    def indicator_of(name, target):
        return 1.0 if selected.get(name) == target else 0.0

    return indicator_of


def _act(id, mode, magnitude=None, target=None, **kw):
    return CorrectiveAction(id=id, mode=mode, magnitude=magnitude, target=target, **kw)


# ----------------------------------------------------------------- templates

def test_directional_residual():
    c = Clause("directional", ("layer_height",), k=0.1, direction=1, anchor=0.20)
    # moved 0.05 of the requested 0.10
    assert clause_residual(c, _values(layer_height=0.25), None) == pytest.approx(0.05, abs=1e-12)
    # full step or overshoot clears the residual
    assert clause_residual(c, _values(layer_height=0.30), None) == 0.0
    assert clause_residual(c, _values(layer_height=0.35), None) == 0.0
    # moving the wrong way makes it worse
    assert clause_residual(c, _values(layer_height=0.15), None) == pytest.approx(0.15, abs=1e-12)


def test_equality_residual_categorical():
    c = Clause("equality", ("infill_pattern",), target="gyroid")
    assert clause_residual(c, None, _indicator({"infill_pattern": "grid"})) == 1.0
    assert clause_residual(c, None, _indicator({"infill_pattern": "gyroid"})) == 0.0


def test_equality_residual_numeric():
    c = Clause("equality", ("brim_width",), alpha=3.0)
    assert clause_residual(c, _values(brim_width=5.0), None) == pytest.approx(4.0)
    assert clause_residual(c, _values(brim_width=3.0), None) == 0.0


def test_range_residual():
    c = Clause("range", ("perimeters",), lo=2.0, hi=4.0)
    assert clause_residual(c, _values(perimeters=5.0), None) == 1.0
    assert clause_residual(c, _values(perimeters=1.5), None) == pytest.approx(0.5)
    assert clause_residual(c, _values(perimeters=3.0), None) == 0.0


def test_margin_residual():
    c = Clause("margin", ("first_layer_height", "layer_height"), delta=0.05)
    got = clause_residual(c, _values(first_layer_height=0.20, layer_height=0.18), None)
    assert got == pytest.approx(0.03, abs=1e-12)
    ok = clause_residual(c, _values(first_layer_height=0.30, layer_height=0.18), None)
    assert ok == 0.0


def test_ratio_residual():
    c = Clause("ratio", ("first_layer_height", "layer_height"), beta=1.5)
    got = clause_residual(c, _values(first_layer_height=2.0, layer_height=1.0), None)
    exact = (2.0 / (1.0 + 1e-6) - 1.5) ** 2
    assert got == pytest.approx(exact, abs=1e-15)
    assert got == pytest.approx(0.25, abs=1e-5)


def test_sum_cap_residual():
    c = Clause("sum_cap", ("top_solid_layers", "bottom_solid_layers"), k=5.0)
    assert clause_residual(c, _values(top_solid_layers=4, bottom_solid_layers=3), None) == 2.0
    assert clause_residual(c, _values(top_solid_layers=2, bottom_solid_layers=3), None) == 0.0


def test_monotone_sequence_residual():
    c = Clause("monotone_sequence", ("a", "b", "c"))
    assert clause_residual(c, _values(a=3.0, b=2.0, c=5.0), None) == pytest.approx(1.0)
    assert clause_residual(c, _values(a=1.0, b=2.0, c=3.0), None) == 0.0


def test_unknown_template_rejected():
    with pytest.raises(ActionCompileError):
        clause_residual(Clause("fancy", ("x",)), _values(x=1.0), None)


# ------------------------------------------------------------- normalization

def test_normalize_worked_values():
    assert normalize(0.0) == 0.0
    assert normalize(1.0) == 0.5
    assert normalize(3.0) == 0.75
    assert normalize(1e9) < 1.0  # never reaches one


# ---------------------------------------------------------------- aggregation

def test_soft_and_punishes_any_miss():
    assert aggregate_clauses([0.5, 0.5], [1.0, 1.0], "and") == pytest.approx(0.75)
    assert aggregate_clauses([0.0, 0.0], [1.0, 1.0], "and") == 0.0
    # weight exponent sharpens a single clause
    single = aggregate_clauses([0.5], [2.0], "and")
    assert single == pytest.approx(1 - 0.25)


def test_soft_or_satisfied_by_any_hit():
    assert aggregate_clauses([0.5, 0.0], [1.0, 1.0], "or") == 0.0
    assert aggregate_clauses([0.5, 0.5], [1.0, 1.0], "or") == pytest.approx(0.25)


def test_unknown_aggregator_rejected():
    with pytest.raises(ActionCompileError):
        aggregate_clauses([0.5], [1.0], "xor")


def test_action_scores_combine_by_product_complement():
    # residual 0.25 -> score 0.2; residual 1.0 -> score 0.5; V = 0.6
    config = dataclasses.replace(default_config(), brim_width=5.0)
    g = from_clauses(
        [
            ([Clause("range", ("brim_width",), lo=0.0, hi=4.75)], "and"),
            ([Clause("range", ("brim_width",), lo=6.0, hi=10.0)], "and"),
        ]
    )
    assert g.violation(config) == pytest.approx(1 - 0.8 * 0.5, abs=1e-12)
    solo = from_clauses([([Clause("range", ("brim_width",), lo=0.0, hi=4.75)], "and")])
    assert solo.violation(config) == pytest.approx(0.2, abs=1e-12)


# ------------------------------------------------------------ action lowering

def test_directional_action_uses_incumbent_anchor():
    inc = default_config()
    g = compile_guidance([_act("decrease_layer_height", "decrease", magnitude=0.05)], inc)
    (ca,) = g.actions
    (clause,) = ca.clauses
    assert clause.template == "directional"
    assert clause.direction == -1
    assert clause.k == 0.05
    assert clause.anchor == inc.layer_height
    assert g.implicated == frozenset({"layer_height"})
    assert g.incumbent_residuals == ((pytest.approx(0.05),),)


def test_switch_action_lowers_to_one_equality_clause():
    g = compile_guidance(
        [_act("switch_infill_pattern", "switch", target="gyroid")], default_config()
    )
    (ca,) = g.actions
    assert ca.aggregator == "and"
    (clause,) = ca.clauses
    assert clause.template == "equality"
    assert clause.target == "gyroid"
    assert g.implicated == frozenset({"infill_pattern"})


def test_conjunctive_action_emits_two_clauses():
    g = compile_guidance([_act("strengthen_shell", "increase")], default_config())
    (ca,) = g.actions
    assert ca.aggregator == "and"
    assert {c.params[0] for c in ca.clauses} == {"perimeters", "infill_density"}
    assert g.implicated == frozenset({"perimeters", "infill_density"})


def test_disjunctive_action_uses_soft_or():
    g = compile_guidance([_act("slow_or_thin", "decrease")], default_config())
    (ca,) = g.actions
    assert ca.aggregator == "or"
    assert len(ca.clauses) == 2


def test_implicated_set_is_the_union_over_actions():
    g = compile_guidance(
        [
            _act("decrease_layer_height", "decrease", magnitude=0.05),
            _act("increase_brim_width", "increase"),
        ],
        default_config(),
    )
    assert g.implicated == frozenset({"layer_height", "brim_width"})


def test_orientation_switch_implicates_one_axis():
    g = compile_guidance([_act("reorient_x", "switch", target=90)], default_config())
    assert g.implicated == frozenset({"orientation_x"})


def test_default_magnitude_is_tenth_of_range():
    assert default_magnitude("layer_height") == pytest.approx(0.025)
    assert default_magnitude("brim_width") == pytest.approx(1.0)
    with pytest.raises(ActionCompileError):
        default_magnitude("infill_pattern")


def test_action_weight_importance_confidence_floor():
    assert action_weight(_act("increase_brim_width", "increase")) == 1.0
    assert action_weight(_act("increase_brim_width", "increase", importance="high")) == 2.0
    assert action_weight(_act("increase_brim_width", "increase", importance="low")) == 0.5
    tiny = _act("increase_brim_width", "increase", importance="low", confidence=0.1)
    assert action_weight(tiny) == 0.25


def test_unknown_action_and_empty_list_rejected():
    with pytest.raises(ActionCompileError):
        compile_guidance([_act("polish_nozzle", "increase")], default_config())
    with pytest.raises(ActionCompileError):
        compile_guidance([], default_config())


# -------------------------------------------------------- violation behavior

def test_violation_zero_exactly_when_advice_is_realized():
    inc = default_config()  # support off, brim 0
    g = compile_guidance(
        [
            _act("enable_support", "switch", target="on"),
            _act("increase_brim_width", "increase", magnitude=2.0),
        ],
        inc,
    )
    done = dataclasses.replace(inc, support_material=True, brim_width=3.0)
    assert g.violation(done) == 0.0
    partial = dataclasses.replace(inc, support_material=True, brim_width=1.0)
    assert 0.0 < g.violation(partial) < 1.0
    ignored = g.violation(inc)
    assert ignored > g.violation(partial)


def test_violation_bounded_on_random_candidates():
    rng = np.random.default_rng(0)
    inc = default_config()
    pools = snap(rng.random((2500, ENCODED_DIM)))
    for actions in _random_action_lists(rng, 4):
        g = compile_guidance(actions, inc)
        v = g.violation_batch(pools)
        assert v.shape == (len(pools),)
        assert np.all(v >= 0.0)
        assert np.all(v <= 1.0)


def test_batch_violation_matches_scalar_on_decoded_rows():
    rng = np.random.default_rng(7)
    inc = default_config()
    rows = snap(rng.random((20, ENCODED_DIM)))
    for actions in _random_action_lists(rng, 3):
        g = compile_guidance(actions, inc)
        batch = g.violation_batch(rows)
        for i, row in enumerate(rows):
            assert batch[i] == pytest.approx(g.violation(decode(row)), abs=1e-12)


def _random_action_lists(rng, count):
    directional = [e for e in CATALOG.values() if e.mode in ("increase", "decrease")]
    switches = [e for e in CATALOG.values() if e.mode == "switch"]
    out = []
    for _ in range(count):
        actions = []
        for entry in rng.choice(directional, size=2, replace=False):
            mag = None if rng.random() < 0.5 else float(rng.uniform(0.01, 1.0))
            actions.append(_act(entry.id, entry.mode, magnitude=mag))
        sw = switches[int(rng.integers(len(switches)))]
        target = sw.targets[int(rng.integers(len(sw.targets)))]
        actions.append(_act(sw.id, "switch", target=target))
        out.append(actions)
    return out


def test_gradient_matches_finite_differences():
    inc = default_config()
    g = compile_guidance(
        [
            _act("increase_brim_width", "increase", magnitude=4.0),
            _act("decrease_layer_height", "decrease", magnitude=0.05),
        ],
        inc,
    )
    # away from the kinks both residuals are active and smooth
    probe = dataclasses.replace(inc, brim_width=1.0, layer_height=0.18)
    grad = g.gradient(probe)
    h = 1e-6
    for name in ("brim_width", "layer_height"):
        up = dataclasses.replace(probe, **{name: getattr(probe, name) + h})
        dn = dataclasses.replace(probe, **{name: getattr(probe, name) - h})
        fd = (g.violation(up) - g.violation(dn)) / (2 * h)
        assert grad[name] == pytest.approx(fd, rel=1e-4, abs=1e-9)


def test_gradient_skips_discrete_parameters():
    g = compile_guidance(
        [
            _act("increase_perimeters", "increase", magnitude=1.0),
            _act("switch_seam", "switch", target="nearest"),
        ],
        default_config(),
    )
    grad = g.gradient(default_config())
    assert "seam_placement" not in grad
    assert "perimeters" not in grad  # integer-valued, no smooth descent direction


def test_audit_trail_is_json_serializable():
    g = compile_guidance(
        [
            _act("strengthen_shell", "increase", importance="high"),
            _act("enable_support", "switch", target="on", rationale="orphan body"),
        ],
        default_config(),
    )
    doc = g.audit_dict()
    assert doc["implicated"] == sorted(doc["implicated"])
    text = json.dumps(doc)
    assert "orphan body" in text
    assert len(doc["actions"]) == 2
    assert all("incumbent_residuals" in a for a in doc["actions"])
