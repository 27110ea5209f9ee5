"""Deterministic rule-table expert used as an offline guidance source.

Triage mirrors how the objective is built: anything that blocks the
print outranks finish concerns, and a quality pressure only counts as a
problem while its group sits above goal (below goal it contributes
nothing to Obj, so "fixing" it would just burn time). When every group
is at goal the part is as good as the objective can see, and the expert
spends the remaining margin on throughput instead.

Replies render as the same JSON wire format a remote provider returns,
so both paths share one parser.
"""

from __future__ import annotations

import json

from ..evaluator.calibration import DEFAULT as _CAL
from ..evaluator.report import GROUPS, PENALTY_NAMES, VETO_KINDS, EvaluationReport
from .schema import CorrectiveAction, GuidanceResponse

_GOALS = {"S": _CAL.goal_s, "F": _CAL.goal_f, "P": _CAL.goal_p}

_A = CorrectiveAction

# per-issue playbooks, most direct lever first; truncated to the budget
RULES: dict[str, tuple[CorrectiveAction, ...]] = {
    "unsupported_island": (
        _A("enable_support", "switch", target="on",
           rationale="islands need something to land on"),
    ),
    "slender_tower": (
        _A("reorient_x", "switch", target=90,
           rationale="lay the tall axis down"),
        _A("increase_brim_width", "increase", magnitude=3.0,
           rationale="wider base resists wobble"),
    ),
    "low_bed_adhesion": (
        _A("increase_brim_width", "increase", magnitude=3.0,
           rationale="brim grows the effective footprint"),
    ),
    "collapsing_overhang": (
        _A("enable_support", "switch", target="on",
           rationale="steep faces need scaffolding"),
        _A("reorient_x", "switch", target=180,
           rationale="flipping may turn overhangs into floors"),
    ),
    "long_bridge": (
        _A("enable_support", "switch", target="on",
           rationale="break the span with scaffolding"),
        _A("reorient_x", "switch", target=90,
           rationale="turning the span upright removes the bridge"),
    ),
    "stair": (
        _A("decrease_layer_height", "decrease", magnitude=0.05,
           rationale="thinner layers shrink the steps"),
        _A("reorient_x", "switch", target=90,
           rationale="standing sloped faces upright removes the steps"),
    ),
    "strength": (
        _A("increase_perimeters", "increase", magnitude=1.0,
           rationale="walls carry most of the load"),
        _A("increase_infill_density", "increase", magnitude=0.1,
           rationale="denser infill backs up the shell"),
    ),
    "zbond": (
        _A("decrease_volumetric_speed", "decrease", magnitude=2.0,
           rationale="cooler, slower beads weld better"),
        _A("decrease_layer_height", "decrease", magnitude=0.05,
           rationale="thinner layers bond over more area"),
    ),
    "pi": (
        _A("increase_infill_density", "increase", magnitude=0.1,
           rationale="more infill contact under the skin"),
        _A("switch_infill_pattern", "switch", target="gyroid",
           rationale="gyroid touches the perimeter more often"),
    ),
    "xy": (
        _A("increase_elephant_foot_compensation", "increase", magnitude=0.1,
           rationale="trim the squished first-layer bulge"),
        _A("increase_first_layer_height", "increase", magnitude=0.05,
           rationale="a taller first layer squishes less"),
    ),
    "stringing": (
        _A("switch_seam", "switch", target="nearest",
           rationale="shorter hops between loops"),
        _A("reorient_x", "switch", target=90,
           rationale="fewer islands per layer means fewer travel hops"),
    ),
    "support": (
        _A("reorient_x", "switch", target=180,
           rationale="another orientation may need less scaffold"),
        _A("disable_support", "switch", target="off",
           rationale="drop supports if the part can stand alone"),
    ),
}

_GROUP_OF = {name: tag for tag, members in GROUPS.items() for name in members}


def issue_severity(report: EvaluationReport) -> dict[str, float]:
    """Objective-aligned severity per penalty.

    A penalty scores its raw value only while its group's excess is
    positive; a group at or under goal contributes nothing to Obj, so
    its members rank zero no matter their raw values.
    """
    pens = report.penalties.as_dict()
    return {
        name: pens[name] if report.group_excess[_GROUP_OF[name]] > 0 else 0.0
        for name in PENALTY_NAMES
    }


def worst_issue(report: EvaluationReport) -> str | None:
    """Triggered check with the highest risk, else the costliest pressure.

    None means nothing is hurting the objective right now.
    """
    triggered = [v for v in report.vetoes if v.triggered]
    if triggered:
        return min(triggered, key=lambda v: (-v.risk, VETO_KINDS.index(v.kind))).kind
    sev = issue_severity(report)
    best = min(PENALTY_NAMES, key=lambda n: (-sev[n], PENALTY_NAMES.index(n)))
    return best if sev[best] > 0 else None


# when every group sits at or under its goal there is nothing left to
# fix, so the advice flips from repair to reclaiming print time: free the
# four throughput levers and let the search spend the quality margin
THROUGHPUT_ACTIONS: tuple[CorrectiveAction, ...] = (
    _A("coarsen_for_speed", "increase",
       rationale="quality goals are met with margin; trade finish for time"),
    _A("lighten_structure", "decrease",
       rationale="strength goals are met; drop material the part does not need"),
)

# persistent staircasing pressure at goal means sloped faces that thin
# layers alone cannot buy out. The repair rule already biases rotations
# about x; here the complementary quarter turn about y goes together
# with coarsening, because a flip only pays once layers grow with it.
REORIENT_ACTIONS: tuple[CorrectiveAction, ...] = (
    _A("reorient_y", "switch", target=90,
       rationale="roll the part so the sloped faces stand upright"),
    _A("coarsen_for_speed", "increase",
       rationale="with the slope gone, thicker layers stop costing finish"),
)

# scaffolding and inter-island travel both scale with how the part
# rests on the bed, so for parts paying either tax the margin-spending
# move pairs coarsening with trying a different resting face. Lying a
# part down can shed most of its layer count, and that only shows up by
# evaluating it.
TIME_HUNT_ACTIONS: tuple[CorrectiveAction, ...] = (
    _A("coarsen_for_speed", "increase",
       rationale="remaining quality margin is thin; keep trading finish for time"),
    _A("reorient_x", "switch", target=90,
       rationale="a different resting face may shorten the print"),
)

# functional margin spent and no slopes left: the remaining waste is
# structural, so question the scaffolding and the resting axis
STRUCTURAL_ACTIONS: tuple[CorrectiveAction, ...] = (
    _A("disable_support", "switch", target="off",
       rationale="supports cost time and material; check the part stands alone"),
    _A("reorient_x", "switch", target=90,
       rationale="a quarter turn may need less scaffolding"),
)

# raw stair value that still reads as "this part has real slopes"
STAIR_SLOPE_FLOOR = 0.15
# functional-group margin below this counts as spent
MARGIN_TAU = 0.05
# raw stringing above the background level of a single-footprint part
TRAVEL_FLOOR = 0.1


class ScriptedExpert:
    """Stateless; the same report always yields the same reply."""

    def respond(self, report: EvaluationReport, budget: int) -> GuidanceResponse:
        issue = worst_issue(report)
        if issue is not None:
            actions = RULES[issue]
        else:
            # all severities zero: name the largest residual pressure for
            # the audit trail and emit a margin-spending rule
            pens = report.penalties.as_dict()
            issue = min(PENALTY_NAMES, key=lambda n: (-pens[n], PENALTY_NAMES.index(n)))
            margin = _GOALS["F"] - report.group_scores["F"]
            if pens["stair"] >= STAIR_SLOPE_FLOOR:
                actions = REORIENT_ACTIONS
            elif margin < MARGIN_TAU:
                actions = STRUCTURAL_ACTIONS
            elif pens["support"] > 0 or pens["stringing"] >= TRAVEL_FLOOR:
                actions = TIME_HUNT_ACTIONS
            else:
                actions = THROUGHPUT_ACTIONS
        return GuidanceResponse(
            primary_issue=issue, actions=tuple(actions[: max(budget, 1)])
        )

    def reply_text(self, report: EvaluationReport, budget: int) -> str:
        return json.dumps(self.respond(report, budget).to_dict())
