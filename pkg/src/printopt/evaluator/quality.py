"""Aggregation of penalties into the quality scalar and the objective."""

from __future__ import annotations

from .calibration import Calibration
from .penalties import clamp01, log_mean_exp
from .report import GROUPS, ObjectiveWeights, PenaltyReport


def group_scores(penalties: PenaltyReport, cal: Calibration) -> dict:
    """Smooth-max score of each issue group."""
    return {
        tag: log_mean_exp(penalties.group_members(tag), cal.q_sharpness)
        for tag in GROUPS
    }


def group_excess(scores: dict, cal: Calibration) -> dict:
    goals = {"S": cal.goal_s, "F": cal.goal_f, "P": cal.goal_p}
    return {
        tag: clamp01((scores[tag] - goals[tag]) / (1.0 - goals[tag])) for tag in scores
    }


def quality_scalar(
    penalties: PenaltyReport, any_veto: bool, cal: Calibration
) -> tuple[float, dict, dict]:
    """(Q, group scores, group excesses).

    Vetoed configurations score the flat infeasibility cap, which exceeds
    every feasible Q, so the optimizer orders them below all survivors
    without needing a separate feasibility channel.
    """
    scores = group_scores(penalties, cal)
    excess = group_excess(scores, cal)
    if any_veto:
        return cal.q_cap, scores, excess
    e = list(excess.values())
    e_max = max(e)
    q = e_max + (cal.q_lambda / 3.0) * (1.0 - e_max) * sum(e)
    return q, scores, excess


def objective(t: float, c: float, q: float, weights: ObjectiveWeights) -> float:
    """Weighted sum of saturating time and cost terms plus quality."""
    nt = (t / weights.t_r) / (1.0 + t / weights.t_r)
    nc = (c / weights.c_r) / (1.0 + c / weights.c_r)
    return weights.w_t * nt + weights.w_c * nc + weights.w_q * q
