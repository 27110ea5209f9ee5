from .calibration import DEFAULT, Calibration
from .core import Evaluator
from .geometry import OrientedGeometry, RangeStats
from .penalties import (
    clamp01,
    log_mean_exp,
    logistic,
    penalty_perimeter_infill,
    penalty_staircase,
    penalty_stringing,
    penalty_support_removal,
    penalty_strength,
    penalty_xy,
    penalty_zbond,
)
from .quality import group_excess, group_scores, objective, quality_scalar
from .report import (
    GROUPS,
    PENALTY_NAMES,
    VETO_KINDS,
    EvaluationReport,
    ObjectiveWeights,
    PenaltyReport,
    VetoResult,
)
from .timecost import deposited_volume, erosion_cells, estimate_time_cost
from .vetoes import run_vetoes

__all__ = [
    "DEFAULT",
    "GROUPS",
    "PENALTY_NAMES",
    "VETO_KINDS",
    "Calibration",
    "EvaluationReport",
    "Evaluator",
    "ObjectiveWeights",
    "OrientedGeometry",
    "PenaltyReport",
    "RangeStats",
    "VetoResult",
    "clamp01",
    "deposited_volume",
    "erosion_cells",
    "estimate_time_cost",
    "group_excess",
    "group_scores",
    "log_mean_exp",
    "logistic",
    "objective",
    "penalty_perimeter_infill",
    "penalty_staircase",
    "penalty_stringing",
    "penalty_support_removal",
    "penalty_strength",
    "penalty_xy",
    "penalty_zbond",
    "quality_scalar",
    "run_vetoes",
]
