from .baselines import (
    BaselineOutcome,
    ORIENT_SIX,
    baseline_default,
    baseline_external,
    baseline_reorient,
    parse_config_document,
    reorient_metrics,
    select_orientation,
)
from .curves import BOOTSTRAP_SEED, CurveBand, best_so_far_curves, running_min
from .runner import (
    DEFAULT_SEEDS,
    baseline_grid,
    load_method,
    load_results_dir,
    optimize_grid,
    trace_objectives,
)
from .summary import SummaryRow, SummaryTable, summarize
from .winrate import TIE_TOL, MethodResult, WinRateMatrix, win_rate_matrix

__all__ = [
    "BaselineOutcome",
    "ORIENT_SIX",
    "baseline_default",
    "baseline_external",
    "baseline_reorient",
    "parse_config_document",
    "reorient_metrics",
    "select_orientation",
    "BOOTSTRAP_SEED",
    "CurveBand",
    "best_so_far_curves",
    "running_min",
    "DEFAULT_SEEDS",
    "baseline_grid",
    "load_method",
    "load_results_dir",
    "optimize_grid",
    "trace_objectives",
    "SummaryRow",
    "SummaryTable",
    "summarize",
    "TIE_TOL",
    "MethodResult",
    "WinRateMatrix",
    "win_rate_matrix",
]
