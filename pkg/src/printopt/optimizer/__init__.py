from .acquisition import expected_improvement, guided_score
from .gp import GaussianProcess, matern52
from .loop import (
    ITERATIONS,
    RunResult,
    WARM_SAMPLES,
    freeze_pool,
    incumbent_index,
    run_optimization,
)

__all__ = [
    "expected_improvement",
    "guided_score",
    "GaussianProcess",
    "matern52",
    "ITERATIONS",
    "RunResult",
    "WARM_SAMPLES",
    "freeze_pool",
    "incumbent_index",
    "run_optimization",
]
