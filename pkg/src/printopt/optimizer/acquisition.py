"""Expected improvement for minimization, with guidance discounting."""

from __future__ import annotations

import numpy as np
from scipy.stats import norm

_STD_FLOOR = 1e-12


def expected_improvement(
    mean: np.ndarray, std: np.ndarray, best: float
) -> np.ndarray:
    """Closed-form EI of beating ``best`` from below.

    Degenerate (zero-variance) predictions fall back to the plain
    improvement so a confidently better point still wins.
    """
    mean = np.asarray(mean, dtype=np.float64)
    std = np.asarray(std, dtype=np.float64)
    imp = best - mean
    out = np.maximum(imp, 0.0)
    ok = std > _STD_FLOOR
    if np.any(ok):
        z = imp[ok] / std[ok]
        out[ok] = imp[ok] * norm.cdf(z) + std[ok] * norm.pdf(z)
    return out


def guided_score(
    ei: np.ndarray, violation: np.ndarray | None, eta: float
) -> np.ndarray:
    """Discount EI by exp(-eta * V); with no guidance the EI stands alone."""
    if violation is None:
        return np.asarray(ei, dtype=np.float64)
    return np.asarray(ei, dtype=np.float64) * np.exp(
        -eta * np.asarray(violation, dtype=np.float64)
    )
