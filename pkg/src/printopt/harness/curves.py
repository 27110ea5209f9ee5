"""Best-so-far objective curves with a bootstrap confidence band."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import AlignmentError

RESAMPLES = 1000
BOOTSTRAP_SEED = 0


def running_min(values) -> np.ndarray:
    return np.minimum.accumulate(np.asarray(values, dtype=np.float64))


@dataclass(frozen=True)
class CurveBand:
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def to_csv(self) -> str:
        lines = ["evaluation,mean,lo95,hi95"]
        for k in range(len(self.mean)):
            lines.append(
                f"{k + 1},{self.mean[k]:.6f},{self.lo[k]:.6f},{self.hi[k]:.6f}"
            )
        return "\n".join(lines) + "\n"


def best_so_far_curves(
    curves,
    resamples: int = RESAMPLES,
    seed: int = BOOTSTRAP_SEED,
) -> CurveBand:
    """Mean curve over objects and seeds, banded by resampling objects.

    ``curves`` is (objects, seeds, evaluations) of best-so-far values,
    or any nested sequence of equal-length runs shaped that way. The 95%
    band comes from 1000 bootstrap resamples over objects with a fixed
    seed, so reports reproduce bit-identically.
    """
    try:
        arr = np.asarray(curves, dtype=np.float64)
    except ValueError as exc:
        raise AlignmentError(f"curves are ragged: {exc}") from None
    if arr.ndim == 2:
        arr = arr[:, None, :]
    if arr.ndim != 3:
        raise AlignmentError(f"expected (objects, seeds, evals), got shape {arr.shape}")
    per_object = arr.mean(axis=1)  # (objects, evals)
    mean = per_object.mean(axis=0)
    n_obj = per_object.shape[0]
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n_obj, size=(resamples, n_obj))
    boot = per_object[idx].mean(axis=1)  # (resamples, evals)
    lo = np.percentile(boot, 2.5, axis=0)
    hi = np.percentile(boot, 97.5, axis=0)
    return CurveBand(mean=mean, lo=lo, hi=hi)
