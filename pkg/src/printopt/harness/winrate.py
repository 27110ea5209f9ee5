"""Pairwise win rates between method variants over the same part grid."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from ..errors import AlignmentError

TIE_TOL = 1e-3  # absolute objective difference treated as a draw


@dataclass(frozen=True)
class MethodResult:
    """Final outcomes of one method across a parts x seeds grid.

    Single-shot methods carry one pseudo-seed; optimization methods one
    entry per initialization. ``curves`` holds best-so-far objective
    sequences where the method has them.
    """

    method: str
    objects: tuple[str, ...]
    seeds: tuple[int, ...]
    objectives: np.ndarray  # (n_objects, n_seeds)
    infeasible: np.ndarray  # bool, same shape
    configs: tuple = field(default=(), compare=False, repr=False)
    curves: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        n_o, n_s = len(self.objects), len(self.seeds)
        if self.objectives.shape != (n_o, n_s):
            raise AlignmentError(
                f"{self.method}: objectives shaped {self.objectives.shape},"
                f" expected {(n_o, n_s)}"
            )
        if self.infeasible.shape != (n_o, n_s):
            raise AlignmentError(f"{self.method}: infeasible flags misshaped")

    def per_object_median(self) -> np.ndarray:
        return np.median(self.objectives, axis=1)


@dataclass(frozen=True)
class WinRateMatrix:
    methods: tuple[str, ...]
    P: np.ndarray  # P[i, j] = fraction of objects where i beats j
    tie_tol: float

    def rate(self, winner: str, loser: str) -> float:
        i = self.methods.index(winner)
        j = self.methods.index(loser)
        return float(self.P[i, j])

    def to_text(self) -> str:
        # cells render as "0.833"; keep columns wide enough for either
        width = max(max(len(m) for m in self.methods), 5) + 2
        buf = io.StringIO()
        buf.write(" " * width)
        for m in self.methods:
            buf.write(f"{m:>{width}}")
        buf.write("\n")
        for i, mi in enumerate(self.methods):
            buf.write(f"{mi:>{width}}")
            for j in range(len(self.methods)):
                cell = "-" if i == j else f"{self.P[i, j]:.3f}"
                buf.write(f"{cell:>{width}}")
            buf.write("\n")
        return buf.getvalue()

    def to_csv(self) -> str:
        lines = ["method," + ",".join(self.methods)]
        for i, mi in enumerate(self.methods):
            cells = [
                "" if i == j else f"{self.P[i, j]:.6f}"
                for j in range(len(self.methods))
            ]
            lines.append(mi + "," + ",".join(cells))
        return "\n".join(lines) + "\n"


def _object_score(a: np.ndarray, b: np.ndarray, tol: float) -> float:
    """1 if method A takes the object, 0 if B does, 0.5 on a standoff."""
    ties = np.abs(a - b) <= tol
    wins_a = int(np.sum(a < b - tol) + np.sum(ties))
    wins_b = int(np.sum(b < a - tol) + np.sum(ties))
    if wins_a > wins_b:
        return 1.0
    if wins_b > wins_a:
        return 0.0
    return 0.5


def win_rate_matrix(
    results: list[MethodResult], tie_tol: float = TIE_TOL
) -> WinRateMatrix:
    if len(results) < 2:
        raise AlignmentError("need at least two methods to compare")
    objects = results[0].objects
    seeds = results[0].seeds
    for r in results[1:]:
        if r.objects != objects:
            raise AlignmentError(
                f"{r.method}: objects differ from {results[0].method}"
            )
        if r.seeds != seeds:
            raise AlignmentError(f"{r.method}: seed grid differs")
    n = len(results)
    P = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            score = 0.0
            for o in range(len(objects)):
                score += _object_score(
                    results[i].objectives[o], results[j].objectives[o], tie_tol
                )
            P[i, j] = score / len(objects)
    return WinRateMatrix(
        methods=tuple(r.method for r in results), P=P, tie_tol=tie_tol
    )
