"""Method comparison table: medians, closeness-to-best, failure rates."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from ..errors import AlignmentError
from .winrate import MethodResult


@dataclass(frozen=True)
class SummaryRow:
    method: str
    median_objective: float
    pct_best: float
    pct_within_1: float
    pct_within_5: float
    pct_likely_fail: float


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple[SummaryRow, ...]
    objects: tuple[str, ...]
    note: str = ""

    def to_csv(self) -> str:
        lines = ["method,median_objective,pct_best,pct_within_1,pct_within_5,pct_likely_fail"]
        for r in self.rows:
            lines.append(
                f"{r.method},{r.median_objective:.6f},{r.pct_best:.1f},"
                f"{r.pct_within_1:.1f},{r.pct_within_5:.1f},{r.pct_likely_fail:.1f}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        buf = io.StringIO()
        head = f"{'method':<14}{'median Obj':>12}{'% best':>9}{'% <=1%':>9}{'% <=5%':>9}{'% fails':>9}"
        buf.write(head + "\n")
        buf.write("-" * len(head) + "\n")
        for r in self.rows:
            buf.write(
                f"{r.method:<14}{r.median_objective:>12.4f}{r.pct_best:>9.1f}"
                f"{r.pct_within_1:>9.1f}{r.pct_within_5:>9.1f}{r.pct_likely_fail:>9.1f}\n"
            )
        if self.note:
            buf.write(self.note + "\n")
        return buf.getvalue()


def summarize(results: list[MethodResult]) -> SummaryTable:
    """Per-object medians over seeds, then closeness to the per-object best.

    A method is "best" on an object when its median matches the minimum
    over methods; ties count for every tied method. With a single method
    the percentages are 100 by convention, and the table says so.
    """
    if not results:
        raise AlignmentError("no results to summarize")
    objects = results[0].objects
    for r in results[1:]:
        if r.objects != objects:
            raise AlignmentError(f"{r.method}: objects differ from {results[0].method}")

    per_obj = np.stack([r.per_object_median() for r in results])  # (m, o)
    best = np.min(per_obj, axis=0)
    n_obj = len(objects)
    rows = []
    for m, r in enumerate(results):
        v = per_obj[m]
        fails = np.any(r.infeasible, axis=1)
        rows.append(
            SummaryRow(
                method=r.method,
                median_objective=float(np.median(v)),
                pct_best=100.0 * float(np.mean(v == best)),
                pct_within_1=100.0 * float(np.mean(v <= best * 1.01)),
                pct_within_5=100.0 * float(np.mean(v <= best * 1.05)),
                pct_likely_fail=100.0 * float(np.mean(fails)),
            )
        )
    note = ""
    if len(results) == 1:
        note = "single method: best/within-x percentages are 100 by convention"
    return SummaryTable(rows=tuple(rows), objects=objects, note=note)
