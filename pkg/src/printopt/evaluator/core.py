"""Evaluator session: one part, many configurations.

Caches per-orientation geometry so sweeping configurations on a part pays
voxelization once per orientation, not once per call.
"""

from __future__ import annotations

import numpy as np

from ..configspace import PrintConfig, sobol_sample
from ..mesh.core import Orientation, TriangleMesh
from ..mesh.layers import build_layers
from .calibration import DEFAULT, Calibration
from .geometry import OrientedGeometry
from .penalties import (
    penalty_perimeter_infill,
    penalty_staircase,
    penalty_stringing,
    penalty_support_removal,
    penalty_strength,
    penalty_xy,
    penalty_zbond,
)
from .quality import objective, quality_scalar
from .report import EvaluationReport, ObjectiveWeights, PenaltyReport
from .timecost import estimate_time_cost
from .vetoes import run_vetoes

REFERENCE_SAMPLES = 32
REFERENCE_SEED = 0


class Evaluator:
    """Scores configurations of a single part."""

    def __init__(
        self,
        mesh: TriangleMesh,
        weights: ObjectiveWeights | None = None,
        cal: Calibration = DEFAULT,
    ):
        self.mesh = mesh
        self.cal = cal
        self._geoms: dict[tuple[int, int, int], OrientedGeometry] = {}
        self._references: tuple[float, float] | None = None
        if weights is None:
            weights = ObjectiveWeights()
        if weights.t_r == 1.0 and weights.c_r == 1.0:
            t_r, c_r = self.compute_references()
            weights = weights.with_references(t_r, c_r)
        self.weights = weights

    def geometry(self, orientation: Orientation) -> OrientedGeometry:
        key = orientation.as_tuple()
        geom = self._geoms.get(key)
        if geom is None:
            geom = OrientedGeometry(self.mesh, orientation, self.cal)
            self._geoms[key] = geom
        return geom

    def compute_references(self) -> tuple[float, float]:
        """Median time and cost over a fixed Sobol probe of the space."""
        if self._references is None:
            times = []
            costs = []
            for config in sobol_sample(REFERENCE_SAMPLES, REFERENCE_SEED):
                geom = self.geometry(config.orientation)
                t, c = estimate_time_cost(geom, config, self.cal)
                times.append(t)
                costs.append(c)
            self._references = (float(np.median(times)), float(np.median(costs)))
        return self._references

    def evaluate(
        self, config: PrintConfig, load_axis: np.ndarray | None = None
    ) -> EvaluationReport:
        cal = self.cal
        geom = self.geometry(config.orientation)
        t, c = estimate_time_cost(geom, config, cal)
        n_layers = build_layers(
            geom.part_height,
            config.first_layer_height,
            config.layer_height,
            cal.pitch,
            geom.n_slabs,
        ).n_layers
        vetoes = run_vetoes(geom, config, cal)
        penalties = PenaltyReport(
            stair=min(1.0, config.layer_height * geom.stair_base_p95 / cal.a_ref),
            strength=penalty_strength(config, cal),
            zbond=penalty_zbond(
                config, t / n_layers, cal, load_parallel_z=_parallel_z(geom, load_axis)
            ),
            pi=penalty_perimeter_infill(geom, config, cal),
            xy=penalty_xy(geom, config, cal),
            stringing=penalty_stringing(geom, config, cal),
            support=penalty_support_removal(geom, config, cal),
        )
        any_veto = any(v.triggered for v in vetoes)
        q, scores, excess = quality_scalar(penalties, any_veto, cal)
        obj = objective(t, c, q, self.weights)
        return EvaluationReport(
            objective=obj,
            time_s=t,
            cost_g=c,
            quality=q,
            infeasible=any_veto,
            vetoes=vetoes,
            penalties=penalties,
            group_scores=scores,
            group_excess=excess,
            shell_fallback=geom.grid.shell_fallback,
        )


def _parallel_z(geom: OrientedGeometry, load_axis: np.ndarray | None) -> bool:
    """Is the declared part-frame load axis near the build axis once oriented?"""
    if load_axis is None:
        return False
    axis = np.asarray(load_axis, dtype=np.float64)
    norm = np.linalg.norm(axis)
    if norm == 0:
        return False
    rotated = geom.orientation.matrix() @ axis
    return abs(rotated[2]) >= 0.9 * norm


def staircase_of(geom: OrientedGeometry, layer_height: float) -> float:
    """Staircase penalty from the cached slope percentile."""
    return penalty_staircase(geom.slopes, layer_height, geom.cal)
