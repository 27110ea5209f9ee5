"""Per-orientation geometry features shared across configuration scores.

Everything here depends only on the part, its build orientation, and the
calibration, never on the print configuration, so one ``OrientedGeometry``
serves every evaluation of that orientation during a run. Erosion results
and per-slab-range stats are memoized because neighboring configurations
keep asking for the same ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import GeometryError
from ..mesh.core import Orientation, TriangleMesh, face_slopes, orient
from ..mesh.layers import part_height_of
from ..mesh.voxel import VoxelGrid, voxelize
from .calibration import Calibration

_STRUCT4 = ndimage.generate_binary_structure(2, 1)
_STRUCT26 = ndimage.generate_binary_structure(3, 3)


@dataclass(frozen=True)
class RangeStats:
    """Cross-section stats of one slab range [k_lo, k_hi)."""

    area_mm2: float
    perimeter_mm: float
    n_components: int
    travel_mm: float  # centroid-chain hop length across components


def _mask_perimeter(mask: np.ndarray) -> int:
    """Count of exposed 4-neighbor cell edges."""
    padded = np.pad(mask, 1)
    edges = 0
    for axis in (0, 1):
        d = np.diff(padded.astype(np.int8), axis=axis)
        edges += int(np.abs(d).sum())
    return edges


def _max_run(mask: np.ndarray) -> int:
    """Longest straight run of True cells along either grid axis."""
    best = 0
    for m in (mask, mask.T):
        padded = np.pad(m, ((0, 0), (1, 1)))
        flat = padded.reshape(-1).astype(np.int8)
        d = np.diff(flat)
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        if len(starts):
            best = max(best, int((ends - starts).max()))
    return best


class OrientedGeometry:
    """A part in one build orientation, voxelized and pre-analyzed."""

    def __init__(self, mesh: TriangleMesh, orientation: Orientation, cal: Calibration):
        self.orientation = orientation
        self.cal = cal
        self.mesh = orient(mesh, orientation)
        self.grid: VoxelGrid = voxelize(self.mesh, cal.pitch)
        occ = self.grid.cells
        if not occ.any():
            raise GeometryError("no occupied cells after voxelization")
        self.slopes = face_slopes(self.mesh)
        self.surface_area = float(self.slopes.area_mm2.sum())
        self.part_height = part_height_of(self.grid.top_slab(), cal.pitch)
        self.n_slabs = self.grid.top_slab() + 1

        self._range_stats: dict[tuple[int, int], RangeStats] = {}
        self._interior: dict[tuple[int, int, int], tuple[float, float]] = {}
        self._range_masks: dict[tuple[int, int], np.ndarray] = {}

        self._analyze_plate()
        self._analyze_faces()
        self._analyze_columns()
        self._analyze_components()

    # ---- plate / first-layer statistics

    def _analyze_plate(self):
        occ = self.grid.cells
        area = self.grid.cell_area
        first = occ[0]
        self.bed_contact_mm2 = float(first.sum()) * area
        self.footprint_mm2 = float(occ.any(axis=0).sum()) * area
        self.adhesion_ratio = (
            self.bed_contact_mm2 / self.footprint_mm2 if self.footprint_mm2 > 0 else 1.0
        )
        a0 = float(first.sum()) * area
        p0 = _mask_perimeter(first) * self.grid.pitch
        if a0 > 0:
            self.first_layer_sens = min(1.0, (p0 * p0) / (4.0 * math.pi * a0) / self.cal.sens_ref)
        else:
            self.first_layer_sens = 0.0
        if self.n_slabs > 1 and a0 > 0:
            a1 = float(occ[1].sum()) * area
            self.early_growth = max(0.0, a1 / a0 - 1.0)
        else:
            self.early_growth = 0.0
        self.bed_perimeter_mm = p0

    # ---- face-based statistics (staircase, overhangs)

    def _analyze_faces(self):
        cal = self.cal
        theta = self.slopes.theta_deg
        areas = self.slopes.area_mm2
        keep = self.slopes.centroid_z >= cal.plate_band_mm
        self.stair_base_p95 = _weighted_percentile(
            np.abs(np.cos(np.radians(theta[keep])))
            * (1.0 - np.abs(np.cos(np.radians(theta[keep])))),
            areas[keep],
            cal.stair_pct,
        )
        down = keep & (theta > 95.0)
        steep = down & (theta > 90.0 + cal.overhang_deg) & (theta <= 175.0)
        down_area = float(areas[down].sum())
        self.overhang_fraction = (
            float(areas[steep].sum()) / down_area if down_area > 0 else 0.0
        )

    # ---- column/slab statistics (islands, bridges, support demand)

    def _analyze_columns(self):
        occ = self.grid.cells
        pitch = self.grid.pitch
        area = self.grid.cell_area
        nz = occ.shape[0]

        unsupported = np.zeros_like(occ)
        unsupported[1:] = occ[1:] & ~occ[:-1]
        self.unsupported_mm2 = float(unsupported.sum()) * area

        # cells in the "shadow" of material above them: where support goes
        has_above = np.cumsum(occ[::-1], axis=0)[::-1] > 0
        shadow = ~occ & has_above
        self.support_cells = int(shadow.sum())
        self.support_volume_mm3 = self.support_cells * self.grid.cell_volume
        proj = shadow.any(axis=0)
        proj_cells = int(proj.sum())
        if proj_cells:
            self.support_mean_drop_mm = self.support_cells / proj_cells * pitch
            _, nreg = ndimage.label(proj, structure=_STRUCT4)
            self.support_regions = int(nreg)
        else:
            self.support_mean_drop_mm = 0.0
            self.support_regions = 0
        dil = np.zeros_like(unsupported)
        for k in range(1, nz):
            if unsupported[k].any():
                dil[k] = ndimage.binary_dilation(unsupported[k], structure=_STRUCT4)
        self.support_interface_mm2 = float(dil.sum()) * area

        # longest straight unsupported run in any slab (bridging span)
        span_cells = 0
        for k in range(1, nz):
            if unsupported[k].any():
                span_cells = max(span_cells, _max_run(unsupported[k]))
        self.bridge_span_mm = span_cells * pitch

        # islands: slab components with zero overlap on the dilated slab below
        raw = 0.0
        for k in range(1, nz):
            if not occ[k].any():
                continue
            below_dil = ndimage.binary_dilation(occ[k - 1], structure=_STRUCT4)
            labels, n = ndimage.label(occ[k], structure=_STRUCT4)
            for lab in range(1, n + 1):
                comp = labels == lab
                if (comp & below_dil).any():
                    continue
                footprint = comp
                below_any = occ[:k] & footprint[None, :, :]
                hits = np.flatnonzero(below_any.any(axis=(1, 2)))
                drop = (k - int(hits[-1])) * pitch if len(hits) else k * pitch
                raw += float(comp.sum()) * area * drop
        self.island_raw_mm3 = raw

    # ---- 3D component statistics (slenderness)

    def _analyze_components(self):
        occ = self.grid.cells
        pitch = self.grid.pitch
        labels, n = ndimage.label(occ, structure=_STRUCT26)
        ratio = 0.0
        for lab in range(1, n + 1):
            comp = labels == lab
            ks = np.flatnonzero(comp.any(axis=(1, 2)))
            height = (ks[-1] - ks[0] + 1) * pitch
            foot = comp.any(axis=0)
            edt = ndimage.distance_transform_edt(foot)
            width = max(pitch, 2.0 * (float(edt.max()) - 0.5) * pitch)
            ratio = max(ratio, height / width)
        self.slender_ratio = ratio
        self.n_bodies = int(n)

    # ---- per-range lookups

    def range_mask(self, k_lo: int, k_hi: int) -> np.ndarray:
        key = (k_lo, k_hi)
        mask = self._range_masks.get(key)
        if mask is None:
            mask = self.grid.cells[k_lo:k_hi].any(axis=0)
            self._range_masks[key] = mask
        return mask

    def range_stats(self, k_lo: int, k_hi: int) -> RangeStats:
        key = (k_lo, k_hi)
        stats = self._range_stats.get(key)
        if stats is not None:
            return stats
        mask = self.range_mask(k_lo, k_hi)
        area = float(mask.sum()) * self.grid.cell_area
        perim = _mask_perimeter(mask) * self.grid.pitch
        labels, n = ndimage.label(mask, structure=_STRUCT4)
        travel = 0.0
        if n >= 2:
            centroids = ndimage.center_of_mass(mask, labels, range(1, n + 1))
            pts = np.array(centroids) * self.grid.pitch
            hops = np.diff(pts, axis=0)
            travel = float(np.sqrt((hops**2).sum(axis=1)).sum())
        stats = RangeStats(
            area_mm2=area, perimeter_mm=perim, n_components=int(n), travel_mm=travel
        )
        self._range_stats[key] = stats
        return stats

    def interior_stats(self, k_lo: int, k_hi: int, erode_cells: int) -> tuple[float, float]:
        """(interior area mm^2, interior boundary length mm) after erosion."""
        key = (k_lo, k_hi, erode_cells)
        cached = self._interior.get(key)
        if cached is not None:
            return cached
        mask = self.range_mask(k_lo, k_hi)
        interior = ndimage.binary_erosion(
            mask, structure=_STRUCT4, iterations=erode_cells
        )
        area = float(interior.sum()) * self.grid.cell_area
        boundary = _mask_perimeter(interior) * self.grid.pitch
        result = (area, boundary)
        self._interior[key] = result
        return result


def _weighted_percentile(values: np.ndarray, weights: np.ndarray, pct: float) -> float:
    """Nearest-rank percentile under weights; 0 for an empty input."""
    if len(values) == 0:
        return 0.0
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order]
    total = w.sum()
    if total <= 0:
        return 0.0
    cum = np.cumsum(w)
    idx = int(np.searchsorted(cum, pct * total, side="left"))
    idx = min(idx, len(v) - 1)
    return float(v[idx])
