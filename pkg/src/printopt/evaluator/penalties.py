"""The seven bounded quality penalties.

All return values in [0, 1]. Functions take the pre-analyzed geometry
plus the configuration; nothing here touches the mesh directly.
"""

from __future__ import annotations

import math

import numpy as np

from ..configspace import PrintConfig
from ..mesh.core import FaceSlopes
from ..mesh.layers import build_layers
from .calibration import Calibration
from .geometry import OrientedGeometry, _weighted_percentile
from .timecost import erosion_cells


def clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def logistic(x: float) -> float:
    # symmetric split avoids overflow for large |x|
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def log_mean_exp(values, sharpness: float) -> float:
    """Smooth maximum: within ln(n)/sharpness below the true max."""
    v = np.asarray(values, dtype=np.float64)
    m = float(v.max())
    return m + math.log(float(np.mean(np.exp(sharpness * (v - m))))) / sharpness


def stair_base_percentile(slopes: FaceSlopes, cal: Calibration) -> float:
    """Area-weighted percentile of |cos t|(1 - |cos t|) off the plate band."""
    keep = slopes.centroid_z >= cal.plate_band_mm
    c = np.abs(np.cos(np.radians(slopes.theta_deg[keep])))
    return _weighted_percentile(c * (1.0 - c), slopes.area_mm2[keep], cal.stair_pct)


def penalty_staircase(slopes: FaceSlopes, layer_height: float, cal: Calibration) -> float:
    """Terrace amplitude a = h|cos t|(1 - |cos t|) against the 0.05 mm reference."""
    return clamp01(layer_height * stair_base_percentile(slopes, cal) / cal.a_ref)


def penalty_strength(config: PrintConfig, cal: Calibration) -> float:
    shell = (
        cal.shell_gain * (config.perimeters - 1) * (cal.line_width / 0.45)
        + cal.skin_gain * (config.bottom_solid_layers + config.top_solid_layers)
    )
    infill = config.infill_density * cal.pattern_strength[config.infill_pattern]
    index = shell + infill
    shortfall = max(0.0, cal.strength_target - index) / cal.strength_target
    return clamp01(shortfall)


def penalty_zbond(
    config: PrintConfig,
    mean_layer_time_s: float,
    cal: Calibration,
    load_parallel_z: bool = False,
) -> float:
    contact = clamp01((config.layer_height / cal.line_width - cal.contact_lo) / cal.contact_span)
    thermal = clamp01((cal.thermal_floor_s - mean_layer_time_s) / cal.thermal_floor_s)
    flow = clamp01((config.max_volumetric_speed - cal.flow_ref) / cal.flow_span)
    agg = log_mean_exp([contact, thermal, flow], cal.zbond_sharpness)
    agg = clamp01(agg)
    p = agg * (2.0 - agg)
    if load_parallel_z:
        p = min(1.0, p * cal.load_amp)
    return clamp01(p)


def penalty_perimeter_infill(
    geom: OrientedGeometry, config: PrintConfig, cal: Calibration
) -> float:
    layers = build_layers(
        geom.part_height,
        config.first_layer_height,
        config.layer_height,
        cal.pitch,
        geom.n_slabs,
    )
    r = erosion_cells(config.perimeters, cal)
    n = layers.n_layers
    cf_sparse = min(
        1.0,
        config.infill_density * cal.pattern_contact[config.infill_pattern] / cal.contact_ref,
    )
    num = 0.0
    den = 0.0
    for i in range(n):
        k_lo, k_hi = layers.range_of(i)
        _, boundary = geom.interior_stats(k_lo, k_hi, r)
        if boundary <= 0:
            continue
        solid = i < config.bottom_solid_layers or i >= n - config.top_solid_layers
        num += boundary * (1.0 if solid else cf_sparse)
        den += boundary
    if den <= 0:
        return 0.0
    return clamp01(1.0 - num / den)


def penalty_xy(geom: OrientedGeometry, config: PrintConfig, cal: Calibration) -> float:
    squish = clamp01(
        (cal.squish_ref - config.first_layer_height / config.layer_height) / cal.squish_ref
    )
    efc = min(config.elephant_foot_compensation, cal.efc_cap)
    atten = (1.0 - efc / cal.efc_cap) / (1.0 + cal.growth_gain * geom.early_growth)
    return clamp01((squish + cal.bulge) * atten * geom.first_layer_sens)


def penalty_stringing(
    geom: OrientedGeometry, config: PrintConfig, cal: Calibration
) -> float:
    layers = build_layers(
        geom.part_height,
        config.first_layer_height,
        config.layer_height,
        cal.pitch,
        geom.n_slabs,
    )
    seam = cal.seam_travel[config.seam_placement]
    travel = 0.0
    extrude = 0.0
    for i in range(layers.n_layers):
        stats = geom.range_stats(*layers.range_of(i))
        travel += seam * stats.travel_mm
        extrude += stats.area_mm2 / cal.line_width
    total = travel + extrude
    f = travel / total if total > 0 else 0.0
    return logistic((f - cal.stringing_mid) / cal.stringing_scale)


def penalty_support_removal(
    geom: OrientedGeometry, config: PrintConfig, cal: Calibration
) -> float:
    if not config.support_material or geom.support_interface_mm2 <= 0:
        return 0.0
    density = geom.support_interface_mm2 / geom.surface_area
    stacking = 1.0 + geom.support_mean_drop_mm / cal.stack_ref
    fragmentation = 1.0 + (geom.support_regions - 1) * cal.frag_gain
    raw = density * stacking * fragmentation
    return clamp01(raw / (raw + cal.support_sat))
