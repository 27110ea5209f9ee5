"""Print time and material cost from the layer stack."""

from __future__ import annotations

from ..configspace import PrintConfig
from ..mesh.layers import build_layers
from .calibration import Calibration
from .geometry import OrientedGeometry


def erosion_cells(perimeters: int, cal: Calibration) -> int:
    """Perimeter shell width expressed in whole voxel cells, at least one."""
    return max(1, int(round(perimeters * cal.line_width / cal.pitch)))


def deposited_volume(geom: OrientedGeometry, config: PrintConfig, cal: Calibration) -> tuple[float, int]:
    """(total extruded volume mm^3, layer count) including support and brim."""
    layers = build_layers(
        geom.part_height,
        config.first_layer_height,
        config.layer_height,
        cal.pitch,
        geom.n_slabs,
    )
    r = erosion_cells(config.perimeters, cal)
    n = layers.n_layers
    vol = 0.0
    for i in range(n):
        k_lo, k_hi = layers.range_of(i)
        stats = geom.range_stats(k_lo, k_hi)
        thickness = layers.thickness(i)
        if i < config.bottom_solid_layers or i >= n - config.top_solid_layers:
            vol += thickness * stats.area_mm2
        else:
            interior, _ = geom.interior_stats(k_lo, k_hi, r)
            shell = stats.area_mm2 - interior
            vol += thickness * (shell + config.infill_density * interior)
    if config.support_material:
        vol += cal.support_fill * geom.support_volume_mm3
    if config.brim_width > 0:
        vol += geom.bed_perimeter_mm * config.brim_width * config.first_layer_height
    return vol, n


def estimate_time_cost(
    geom: OrientedGeometry, config: PrintConfig, cal: Calibration
) -> tuple[float, float]:
    """Seconds of print time and grams of filament."""
    vol, n = deposited_volume(geom, config, cal)
    flow = min(config.max_volumetric_speed, cal.nominal_flow)
    t = vol / flow + n * cal.layer_overhead_s
    c = vol * cal.density_g_mm3
    return t, c
