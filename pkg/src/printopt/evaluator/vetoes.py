"""Feasibility vetoes: print-will-likely-fail tests.

Each veto reports a risk in [0, 1] and triggers at the shared 0.5
threshold, so "triggered" always implies "risk at threshold or above".
Support material resolves the three support-addressable kinds outright
(risk reported as zero); slenderness and adhesion are not helped by it.
"""

from __future__ import annotations

import math

from ..configspace import PrintConfig
from .calibration import Calibration
from .geometry import OrientedGeometry
from .report import VetoResult


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def run_vetoes(
    geom: OrientedGeometry, config: PrintConfig, cal: Calibration
) -> tuple[VetoResult, ...]:
    results = []

    if config.support_material or geom.island_raw_mm3 <= 0:
        risk = 0.0
    else:
        raw = geom.island_raw_mm3
        risk = raw / (raw + cal.island_ref_mm3)
    results.append(
        VetoResult(
            "unsupported_island",
            risk >= cal.veto_trigger,
            risk,
            f"island volume-drop {geom.island_raw_mm3:.1f} mm^3 "
            f"(reference {cal.island_ref_mm3:.0f}), support "
            f"{'on' if config.support_material else 'off'}",
        )
    )

    ratio = geom.slender_ratio
    risk = 1.0 / (1.0 + math.exp(-(ratio - cal.slender_mid) / cal.slender_scale))
    results.append(
        VetoResult(
            "slender_tower",
            risk >= cal.veto_trigger,
            risk,
            f"worst height/width ratio {ratio:.1f} (midpoint {cal.slender_mid:.0f})",
        )
    )

    effective = geom.adhesion_ratio + cal.brim_gain * config.brim_width
    risk = _clamp01((cal.adhesion_thresh - effective) / cal.adhesion_thresh)
    results.append(
        VetoResult(
            "low_bed_adhesion",
            risk >= cal.veto_trigger,
            risk,
            f"contact/footprint {geom.adhesion_ratio:.3f} plus brim credit "
            f"{cal.brim_gain * config.brim_width:.3f} vs threshold {cal.adhesion_thresh}",
        )
    )

    risk = 0.0 if config.support_material else geom.overhang_fraction
    results.append(
        VetoResult(
            "collapsing_overhang",
            risk >= cal.veto_trigger,
            risk,
            f"steep-overhang share of downward area {geom.overhang_fraction:.3f} "
            f"(beyond {cal.overhang_deg:.0f} deg), support "
            f"{'on' if config.support_material else 'off'}",
        )
    )

    span = geom.bridge_span_mm
    risk = 0.0 if config.support_material else span / (span + cal.bridge_ref_mm)
    results.append(
        VetoResult(
            "long_bridge",
            risk >= cal.veto_trigger,
            risk,
            f"longest unsupported span {span:.1f} mm (reference {cal.bridge_ref_mm:.0f})",
        )
    )
    return tuple(results)
