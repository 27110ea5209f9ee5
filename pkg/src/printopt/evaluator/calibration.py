"""Evaluator constants, versioned and serializable.

Everything the scoring formulas pin down numerically lives here so a run
can record exactly which calibration produced it. Values target a PLA
profile on a 0.4 mm nozzle printing 0.45 mm lines.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field


def _pattern_strength() -> dict:
    return {"rectilinear": 0.9, "grid": 1.0, "gyroid": 1.1, "honeycomb": 1.15}


def _pattern_contact() -> dict:
    return {"rectilinear": 1.0, "grid": 1.2, "gyroid": 1.5, "honeycomb": 1.3}


def _seam_travel() -> dict:
    return {"aligned": 1.0, "nearest": 0.85, "random": 1.15}


@dataclass(frozen=True)
class Calibration:
    version: int = 1

    # geometry / deposition
    pitch: float = 0.8
    line_width: float = 0.45
    density_g_mm3: float = 0.00124  # PLA, 1.24 g/cm^3
    nominal_flow: float = 8.0  # mm^3/s the hotend can actually melt
    layer_overhead_s: float = 4.0  # move/retract/z-hop budget per layer
    support_fill: float = 0.2
    plate_band_mm: float = 1.0

    # staircase
    a_ref: float = 0.05
    stair_pct: float = 0.95

    # strength index
    shell_gain: float = 0.12
    skin_gain: float = 0.025
    strength_target: float = 0.75
    pattern_strength: dict = field(default_factory=_pattern_strength)

    # z-bond
    contact_lo: float = 0.6
    contact_span: float = 0.3
    thermal_floor_s: float = 5.0
    flow_ref: float = 8.0
    flow_span: float = 8.0
    zbond_sharpness: float = 8.0
    load_amp: float = 1.25

    # perimeter/infill contact
    contact_ref: float = 0.4
    pattern_contact: dict = field(default_factory=_pattern_contact)

    # xy dimensional
    squish_ref: float = 1.25
    bulge: float = 0.15
    efc_cap: float = 0.4
    growth_gain: float = 2.0
    sens_ref: float = 8.0

    # stringing
    stringing_mid: float = 0.08
    stringing_scale: float = 0.03
    seam_travel: dict = field(default_factory=_seam_travel)

    # support removal
    support_sat: float = 0.25
    stack_ref: float = 20.0
    frag_gain: float = 0.1

    # vetoes
    island_ref_mm3: float = 50.0
    slender_mid: float = 15.0
    slender_scale: float = 3.0
    adhesion_thresh: float = 0.25
    brim_gain: float = 0.08
    overhang_deg: float = 55.0
    bridge_ref_mm: float = 20.0
    veto_trigger: float = 0.5

    # quality aggregation
    q_lambda: float = 0.5
    q_sharpness: float = 8.0
    goal_s: float = 0.30
    goal_f: float = 0.25
    goal_p: float = 0.40
    q_cap: float = 2.0

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Calibration":
        doc = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown calibration fields: {sorted(unknown)}")
        return cls(**doc)


DEFAULT = Calibration()
