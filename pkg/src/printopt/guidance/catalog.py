"""The closed catalog of admissible corrective actions.

Providers can only pick from these. Directional entries adjust the named
parameters up or down; switch entries select a categorical value. An
entry with several parameters compiles to one clause per parameter,
joined conjunctively unless marked disjunctive.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..mesh.core import ORIENTATION_ANGLES


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    mode: str  # increase | decrease | switch
    params: tuple[str, ...]
    targets: tuple = ()  # switch only
    disjunctive: bool = False
    description: str = ""


_ENTRIES = (
    CatalogEntry(
        "decrease_layer_height", "decrease", ("layer_height",),
        description="thinner layers, finer surfaces, longer print",
    ),
    CatalogEntry(
        "increase_layer_height", "increase", ("layer_height",),
        description="thicker layers, faster print, coarser surfaces",
    ),
    CatalogEntry(
        "increase_perimeters", "increase", ("perimeters",),
        description="more wall loops for strength",
    ),
    CatalogEntry(
        "increase_infill_density", "increase", ("infill_density",),
        description="denser interior fill",
    ),
    CatalogEntry(
        "decrease_infill_density", "decrease", ("infill_density",),
        description="sparser interior fill to save time and material",
    ),
    CatalogEntry(
        "increase_top_layers", "increase", ("top_solid_layers",),
        description="more solid roof layers",
    ),
    CatalogEntry(
        "increase_bottom_layers", "increase", ("bottom_solid_layers",),
        description="more solid floor layers",
    ),
    CatalogEntry(
        "increase_brim_width", "increase", ("brim_width",),
        description="wider brim for bed adhesion",
    ),
    CatalogEntry(
        "decrease_volumetric_speed", "decrease", ("max_volumetric_speed",),
        description="slower extrusion ceiling, better fusion",
    ),
    CatalogEntry(
        "increase_volumetric_speed", "increase", ("max_volumetric_speed",),
        description="faster extrusion ceiling",
    ),
    CatalogEntry(
        "increase_first_layer_height", "increase", ("first_layer_height",),
        description="taller first layer, more forgiving bed contact",
    ),
    CatalogEntry(
        "increase_elephant_foot_compensation", "increase", ("elephant_foot_compensation",),
        description="shrink first layers to counter squish bulge",
    ),
    CatalogEntry(
        "strengthen_shell", "increase", ("perimeters", "infill_density"),
        description="raise wall count and infill together",
    ),
    CatalogEntry(
        "slow_or_thin", "decrease", ("max_volumetric_speed", "layer_height"),
        disjunctive=True,
        description="either slow extrusion or thin the layers",
    ),
    CatalogEntry(
        "coarsen_for_speed", "increase", ("layer_height", "max_volumetric_speed"),
        description="thicker layers and a higher flow ceiling to cut print time",
    ),
    CatalogEntry(
        "lighten_structure", "decrease", ("infill_density", "perimeters"),
        description="remove interior material the part does not need",
    ),
    CatalogEntry(
        "enable_support", "switch", ("support_material",), targets=("on",),
        description="generate support under overhangs",
    ),
    CatalogEntry(
        "disable_support", "switch", ("support_material",), targets=("off",),
        description="drop support, rely on geometry",
    ),
    CatalogEntry(
        "switch_infill_pattern", "switch", ("infill_pattern",),
        targets=("rectilinear", "grid", "gyroid", "honeycomb"),
        description="change the infill pattern",
    ),
    CatalogEntry(
        "switch_seam", "switch", ("seam_placement",),
        targets=("aligned", "nearest", "random"),
        description="change seam placement strategy",
    ),
    CatalogEntry(
        "reorient_x", "switch", ("orientation_x",), targets=ORIENTATION_ANGLES,
        description="rotate the part about X before printing",
    ),
    CatalogEntry(
        "reorient_y", "switch", ("orientation_y",), targets=ORIENTATION_ANGLES,
        description="rotate the part about Y before printing",
    ),
    CatalogEntry(
        "reorient_z", "switch", ("orientation_z",), targets=ORIENTATION_ANGLES,
        description="rotate the part about Z before printing",
    ),
)

CATALOG: dict[str, CatalogEntry] = {e.id: e for e in _ENTRIES}


def catalog_text() -> str:
    """One line per action, for prompts."""
    lines = []
    for e in _ENTRIES:
        if e.mode == "switch":
            lines.append(
                f"- {e.id}: switch {e.params[0]} to one of {list(e.targets)} ({e.description})"
            )
        else:
            joiner = " or " if e.disjunctive else " and "
            lines.append(
                f"- {e.id}: {e.mode} {joiner.join(e.params)} ({e.description})"
            )
    return "\n".join(lines)
