"""Single-shot baselines: stock settings, reorientation, external documents.

Each baseline produces one configuration per part and scores it with the
same evaluator the optimizer uses, so objectives are directly
comparable. All three share the brim adjustment rule: if the bed
adhesion check trips, retry exactly once with a 5 mm brim and keep the
adjusted result, mirroring what a slicer's first-print nag would do.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..configspace import PrintConfig, default_config, from_dict, from_flat
from ..errors import ConfigDocumentError
from ..evaluator import Calibration, DEFAULT, EvaluationReport, Evaluator, ObjectiveWeights
from ..mesh import Orientation, TriangleMesh, orient, voxelize
from ..mesh.voxel import support_metrics

BRIM_FALLBACK_MM = 5.0
NEAR_TIE_REL = 0.02

# the six axis-aligned build orientations: which body axis points up
ORIENT_SIX = (
    Orientation(0, 0, 0),  # +Z
    Orientation(180, 0, 0),  # -Z
    Orientation(0, 270, 0),  # +X
    Orientation(0, 90, 0),  # -X
    Orientation(90, 0, 0),  # +Y
    Orientation(270, 0, 0),  # -Y
)


@dataclass(frozen=True)
class BaselineOutcome:
    method: str
    config: PrintConfig
    report: EvaluationReport
    brim_adjusted: bool


def _score_with_brim_rule(
    ev: Evaluator, config: PrintConfig, method: str
) -> BaselineOutcome:
    report = ev.evaluate(config)
    adhesion = next(
        (v for v in report.vetoes if v.kind == "low_bed_adhesion"), None
    )
    if adhesion is not None and adhesion.triggered:
        config = replace(config, brim_width=BRIM_FALLBACK_MM)
        report = ev.evaluate(config)
        return BaselineOutcome(method, config, report, brim_adjusted=True)
    return BaselineOutcome(method, config, report, brim_adjusted=False)


def baseline_default(
    mesh: TriangleMesh,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    evaluator: Evaluator | None = None,
) -> BaselineOutcome:
    """Stock profile in the as-provided orientation."""
    ev = evaluator if evaluator is not None else Evaluator(mesh, weights=weights, cal=cal)
    return _score_with_brim_rule(ev, default_config(), "default")


def reorient_metrics(
    mesh: TriangleMesh, cal: Calibration = DEFAULT
) -> list[tuple[Orientation, float, float]]:
    """(orientation, unsupported area, bed contact) for the six uprights."""
    out = []
    for o in ORIENT_SIX:
        grid = voxelize(orient(mesh, o), pitch=cal.pitch)
        m = support_metrics(grid)
        out.append((o, m.unsupported_mm2, m.bed_contact_mm2))
    return out


def select_orientation(metrics: list[tuple[Orientation, float, float]]) -> Orientation:
    """Least support need; near-ties (2% relative) go to the biggest footprint."""
    best_unsup = min(m[1] for m in metrics)
    tied = [m for m in metrics if m[1] <= best_unsup * (1.0 + NEAR_TIE_REL)]
    best_contact = max(m[2] for m in tied)
    for o, _, contact in tied:
        if contact == best_contact:
            return o
    return tied[0][0]


def baseline_reorient(
    mesh: TriangleMesh,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    evaluator: Evaluator | None = None,
) -> BaselineOutcome:
    """Stock profile in the best of the six axis-aligned orientations."""
    ev = evaluator if evaluator is not None else Evaluator(mesh, weights=weights, cal=cal)
    chosen = select_orientation(reorient_metrics(mesh, cal=cal))
    config = replace(default_config(), orientation=chosen)
    return _score_with_brim_rule(ev, config, "reorient")


def parse_config_document(text: str) -> PrintConfig:
    """Accept either the JSON or the flat key=value document form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        import json

        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigDocumentError([f"not valid JSON: {exc}"]) from None
        return from_dict(doc)
    return from_flat(text)


def baseline_external(
    mesh: TriangleMesh,
    document: str | dict | PrintConfig,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    evaluator: Evaluator | None = None,
) -> BaselineOutcome:
    """Score a configuration recommended by some outside source as-is."""
    if isinstance(document, PrintConfig):
        config = document
    elif isinstance(document, dict):
        config = from_dict(document)
    else:
        config = parse_config_document(document)
    ev = evaluator if evaluator is not None else Evaluator(mesh, weights=weights, cal=cal)
    return _score_with_brim_rule(ev, config, "external")
