"""Render evaluation results into a deterministic guidance prompt.

The prompt is plain text with fixed ordering and number formatting so
that identical evaluations always produce byte-identical requests,
which keeps remote-provider runs reproducible and cacheable.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..configspace import PrintConfig, to_flat
from ..evaluator.report import PENALTY_NAMES, VETO_KINDS, EvaluationReport
from .catalog import catalog_text
from .schema import ISSUE_NAMES


@dataclass(frozen=True)
class GuidanceRequest:
    system_text: str
    user_text: str
    budget: int
    report: EvaluationReport | None = None
    config: PrintConfig | None = None


def _asset(name: str) -> str:
    return (resources.files("printopt.guidance") / "assets" / name).read_text()


def system_text() -> str:
    return _asset("system.txt")


def diagnostics_text(report: EvaluationReport) -> str:
    """Severity-ordered summary: triggered checks, then risks, then pressures."""
    lines = []
    status = "INFEASIBLE (blocking check triggered)" if report.infeasible else "feasible"
    lines.append(
        f"objective {report.objective:.4f}"
        f" (time {report.time_s:.1f} s, material {report.cost_g:.3f} g,"
        f" quality {report.quality:.4f})"
    )
    lines.append(f"status: {status}")
    if report.shell_fallback:
        lines.append("note: mesh was not watertight; geometry treated as a shell")
    order = sorted(
        report.vetoes,
        key=lambda v: (not v.triggered, -v.risk, VETO_KINDS.index(v.kind)),
    )
    lines.append("blocking checks (triggered first, then by risk):")
    for v in order:
        flag = "TRIGGERED" if v.triggered else "ok"
        lines.append(f"  - {v.kind}: {flag}, risk {v.risk:.3f} ({v.evidence})")
    pens = report.penalties.as_dict()
    pen_order = sorted(PENALTY_NAMES, key=lambda n: (-pens[n], PENALTY_NAMES.index(n)))
    lines.append("quality pressures (0 none .. 1 severe, worst first):")
    for name in pen_order:
        lines.append(f"  - {name}: {pens[name]:.4f}")
    return "\n".join(lines)


def build_request(
    report: EvaluationReport,
    config: PrintConfig,
    budget: int,
    part_name: str | None = None,
    include_examples: bool = True,
) -> GuidanceRequest:
    sections = []
    if part_name:
        sections.append(f"Part: {part_name}")
    sections.append("Current configuration:\n" + to_flat(config))
    sections.append("Evaluation:\n" + diagnostics_text(report))
    sections.append("Action catalog:\n" + catalog_text())
    sections.append(
        "Known issue names: " + ", ".join(ISSUE_NAMES)
    )
    plural = "s" if budget != 1 else ""
    sections.append(
        f"Propose at most {budget} corrective action{plural} for the most"
        " severe issue. Reply with one JSON object only."
    )
    if include_examples:
        sections.append(_asset("examples.txt"))
    return GuidanceRequest(
        system_text=system_text(),
        user_text="\n\n".join(sections),
        budget=budget,
        report=report,
        config=config,
    )
