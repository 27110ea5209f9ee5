"""Structured guidance types and their validation.

Providers (remote model, scripted expert) must answer with a single JSON
object naming one primary issue and a short list of catalog actions. The
schema is strict: anything off-catalog or over budget is rejected so the
rest of the system only ever sees well-formed advice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..configspace import PARAM_NAMES
from .catalog import CATALOG, CatalogEntry

ISSUE_NAMES = (
    "unsupported_island",
    "slender_tower",
    "low_bed_adhesion",
    "collapsing_overhang",
    "long_bridge",
    "stair",
    "strength",
    "zbond",
    "pi",
    "xy",
    "stringing",
    "support",
)


@dataclass(frozen=True)
class CorrectiveAction:
    id: str
    mode: str  # increase | decrease | switch
    magnitude: float | None = None
    target: object = None  # category value for switches
    rationale: str = ""
    # weighting metadata; providers never send these, so they stay at defaults
    # unless a caller sets them programmatically
    importance: str = "normal"
    confidence: float | None = None

    def entry(self) -> CatalogEntry:
        return CATALOG[self.id]

    def to_dict(self) -> dict:
        out: dict = {"id": self.id, "mode": self.mode}
        if self.magnitude is not None:
            out["magnitude"] = self.magnitude
        if self.target is not None:
            out["target"] = self.target
        if self.rationale:
            out["rationale"] = self.rationale
        return out


@dataclass(frozen=True)
class GuidanceResponse:
    primary_issue: str
    actions: tuple[CorrectiveAction, ...]
    raw_text: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {
            "primary_issue": self.primary_issue,
            "actions": [a.to_dict() for a in self.actions],
        }


def validate_action(action: CorrectiveAction) -> list[str]:
    problems = []
    entry = CATALOG.get(action.id)
    if entry is None:
        return [f"unknown action id {action.id!r}"]
    if action.mode != entry.mode:
        problems.append(
            f"{action.id}: mode {action.mode!r} does not match catalog mode {entry.mode!r}"
        )
    if entry.mode == "switch":
        if action.target is None:
            problems.append(f"{action.id}: switch action requires a target")
        elif action.target not in entry.targets:
            problems.append(
                f"{action.id}: target {action.target!r} not in {list(entry.targets)}"
            )
        if action.magnitude is not None:
            problems.append(f"{action.id}: switch actions take no magnitude")
    else:
        if action.magnitude is not None and not action.magnitude > 0:
            problems.append(f"{action.id}: magnitude must be positive")
        if action.target is not None:
            problems.append(f"{action.id}: directional actions take no target")
    for name in entry.params:
        if name not in PARAM_NAMES:
            problems.append(f"{action.id}: unknown parameter {name!r}")
    return problems


def validate_response(response: GuidanceResponse, budget: int) -> list[str]:
    problems = []
    if response.primary_issue not in ISSUE_NAMES:
        problems.append(f"primary_issue {response.primary_issue!r} is not a known issue")
    if not response.actions:
        problems.append("at least one action is required")
    if len(response.actions) > budget:
        problems.append(f"{len(response.actions)} actions exceed the budget of {budget}")
    for action in response.actions:
        problems.extend(validate_action(action))
    return problems


def parse_response(text: str, budget: int) -> GuidanceResponse:
    """Parse and validate a provider reply; raises ValueError on any problem."""
    text = text.strip()
    # tolerate a fenced code block around the object
    if text.startswith("```"):
        text = text.strip("`")
        if text.startswith("json"):
            text = text[4:]
        text = text.strip()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"reply is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValueError("reply must be a JSON object")
    unknown = set(doc) - {"primary_issue", "actions"}
    if unknown:
        raise ValueError(f"unknown top-level keys: {sorted(unknown)}")
    raw_actions = doc.get("actions")
    if not isinstance(raw_actions, list):
        raise ValueError("'actions' must be a list")
    actions = []
    for i, item in enumerate(raw_actions):
        if not isinstance(item, dict):
            raise ValueError(f"action {i} must be an object")
        bad_keys = set(item) - {"id", "mode", "magnitude", "target", "rationale"}
        if bad_keys:
            raise ValueError(f"action {i}: unknown keys {sorted(bad_keys)}")
        magnitude = item.get("magnitude")
        if magnitude is not None:
            try:
                magnitude = float(magnitude)
            except (TypeError, ValueError):
                raise ValueError(f"action {i}: magnitude must be a number") from None
        target = item.get("target")
        entry = CATALOG.get(item.get("id", ""))
        if entry is not None and entry.mode == "switch" and target is not None:
            if entry.params[0].startswith("orientation"):
                try:
                    target = int(target)
                except (TypeError, ValueError):
                    raise ValueError(f"action {i}: orientation target must be an integer") from None
        actions.append(
            CorrectiveAction(
                id=str(item.get("id", "")),
                mode=str(item.get("mode", "")),
                magnitude=magnitude,
                target=target,
                rationale=str(item.get("rationale", "")),
            )
        )
    response = GuidanceResponse(
        primary_issue=str(doc.get("primary_issue", "")),
        actions=tuple(actions),
        raw_text=text,
    )
    problems = validate_response(response, budget)
    if problems:
        raise ValueError("; ".join(problems))
    return response
