"""Evaluation result types and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field

VETO_KINDS = (
    "unsupported_island",
    "slender_tower",
    "low_bed_adhesion",
    "collapsing_overhang",
    "long_bridge",
)

PENALTY_NAMES = ("stair", "strength", "zbond", "pi", "xy", "stringing", "support")

# issue groups: surface, functional, process
GROUPS = {
    "S": ("stair",),
    "F": ("strength", "zbond", "pi", "xy"),
    "P": ("stringing", "support"),
}


@dataclass(frozen=True)
class VetoResult:
    kind: str
    triggered: bool
    risk: float
    evidence: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "triggered": self.triggered,
            "risk": self.risk,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class PenaltyReport:
    stair: float
    strength: float
    zbond: float
    pi: float
    xy: float
    stringing: float
    support: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in PENALTY_NAMES}

    def group_members(self, tag: str) -> list[float]:
        return [getattr(self, name) for name in GROUPS[tag]]


@dataclass(frozen=True)
class ObjectiveWeights:
    """Weights and normalization references of the scalar objective."""

    w_t: float = 0.1
    w_c: float = 0.1
    w_q: float = 0.8
    t_r: float = 1.0
    c_r: float = 1.0

    def __post_init__(self):
        if min(self.w_t, self.w_c, self.w_q) < 0 or self.w_t + self.w_c + self.w_q <= 0:
            raise ValueError("weights must be nonnegative with a positive sum")
        if self.t_r <= 0 or self.c_r <= 0:
            raise ValueError("references must be positive")

    def with_references(self, t_r: float, c_r: float) -> "ObjectiveWeights":
        return ObjectiveWeights(self.w_t, self.w_c, self.w_q, t_r, c_r)

    def to_dict(self) -> dict:
        return {
            "w_t": self.w_t,
            "w_c": self.w_c,
            "w_q": self.w_q,
            "t_r": self.t_r,
            "c_r": self.c_r,
        }


@dataclass(frozen=True)
class EvaluationReport:
    objective: float
    time_s: float
    cost_g: float
    quality: float
    infeasible: bool
    vetoes: tuple
    penalties: PenaltyReport
    group_scores: dict = field(default_factory=dict)  # g_S, g_F, g_P
    group_excess: dict = field(default_factory=dict)  # e_S, e_F, e_P
    shell_fallback: bool = False

    def triggered_vetoes(self) -> list[VetoResult]:
        return [v for v in self.vetoes if v.triggered]

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "time_s": self.time_s,
            "cost_g": self.cost_g,
            "quality": self.quality,
            "infeasible": self.infeasible,
            "vetoes": [v.to_dict() for v in self.vetoes],
            "penalties": self.penalties.as_dict(),
            "group_scores": dict(self.group_scores),
            "group_excess": dict(self.group_excess),
            "shell_fallback": self.shell_fallback,
        }
