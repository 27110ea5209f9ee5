"""Compile corrective actions into a soft-violation score and a focus set.

An action list becomes (i) V(x) in [0, 1], a differentiable score that is
zero exactly when a candidate realizes every proposed change, and (ii)
the implicated-parameter set, the union of parameters the actions touch.
The optimizer multiplies its acquisition by exp(-eta * V) and can freeze
everything outside the implicated set.

Pipeline per action: decompose into atomic clauses, evaluate residual
templates, normalize each residual to [0, 1), then combine through
soft-AND or soft-OR; action scores combine through a product complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .configspace import ENCODED_SLICES, FloatSpec, IntSpec, CatSpec, PrintConfig, SPECS, _get
from .errors import ActionCompileError
from .guidance.schema import CorrectiveAction

RATIO_EPS = 1e-6

_IMPORTANCE = {"low": 0.5, "normal": 1.0, "high": 2.0}
_WEIGHT_FLOOR = 0.25

_SPEC_BY_NAME = {s.name: s for s in SPECS}


@dataclass(frozen=True)
class Clause:
    """One atomic requirement on candidate configurations.

    Fields beyond ``template``, ``params`` and ``weight`` apply only to
    their template: ``k`` (directional magnitude or sum cap), ``alpha``
    (numeric equality target), ``target`` (categorical equality), ``lo``
    and ``hi`` (range), ``delta`` (margin), ``beta`` (ratio),
    ``direction`` and ``anchor`` (directional).
    """

    template: str
    params: tuple[str, ...]
    weight: float = 1.0
    k: float = 0.0
    alpha: float = 0.0
    target: object = None
    lo: float = 0.0
    hi: float = 0.0
    delta: float = 0.0
    beta: float = 0.0
    direction: int = 1
    anchor: float = 0.0

    def to_dict(self) -> dict:
        out: dict = {
            "template": self.template,
            "params": list(self.params),
            "weight": self.weight,
        }
        if self.template == "directional":
            out.update(k=self.k, direction=self.direction, anchor=self.anchor)
        elif self.template == "equality":
            out.update(target=self.target) if self.target is not None else out.update(alpha=self.alpha)
        elif self.template == "range":
            out.update(lo=self.lo, hi=self.hi)
        elif self.template == "margin":
            out.update(delta=self.delta)
        elif self.template == "ratio":
            out.update(beta=self.beta)
        elif self.template == "sum_cap":
            out.update(k=self.k)
        return out


def default_magnitude(param: str) -> float:
    """Step used when an action omits one: 10% of the parameter's range."""
    spec = _SPEC_BY_NAME[param]
    if isinstance(spec, CatSpec):
        raise ActionCompileError(f"{param} is categorical and has no magnitude")
    return 0.1 * (spec.hi - spec.lo)


def action_weight(action: CorrectiveAction) -> float:
    w = _IMPORTANCE.get(action.importance, 1.0)
    if action.confidence is not None:
        w *= action.confidence
    return max(w, _WEIGHT_FLOOR)


def decompose(action: CorrectiveAction, incumbent: PrintConfig) -> tuple[list[Clause], str]:
    """Split an action into clauses plus its aggregator kind."""
    try:
        entry = action.entry()
    except KeyError:
        raise ActionCompileError(f"action {action.id!r} is not in the catalog") from None
    weight = action_weight(action)
    clauses = []
    if entry.mode == "switch":
        param = entry.params[0]
        if not isinstance(_SPEC_BY_NAME.get(param), CatSpec):
            raise ActionCompileError(f"{action.id}: switch on non-categorical {param!r}")
        clauses.append(
            Clause("equality", (param,), weight=weight, target=action.target)
        )
    else:
        direction = 1 if entry.mode == "increase" else -1
        for param in entry.params:
            spec = _SPEC_BY_NAME.get(param)
            if spec is None or isinstance(spec, CatSpec):
                raise ActionCompileError(
                    f"{action.id}: parameter {param!r} is not numeric"
                )
            k = action.magnitude if action.magnitude is not None else default_magnitude(param)
            clauses.append(
                Clause(
                    "directional",
                    (param,),
                    weight=weight,
                    k=float(k),
                    direction=direction,
                    anchor=float(_get(incumbent, param)),
                )
            )
    return clauses, ("or" if entry.disjunctive else "and")


def _relu(x):
    return np.maximum(x, 0.0)


def clause_residual(clause: Clause, value_of, indicator_of) -> float | np.ndarray:
    """Evaluate one residual template.

    ``value_of(param)`` returns candidate numeric values and
    ``indicator_of(param, target)`` the selected-category indicator;
    both may return scalars or batch arrays.
    """
    t = clause.template
    if t == "directional":
        du = value_of(clause.params[0]) - clause.anchor
        return _relu(clause.k - clause.direction * du)
    if t == "equality":
        if clause.target is not None:
            h = indicator_of(clause.params[0], clause.target)
            return (h - 1.0) ** 2
        u = value_of(clause.params[0])
        return (u - clause.alpha) ** 2
    if t == "range":
        u = value_of(clause.params[0])
        return _relu(clause.lo - u) + _relu(u - clause.hi)
    if t == "margin":
        u = value_of(clause.params[0])
        v = value_of(clause.params[1])
        return _relu((v + clause.delta) - u)
    if t == "ratio":
        u = value_of(clause.params[0])
        v = value_of(clause.params[1])
        return (u / (v + RATIO_EPS) - clause.beta) ** 2
    if t == "sum_cap":
        total = sum(value_of(p) for p in clause.params)
        return _relu(total - clause.k)
    if t == "monotone_sequence":
        vals = [value_of(p) for p in clause.params]
        acc = 0.0
        for a, b in zip(vals, vals[1:]):
            acc = acc + _relu(a - b)
        return acc
    raise ActionCompileError(f"unknown template {t!r}")


def normalize(rho):
    """Map a nonnegative residual into [0, 1)."""
    return rho / (1.0 + rho)


def aggregate_clauses(rho_tilde, weights, kind: str):
    """Combine normalized residuals: 'and' punishes any miss, 'or' any hit."""
    rho_tilde = np.asarray(rho_tilde, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if rho_tilde.ndim > 1:
        weights = weights.reshape(-1, *([1] * (rho_tilde.ndim - 1)))
    if kind == "and":
        return 1.0 - np.prod((1.0 - rho_tilde) ** weights, axis=0)
    if kind == "or":
        return np.prod(rho_tilde**weights, axis=0)
    raise ActionCompileError(f"unknown aggregator {kind!r}")


@dataclass(frozen=True)
class CompiledAction:
    action: CorrectiveAction | None
    clauses: tuple[Clause, ...]
    aggregator: str


@dataclass(frozen=True)
class CompiledGuidance:
    """Evaluable violation score plus the implicated-parameter set."""

    actions: tuple[CompiledAction, ...]
    implicated: frozenset[str]
    incumbent_residuals: tuple = field(default=(), compare=False)

    def violation(self, config: PrintConfig) -> float:
        value_of = lambda p: float(_get(config, p))
        indicator_of = lambda p, t: 1.0 if _get(config, p) == t else 0.0
        keep = 1.0
        for ca in self.actions:
            keep *= 1.0 - self._action_score(ca, value_of, indicator_of)
        return 1.0 - keep

    def violation_batch(self, X: np.ndarray) -> np.ndarray:
        """V over encoded candidate rows, matching decode's quantization."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        values = _values_batch(X, self._numeric_params())
        argmaxes = _argmax_batch(X, self._categorical_params())
        value_of = lambda p: values[p]
        def indicator_of(p, t):
            spec = _SPEC_BY_NAME[p]
            return (argmaxes[p] == spec.choices.index(t)).astype(np.float64)
        keep = np.ones(len(X))
        for ca in self.actions:
            keep = keep * (1.0 - self._action_score(ca, value_of, indicator_of))
        return 1.0 - keep

    def _action_score(self, ca: CompiledAction, value_of, indicator_of):
        # broadcasting keeps one code path for scalar and batch inputs
        if ca.aggregator == "and":
            keep = 1.0
            for c in ca.clauses:
                rt = normalize(clause_residual(c, value_of, indicator_of))
                keep = keep * (1.0 - rt) ** c.weight
            return 1.0 - keep
        prod = 1.0
        for c in ca.clauses:
            rt = normalize(clause_residual(c, value_of, indicator_of))
            prod = prod * rt**c.weight
        return prod

    def _numeric_params(self) -> list[str]:
        seen = dict.fromkeys(
            p
            for ca in self.actions
            for c in ca.clauses
            for p in c.params
            if not isinstance(_SPEC_BY_NAME[p], CatSpec)
        )
        return list(seen)

    def _categorical_params(self) -> list[str]:
        seen = dict.fromkeys(
            p
            for ca in self.actions
            for c in ca.clauses
            for p in c.params
            if isinstance(_SPEC_BY_NAME[p], CatSpec)
        )
        return list(seen)

    def gradient(self, config: PrintConfig) -> dict[str, float]:
        """dV/du for continuous implicated parameters (subgradients at kinks)."""
        value_of = lambda p: float(_get(config, p))
        indicator_of = lambda p, t: 1.0 if _get(config, p) == t else 0.0
        scores = [
            float(self._action_score(ca, value_of, indicator_of)) for ca in self.actions
        ]
        out: dict[str, float] = {}
        for name in self.implicated:
            if not isinstance(_SPEC_BY_NAME[name], FloatSpec):
                continue
            total = 0.0
            for a_idx, ca in enumerate(self.actions):
                outer = 1.0
                for b_idx, s in enumerate(scores):
                    if b_idx != a_idx:
                        outer *= 1.0 - s
                dva = _action_partial(ca, name, value_of, indicator_of)
                total += outer * dva
            out[name] = total
        return out

    def audit_dict(self) -> dict:
        return {
            "implicated": sorted(self.implicated),
            "actions": [
                {
                    "action": ca.action.to_dict() if ca.action else None,
                    "aggregator": ca.aggregator,
                    "clauses": [c.to_dict() for c in ca.clauses],
                    "incumbent_residuals": list(res),
                }
                for ca, res in zip(self.actions, self.incumbent_residuals)
            ],
        }


def _action_partial(ca: CompiledAction, name: str, value_of, indicator_of) -> float:
    rhos = [float(clause_residual(c, value_of, indicator_of)) for c in ca.clauses]
    tildes = [normalize(r) for r in rhos]
    weights = [c.weight for c in ca.clauses]
    total = 0.0
    for i, clause in enumerate(ca.clauses):
        if name not in clause.params:
            continue
        drho = _residual_partial(clause, name, value_of)
        if drho == 0.0:
            continue
        dtilde = drho / (1.0 + rhos[i]) ** 2
        if ca.aggregator == "and":
            part = weights[i] * (1.0 - tildes[i]) ** (weights[i] - 1.0)
            for j, (tj, wj) in enumerate(zip(tildes, weights)):
                if j != i:
                    part *= (1.0 - tj) ** wj
        else:
            if tildes[i] == 0.0:
                if weights[i] == 1.0:
                    part = 1.0
                else:
                    part = 0.0  # subgradient choice at the w != 1 kink
            else:
                part = weights[i] * tildes[i] ** (weights[i] - 1.0)
            for j, (tj, wj) in enumerate(zip(tildes, weights)):
                if j != i:
                    part *= tj**wj
        total += part * dtilde
    return total


def _residual_partial(clause: Clause, name: str, value_of) -> float:
    t = clause.template
    if t == "directional":
        du = value_of(clause.params[0]) - clause.anchor
        return -float(clause.direction) if clause.k - clause.direction * du > 0 else 0.0
    if t == "equality":
        if clause.target is not None:
            return 0.0
        return 2.0 * (value_of(clause.params[0]) - clause.alpha)
    if t == "range":
        u = value_of(clause.params[0])
        if u < clause.lo:
            return -1.0
        if u > clause.hi:
            return 1.0
        return 0.0
    if t == "margin":
        u = value_of(clause.params[0])
        v = value_of(clause.params[1])
        if (v + clause.delta) - u <= 0:
            return 0.0
        return -1.0 if name == clause.params[0] else 1.0
    if t == "ratio":
        u = value_of(clause.params[0])
        v = value_of(clause.params[1])
        resid = u / (v + RATIO_EPS) - clause.beta
        if name == clause.params[0]:
            return 2.0 * resid / (v + RATIO_EPS)
        return -2.0 * resid * u / (v + RATIO_EPS) ** 2
    if t == "sum_cap":
        total = sum(value_of(p) for p in clause.params)
        return 1.0 if total - clause.k > 0 else 0.0
    if t == "monotone_sequence":
        vals = [value_of(p) for p in clause.params]
        g = 0.0
        for i, p in enumerate(clause.params):
            if p != name:
                continue
            if i + 1 < len(vals) and vals[i] - vals[i + 1] > 0:
                g += 1.0
            if i > 0 and vals[i - 1] - vals[i] > 0:
                g -= 1.0
        return g
    raise ActionCompileError(f"unknown template {t!r}")


def compile_guidance(
    actions: list[CorrectiveAction] | tuple[CorrectiveAction, ...],
    incumbent: PrintConfig,
) -> CompiledGuidance:
    """Compile an action list against the incumbent configuration."""
    if not actions:
        raise ActionCompileError("cannot compile an empty action list")
    compiled = []
    implicated: set[str] = set()
    for action in actions:
        clauses, kind = decompose(action, incumbent)
        compiled.append(CompiledAction(action=action, clauses=tuple(clauses), aggregator=kind))
        for c in clauses:
            implicated.update(c.params)
    value_of = lambda p: float(_get(incumbent, p))
    indicator_of = lambda p, t: 1.0 if _get(incumbent, p) == t else 0.0
    residuals = tuple(
        tuple(float(clause_residual(c, value_of, indicator_of)) for c in ca.clauses)
        for ca in compiled
    )
    return CompiledGuidance(
        actions=tuple(compiled),
        implicated=frozenset(implicated),
        incumbent_residuals=residuals,
    )


def from_clauses(groups: list[tuple[list[Clause], str]]) -> CompiledGuidance:
    """Build directly from clause groups (templates with no catalog action)."""
    compiled = tuple(
        CompiledAction(action=None, clauses=tuple(cs), aggregator=kind)
        for cs, kind in groups
    )
    implicated = frozenset(p for ca in compiled for c in ca.clauses for p in c.params)
    return CompiledGuidance(actions=compiled, implicated=implicated)


def _values_batch(X: np.ndarray, names: list[str]) -> dict[str, np.ndarray]:
    """Candidate parameter values per row, mirroring decode exactly."""
    out: dict[str, np.ndarray] = {}
    need = set(names)
    if "first_layer_height" in need:
        need.add("layer_height")
    for name in need:
        spec = _SPEC_BY_NAME[name]
        at = ENCODED_SLICES[name].start
        raw = spec.lo + X[:, at] * (spec.hi - spec.lo)
        if isinstance(spec, IntSpec):
            out[name] = np.clip(np.round(raw), spec.lo, spec.hi)
        else:
            out[name] = np.clip(raw, spec.lo, spec.hi)
    if "first_layer_height" in out:
        out["first_layer_height"] = np.maximum(
            out["first_layer_height"], 0.5 * out["layer_height"]
        )
    return out


def _argmax_batch(X: np.ndarray, names: list[str]) -> dict[str, np.ndarray]:
    return {name: np.argmax(X[:, ENCODED_SLICES[name]], axis=1) for name in names}
