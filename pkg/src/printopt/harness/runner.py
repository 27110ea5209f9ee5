"""Run the parts x seeds x methods grid and persist results on disk.

Layout under a results directory:

    <dir>/<method>/<part>__seed<k>.trace.jsonl   per optimization run
    <dir>/<method>/summary.json                  per method

Summary files are self-contained (objectives, flags, configs), so
comparison and reporting never re-run anything.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..configspace import PrintConfig, from_dict, to_dict
from ..evaluator import Calibration, DEFAULT, Evaluator, ObjectiveWeights
from ..mesh import TriangleMesh
from ..optimizer import run_optimization
from .baselines import BaselineOutcome, baseline_default, baseline_external, baseline_reorient
from .curves import running_min
from .winrate import MethodResult

DEFAULT_SEEDS = tuple(range(10))


def _method_dir(out_dir, method: str) -> Path:
    d = Path(out_dir) / method
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_summary(d: Path, payload: dict) -> None:
    with open(d / "summary.json", "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def optimize_grid(
    meshes: dict[str, TriangleMesh],
    method: str,
    seeds: tuple[int, ...] = DEFAULT_SEEDS,
    provider=None,
    budget: int = 2,
    iterations: int = 40,
    warm: int = 16,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    eta: float = 4.0,
    out_dir=None,
    evaluators: dict[str, Evaluator] | None = None,
) -> MethodResult:
    """One optimization variant across every part and seed."""
    objects = tuple(meshes)
    n_evals = warm + iterations
    objectives = np.zeros((len(objects), len(seeds)))
    infeasible = np.zeros((len(objects), len(seeds)), dtype=bool)
    curves = np.zeros((len(objects), len(seeds), n_evals))
    configs: list[list[PrintConfig]] = []
    d = _method_dir(out_dir, method) if out_dir is not None else None
    for o, name in enumerate(objects):
        ev = (evaluators or {}).get(name)
        if ev is None:
            ev = Evaluator(meshes[name], weights=weights, cal=cal)
        row_cfgs = []
        for s, seed in enumerate(seeds):
            trace = d / f"{name}__seed{seed}.trace.jsonl" if d is not None else None
            result = run_optimization(
                meshes[name],
                seed=seed,
                provider=provider,
                budget=budget,
                iterations=iterations,
                warm=warm,
                cal=cal,
                eta=eta,
                part_name=name,
                trace_path=trace,
                evaluator=ev,
            )
            objectives[o, s] = result.objectives[result.incumbent]
            infeasible[o, s] = result.best_report.infeasible
            curves[o, s] = running_min(result.objectives)
            row_cfgs.append(result.best_config)
        configs.append(row_cfgs)
    mr = MethodResult(
        method=method,
        objects=objects,
        seeds=tuple(seeds),
        objectives=objectives,
        infeasible=infeasible,
        configs=tuple(tuple(row) for row in configs),
        curves=curves,
    )
    if d is not None:
        _write_summary(d, _summary_payload(mr))
    return mr


def baseline_grid(
    meshes: dict[str, TriangleMesh],
    kind: str,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    document=None,
    out_dir=None,
    evaluators: dict[str, Evaluator] | None = None,
) -> MethodResult:
    """A single-shot baseline across every part (one pseudo-seed)."""
    objects = tuple(meshes)
    objectives = np.zeros((len(objects), 1))
    infeasible = np.zeros((len(objects), 1), dtype=bool)
    configs = []
    adjusted = []
    for o, name in enumerate(objects):
        ev = (evaluators or {}).get(name)
        outcome: BaselineOutcome
        if kind == "default":
            outcome = baseline_default(meshes[name], weights, cal, evaluator=ev)
        elif kind == "reorient":
            outcome = baseline_reorient(meshes[name], weights, cal, evaluator=ev)
        elif kind == "external":
            if document is None:
                raise ValueError("external baseline needs a config document")
            outcome = baseline_external(meshes[name], document, weights, cal, evaluator=ev)
        else:
            raise ValueError(f"unknown baseline kind {kind!r}")
        objectives[o, 0] = outcome.report.objective
        infeasible[o, 0] = outcome.report.infeasible
        configs.append((outcome.config,))
        adjusted.append(outcome.brim_adjusted)
    mr = MethodResult(
        method=kind,
        objects=objects,
        seeds=(0,),
        objectives=objectives,
        infeasible=infeasible,
        configs=tuple(configs),
    )
    if out_dir is not None:
        payload = _summary_payload(mr)
        payload["brim_adjusted"] = adjusted
        _write_summary(_method_dir(out_dir, kind), payload)
    return mr


def _summary_payload(mr: MethodResult) -> dict:
    return {
        "method": mr.method,
        "objects": list(mr.objects),
        "seeds": [int(s) for s in mr.seeds],
        "objectives": [[float(v) for v in row] for row in mr.objectives],
        "infeasible": [[bool(v) for v in row] for row in mr.infeasible],
        "configs": [[to_dict(c) for c in row] for row in mr.configs],
    }


def load_method(method_dir) -> MethodResult:
    """Rebuild a MethodResult from a persisted summary (plus traces if any)."""
    method_dir = Path(method_dir)
    with open(method_dir / "summary.json") as fh:
        doc = json.load(fh)
    objects = tuple(doc["objects"])
    seeds = tuple(int(s) for s in doc["seeds"])
    curves = _load_curves(method_dir, objects, seeds)
    return MethodResult(
        method=doc["method"],
        objects=objects,
        seeds=seeds,
        objectives=np.array(doc["objectives"], dtype=np.float64),
        infeasible=np.array(doc["infeasible"], dtype=bool),
        configs=tuple(
            tuple(from_dict(c) for c in row) for row in doc["configs"]
        ),
        curves=curves,
    )


def trace_objectives(path) -> np.ndarray:
    """Evaluation-order objective sequence out of one trace file."""
    warm_recs = []
    iter_recs = []
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            if rec["type"] == "warm":
                warm_recs.append((rec["index"], rec["report"]["objective"]))
            elif rec["type"] == "iteration":
                iter_recs.append((rec["i"], rec["report"]["objective"]))
    warm_recs.sort()
    iter_recs.sort()
    return np.array([v for _, v in warm_recs] + [v for _, v in iter_recs])


def _load_curves(method_dir: Path, objects, seeds) -> np.ndarray | None:
    rows = []
    for name in objects:
        per_seed = []
        for seed in seeds:
            p = method_dir / f"{name}__seed{seed}.trace.jsonl"
            if not p.exists():
                return None
            per_seed.append(running_min(trace_objectives(p)))
        rows.append(per_seed)
    lengths = {len(c) for row in rows for c in row}
    if len(lengths) != 1:
        return None
    return np.array(rows)


def load_results_dir(out_dir) -> list[MethodResult]:
    out = []
    for child in sorted(Path(out_dir).iterdir()):
        if child.is_dir() and (child / "summary.json").exists():
            out.append(load_method(child))
    return out
