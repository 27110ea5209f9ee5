"""Evidence-driven search for a good print configuration of one part.

Each round evaluates the incumbent's diagnostics, asks the guidance
provider (if any) for corrective actions, compiles them into a soft
violation score plus an implicated-parameter set, and proposes the next
candidate by expected improvement discounted by the violation. Params
outside the implicated set are frozen to the incumbent's encoded bits,
so guided rounds only move the levers the guidance pointed at.

Proposals, surrogate state, and guidance audits land in a JSONL trace
that contains no wall-clock data: identical seeds and providers yield
byte-identical traces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from ..compiler import CompiledGuidance, compile_guidance
from ..configspace import (
    ENCODED_DIM,
    ENCODED_SLICES,
    PARAM_NAMES,
    PrintConfig,
    SPECS,
    decode,
    encode,
    snap,
    sobol_sample,
    to_dict,
)
from ..errors import AlignmentError
from ..evaluator import Calibration, DEFAULT, EvaluationReport, Evaluator, ObjectiveWeights
from ..guidance.prompt import build_request
from ..guidance.providers import request_guidance
from ..mesh import TriangleMesh

WARM_SAMPLES = 16
ITERATIONS = 40
POOL_SOBOL = 2048
POOL_LOCAL = 256
LOCAL_SIGMA = 0.1
GUIDE_SHARPNESS = 4.0
FULL_FIT_PERIOD = 5
GP_RESTARTS = 5

_LH = ENCODED_SLICES["layer_height"].start
_FLH = ENCODED_SLICES["first_layer_height"].start
_LH_SPEC = SPECS[0]
_FLH_SPEC = SPECS[1]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def incumbent_index(reports: list[EvaluationReport], objectives: np.ndarray) -> int:
    """Best feasible point; if nothing is feasible, best overall."""
    feasible = np.array([not r.infeasible for r in reports], dtype=bool)
    if np.any(feasible):
        idx = np.flatnonzero(feasible)
        return int(idx[np.argmin(objectives[idx])])
    return int(np.argmin(objectives))


def freeze_pool(pool: np.ndarray, enc_inc: np.ndarray, free: frozenset[str]) -> np.ndarray:
    """Copy non-implicated coordinates bitwise from the incumbent.

    The layer-height pair needs care: decode lifts first_layer_height to
    half the layer height, and that repair must never move a frozen
    coordinate. Free layer heights are capped (and nudged below the
    exact float boundary if needed) when first_layer_height is frozen;
    the mirror case lifts the free first layer instead.
    """
    pool = pool.copy()
    for name in PARAM_NAMES:
        if name in free:
            continue
        sl = ENCODED_SLICES[name]
        pool[:, sl] = enc_inc[sl]

    lh_free = "layer_height" in free
    flh_free = "first_layer_height" in free
    lh_lo, lh_hi = _LH_SPEC.lo, _LH_SPEC.hi
    flh_lo, flh_hi = _FLH_SPEC.lo, _FLH_SPEC.hi
    if lh_free and not flh_free:
        flh_inc = flh_lo + enc_inc[_FLH] * (flh_hi - flh_lo)
        cap_coord = (2.0 * flh_inc - lh_lo) / (lh_hi - lh_lo)
        for _ in range(64):  # converges in one or two nudges
            lh_val = lh_lo + pool[:, _LH] * (lh_hi - lh_lo)
            bad = 0.5 * lh_val > flh_inc
            if not np.any(bad):
                break
            over = pool[bad, _LH]
            capped = np.minimum(over, cap_coord)
            moved = capped < over
            capped[~moved] = np.nextafter(capped[~moved], -np.inf)
            pool[bad, _LH] = np.maximum(capped, 0.0)
    elif flh_free and not lh_free:
        lh_inc = lh_lo + enc_inc[_LH] * (lh_hi - lh_lo)
        floor_coord = (0.5 * lh_inc - flh_lo) / (flh_hi - flh_lo)
        for _ in range(64):
            flh_val = flh_lo + pool[:, _FLH] * (flh_hi - flh_lo)
            bad = flh_val < 0.5 * lh_inc
            if not np.any(bad):
                break
            under = pool[bad, _FLH]
            lifted = np.maximum(under, floor_coord)
            moved = lifted > under
            lifted[~moved] = np.nextafter(lifted[~moved], np.inf)
            pool[bad, _FLH] = np.minimum(lifted, 1.0)
    return pool


@dataclass
class RunResult:
    part_name: str
    seed: int
    X: np.ndarray
    objectives: np.ndarray
    configs: list[PrintConfig]
    reports: list[EvaluationReport]
    incumbent: int
    records: list[dict] = field(repr=False, default_factory=list)

    @property
    def best_config(self) -> PrintConfig:
        return self.configs[self.incumbent]

    @property
    def best_report(self) -> EvaluationReport:
        return self.reports[self.incumbent]

    def best_so_far(self) -> np.ndarray:
        """Feasible-only running minimum; infeasible prefixes carry NaN."""
        out = np.full(len(self.objectives), np.nan)
        best = np.inf
        for i, (obj, rep) in enumerate(zip(self.objectives, self.reports)):
            if not rep.infeasible:
                best = min(best, float(obj))
            if np.isfinite(best):
                out[i] = best
        return out

    def write_trace(self, path) -> None:
        with open(path, "w") as fh:
            for record in self.records:
                fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
                fh.write("\n")


def run_optimization(
    mesh: TriangleMesh,
    seed: int,
    provider=None,
    budget: int = 2,
    iterations: int = ITERATIONS,
    warm: int = WARM_SAMPLES,
    weights: ObjectiveWeights | None = None,
    cal: Calibration = DEFAULT,
    eta: float = GUIDE_SHARPNESS,
    part_name: str | None = None,
    trace_path=None,
    load_axis=None,
    evaluator: Evaluator | None = None,
) -> RunResult:
    from .acquisition import expected_improvement, guided_score
    from .gp import GaussianProcess

    name = part_name or mesh.name or "part"
    ev = evaluator if evaluator is not None else Evaluator(mesh, weights=weights, cal=cal)
    w = ev.weights

    records: list[dict] = [
        {
            "type": "meta",
            "part": name,
            "seed": seed,
            "warm": warm,
            "iterations": iterations,
            "budget": budget,
            "eta": eta,
            "provider": type(provider).__name__ if provider is not None else "none",
            "weights": {
                "w_t": w.w_t,
                "w_c": w.w_c,
                "w_q": w.w_q,
                "t_r": w.t_r,
                "c_r": w.c_r,
            },
        }
    ]

    configs = list(sobol_sample(warm, seed=seed))
    X = np.stack([encode(c) for c in configs])
    reports = [ev.evaluate(c, load_axis=load_axis) for c in configs]
    objectives = np.array([r.objective for r in reports])
    for k, (c, r) in enumerate(zip(configs, reports)):
        records.append(
            _jsonable(
                {
                    "type": "warm",
                    "index": k,
                    "x": X[k],
                    "config": to_dict(c),
                    "report": r.to_dict(),
                }
            )
        )

    gp = GaussianProcess()
    inc = incumbent_index(reports, objectives)

    for i in range(1, iterations + 1):
        ss = np.random.SeedSequence(entropy=(seed, 7, i))
        kid_pool, kid_local, kid_gp = ss.spawn(3)

        inc_config = configs[inc]
        inc_report = reports[inc]
        enc_inc = X[inc]

        guidance_rec: dict | None = None
        compiled: CompiledGuidance | None = None
        if provider is not None and budget > 0:
            request = build_request(inc_report, inc_config, budget, part_name=name)
            response, attempts = request_guidance(provider, request)
            guidance_rec = {
                "response": response.to_dict() if response else None,
                "attempts": [
                    {"reply": a.reply, "error": a.error} for a in attempts
                ],
            }
            if response is not None:
                compiled = compile_guidance(list(response.actions), inc_config)
                guidance_rec["compiled"] = compiled.audit_dict()
                guidance_rec["violation_incumbent"] = compiled.violation(inc_config)

        full = (i - 1) % FULL_FIT_PERIOD == 0
        gp.fit(
            X,
            objectives,
            rng=np.random.default_rng(kid_gp),
            restarts=GP_RESTARTS,
            warm_only=not full,
        )

        sobol = qmc.Sobol(d=ENCODED_DIM, scramble=True, seed=np.random.default_rng(kid_pool))
        local = enc_inc + np.random.default_rng(kid_local).normal(
            0.0, LOCAL_SIGMA, size=(POOL_LOCAL, ENCODED_DIM)
        )
        base = snap(np.clip(np.vstack([sobol.random(POOL_SOBOL), local]), 0.0, 1.0))
        seen = {row.tobytes() for row in X}
        pool = base
        if compiled is not None:
            pool = freeze_pool(base, enc_inc, compiled.implicated)
            if all(row.tobytes() in seen for row in pool):
                # every config the advice allows has been tried; the
                # round proceeds unguided on the unfrozen pool
                if guidance_rec is not None:
                    guidance_rec["slice_exhausted"] = True
                compiled = None
                pool = base

        mean, std = gp.predict(pool)
        ei = expected_improvement(mean, std, float(objectives[inc]))
        violation = compiled.violation_batch(pool) if compiled is not None else None
        score = guided_score(ei, violation, eta)

        order = np.argsort(-score, kind="stable")
        pick = int(order[0])
        for j in order:
            if pool[j].tobytes() not in seen:
                pick = int(j)
                break

        chosen = pool[pick]
        config = decode(chosen)
        back = encode(config)
        if not np.array_equal(back, chosen):
            raise AlignmentError(
                f"iteration {i}: encoded candidate does not round-trip through decode"
            )
        report = ev.evaluate(config, load_axis=load_axis)

        X = np.vstack([X, chosen[None, :]])
        configs.append(config)
        reports.append(report)
        objectives = np.append(objectives, report.objective)
        inc = incumbent_index(reports, objectives)

        records.append(
            _jsonable(
                {
                    "type": "iteration",
                    "i": i,
                    "guidance": guidance_rec,
                    "implicated": sorted(compiled.implicated) if compiled else [],
                    "gp": {
                        "theta": gp.theta,
                        "lml": gp.last_lml,
                        "fit": "full" if full else "warm",
                    },
                    "chosen": {
                        "x": chosen,
                        "ei": ei[pick],
                        "violation": None if violation is None else violation[pick],
                        "score": score[pick],
                    },
                    "config": to_dict(config),
                    "report": report.to_dict(),
                    "incumbent": {"index": inc, "objective": objectives[inc]},
                }
            )
        )

    result = RunResult(
        part_name=name,
        seed=seed,
        X=X,
        objectives=objectives,
        configs=configs,
        reports=reports,
        incumbent=inc,
        records=records,
    )
    if trace_path is not None:
        result.write_trace(trace_path)
    return result
