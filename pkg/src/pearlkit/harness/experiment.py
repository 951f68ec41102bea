"""End-to-end experiment driver: wake search, abstraction, dreaming cycles.

Runs are byte-reproducible for a fixed seed and config: search budgets are
program counts (never wall clock), evaluation limits are step-based, and the
report and result files contain no timings.  Wall-clock numbers land in
manifest.json, the one file allowed to differ between identical runs.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..ensemble import Prediction, write_predictions
from ..grids import Task
from ..lang.evaluate import EvalLimits
from ..lang.library import Library, default_library, library_fingerprint
from ..recognition.dream import dream_tasks
from ..recognition.model import RecognitionModel, train_model
from ..synthesis.compress import compress
from ..synthesis.enumeration import SearchBudget
from ..synthesis.grammar import Grammar, uniform_grammar
from ..synthesis.solve import Frontier, frontier_to_json, predict, solve_task
from .score import EvaluationReport, classify_errors, score_predictions

# Step-bounded only: a wall-clock evaluation cutoff would let machine load
# change which programs survive, breaking run-to-run identity.
DETERMINISTIC_LIMITS = EvalLimits(max_steps=10_000, max_list_len=256, wall_ms=None)

_STABLE_STAT_KEYS = ("generated", "verified", "max_dl", "bands", "stopped")


@dataclass
class ExperimentResult:
    report: EvaluationReport
    frontiers: list[Frontier]
    predictions: list[Prediction]
    grammar: Grammar
    manifest: dict
    out_dir: Path
    model: RecognitionModel | None = None
    inventions: list[str] = field(default_factory=list)


def _stable_stats(stats: dict) -> dict:
    return {k: stats[k] for k in _STABLE_STAT_KEYS if k in stats}


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(
        json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def run_experiment(
    tasks: list[Task],
    out_dir: str | Path,
    seed: int = 0,
    cycles: int = 1,
    max_programs_per_task: int = 20_000,
    frontier_size: int = 10,
    k: int = 3,
    max_inventions: int = 3,
    dreams_per_cycle: int = 0,
    recognition_steps: int = 0,
    library: Library | None = None,
    name: str = "experiment",
) -> ExperimentResult:
    """Solve, compress, optionally dream and train, for `cycles` rounds, then
    write frontiers.json, predictions.jsonl, report.json and manifest.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = sorted(tasks, key=lambda t: t.task_id)
    lib = library if library is not None else default_library()
    grammar = uniform_grammar(lib)
    model: RecognitionModel | None = None
    inventions: list[str] = []
    timings: dict[str, float] = {}
    config = {
        "name": name,
        "seed": seed,
        "cycles": cycles,
        "max_programs_per_task": max_programs_per_task,
        "frontier_size": frontier_size,
        "k": k,
        "max_inventions": max_inventions,
        "dreams_per_cycle": dreams_per_cycle,
        "recognition_steps": recognition_steps,
        "tasks": [t.task_id for t in tasks],
        "initial_library_size": len(lib),
    }

    budget = SearchBudget(max_programs=max_programs_per_task)
    frontiers: list[Frontier] = []
    for cycle in range(cycles):
        t0 = time.monotonic()
        frontiers = []
        for t in tasks:
            g = model.induce(grammar, t) if model is not None else grammar
            frontiers.append(
                solve_task(t, g, budget, DETERMINISTIC_LIMITS, frontier_size)
            )
        timings[f"cycle{cycle}.wake"] = time.monotonic() - t0

        t0 = time.monotonic()
        result = compress(grammar, frontiers, max_inventions)
        grammar = result.grammar
        frontiers = result.frontiers
        lib = grammar.library
        inventions.extend(p.name for p in result.inventions)
        timings[f"cycle{cycle}.abstraction"] = time.monotonic() - t0

        if dreams_per_cycle > 0 and recognition_steps > 0:
            t0 = time.monotonic()
            rng = np.random.default_rng([seed, cycle])
            dreams = dream_tasks(
                grammar, rng, dreams_per_cycle, limits=DETERMINISTIC_LIMITS
            )
            model = RecognitionModel(lib, seed=seed)
            train_model(
                model, dreams, grammar,
                steps=recognition_steps, seed=seed, log_every=max(
                    1, recognition_steps // 10),
            )
            timings[f"cycle{cycle}.dreaming"] = time.monotonic() - t0

    t0 = time.monotonic()
    predictions: list[Prediction] = []
    frontier_by_id = {f.task_id: f for f in frontiers}
    for t in tasks:
        f = frontier_by_id.get(t.task_id)
        if f is None:
            continue
        predictions.extend(predict(f, t, k, DETERMINISTIC_LIMITS, lib=lib))
    predictions.sort(key=lambda p: (p.task_id, p.test_index, p.rank))
    timings["predict"] = time.monotonic() - t0

    report = score_predictions(tasks, predictions, k, name)
    errors = classify_errors(report, frontiers)

    _write_json(out / "frontiers.json", {
        "library": lib.names(),
        "frontiers": [
            {**frontier_to_json(f), "stats": _stable_stats(f.stats)}
            for f in sorted(frontiers, key=lambda f: f.task_id)
        ],
    })
    write_predictions(out / "predictions.jsonl", predictions)
    _write_json(out / "report.json", {
        "score": report.to_json(),
        "errors": errors.to_json(),
        "inventions": inventions,
    })

    from .. import __version__
    manifest = {
        "package_version": __version__,
        "config": config,
        "config_hash": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode()
        ).hexdigest()[:16],
        "library_fingerprint": library_fingerprint(lib),
        "timings": {k_: round(v, 3) for k_, v in timings.items()},
        "counts": {
            "tasks": len(tasks),
            "frontier_programs": sum(len(f) for f in frontiers),
            "predictions": len(predictions),
            "inventions": len(inventions),
        },
    }
    _write_json(out / "manifest.json", manifest)
    return ExperimentResult(
        report, frontiers, predictions, grammar, manifest, out, model, inventions
    )
