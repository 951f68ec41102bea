"""Pooling predictions from heterogeneous solvers into a weighted vote.

Each solver contributes ranked candidate grids per test input.  Candidates
are weighted by the historical reliability of their source, identical grids
accumulate weight, and the top vote-getters become the ensemble's answer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .grids import Grid, GridError

# Sentinel emitted by the icecuber solver when it declines a test input; it
# must be stripped before voting or the placeholder grid accrues weight.
DEFAULT_SENTINEL = Grid([[0]])

# Historical per-source reliability.  The icecuber entry is per-rank (its
# rank-1 answers are markedly better than its rank-3 ones); scalar entries
# apply to every rank from that source.
DEFAULT_WEIGHTS: dict[str, object] = {
    "dreamcoder": 20.0,
    "gpt4": 3.0,
    "icecuber": [8.0, 4.0, 4.0],
    "default": 1.0,
}

_SOURCE_PRIORITY = {"dreamcoder": 0, "icecuber": 1, "gpt4": 2}


@dataclass
class Prediction:
    """One candidate output grid for one test input of one task."""

    task_id: str
    test_index: int
    source: str
    rank: int  # 1-based within (task_id, test_index, source)
    grid: Grid | None
    weight: float = 0.0
    skip_reason: str | None = None


@dataclass
class VoteTally:
    grid: Grid
    weight: float
    sources: list[str] = field(default_factory=list)


def source_weight(source: str, rank: int, weights: dict | None = None) -> float:
    """Weight for a source at a 1-based rank; unknown sources get `default`."""
    table = DEFAULT_WEIGHTS if weights is None else weights
    entry = table.get(source, table.get("default", 1.0))
    if isinstance(entry, (list, tuple)):
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        return float(entry[min(rank, len(entry)) - 1])
    return float(entry)


def load_weights(path: str | Path) -> dict[str, object]:
    """Read a per-source weight table from a TOML file.

    Scalar values apply to all ranks; arrays give per-rank weights (the last
    element covers deeper ranks).
    """
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:  # pragma: no cover - py310 fallback
        import tomli as tomllib
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    table: dict[str, object] = dict(DEFAULT_WEIGHTS)
    for k, v in raw.items():
        if isinstance(v, bool) or not isinstance(v, (int, float, list)):
            raise ValueError(f"weight for {k!r} must be a number or array")
        if isinstance(v, list):
            if not v or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v):
                raise ValueError(f"per-rank weights for {k!r} must be non-empty numbers")
            table[k] = [float(x) for x in v]
        else:
            table[k] = float(v)
    return table


def filter_predictions(
    preds: list[Prediction],
    weights: dict | None = None,
    sentinel: Grid | None = DEFAULT_SENTINEL,
) -> list[Prediction]:
    """Prepare raw predictions for voting.

    Drops skipped/unparsed entries (no grid), drops the icecuber sentinel,
    collapses duplicate grids within one source keeping the best rank, and
    stamps each survivor with its source weight.
    """
    best: dict[tuple, Prediction] = {}
    order: list[tuple] = []
    for p in preds:
        if p.grid is None:
            continue
        if (
            sentinel is not None
            and p.source == "icecuber"
            and p.grid.key() == sentinel.key()
        ):
            continue
        k = (p.task_id, p.test_index, p.source, p.grid.key())
        prev = best.get(k)
        if prev is None:
            best[k] = p
            order.append(k)
        elif p.rank < prev.rank:
            best[k] = p
    out = []
    for k in order:
        p = best[k]
        out.append(replace(p, weight=source_weight(p.source, p.rank, weights)))
    return out


def tally_votes(preds: list[Prediction]) -> dict[tuple[str, int], list[VoteTally]]:
    """Group weighted predictions by output grid and sort each group's tallies.

    Order: total weight descending, then strongest source priority
    (dreamcoder before icecuber before gpt4 before anything else), then
    first-arrival.  The keys are (task_id, test_index).
    """
    groups: dict[tuple[str, int], dict] = {}
    for i, p in enumerate(preds):
        if p.grid is None:
            continue
        slot = groups.setdefault((p.task_id, p.test_index), {})
        entry = slot.get(p.grid.key())
        if entry is None:
            slot[p.grid.key()] = {
                "grid": p.grid,
                "weight": p.weight,
                "sources": [p.source],
                "prio": _SOURCE_PRIORITY.get(p.source, 3),
                "arrival": i,
            }
        else:
            entry["weight"] += p.weight
            entry["sources"].append(p.source)
            entry["prio"] = min(entry["prio"], _SOURCE_PRIORITY.get(p.source, 3))
    out: dict[tuple[str, int], list[VoteTally]] = {}
    for key, slot in groups.items():
        ranked = sorted(
            slot.values(), key=lambda e: (-e["weight"], e["prio"], e["arrival"])
        )
        out[key] = [VoteTally(e["grid"], e["weight"], e["sources"]) for e in ranked]
    return out


def vote(
    preds: list[Prediction],
    k: int = 3,
    weights: dict | None = None,
    sentinel: Grid | None = DEFAULT_SENTINEL,
) -> list[Prediction]:
    """Full pipeline: filter, tally, and emit the top-k grids per test input
    as predictions from source "ensemble"."""
    tallies = tally_votes(filter_predictions(preds, weights, sentinel))
    out: list[Prediction] = []
    for (task_id, ti) in sorted(tallies):
        for rank, t in enumerate(tallies[(task_id, ti)][:k], start=1):
            out.append(Prediction(task_id, ti, "ensemble", rank, t.grid, t.weight))
    return out


# --------------------------------------------------------------------------
# Wire format: one JSON object per line


def prediction_to_json(p: Prediction) -> dict:
    obj = {
        "task_id": p.task_id,
        "test_index": p.test_index,
        "source": p.source,
        "rank": p.rank,
        "grid": None if p.grid is None else p.grid.tolist(),
    }
    if p.weight:
        obj["weight"] = p.weight
    if p.skip_reason is not None:
        obj["skip_reason"] = p.skip_reason
    return obj


def prediction_from_json(obj: dict) -> Prediction:
    raw = obj.get("grid")
    grid = None
    if raw is not None:
        try:
            grid = Grid(raw)
        except GridError:
            grid = None
    return Prediction(
        obj["task_id"],
        int(obj["test_index"]),
        obj.get("source", "unknown"),
        int(obj.get("rank", 1)),
        grid,
        float(obj.get("weight", 0.0)),
        obj.get("skip_reason"),
    )


def write_predictions(path: str | Path, preds: list[Prediction]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in preds:
            fh.write(json.dumps(prediction_to_json(p), separators=(",", ":")))
            fh.write("\n")


def read_predictions(path: str | Path) -> list[Prediction]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(prediction_from_json(json.loads(line)))
    return out
