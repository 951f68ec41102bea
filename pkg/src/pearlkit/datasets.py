"""Loading task sets from the standard on-disk layout.

A dataset root contains `training/` and `evaluation/` directories of one JSON
file per task; the file stem is the task id.  The training tree loads under
the name ARC-Easy and the evaluation tree under ARC-Hard.  The root may be
given explicitly or through the ARC_DATA environment variable.
"""

from __future__ import annotations

import json
import os
import warnings
from pathlib import Path

from .grids import Task, TaskFormatError, TaskSet, parse_task

SET_DIRS = {"easy": "training", "hard": "evaluation"}
SET_NAMES = {"easy": "ARC-Easy", "hard": "ARC-Hard"}
OFFICIAL_SIZE = 400


def data_root(explicit: str | os.PathLike | None = None) -> Path | None:
    """Resolve the dataset root from an explicit path or ARC_DATA."""
    if explicit:
        return Path(explicit)
    env = os.environ.get("ARC_DATA")
    return Path(env) if env else None


def load_task_file(path: str | os.PathLike) -> Task:
    p = Path(path)
    with open(p) as f:
        obj = json.load(f)
    return parse_task(obj, task_id=p.stem)


def load_dataset(root: str | os.PathLike, which: str) -> TaskSet:
    """Load one of the two official splits ("easy" or "hard") from a tree.

    Files load in sorted filename order so task order is reproducible.
    """
    if which not in SET_DIRS:
        raise ValueError(f"unknown dataset split {which!r}; expected 'easy' or 'hard'")
    base = Path(root) / SET_DIRS[which]
    if not base.is_dir():
        raise FileNotFoundError(f"dataset directory not found: {base}")
    tasks = []
    for p in sorted(base.glob("*.json")):
        try:
            tasks.append(load_task_file(p))
        except (TaskFormatError, json.JSONDecodeError) as e:
            raise TaskFormatError(f"{p.name}: {e}", "$") from e
    name = SET_NAMES[which]
    if len(tasks) != OFFICIAL_SIZE:
        warnings.warn(
            f"{name} tree at {base} has {len(tasks)} tasks; "
            f"the official split has {OFFICIAL_SIZE}"
        )
    return TaskSet(name, tasks)


def find_tasks(root: str | os.PathLike | None, which: str) -> TaskSet:
    resolved = data_root(root)
    if resolved is None:
        raise FileNotFoundError(
            "no dataset root: pass --data or set the ARC_DATA environment variable"
        )
    return load_dataset(resolved, which)
