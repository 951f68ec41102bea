"""Scoring, solver comparison, and error classification.

A task counts as solved only when every one of its test inputs has a correct
prediction within the rank cutoff; tasks with no usable predictions score as
failed (reported under the "skipped" verdict for visibility, never excluded
from the denominator).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..ensemble import Prediction
from ..grids import Task
from ..synthesis.solve import Frontier

log = logging.getLogger(__name__)


@dataclass
class EvaluationReport:
    name: str
    k: int
    total: int
    solved: int
    failed: int
    skipped: int
    verdicts: dict[str, str] = field(default_factory=dict)  # task_id -> verdict
    pairs_total: int = 0
    pairs_correct: int = 0

    @property
    def accuracy(self) -> float:
        return self.solved / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "k": self.k,
            "total": self.total,
            "solved": self.solved,
            "failed": self.failed,
            "skipped": self.skipped,
            "accuracy": round(self.accuracy, 6),
            "pairs_total": self.pairs_total,
            "pairs_correct": self.pairs_correct,
            "verdicts": dict(sorted(self.verdicts.items())),
        }

    def render_text(self) -> str:
        lines = [
            f"{self.name}: {self.solved}/{self.total} solved "
            f"({self.accuracy:.1%}) at k={self.k}",
            f"  failed: {self.failed}  skipped: {self.skipped}  "
            f"pairs: {self.pairs_correct}/{self.pairs_total}",
        ]
        width = max((len(t) for t in self.verdicts), default=0)
        for task_id in sorted(self.verdicts):
            lines.append(f"  {task_id:<{width}}  {self.verdicts[task_id]}")
        return "\n".join(lines)


def score_predictions(
    tasks: list[Task],
    predictions: list[Prediction],
    k: int = 3,
    name: str = "evaluation",
) -> EvaluationReport:
    """Exact-match scoring at a rank cutoff.

    Predictions for unknown task ids are logged and ignored; predictions
    without grids never match anything.
    """
    by_id = {t.task_id: t for t in tasks}
    index: dict[tuple[str, int], list[Prediction]] = {}
    for p in predictions:
        if p.task_id not in by_id:
            log.warning("prediction for unknown task %r ignored", p.task_id)
            continue
        index.setdefault((p.task_id, p.test_index), []).append(p)

    verdicts: dict[str, str] = {}
    solved = failed = skipped = 0
    pairs_total = pairs_correct = 0
    for t in tasks:
        any_prediction = False
        all_correct = True
        for ti, (_gin, want) in enumerate(t.test):
            pairs_total += 1
            candidates = index.get((t.task_id, ti), [])
            usable = [p for p in candidates if p.grid is not None]
            if usable:
                any_prediction = True
            hit = any(
                p.rank <= k and p.grid.key() == want.key() for p in usable
            )
            if hit:
                pairs_correct += 1
            else:
                all_correct = False
        if all_correct:
            verdicts[t.task_id] = "solved"
            solved += 1
        elif any_prediction:
            verdicts[t.task_id] = "failed"
            failed += 1
        else:
            verdicts[t.task_id] = "skipped"
            skipped += 1
    return EvaluationReport(
        name, k, len(tasks), solved, failed, skipped, verdicts,
        pairs_total, pairs_correct,
    )


# --------------------------------------------------------------------------
# Solver comparison


def overlap(a: set, b: set) -> float:
    """|A n B| / min(|A|, |B|); 1.0 whenever one solved set contains the other."""
    if not a or not b:
        raise ValueError("overlap is undefined for empty solved sets")
    return len(a & b) / min(len(a), len(b))


def gain(a: set, b: set) -> int:
    """How many tasks adding solver B to solver A contributes: |A u B| - |A|."""
    return len(a | b) - len(a)


# --------------------------------------------------------------------------
# Error classification


@dataclass
class ErrorClassification:
    """Failure taxonomy over unsolved tasks.

    "3": a train-consistent program existed but chose the wrong test output,
         so the miss is generalization, not expressiveness or search.
    "2": the task is known to be expressible (its generating program is in
         hand) yet search missed it.
    "1-or-2": no way to tell expressiveness failures from search failures
         without a known label.
    """

    classes: dict[str, str] = field(default_factory=dict)
    tasks_with_frontier: int = 0
    class3_count: int = 0

    @property
    def class3_rate(self) -> float:
        if self.tasks_with_frontier == 0:
            return 0.0
        return self.class3_count / self.tasks_with_frontier

    @property
    def class3_rate_text(self) -> str:
        return f"{100.0 * self.class3_rate:.2f}%"

    def to_json(self) -> dict:
        return {
            "classes": dict(sorted(self.classes.items())),
            "tasks_with_frontier": self.tasks_with_frontier,
            "class3_count": self.class3_count,
            "class3_rate": self.class3_rate_text,
        }


def classify_errors(
    report: EvaluationReport,
    frontiers: list[Frontier],
    labelled: set[str] | None = None,
) -> ErrorClassification:
    """Classify every unsolved task from a scoring report.

    `labelled` names tasks whose generating program is known (dreams), which
    pins their unsolved failures to class 2.  The class-3 rate is measured
    against tasks that produced a frontier at all, solved or not.
    """
    labelled = labelled or set()
    frontier_by_id = {f.task_id: f for f in frontiers}
    out = ErrorClassification()
    out.tasks_with_frontier = sum(
        1 for tid in report.verdicts
        if len(frontier_by_id.get(tid, Frontier(tid))) > 0
    )
    for task_id, verdict in report.verdicts.items():
        if verdict == "solved":
            continue
        f = frontier_by_id.get(task_id)
        if f is not None and len(f) > 0:
            out.classes[task_id] = "3"
            out.class3_count += 1
        elif task_id in labelled:
            out.classes[task_id] = "2"
        else:
            out.classes[task_id] = "1-or-2"
    return out
