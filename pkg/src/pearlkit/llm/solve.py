"""Language-model solving with prompt augmentation.

Each test input is asked several times under grid symmetries (the task is
transformed whole, so the transformation the model must spot is conjugated,
not changed).  Answers are mapped back through the inverse symmetry, parsed,
and emitted as ranked predictions from source "gpt4".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ensemble import Prediction
from ..grids import Grid, Task
from .client import CompletionClient
from .encoding import parse_completion
from .prompts import PromptBundle, build_chat_prompt, build_completion_prompt

LLM_SOURCE = "gpt4"
DEFAULT_CONTEXT_TOKENS = 2048


def _identity(g: Grid) -> Grid:
    return g


def _transpose(g: Grid) -> Grid:
    return Grid(g.cells.T.copy())


def _rot_cw(g: Grid) -> Grid:
    return Grid(np.rot90(g.cells, k=-1).copy())


def _rot_ccw(g: Grid) -> Grid:
    return Grid(np.rot90(g.cells, k=1).copy())


# name -> (forward, inverse); the inverse maps model answers back
AUGMENTATIONS: dict[str, tuple] = {
    "identity": (_identity, _identity),
    "transpose": (_transpose, _transpose),
    "rot90": (_rot_cw, _rot_ccw),
}


def augment_task(task: Task, name: str) -> Task:
    fwd, _ = AUGMENTATIONS[name]
    return Task(
        task.task_id,
        [(fwd(a), fwd(b)) for a, b in task.train],
        [(fwd(a), fwd(b)) for a, b in task.test],
    )


@dataclass
class LLMSolveResult:
    predictions: list[Prediction] = field(default_factory=list)
    skipped: list[Prediction] = field(default_factory=list)
    prompts_sent: int = 0

    def all_records(self) -> list[Prediction]:
        return self.predictions + self.skipped


def solve_with_llm(
    task: Task,
    client: CompletionClient,
    mode: str = "completion",
    scheme: str = "digits",
    augmentations: tuple[str, ...] = ("identity", "transpose", "rot90"),
    context_tokens: int = DEFAULT_CONTEXT_TOKENS,
) -> LLMSolveResult:
    """Query the model once per (test input, augmentation).

    Prompts whose token estimate exceeds the context budget are skipped and
    recorded rather than sent; unparseable answers are recorded the same way.
    Surviving answers get ranks 1..n per test input in augmentation order.
    """
    if mode not in ("completion", "chat"):
        raise ValueError(f"mode must be 'completion' or 'chat', got {mode!r}")
    for name in augmentations:
        if name not in AUGMENTATIONS:
            raise ValueError(f"unknown augmentation {name!r}")
    build = build_completion_prompt if mode == "completion" else build_chat_prompt
    result = LLMSolveResult()
    for ti in range(len(task.test)):
        rank = 0
        for name in augmentations:
            aug = augment_task(task, name)
            bundle: PromptBundle = build(aug, ti, scheme, name)
            if bundle.token_estimate > context_tokens:
                result.skipped.append(Prediction(
                    task.task_id, ti, LLM_SOURCE, 0, None,
                    skip_reason=f"context:{bundle.token_estimate}>{context_tokens}",
                ))
                continue
            raw = client.send(bundle)
            result.prompts_sent += 1
            parsed = parse_completion(raw)
            if parsed is None:
                result.skipped.append(Prediction(
                    task.task_id, ti, LLM_SOURCE, 0, None,
                    skip_reason=f"unparsed:{name}",
                ))
                continue
            _, inv = AUGMENTATIONS[name]
            rank += 1
            result.predictions.append(
                Prediction(task.task_id, ti, LLM_SOURCE, rank, inv(parsed))
            )
    return result


def size_accuracy(predictions: list[Prediction], task: Task) -> bool:
    """True when every test input got at least one prediction of the right
    dimensions (a cheap necessary condition for exact correctness)."""
    for ti, (_gin, gout) in enumerate(task.test):
        want = (gout.height, gout.width)
        ok = any(
            p.grid is not None
            and p.task_id == task.task_id
            and p.test_index == ti
            and (p.grid.height, p.grid.width) == want
            for p in predictions
        )
        if not ok:
            return False
    return True
