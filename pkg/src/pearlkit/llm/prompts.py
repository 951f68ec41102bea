"""Prompt construction for completion-style and chat-style models.

The two framing texts below are load-bearing: downstream fixtures key on the
byte content of the final prompt, so neither string may drift between
releases.  Build functions are pure and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..grids import Task
from .encoding import encode_grid, estimate_grid_tokens

COMPLETION_PREAMBLE = (
    "We are playing a game which involves transforming a 2D input grid of "
    "digits into an output grid of digits. Every below pair of grids contains "
    "the same transformation (e.g. rotation, symmetry, manipulation of "
    "objects). Each Input grid is followed by an Output grid which applies "
    "the same transformation as previous Input/Output pairs. One such example "
    "is below."
)

CHAT_SYSTEM = (
    "We are playing a game which involves transforming an input grid of "
    "digits into an output grid of digits. In general, digits form objects in "
    "2D and the task is to perform some spatial transformation of these "
    "objects to go from the input grid to the output grid. All the "
    "information about the transformation is contained within the input pairs "
    "themselves, and your answer will only be correct if the output grid is "
    "exactly correct, so this is what I expect from you. I will begin by "
    "giving you several examples of input-output pairs. You will then be "
    "given a new input grid, and you must provide the corresponding output "
    "grid."
)


@dataclass
class PromptBundle:
    task_id: str
    test_index: int
    mode: str                      # "completion" or "chat"
    scheme: str
    augmentation: str = "identity"
    text: str | None = None        # completion mode
    messages: list[dict] = field(default_factory=list)  # chat mode
    token_estimate: int = 0


def estimate_text_tokens(text: str) -> int:
    """Crude upper bound for prose: two tokens per word plus line breaks."""
    return 2 * len(text.split()) + text.count("\n")


def build_completion_prompt(
    task: Task, test_index: int, scheme: str = "digits",
    augmentation: str = "identity",
) -> PromptBundle:
    parts = [COMPLETION_PREAMBLE, "\n\n"]
    estimate = estimate_text_tokens(COMPLETION_PREAMBLE)
    for a, b in task.train:
        parts.append(f"Input\n{encode_grid(a, scheme)}\n\n")
        parts.append(f"Output\n{encode_grid(b, scheme)}\n\n")
        estimate += estimate_grid_tokens(a, scheme) + estimate_grid_tokens(b, scheme) + 8
    gin = task.test[test_index][0]
    parts.append(f"Input\n{encode_grid(gin, scheme)}\n\nOutput\n")
    estimate += estimate_grid_tokens(gin, scheme) + 8
    return PromptBundle(
        task.task_id, test_index, "completion", scheme, augmentation,
        text="".join(parts), token_estimate=estimate,
    )


def build_chat_prompt(
    task: Task, test_index: int, scheme: str = "digits",
    augmentation: str = "identity",
) -> PromptBundle:
    messages = [{"role": "system", "content": CHAT_SYSTEM}]
    estimate = estimate_text_tokens(CHAT_SYSTEM)
    for a, b in task.train:
        messages.append({"role": "user", "content": encode_grid(a, scheme)})
        messages.append({"role": "assistant", "content": encode_grid(b, scheme)})
        estimate += estimate_grid_tokens(a, scheme) + estimate_grid_tokens(b, scheme) + 8
    gin = task.test[test_index][0]
    messages.append({"role": "user", "content": encode_grid(gin, scheme)})
    estimate += estimate_grid_tokens(gin, scheme) + 8
    return PromptBundle(
        task.task_id, test_index, "chat", scheme, augmentation,
        messages=messages, token_estimate=estimate,
    )
