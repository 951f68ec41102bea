"""Dream generation: sample programs, run them on random inputs, keep the
well-behaved ones as labelled training tasks for the recognition model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grids import Grid, Task, random_grid
from ..lang.errors import EvalError
from ..lang.evaluate import DEFAULT_LIMITS, EvalLimits, compile_program
from ..lang.program import Program, pretty_print
from ..synthesis.grammar import Grammar, program_dl, sample_program

N_TRAIN = 3
N_TEST = 1


@dataclass
class DreamedTask:
    task: Task
    program: Program  # the generating program, kept as the training label
    dl: float


def dream_tasks(
    grammar: Grammar,
    rng: np.random.Generator,
    count: int,
    max_depth: int = 3,
    limits: EvalLimits = DEFAULT_LIMITS,
    max_input_dim: int = 10,
    attempts_per_dream: int = 200,
) -> list[DreamedTask]:
    """Sample `count` labelled tasks from the grammar.

    A candidate program is rejected when it errors on any sampled input, or
    when it acts as the identity on every one of them (such labels teach the
    model nothing about the transformation).  Rejection outcomes consume rng
    state, so dreams are reproducible for a fixed seed.
    """
    dreams: list[DreamedTask] = []
    n_inputs = N_TRAIN + N_TEST
    while len(dreams) < count:
        for attempt in range(attempts_per_dream):
            program = sample_program(grammar, rng, max_depth=max_depth)
            inputs = [random_grid(rng, max_dim=max_input_dim) for _ in range(n_inputs)]
            try:
                compiled = compile_program(program, grammar.library)
                outputs = [compiled.run(g, limits) for g in inputs]
            except EvalError:
                continue
            if any(not isinstance(o, Grid) for o in outputs):
                continue
            if all(o.key() == g.key() for g, o in zip(inputs, outputs)):
                continue
            pairs = list(zip(inputs, outputs))
            task = Task(
                f"dream_{len(dreams):04d}",
                train=pairs[:N_TRAIN],
                test=pairs[N_TRAIN:],
            )
            dreams.append(DreamedTask(task, program, program_dl(program, grammar)))
            break
        else:
            raise RuntimeError(
                f"dream {len(dreams)} rejected {attempts_per_dream} candidates "
                f"in a row; last program: {pretty_print(program)}"
            )
    return dreams
