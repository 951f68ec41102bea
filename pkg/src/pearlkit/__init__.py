"""Grid-puzzle program synthesis: a typed DSL over 2D grids, description
length guided search with library learning, a neural recognition model,
language-model solving, and a voting ensemble over all of it."""

__version__ = "0.1.0"

from .grids import Grid, GridError, Task, TaskFormatError, TaskSet, parse_task
from .lang import Library, default_library, evaluate, parse_program, typecheck
from .synthesis import (
    Grammar,
    SearchBudget,
    compress,
    enumerate_programs,
    fit_grammar,
    predict,
    solve_task,
    uniform_grammar,
)
from .ensemble import Prediction, vote

__all__ = [
    "__version__",
    "Grid", "GridError", "Task", "TaskFormatError", "TaskSet", "parse_task",
    "Library", "default_library", "evaluate", "parse_program", "typecheck",
    "Grammar", "SearchBudget", "compress", "enumerate_programs", "fit_grammar",
    "predict", "solve_task", "uniform_grammar",
    "Prediction", "vote",
]
