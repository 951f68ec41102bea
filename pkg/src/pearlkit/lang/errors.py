"""Failure taxonomy for program evaluation.

Every subclass of EvalError means "this program fails on this input" and is
caught by search and scoring code; none of them should ever abort a run.
"""

from __future__ import annotations


class EvalError(Exception):
    """Base class for recoverable evaluation failures."""


class PrimitiveFailure(EvalError):
    """A primitive's precondition did not hold (empty crop, all-black topcol,
    empty list reduction, missing unique element, ...)."""


class ResourceExceeded(EvalError):
    """Step, list-length or wall-clock budget ran out during evaluation."""


class DimensionOverflow(EvalError):
    """A constructed grid would exceed the 30-cell dimension bound."""


class PearlTypeError(Exception):
    """A program is ill-typed; carries the node path for diagnostics."""

    def __init__(self, message: str, path: str = "root"):
        super().__init__(f"{path}: {message}")
        self.path = path
