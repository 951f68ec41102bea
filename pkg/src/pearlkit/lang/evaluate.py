"""Strict evaluator with step, list-length and wall-clock budgets.

Programs compile once into nested closures; each run gets a fresh budget
context, so one compiled program can be evaluated on many inputs cheaply.
Evaluation is pure: inputs are never mutated and every run is independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

from ..grids import Grid
from .errors import EvalError, PearlTypeError, ResourceExceeded
from .library import Library, Primitive
from .program import Apply, Lambda, PrimitiveRef, Program, Var


@dataclass(frozen=True)
class EvalLimits:
    max_steps: int = 10_000
    max_list_len: int = 256
    wall_ms: float | None = 50.0


DEFAULT_LIMITS = EvalLimits()


class _Ctx:
    __slots__ = ("steps", "max_steps", "max_list", "deadline")

    def __init__(self, limits: EvalLimits):
        self.steps = 0
        self.max_steps = limits.max_steps
        self.max_list = limits.max_list_len
        self.deadline = (
            perf_counter() + limits.wall_ms / 1000.0
            if limits.wall_ms is not None else None
        )


def _check_result(r, ctx: _Ctx):
    if type(r) is list and len(r) > ctx.max_list:
        raise ResourceExceeded(f"list of {len(r)} exceeds the {ctx.max_list} cap")
    return r


def _prim_value(prim: Primitive, ctx: _Ctx):
    """Value of a primitive occurrence: constant, curried host fn, or inlined body."""
    arity = prim.arity
    if prim.body is not None:
        runner = prim.compiled
        if runner is None:
            raise PearlTypeError(f"invented primitive {prim.name} was not compiled")
        return runner((), ctx)
    if arity == 0:
        return prim.fn  # constants store their value in fn
    fn = prim.fn
    if arity == 1:
        return lambda a: _check_result(fn(a), ctx)
    if arity == 2:
        return lambda a: (lambda b: _check_result(fn(a, b), ctx))
    # generic currying for higher arities
    def curry(collected):
        if len(collected) == arity:
            return _check_result(fn(*collected), ctx)
        return lambda x: curry(collected + [x])
    return curry([])


def _compile(node: Program, lib: Library, invented_stack: tuple = ()):
    if isinstance(node, Var):
        i = node.index

        def run_var(env, ctx, _i=i):
            try:
                return env[_i]
            except IndexError:
                raise PearlTypeError(f"unbound variable ${_i}") from None
        return run_var

    if isinstance(node, PrimitiveRef):
        prim = lib.by_name.get(node.name)
        if prim is None:
            raise PearlTypeError(f"unknown primitive {node.name!r}")
        if prim.body is not None:
            _ensure_compiled(prim, lib, invented_stack)
        return lambda env, ctx, _p=prim: _prim_value(_p, ctx)

    if isinstance(node, Lambda):
        body = _compile(node.body, lib, invented_stack)

        def run_lambda(env, ctx, _body=body):
            return lambda x: _body((x,) + env, ctx)
        return run_lambda

    fr = _compile(node.fn, lib, invented_stack)
    ar = _compile(node.arg, lib, invented_stack)

    def run_apply(env, ctx, _fr=fr, _ar=ar):
        ctx.steps += 1
        if ctx.steps > ctx.max_steps:
            raise ResourceExceeded("step budget exhausted")
        if ctx.deadline is not None and perf_counter() > ctx.deadline:
            raise ResourceExceeded("wall budget exhausted")
        f = _fr(env, ctx)
        if not callable(f):
            raise PearlTypeError("applied a non-function value")
        return f(_ar(env, ctx))
    return run_apply


def _ensure_compiled(prim: Primitive, lib: Library, stack: tuple) -> None:
    if prim.compiled is not None:
        return
    if prim.name in stack:
        raise PearlTypeError(f"recursive invented primitive {prim.name}")
    prim.compiled = _compile(prim.body, lib, stack + (prim.name,))


class CompiledProgram:
    __slots__ = ("program", "runner")

    def __init__(self, program: Program, runner):
        self.program = program
        self.runner = runner

    def run(self, g: Grid, limits: EvalLimits = DEFAULT_LIMITS):
        ctx = _Ctx(limits)
        value = self.runner((), ctx)
        if not callable(value):
            raise PearlTypeError("program is not a function of the input grid")
        return value(g)

    def run_value(self, limits: EvalLimits = DEFAULT_LIMITS):
        """Evaluate without applying to an input (for non-arrow programs)."""
        return self.runner((), _Ctx(limits))


def compile_program(program: Program, lib: Library) -> CompiledProgram:
    return CompiledProgram(program, _compile(program, lib))


def evaluate(program: Program, g: Grid, lib: Library,
             limits: EvalLimits = DEFAULT_LIMITS):
    """Apply a program to an input grid under resource limits.

    Raises subclasses of EvalError for program failure, PearlTypeError for
    structurally broken programs (unknown names, applying non-functions).
    """
    return compile_program(program, lib).run(g, limits)


__all__ = [
    "EvalLimits", "DEFAULT_LIMITS", "CompiledProgram", "compile_program",
    "evaluate", "EvalError",
]
