"""Best-first program enumeration by iterative deepening on description length.

Band b covers DL in [b*step, (b+1)*step). Within a band, programs stream in
depth-first derivation order (variables first, then primitives by library
index, then arguments recursively), so equal-DL programs tie-break
deterministically and DL never decreases across bands. Every well-typed
program is produced exactly once: a derivation is unique and lands in exactly
one band.

Dead subtrees are pruned with a per-type lower bound on completion cost
(computed once per call by fixpoint over the library), which is what makes
deep bands affordable.

The bare identity `λ. $0` is never emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from time import perf_counter
from typing import Iterator

from ..lang.program import (
    Apply,
    IDENTITY,
    Lambda,
    PrimitiveRef,
    Program,
    Var,
)
from ..lang.types import ArrowType, PearlType
from .grammar import G2G, Grammar

_INF = float("inf")


@dataclass
class SearchBudget:
    wall_seconds: float | None = None
    max_programs: int | None = None
    max_dl: float | None = None
    dl_step: float = 1.5


@dataclass
class EnumStats:
    generated: int = 0
    max_dl: float = 0.0
    bands: int = 0
    stopped: str = ""


class _TimeUp(Exception):
    pass


def _strip(t: PearlType) -> PearlType:
    while isinstance(t, ArrowType):
        t = t.result
    return t


def _completion_bounds(grammar: Grammar, request: PearlType) -> dict[PearlType, float]:
    """Optimistic minimum DL to finish a derivation of each base request.

    Sound for every context: primitives are priced from the no-variables
    table (their cheapest appearance) and a variable is assumed available
    for any type that occurs as a lambda binder somewhere, at the n=1 price.
    """
    lib = grammar.library
    reqs: set[PearlType] = set()
    binder_types: set[PearlType] = set()

    def add(t: PearlType) -> None:
        while isinstance(t, ArrowType):
            binder_types.add(t.arg)
            add(t.arg)
            t = t.result
        reqs.add(t)

    add(request)
    for p in lib.primitives:
        add(p.type)

    bounds = {t: _INF for t in reqs}
    for _ in range(len(reqs) + 1):
        changed = False
        for t in reqs:
            best = _INF
            if t in binder_types:
                var_logp = grammar.productions(t, 1).var_logp
                if var_logp is not None:
                    best = -var_logp
            table = grammar.productions(t, 0)
            for pos, idx in enumerate(table.prim_indices):
                total = -table.prim_logps[pos]
                for at in lib.primitives[idx].arg_types:
                    total += bounds[_strip(at)]
                    if total >= best:
                        break
                if total < best:
                    best = total
            if best < bounds[t]:
                bounds[t] = best
                changed = True
        if not changed:
            break
    return bounds


def enumerate_programs(
    grammar: Grammar,
    request: PearlType = G2G,
    budget: SearchBudget | None = None,
    stats: EnumStats | None = None,
) -> Iterator[tuple[Program, float]]:
    """Yield (program, dl) pairs under the budget. Mutates `stats` if given."""
    budget = budget or SearchBudget(max_dl=20.0)
    stats = stats if stats is not None else EnumStats()
    lib = grammar.library
    deadline = (
        perf_counter() + budget.wall_seconds
        if budget.wall_seconds is not None else None
    )
    bounds = _completion_bounds(grammar, request)
    tick = 0

    # per-(request, env) context rows, built once and reused across bands:
    # (matching var indices, var mdl, [(head mdl, shared head node, arg types,
    #   arg bound suffix sums), ...])
    ctx_cache: dict[tuple, tuple] = {}

    def context(req, env: tuple):
        key = (req, env)
        ctx = ctx_cache.get(key)
        if ctx is not None:
            return ctx
        matching = tuple(i for i, t in enumerate(env) if t == req)
        table = grammar.productions(req, len(matching))
        var_mdl = (
            -(table.var_logp - math.log(len(matching)))
            if matching and table.var_logp is not None else _INF
        )
        rows = []
        for pos, idx in enumerate(table.prim_indices):
            prim = lib.primitives[idx]
            ats = prim.arg_types
            # suffix[i] = lower bound for completing args i..end
            suffix = [0.0] * (len(ats) + 1)
            for i in range(len(ats) - 1, -1, -1):
                suffix[i] = suffix[i + 1] + bounds.get(_strip(ats[i]), _INF)
            rows.append(
                (-table.prim_logps[pos], PrimitiveRef(prim.name), ats, suffix)
            )
        ctx = (matching, var_mdl, rows)
        ctx_cache[key] = ctx
        return ctx

    def gen(req, env: tuple, lower: float, upper: float):
        nonlocal tick
        arrows = 0
        while isinstance(req, ArrowType):
            env = (req.arg,) + env
            req = req.result
            arrows += 1
        tick += 1
        if deadline is not None and not tick % 256 and perf_counter() > deadline:
            raise _TimeUp()
        matching, var_mdl, rows = context(req, env)
        out = None
        if lower <= var_mdl < upper:
            for v in matching:
                node: Program = Var(v)
                for _ in range(arrows):
                    node = Lambda(node)
                yield var_mdl, node
        for mdl, head, ats, suffix in rows:
            if mdl + suffix[0] >= upper:
                continue
            if not ats:
                if mdl >= lower:
                    node = head
                    for _ in range(arrows):
                        node = Lambda(node)
                    yield mdl, node
                continue
            for args_dl, args in gen_args(ats, suffix, 0, env,
                                          lower - mdl, upper - mdl):
                node = head
                for a in args:
                    node = Apply(node, a)
                for _ in range(arrows):
                    node = Lambda(node)
                yield mdl + args_dl, node

    def gen_args(ats, suffix, i, env, lower: float, upper: float):
        # the final argument carries the band's lower bound so partially
        # built programs never filter on it prematurely
        if i == len(ats) - 1:
            yield from ((dl, (a,)) for dl, a in
                        gen(ats[i], env, max(lower, 0.0), upper))
            return
        rest_bound = suffix[i + 1]
        for dl1, a1 in gen(ats[i], env, 0.0, upper - rest_bound):
            for dlr, more in gen_args(ats, suffix, i + 1, env,
                                      lower - dl1, upper - dl1):
                yield dl1 + dlr, (a1,) + more

    step = budget.dl_step
    band = 0
    emitted = 0
    root_bound = bounds.get(_strip(request), _INF)
    try:
        while True:
            lower = band * step
            upper = lower + step
            if budget.max_dl is not None:
                if lower >= budget.max_dl:
                    stats.stopped = "max-dl"
                    break
                upper = min(upper, budget.max_dl)
            if upper <= root_bound:
                band += 1
                continue  # nothing can be this cheap; skip to a viable band
            stats.bands = band + 1
            for dl, program in gen(request, (), lower, upper):
                if program == IDENTITY:
                    continue
                emitted += 1
                stats.generated = emitted
                if dl > stats.max_dl:
                    stats.max_dl = dl
                yield program, dl
                if budget.max_programs is not None and emitted >= budget.max_programs:
                    stats.stopped = "max-programs"
                    return
            band += 1
    except _TimeUp:
        stats.stopped = "wall"
