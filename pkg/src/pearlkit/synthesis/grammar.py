"""Probabilistic grammars over a primitive library.

A grammar holds one weight per primitive plus a shared variable weight. For a
requested type the admissible productions are the primitives returning that
type, plus the in-scope variables of that type; their probabilities are the
softmax of the weights within that context, so every context sums to one for
any weight vector.

A grammar may also carry per-primitive recognition scores; the context
distribution is then the mixture
    mix * base + (1 - mix) * softmax(scores over admissible primitives)
with variables receiving only the base share.

Description length of a program is the negative sum of log-probabilities of
the production choices along its (eta-long) derivation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..lang.errors import PearlTypeError
from ..lang.library import Library
from ..lang.program import (
    Apply,
    Lambda,
    PrimitiveRef,
    Program,
    Var,
    apply_chain,
)
from ..lang.types import GRID, ArrowType, PearlType, arrow

G2G = arrow(GRID, GRID)


@dataclass
class ProductionTable:
    """Admissible productions for one (type, #matching-vars) context."""

    prim_indices: list[int]
    prim_logps: list[float]
    var_logp: float | None  # total mass for the variable choice, None if no vars


class Grammar:
    def __init__(
        self,
        library: Library,
        weights: np.ndarray | None = None,
        var_weight: float = 0.0,
        model_scores: np.ndarray | None = None,
        mix: float = 0.5,
    ):
        self.library = library
        n = len(library)
        self.weights = (
            np.zeros(n) if weights is None else np.asarray(weights, dtype=float)
        )
        if self.weights.shape != (n,):
            raise ValueError(f"need {n} weights, got {self.weights.shape}")
        self.var_weight = float(var_weight)
        self.model_scores = (
            None if model_scores is None else np.asarray(model_scores, dtype=float)
        )
        if self.model_scores is not None and self.model_scores.shape != (n,):
            raise ValueError("model scores must match the library size")
        self.mix = float(mix)
        self._return_index: dict[PearlType, list[int]] = {}
        for i, p in enumerate(library.primitives):
            self._return_index.setdefault(p.return_type, []).append(i)
        self._tables: dict[tuple[PearlType, int], ProductionTable] = {}

    # -- contexts ----------------------------------------------------------

    def admissible(self, req: PearlType) -> list[int]:
        return self._return_index.get(req, [])

    def productions(self, req: PearlType, n_vars: int) -> ProductionTable:
        """Distribution over productions for a request with n matching variables."""
        key = (req, 1 if n_vars > 0 else 0)
        table = self._tables.get(key)
        if table is None:
            table = self._build_table(req, n_vars > 0)
            self._tables[key] = table
        return table

    def _build_table(self, req: PearlType, has_vars: bool) -> ProductionTable:
        idxs = self.admissible(req)
        # plain floats so description lengths stay JSON-serializable
        ws = [float(self.weights[i]) for i in idxs]
        if has_vars:
            z = _logsumexp(ws + [self.var_weight])
            base_var = self.var_weight - z
        else:
            if not ws:
                return ProductionTable([], [], None)
            z = _logsumexp(ws)
            base_var = None
        base_prims = [w - z for w in ws]

        if self.model_scores is None or not idxs:
            return ProductionTable(idxs, base_prims, base_var)

        # recognition mixture within this context
        scores = [float(self.model_scores[i]) for i in idxs]
        zq = _logsumexp(scores)
        q = [math.exp(s - zq) for s in scores]
        lam = self.mix
        mixed = [
            math.log(lam * math.exp(b) + (1.0 - lam) * qi)
            for b, qi in zip(base_prims, q)
        ]
        mixed_var = (
            math.log(lam * math.exp(base_var)) if base_var is not None else None
        )
        return ProductionTable(idxs, mixed, mixed_var)

    def with_scores(self, scores: np.ndarray, mix: float = 0.5) -> "Grammar":
        return Grammar(self.library, self.weights, self.var_weight, scores, mix)

    # -- description length ------------------------------------------------

    def choice_logp(self, req: PearlType, env: tuple, choice: Program) -> float:
        matching = [i for i, t in enumerate(env) if t == req]
        table = self.productions(req, len(matching))
        if isinstance(choice, Var):
            if table.var_logp is None or choice.index not in matching:
                raise PearlTypeError(f"variable ${choice.index} not admissible here")
            return table.var_logp - math.log(len(matching))
        name = choice.name
        idx = self.library.index.get(name)
        if idx is None:
            raise PearlTypeError(f"unknown primitive {name!r}")
        try:
            pos = table.prim_indices.index(idx)
        except ValueError:
            raise PearlTypeError(f"{name} does not produce {req!r}") from None
        return table.prim_logps[pos]


def _logsumexp(xs: list[float]) -> float:
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


# --------------------------------------------------------------------------
# Derivations


def derivation_choices(
    program: Program, lib: Library, request: PearlType = G2G, env: tuple = ()
):
    """Yield (request, env, head) for every production choice in the program.

    Programs must be eta-long: function-typed argument positions are filled by
    lambdas, and every primitive is fully applied.
    """
    while isinstance(request, ArrowType):
        if not isinstance(program, Lambda):
            raise PearlTypeError(
                f"expected a lambda at request {request!r}, got {program!r}"
            )
        env = (request.arg,) + env
        request = request.result
        program = program.body
    head, args = apply_chain(program)
    yield (request, env, head)
    if isinstance(head, Var):
        if args:
            raise PearlTypeError("applied variables are not supported")
        return
    if isinstance(head, Lambda):
        raise PearlTypeError("unexpected lambda head (beta-redex) in derivation")
    prim = lib.by_name.get(head.name)
    if prim is None:
        raise PearlTypeError(f"unknown primitive {head.name!r}")
    if len(args) != prim.arity:
        raise PearlTypeError(
            f"{head.name} applied to {len(args)} args, needs {prim.arity}"
        )
    for arg, at in zip(args, prim.arg_types):
        yield from derivation_choices(arg, lib, at, env)


def program_dl(program: Program, grammar: Grammar,
               request: PearlType = G2G) -> float:
    """- sum of log P(choice) along the derivation."""
    total = 0.0
    for req, env, head in derivation_choices(program, grammar.library, request):
        total -= grammar.choice_logp(req, env, head)
    return total


def corpus_dl(frontiers, grammar: Grammar, request: PearlType = G2G) -> float:
    """Sum over tasks of the minimum member DL under this grammar."""
    total = 0.0
    for f in frontiers:
        if not f.programs:
            continue
        total += min(program_dl(p, grammar, request) for p, _dl in f.programs)
    return total


# --------------------------------------------------------------------------
# Construction


def uniform_grammar(lib: Library) -> Grammar:
    return Grammar(lib)


def fit_grammar(lib: Library, frontiers, alpha: float = 1.0,
                request: PearlType = G2G) -> Grammar:
    """Maximum-likelihood production counts over min-DL frontier members,
    Laplace-smoothed: weight = log(count + alpha)."""
    counts = np.zeros(len(lib))
    var_count = 0.0
    for f in frontiers:
        if not f.programs:
            continue
        program = min(f.programs, key=lambda pd: pd[1])[0]
        for _req, _env, head in derivation_choices(program, lib, request):
            if isinstance(head, Var):
                var_count += 1.0
            else:
                counts[lib.index[head.name]] += 1.0
    return Grammar(lib, np.log(counts + alpha), math.log(var_count + alpha))


# --------------------------------------------------------------------------
# Sampling (used by dreaming)


class _DeadEnd(Exception):
    pass


def sample_program(
    grammar: Grammar,
    rng: np.random.Generator,
    request: PearlType = G2G,
    max_depth: int = 3,
    max_attempts: int = 100,
) -> Program:
    """Draw a program from the grammar with at most max_depth primitives on
    any root-to-leaf path. Deterministic for a given rng state."""
    lib = grammar.library

    def go(req: PearlType, env: tuple, depth: int) -> Program:
        if isinstance(req, ArrowType):
            return Lambda(go(req.result, (req.arg,) + env, depth))
        matching = [i for i, t in enumerate(env) if t == req]
        table = grammar.productions(req, len(matching))
        choices: list[tuple[float, object]] = []
        if table.var_logp is not None:
            per_var = table.var_logp - math.log(len(matching))
            for v in matching:
                choices.append((per_var, ("var", v)))
        if depth < max_depth:
            # every primitive on the path counts toward the depth cap,
            # constants included
            for pos, idx in enumerate(table.prim_indices):
                choices.append((table.prim_logps[pos], ("prim", idx)))
        if not choices:
            raise _DeadEnd()
        probs = np.array([math.exp(lp) for lp, _ in choices])
        probs /= probs.sum()
        pick = choices[int(rng.choice(len(choices), p=probs))][1]
        if pick[0] == "var":
            return Var(pick[1])
        prim = lib.primitives[pick[1]]
        node: Program = PrimitiveRef(prim.name)
        for at in prim.arg_types:
            node = Apply(node, go(at, env, depth + 1))
        return node

    for _ in range(max_attempts):
        try:
            return go(request, (), 0)
        except _DeadEnd:
            continue
    raise RuntimeError("sampling kept hitting dead ends; raise max_depth")
