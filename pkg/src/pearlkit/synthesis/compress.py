"""Library growth by abstraction of recurring program fragments.

Fragments shared across solved tasks are closed over their free variables,
ranked, and greedily promoted to invented primitives while each promotion
strictly shortens the corpus description (against a baseline that refits
production weights but keeps the library fixed, so the win must come from
the new primitive and not from refitting alone).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lang.errors import PearlTypeError
from ..lang.library import Library, Primitive, invent
from ..lang.program import (
    Apply,
    Lambda,
    PrimitiveRef,
    Program,
    Var,
    free_vars,
    primitive_count,
    shift,
    structural_key,
)
from ..lang.typecheck import typecheck
from .grammar import G2G, Grammar, corpus_dl, fit_grammar
from .solve import Frontier

MIN_PRIMITIVES = 2  # fragments below this carry no reusable structure
MAX_CANDIDATES = 200
MAX_INVENTIONS = 3
_EPS = 1e-9


@dataclass
class CompressionResult:
    grammar: Grammar
    inventions: list[Primitive] = field(default_factory=list)
    dl_before: float = 0.0
    dl_after: float = 0.0
    frontiers: list[Frontier] = field(default_factory=list)


def close_fragment(sub: Program) -> tuple[Program, int]:
    """Wrap a fragment's free variables in fresh binders.

    Distinct escape heights become parameters, innermost wrapper taking the
    smallest height, so every occurrence of one outer binder maps to the same
    parameter.  Returns the closed program and its parameter count.
    """
    heights = sorted(free_vars(sub))
    rank = {h: j for j, h in enumerate(heights)}

    def remap(p: Program, depth: int) -> Program:
        if isinstance(p, Var):
            if p.index >= depth:
                return Var(depth + rank[p.index - depth])
            return p
        if isinstance(p, PrimitiveRef):
            return p
        if isinstance(p, Lambda):
            return Lambda(remap(p.body, depth + 1))
        return Apply(remap(p.fn, depth), remap(p.arg, depth))

    closed = remap(sub, 0)
    for _ in heights:
        closed = Lambda(closed)
    return closed, len(heights)


def _fragments(p: Program):
    """Fully-applied application chains inside p (never partial applications,
    so substituting a saturated call for a match keeps programs eta-long)."""
    stack = [(p, False)]
    while stack:
        node, fn_pos = stack.pop()
        if isinstance(node, Lambda):
            stack.append((node.body, False))
        elif isinstance(node, Apply):
            if not fn_pos:
                yield node
            stack.append((node.fn, True))
            stack.append((node.arg, False))


def _match(pat: Program, sub: Program, depth: int, nparams: int,
           binds: list[Program | None]) -> bool:
    """Match sub against a pattern body whose outermost nparams indices are
    wildcards.  Bindings must be liftable to the match root: a fragment that
    references a binder introduced inside the pattern region is a capture and
    rejects the match."""
    if isinstance(pat, Var):
        if pat.index < depth:
            return isinstance(sub, Var) and sub.index == pat.index
        j = pat.index - depth
        if any(h < depth for h in free_vars(sub)):
            return False
        frag = shift(sub, -depth) if depth else sub
        if binds[j] is None:
            binds[j] = frag
            return True
        return binds[j] == frag
    if isinstance(pat, PrimitiveRef):
        return isinstance(sub, PrimitiveRef) and sub.name == pat.name
    if isinstance(pat, Lambda):
        return isinstance(sub, Lambda) and _match(
            pat.body, sub.body, depth + 1, nparams, binds)
    if isinstance(pat, Apply):
        return (
            isinstance(sub, Apply)
            and _match(pat.fn, sub.fn, depth, nparams, binds)
            and _match(pat.arg, sub.arg, depth, nparams, binds)
        )
    raise TypeError(f"unexpected node {pat!r}")


def rewrite(p: Program, body: Program, nparams: int, name: str) -> Program:
    """Replace every occurrence of the pattern in p with a saturated call to
    the invented primitive, outermost occurrences first, then inside the
    arguments of the replacement."""
    binds: list[Program | None] = [None] * nparams
    if _match(body, p, 0, nparams, binds):
        # every parameter came from a free-variable occurrence, so a full
        # match always fills every binding
        assert all(b is not None for b in binds)
        node: Program = PrimitiveRef(name)
        for j in range(nparams - 1, -1, -1):
            node = Apply(node, rewrite(binds[j], body, nparams, name))
        return node
    if isinstance(p, Lambda):
        return Lambda(rewrite(p.body, body, nparams, name))
    if isinstance(p, Apply):
        return Apply(
            rewrite(p.fn, body, nparams, name),
            rewrite(p.arg, body, nparams, name),
        )
    return p


def _rewrite_frontiers(
    frontiers: list[Frontier], body: Program, nparams: int, name: str,
    lib: Library,
) -> list[Frontier]:
    out = []
    for f in frontiers:
        programs = []
        for prog, dl in f.programs:
            new = rewrite(prog, body, nparams, name)
            if new is not prog and new != prog:
                try:
                    typecheck(new, lib, G2G)
                except PearlTypeError:
                    new = prog
            programs.append((new, dl))
        out.append(Frontier(f.task_id, programs, dict(f.stats)))
    return out


def mine_candidates(
    frontiers: list[Frontier], lib: Library, limit: int = MAX_CANDIDATES
) -> list[tuple[Program, int]]:
    """Closed fragments worth trying, best first.

    A fragment qualifies when it contains at least MIN_PRIMITIVES primitive
    references and its closed form recurs in at least two distinct tasks.
    Ranking: task spread, then raw occurrence count, then a deterministic
    structural order.
    """
    stats: dict[Program, dict] = {}
    arity: dict[Program, int] = {}
    for f in frontiers:
        for prog, _dl in f.programs:
            for frag in _fragments(prog):
                if primitive_count(frag) < MIN_PRIMITIVES:
                    continue
                closed, n = close_fragment(frag)
                entry = stats.get(closed)
                if entry is None:
                    stats[closed] = {"tasks": {f.task_id}, "count": 1}
                    arity[closed] = n
                else:
                    entry["tasks"].add(f.task_id)
                    entry["count"] += 1
    index_of = lambda name: lib.index.get(name, len(lib))
    ranked = sorted(
        (
            (closed, arity[closed], len(e["tasks"]), e["count"])
            for closed, e in stats.items()
            if len(e["tasks"]) >= 2
        ),
        key=lambda item: (-item[2], -item[3], structural_key(item[0], index_of)),
    )
    return [(closed, n) for closed, n, _t, _c in ranked[:limit]]


def _strip_lambdas(p: Program, n: int) -> Program:
    for _ in range(n):
        assert isinstance(p, Lambda)
        p = p.body
    return p


def compress(
    grammar: Grammar,
    frontiers: list[Frontier],
    max_inventions: int = MAX_INVENTIONS,
    alpha: float = 1.0,
) -> CompressionResult:
    """Grow the grammar's library with up to max_inventions new primitives.

    Each round re-mines candidates from the current (possibly rewritten)
    frontiers, evaluates the shortlist, and keeps the single best invention
    provided it beats the refit-only baseline strictly.  Without any winner
    the incoming grammar object is returned untouched.
    """
    lib = grammar.library
    current = [Frontier(f.task_id, list(f.programs), dict(f.stats))
               for f in frontiers]
    dl_before = corpus_dl(current, fit_grammar(lib, current, alpha))
    inventions: list[Primitive] = []
    dl_now = dl_before

    for _round in range(max_inventions):
        baseline = corpus_dl(current, fit_grammar(lib, current, alpha))
        best = None  # (dl, lib2, frontiers2, prim)
        for closed, nparams in mine_candidates(current, lib):
            try:
                ptype = typecheck(closed, lib)
            except PearlTypeError:
                continue
            lib2, prim = invent(lib, closed, ptype)
            body = _strip_lambdas(closed, nparams)
            rewritten = _rewrite_frontiers(current, body, nparams, prim.name, lib2)
            dl = corpus_dl(rewritten, fit_grammar(lib2, rewritten, alpha))
            if dl < baseline - _EPS and (best is None or dl < best[0] - _EPS):
                best = (dl, lib2, rewritten, prim)
        if best is None:
            break
        dl_now, lib, current, prim = best
        inventions.append(prim)

    if not inventions:
        return CompressionResult(grammar, [], dl_before, dl_before, current)
    return CompressionResult(
        fit_grammar(lib, current, alpha), inventions, dl_before, dl_now, current
    )
