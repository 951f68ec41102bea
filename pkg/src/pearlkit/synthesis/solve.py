"""Search for programs solving a task, and prediction from found frontiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from time import perf_counter

from ..ensemble import Prediction
from ..grids import Grid, Task, grids_equal
from ..lang.errors import EvalError
from ..lang.evaluate import DEFAULT_LIMITS, EvalLimits, compile_program
from ..lang.program import IDENTITY, Program, parse_program, pretty_print
from .enumeration import EnumStats, SearchBudget, enumerate_programs
from .grammar import G2G, Grammar, program_dl

SOLVER_SOURCE = "dreamcoder"


@dataclass
class Frontier:
    """Programs verified on every train pair, sorted by ascending DL."""

    task_id: str
    programs: list[tuple[Program, float]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.programs)

    def best(self) -> tuple[Program, float] | None:
        return self.programs[0] if self.programs else None


def solve_task(
    task: Task,
    grammar: Grammar,
    budget: SearchBudget | None = None,
    limits: EvalLimits = DEFAULT_LIMITS,
    frontier_size: int = 10,
) -> Frontier:
    """Enumerate programs in DL order and keep the first `frontier_size` that
    reproduce every train output.  The stream is DL-sorted across bands, so
    the first hits are the lowest-DL members.

    Tasks whose train pairs are all identity short-circuit to `λ. $0` (the
    identity is excluded from the enumeration stream).
    """
    t0 = perf_counter()
    lib = grammar.library
    train = task.train
    if all(grids_equal(a, b) for a, b in train):
        dl = program_dl(IDENTITY, grammar)
        return Frontier(
            task.task_id,
            [(IDENTITY, dl)],
            {"generated": 0, "verified": 1, "max_dl": dl,
             "stopped": "identity-shortcut", "wall": perf_counter() - t0},
        )

    inputs = [a for a, _ in train]
    targets = [b.key() for _, b in train]
    es = EnumStats()
    found: list[tuple[Program, float]] = []
    verified = 0
    for program, dl in enumerate_programs(grammar, G2G, budget, es):
        try:
            compiled = compile_program(program, lib)
            ok = True
            for gin, want in zip(inputs, targets):
                out = compiled.run(gin, limits)
                if not isinstance(out, Grid) or out.key() != want:
                    ok = False
                    break
        except EvalError:
            continue
        if ok:
            verified += 1
            found.append((program, dl))
            if len(found) >= frontier_size:
                es.stopped = "frontier-full"
                break
    return Frontier(
        task.task_id,
        found,
        {"generated": es.generated, "verified": verified, "max_dl": es.max_dl,
         "bands": es.bands, "stopped": es.stopped, "wall": perf_counter() - t0},
    )


def predict(
    frontier: Frontier,
    task: Task,
    k: int = 3,
    limits: EvalLimits = DEFAULT_LIMITS,
    source: str = SOLVER_SOURCE,
    lib=None,
) -> list[Prediction]:
    """Up to k distinct output grids per test input, lowest-DL programs first.

    Programs erroring on a test input are skipped; duplicate outputs collapse
    onto the best rank.
    """
    if lib is None:
        raise ValueError("predict needs the library the frontier was built with")
    preds: list[Prediction] = []
    compiled = [
        (compile_program(p, lib), dl)
        for p, dl in sorted(frontier.programs, key=lambda pd: pd[1])
    ]
    for ti, (gin, _expected) in enumerate(task.test):
        seen: set = set()
        rank = 0
        for cp, _dl in compiled:
            if rank >= k:
                break
            try:
                out = cp.run(gin, limits)
            except EvalError:
                continue
            if not isinstance(out, Grid) or out.key() in seen:
                continue
            seen.add(out.key())
            rank += 1
            preds.append(Prediction(task.task_id, ti, source, rank, out))
    return preds


# --------------------------------------------------------------------------
# Frontier wire format


def frontier_to_json(f: Frontier) -> dict:
    return {
        "task_id": f.task_id,
        "programs": [
            {"text": pretty_print(p), "dl": dl} for p, dl in f.programs
        ],
        "stats": f.stats,
    }


def frontier_from_json(obj: dict, known_names: set[str] | None = None) -> Frontier:
    return Frontier(
        obj["task_id"],
        [
            (parse_program(e["text"], known_names), float(e["dl"]))
            for e in obj.get("programs", [])
        ],
        dict(obj.get("stats", {})),
    )
