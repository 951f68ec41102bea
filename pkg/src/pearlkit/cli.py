"""Command line interface.

Every verb that needs tasks accepts --data (or the ARC_DATA environment
variable) pointing at a dataset root with training/ and evaluation/ trees.
"""

from __future__ import annotations

import itertools
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .datasets import find_tasks, load_task_file
from .ensemble import (
    load_weights,
    read_predictions,
    vote,
    write_predictions,
)
from .grids import Grid, Task, render_svg, render_text
from .harness.experiment import run_experiment
from .harness.score import classify_errors, gain, overlap, score_predictions
from .lang import default_library, evaluate, parse_program
from .lang.errors import EvalError
from .llm.client import HTTPClient, MockClient
from .llm.solve import size_accuracy, solve_with_llm
from .recognition.dream import dream_tasks
from .recognition.model import RecognitionModel, mean_dream_dl, train_model
from .synthesis.grammar import uniform_grammar


@click.group()
@click.version_option(__version__, prog_name="pearl")
@click.option("--data", type=click.Path(), default=None,
              help="Dataset root (overrides ARC_DATA).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Reserved for parallel runs; 1 keeps output byte-stable.")
@click.option("--out-dir", type=click.Path(), default="pearl-out",
              show_default=True)
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
@click.pass_context
def main(ctx, data, seed, jobs, out_dir, verbose):
    """Grid-puzzle synthesis toolkit."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = {"data": data, "seed": seed, "jobs": jobs, "out_dir": Path(out_dir)}


def _load_tasks(ctx, which: str, task_ids: tuple[str, ...]) -> list[Task]:
    ts = find_tasks(ctx.obj["data"], which)
    if not task_ids:
        return list(ts)
    return [ts[tid] for tid in task_ids]


def _load_one(ctx, ref: str, which: str) -> Task:
    if ref.endswith(".json") or "/" in ref:
        return load_task_file(ref)
    return find_tasks(ctx.obj["data"], which)[ref]


@main.command()
@click.argument("task_ref")
@click.option("--set", "which", type=click.Choice(["easy", "hard"]),
              default="easy", show_default=True)
@click.option("--svg", type=click.Path(), default=None,
              help="Also write an SVG rendering here.")
@click.pass_context
def show(ctx, task_ref, which, svg):
    """Print a task (by id or JSON path) as digit grids."""
    task = _load_one(ctx, task_ref, which)
    for i, (a, b) in enumerate(task.train):
        click.echo(f"train[{i}] input\n{render_text(a)}")
        click.echo(f"train[{i}] output\n{render_text(b)}\n")
    for i, (a, b) in enumerate(task.test):
        click.echo(f"test[{i}] input\n{render_text(a)}")
        click.echo(f"test[{i}] output\n{render_text(b)}\n")
    if svg:
        Path(svg).write_text(render_svg(task), encoding="utf-8")
        click.echo(f"wrote {svg}")


@main.command("eval")
@click.option("--program", "-p", required=True, help="Program text, e.g. 'λ. rot90 $0'.")
@click.option("--grid", "-g", required=True,
              help="Input grid: JSON rows or a path to a JSON file.")
def eval_cmd(program, grid):
    """Run one program on one grid and print the result."""
    lib = default_library()
    prog = parse_program(program, set(lib.names()))
    if Path(grid).exists():
        rows = json.loads(Path(grid).read_text(encoding="utf-8"))
    else:
        rows = json.loads(grid)
    g = Grid(rows)
    try:
        out = evaluate(prog, g, lib)
    except EvalError as e:
        raise click.ClickException(f"evaluation failed: {e}")
    if isinstance(out, Grid):
        click.echo(render_text(out))
    else:
        click.echo(repr(out))


@main.command()
@click.argument("task_ids", nargs=-1)
@click.option("--set", "which", type=click.Choice(["easy", "hard"]),
              default="easy", show_default=True)
@click.option("--budget", type=int, default=20000, show_default=True,
              help="Programs enumerated per task.")
@click.option("--cycles", type=int, default=1, show_default=True)
@click.option("--frontier-size", type=int, default=10, show_default=True)
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--dreams", type=int, default=0, show_default=True,
              help="Dreams per cycle (0 disables the recognition model).")
@click.option("--recognition-steps", type=int, default=0, show_default=True)
@click.pass_context
def solve(ctx, task_ids, which, budget, cycles, frontier_size, k, dreams,
          recognition_steps):
    """Search for programs solving dataset tasks; write run files to --out-dir."""
    tasks = _load_tasks(ctx, which, task_ids)
    result = run_experiment(
        tasks, ctx.obj["out_dir"], seed=ctx.obj["seed"], cycles=cycles,
        max_programs_per_task=budget, frontier_size=frontier_size, k=k,
        dreams_per_cycle=dreams, recognition_steps=recognition_steps,
        name=f"solve-{which}",
    )
    click.echo(result.report.render_text())
    if result.inventions:
        click.echo("invented: " + ", ".join(result.inventions))
    click.echo(f"run files in {result.out_dir}")


@main.command("train-recognition")
@click.option("--dreams", type=int, default=500, show_default=True)
@click.option("--steps", type=int, default=2000, show_default=True)
@click.option("--depth", type=int, default=3, show_default=True)
@click.option("--out", type=click.Path(), default="recognition.json",
              show_default=True)
@click.pass_context
def train_recognition(ctx, dreams, steps, depth, out):
    """Dream labelled tasks from the base grammar and train the model."""
    lib = default_library()
    grammar = uniform_grammar(lib)
    rng = np.random.default_rng(ctx.obj["seed"])
    dreamed = dream_tasks(grammar, rng, dreams, max_depth=depth)
    held_out = max(1, len(dreamed) // 10)
    train_set, eval_set = dreamed[held_out:], dreamed[:held_out]
    model = RecognitionModel(lib, seed=ctx.obj["seed"])
    train_model(model, train_set, grammar, steps=steps, seed=ctx.obj["seed"])
    before = mean_dream_dl(eval_set, grammar)
    after = mean_dream_dl(eval_set, grammar, model)
    model.save(out)
    click.echo(
        f"held-out dream DL {before:.2f} -> {after:.2f} nats "
        f"({after / before:.2%} of base); saved {out}"
    )


def _client_from_profile(profile: dict):
    if "fixtures" in profile:
        return MockClient(profile["fixtures"],
                          profile.get("on_missing", "error"))
    if "endpoint" in profile:
        return HTTPClient(
            profile["endpoint"], profile.get("model", "gpt-4"),
            auth_env=profile.get("auth_env", "LLM_API_KEY"),
        )
    raise click.ClickException("profile needs either 'fixtures' or 'endpoint'")


@main.command("solve-llm")
@click.argument("task_ids", nargs=-1)
@click.option("--set", "which", type=click.Choice(["easy", "hard"]),
              default="easy", show_default=True)
@click.option("--profile", required=True, type=click.Path(exists=True),
              help="JSON: {name, mode, scheme, context_tokens, fixtures|endpoint}.")
@click.option("--out", type=click.Path(), default=None,
              help="Predictions JSONL path (default <out-dir>/llm.jsonl).")
@click.pass_context
def solve_llm(ctx, task_ids, which, profile, out):
    """Ask a language model to solve tasks; record ranked predictions."""
    prof = json.loads(Path(profile).read_text(encoding="utf-8"))
    client = _client_from_profile(prof)
    tasks = _load_tasks(ctx, which, task_ids)
    records = []
    sized = 0
    for t in tasks:
        res = solve_with_llm(
            t, client,
            mode=prof.get("mode", "completion"),
            scheme=prof.get("scheme", "digits"),
            context_tokens=int(prof.get("context_tokens", 2048)),
        )
        records.extend(res.all_records())
        if size_accuracy(res.predictions, t):
            sized += 1
    ctx.obj["out_dir"].mkdir(parents=True, exist_ok=True)
    path = Path(out) if out else ctx.obj["out_dir"] / "llm.jsonl"
    write_predictions(path, records)
    click.echo(f"{len(records)} records for {len(tasks)} tasks -> {path}")
    click.echo(f"size accuracy: {sized}/{len(tasks)}")


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--weights", type=click.Path(exists=True), default=None,
              help="TOML table of per-source weights.")
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="Output JSONL (default <out-dir>/ensemble.jsonl).")
@click.pass_context
def ensemble(ctx, inputs, weights, k, out):
    """Vote over prediction files from multiple solvers."""
    preds = []
    for path in inputs:
        preds.extend(read_predictions(path))
    table = load_weights(weights) if weights else None
    combined = vote(preds, k=k, weights=table)
    ctx.obj["out_dir"].mkdir(parents=True, exist_ok=True)
    path = Path(out) if out else ctx.obj["out_dir"] / "ensemble.jsonl"
    write_predictions(path, combined)
    click.echo(f"{len(preds)} inputs -> {len(combined)} votes -> {path}")


@main.command()
@click.argument("predictions", type=click.Path(exists=True))
@click.option("--set", "which", type=click.Choice(["easy", "hard"]),
              default="easy", show_default=True)
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--name", default="evaluation", show_default=True)
@click.option("--json", "json_out", type=click.Path(), default=None,
              help="Also write the report as JSON here.")
@click.pass_context
def score(ctx, predictions, which, k, name, json_out):
    """Score a predictions file against a dataset split."""
    tasks = list(find_tasks(ctx.obj["data"], which))
    preds = read_predictions(predictions)
    report = score_predictions(tasks, preds, k, name)
    click.echo(report.render_text())
    if json_out:
        Path(json_out).write_text(
            json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        click.echo(f"wrote {json_out}")


@main.command()
@click.argument("prediction_files", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--set", "which", type=click.Choice(["easy", "hard"]),
              default="easy", show_default=True)
@click.option("--k", type=int, default=3, show_default=True)
@click.pass_context
def compare(ctx, prediction_files, which, k):
    """Pairwise overlap and gain between solvers' solved sets."""
    tasks = list(find_tasks(ctx.obj["data"], which))
    solved: dict[str, set] = {}
    for path in prediction_files:
        preds = read_predictions(path)
        report = score_predictions(tasks, preds, k, Path(path).stem)
        solved[Path(path).stem] = {
            tid for tid, v in report.verdicts.items() if v == "solved"
        }
        click.echo(f"{Path(path).stem}: {len(solved[Path(path).stem])} solved")
    for a, b in itertools.combinations(sorted(solved), 2):
        sa, sb = solved[a], solved[b]
        if sa and sb:
            click.echo(f"overlap({a}, {b}) = {overlap(sa, sb):.3f}")
        else:
            click.echo(f"overlap({a}, {b}) undefined (an empty solved set)")
        click.echo(f"gain({a} <- {b}) = {gain(sa, sb)}")
        click.echo(f"gain({b} <- {a}) = {gain(sb, sa)}")


@main.command()
@click.argument("run_dir", type=click.Path(exists=True))
def report(run_dir):
    """Summarize an experiment directory written by `pearl solve`."""
    run = Path(run_dir)
    rep = json.loads((run / "report.json").read_text(encoding="utf-8"))
    man = json.loads((run / "manifest.json").read_text(encoding="utf-8"))
    s = rep["score"]
    click.echo(
        f"{s['name']}: {s['solved']}/{s['total']} solved "
        f"(accuracy {s['accuracy']:.1%}) at k={s['k']}"
    )
    click.echo(
        f"failed {s['failed']}, skipped {s['skipped']}, "
        f"pairs {s['pairs_correct']}/{s['pairs_total']}"
    )
    errors = rep.get("errors", {})
    if errors:
        click.echo(
            f"class-3 rate {errors.get('class3_rate')} over "
            f"{errors.get('tasks_with_frontier')} tasks with frontiers"
        )
    if rep.get("inventions"):
        click.echo("invented: " + ", ".join(rep["inventions"]))
    click.echo(
        f"library {man.get('library_fingerprint')}, "
        f"config {man.get('config_hash')}, version {man.get('package_version')}"
    )


if __name__ == "__main__":
    main()
