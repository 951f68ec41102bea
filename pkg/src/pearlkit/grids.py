"""Grid, task and task-set containers plus JSON parsing and SVG rendering.

Grids are rectangular arrays of colour codes 0-9 (0 is black/background) with
dimensions between 1 and 30 in each direction.  A grid also carries an origin
(x, y): the position of its top-left cell inside the frame it was cut from.
Origin is bookkeeping only; grid equality never looks at it.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_DIM = 30
NUM_COLOURS = 10

# Standard colour palette used by every renderer.
PALETTE = (
    "#000000",  # 0 black
    "#0074D9",  # 1 blue
    "#FF4136",  # 2 red
    "#2ECC40",  # 3 green
    "#FFDC00",  # 4 yellow
    "#AAAAAA",  # 5 grey
    "#F012BE",  # 6 magenta
    "#FF851B",  # 7 orange
    "#7FDBFF",  # 8 cyan
    "#870C25",  # 9 maroon
)


class GridError(ValueError):
    """A grid constraint was violated (shape, bounds or cell values)."""

    def __init__(self, message: str, reason: str = "invalid"):
        super().__init__(message)
        self.reason = reason  # "empty" | "too-large" | "values" | "ragged"


class TaskFormatError(ValueError):
    """Task JSON did not match the expected structure; carries a JSON path."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class Grid:
    """Immutable rectangular colour grid.

    cells: int8 array of shape (height, width), row-major, values 0..9
    origin: (x, y) offset inside the parent frame, default (0, 0)
    """

    __slots__ = ("cells", "origin", "_key")

    def __init__(self, cells, origin: tuple[int, int] = (0, 0), _check_values: bool = True):
        try:
            a = np.asarray(cells, dtype=np.int8)
        except (ValueError, OverflowError) as e:  # ragged nesting, huge ints
            raise GridError(f"grid must be a rectangular 2-D array ({e})", "ragged") from e
        if a.ndim != 2:
            raise GridError("grid must be a rectangular 2-D array", "ragged")
        h, w = a.shape
        if h < 1 or w < 1:
            raise GridError(f"grid dimensions must be at least 1, got {w}x{h}", "empty")
        if h > MAX_DIM or w > MAX_DIM:
            raise GridError(f"grid dimensions must be at most {MAX_DIM}, got {w}x{h}", "too-large")
        if _check_values and (a.min() < 0 or a.max() >= NUM_COLOURS):
            raise GridError("cell values must be colour codes 0..9", "values")
        a.flags.writeable = False
        self.cells = a
        self.origin = (int(origin[0]), int(origin[1]))
        self._key = (w, h, a.tobytes())

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def size(self) -> tuple[int, int]:
        return (self.cells.shape[1], self.cells.shape[0])

    def key(self) -> tuple[int, int, bytes]:
        """Canonical hashable identity: (width, height, raw cells). Ignores origin."""
        return self._key

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.cells]

    def with_origin(self, origin: tuple[int, int]) -> "Grid":
        return Grid(self.cells, origin, _check_values=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        rows = "/".join("".join(str(int(v)) for v in row) for row in self.cells)
        at = f"@{self.origin}" if self.origin != (0, 0) else ""
        return f"Grid({rows}{at})"


def grids_equal(a: Grid, b: Grid) -> bool:
    """Exact cell equality; origin is ignored."""
    return a.key() == b.key()


class Task:
    """A transformation puzzle: train input/output pairs plus held-out test pairs."""

    __slots__ = ("task_id", "train", "test")

    def __init__(
        self,
        task_id: str,
        train: Sequence[tuple[Grid, Grid]],
        test: Sequence[tuple[Grid, Grid]],
    ):
        if not train:
            raise TaskFormatError("task needs at least one train pair", "$.train")
        if not test:
            raise TaskFormatError("task needs at least one test pair", "$.test")
        self.task_id = task_id
        self.train = list(train)
        self.test = list(test)

    def __repr__(self) -> str:
        return f"Task({self.task_id!r}, {len(self.train)} train, {len(self.test)} test)"


class TaskSet:
    """Named ordered collection of tasks with id lookup."""

    def __init__(self, name: str, tasks: Sequence[Task]):
        self.name = name
        self.tasks = list(tasks)
        self._by_id = {t.task_id: t for t in self.tasks}
        if len(self._by_id) != len(self.tasks):
            raise TaskFormatError("duplicate task ids in task set", "$")

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self) -> Iterator[Task]:
        return iter(self.tasks)

    def __getitem__(self, task_id: str) -> Task:
        return self._by_id[task_id]

    def __contains__(self, task_id: str) -> bool:
        return task_id in self._by_id


def _parse_grid(obj, path: str) -> Grid:
    if not isinstance(obj, list) or not obj:
        raise TaskFormatError("grid must be a non-empty list of rows", path)
    width = None
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise TaskFormatError("row must be a non-empty list", f"{path}[{r}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise TaskFormatError(
                f"row has {len(row)} cells, expected {width}", f"{path}[{r}]"
            )
        for c, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not (0 <= v <= 9):
                raise TaskFormatError(
                    f"cell must be an integer colour 0..9, got {v!r}", f"{path}[{r}][{c}]"
                )
    try:
        return Grid(obj)
    except GridError as e:
        raise TaskFormatError(str(e), path) from e


def _parse_pair(obj, path: str, require_output: bool = True) -> tuple[Grid, Grid]:
    if not isinstance(obj, dict):
        raise TaskFormatError("pair must be an object with input/output", path)
    if "input" not in obj:
        raise TaskFormatError("pair is missing 'input'", path)
    gin = _parse_grid(obj["input"], f"{path}.input")
    if "output" not in obj:
        if require_output:
            raise TaskFormatError("pair is missing 'output'", path)
        return (gin, gin)
    gout = _parse_grid(obj["output"], f"{path}.output")
    return (gin, gout)


def parse_task(obj, task_id: str = "task") -> Task:
    """Parse one task from the standard JSON structure.

    {"train": [{"input": [[..]], "output": [[..]]}, ...],
     "test":  [{"input": [[..]], "output": [[..]]}, ...]}
    """
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise TaskFormatError("task must be a JSON object", "$")
    for kind in ("train", "test"):
        if kind not in obj or not isinstance(obj[kind], list) or not obj[kind]:
            raise TaskFormatError(f"'{kind}' must be a non-empty list", f"$.{kind}")
    train = [
        _parse_pair(p, f"$.train[{i}]") for i, p in enumerate(obj["train"])
    ]
    test = [
        _parse_pair(p, f"$.test[{i}]") for i, p in enumerate(obj["test"])
    ]
    return Task(task_id, train, test)


def serialize_task(task: Task) -> dict:
    """Inverse of parse_task; parse(serialize(t)) reproduces t exactly."""
    return {
        "train": [
            {"input": a.tolist(), "output": b.tolist()} for a, b in task.train
        ],
        "test": [
            {"input": a.tolist(), "output": b.tolist()} for a, b in task.test
        ],
    }


# --------------------------------------------------------------------------
# SVG rendering


def _svg_grid(g: Grid, ox: float, oy: float, cell: float, out: list[str]) -> None:
    out.append(
        f'<rect x="{ox:g}" y="{oy:g}" width="{g.width * cell:g}" '
        f'height="{g.height * cell:g}" fill="#444444"/>'
    )
    pad = cell * 0.04
    for y in range(g.height):
        for x in range(g.width):
            colour = PALETTE[int(g.cells[y, x])]
            out.append(
                f'<rect x="{ox + x * cell + pad:g}" y="{oy + y * cell + pad:g}" '
                f'width="{cell - 2 * pad:g}" height="{cell - 2 * pad:g}" fill="{colour}"/>'
            )


def render_svg(obj: "Grid | Task", cell: float = 12.0) -> str:
    """Deterministic standalone SVG for a grid or a whole task.

    Tasks are laid out one train pair per row (input left, output right,
    labelled), followed by the test inputs.
    """
    parts: list[str] = []
    if isinstance(obj, Grid):
        w, h = obj.width * cell, obj.height * cell
        parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:g}" height="{h:g}" '
            f'viewBox="0 0 {w:g} {h:g}">'
        )
        _svg_grid(obj, 0, 0, cell, parts)
        parts.append("</svg>")
        return "\n".join(parts)

    task = obj
    label_h = cell * 1.5
    gap = cell
    rows: list[tuple[str, Grid, Grid | None]] = []
    for i, (a, b) in enumerate(task.train):
        rows.append((f"train {i}", a, b))
    for i, (a, _b) in enumerate(task.test):
        rows.append((f"test {i}", a, None))

    col_w = max(g.width for g in
                [p for row in rows for p in (row[1], row[2]) if p is not None]) * cell
    total_w = 2 * col_w + 3 * gap
    y = gap
    body: list[str] = []
    for name, gin, gout in rows:
        body.append(
            f'<text x="{gap:g}" y="{y + cell:g}" font-family="monospace" '
            f'font-size="{cell:g}" fill="#888888">{name}</text>'
        )
        y += label_h
        _svg_grid(gin, gap, y, cell, body)
        row_h = gin.height * cell
        if gout is not None:
            _svg_grid(gout, gap * 2 + col_w, y, cell, body)
            row_h = max(row_h, gout.height * cell)
        y += row_h + gap
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:g}" height="{y:g}" '
        f'viewBox="0 0 {total_w:g} {y:g}">'
    )
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts)


def render_text(g: Grid) -> str:
    """Terminal rendering: one digit per cell, newline per row."""
    return "\n".join("".join(str(int(v)) for v in row) for row in g.cells)


# --------------------------------------------------------------------------
# Random grid helpers (shared by dreaming, tests and benchmarks)


def random_grid(
    rng: np.random.Generator,
    max_dim: int = 10,
    colours: int = NUM_COLOURS,
    min_dim: int = 1,
    density: float | None = None,
) -> Grid:
    """Seeded random grid; density (if given) is the expected non-black rate."""
    h = int(rng.integers(min_dim, max_dim + 1))
    w = int(rng.integers(min_dim, max_dim + 1))
    if density is None:
        cells = rng.integers(0, colours, size=(h, w))
    else:
        mask = rng.random((h, w)) < density
        cells = np.where(mask, rng.integers(1, colours, size=(h, w)), 0)
    return Grid(cells)
