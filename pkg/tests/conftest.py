"""Shared fixtures: libraries, grammars, task builders."""

import numpy as np
import pytest

from pearlkit.grids import Grid, Task
from pearlkit.lang.library import Library, Primitive, default_library
from pearlkit.lang.types import COLOUR, GRID, arrow
from pearlkit.synthesis.grammar import uniform_grammar


@pytest.fixture(scope="session")
def default_lib():
    return default_library()


@pytest.fixture(scope="session")
def uniform(default_lib):
    return uniform_grammar(default_lib)


@pytest.fixture(scope="session")
def demo_lib():
    """The two-primitive teaching library: topCol and filterCol.

    filterCol takes its arguments in (grid, colour) order here, unlike the
    registry's ic_filtercol, and both are built through the public API.
    """
    def top_col(g: Grid) -> int:
        counts = np.bincount(g.cells[g.cells > 0].ravel(), minlength=10)
        if counts.sum() == 0:
            raise ValueError("no non-black cells")
        return int(counts.argmax())

    def filter_col(g: Grid, c: int) -> Grid:
        return Grid(np.where(g.cells == c, g.cells, 0), g.origin)

    return Library([
        Primitive("topCol", arrow(GRID, COLOUR), top_col),
        Primitive("filterCol", arrow(GRID, COLOUR, GRID), filter_col),
    ])


@pytest.fixture(scope="session")
def rigid_lib(default_lib):
    """Tiny unary library {rot90, flipx} reusing registry semantics."""
    return Library([default_lib["rot90"], default_lib["flipx"]])


def make_task(task_id, fn, rng, n_train=3, n_test=1, size=(3, 4)):
    """Task whose pairs all apply `fn` (a list-of-lists transform)."""
    h, w = size
    pairs = []
    for _ in range(n_train + n_test):
        a = rng.integers(0, 10, size=(h, w)).tolist()
        pairs.append((Grid(a), Grid(fn(a))))
    return Task(task_id, pairs[:n_train], pairs[n_train:])


def rot180_lists(a):
    return [row[::-1] for row in a[::-1]]


def anti_transpose_lists(a):
    arr = np.array(a)
    return arr.T[::-1, ::-1].tolist()
