"""Host implementations of every library primitive.

Conventions used throughout:
- grids are `grids.Grid` values; colours are ints 1..9 (0 never flows as a
  colour value); counts are non-negative ints; pos/size are (x, y) tuples.
- a primitive whose precondition fails raises PrimitiveFailure; a constructed
  grid that would exceed the 30-dimension bound raises DimensionOverflow
  (both via `make_grid`).  Nothing here ever mutates an input grid.
- origin bookkeeping: same-size transforms keep the input origin; crops and
  splits offset it by the kept region; newly synthesised grids sit at (0, 0).
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..grids import MAX_DIM, Grid, GridError
from .errors import DimensionOverflow, PrimitiveFailure

FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
EIGHT = np.ones((3, 3), dtype=bool)

BLUE = 1


def make_grid(cells, origin=(0, 0)) -> Grid:
    try:
        return Grid(cells, origin, _check_values=False)
    except GridError as e:
        if e.reason == "too-large":
            raise DimensionOverflow(str(e)) from None
        raise PrimitiveFailure(str(e)) from None


def _label(mask: np.ndarray, connectivity: int) -> tuple[np.ndarray, int]:
    labels, n = ndimage.label(mask, structure=FOUR if connectivity == 4 else EIGHT)
    return labels, int(n)


def _component_order(labels: np.ndarray, n: int) -> list[int]:
    """Component ids ordered by the raster index of their first cell."""
    first: dict[int, int] = {}
    flat = labels.ravel()
    for idx in np.flatnonzero(flat):
        lab = int(flat[idx])
        if lab not in first:
            first[lab] = int(idx)
            if len(first) == n:
                break
    return sorted(first, key=first.get)


def _interior_mask(cells: np.ndarray) -> np.ndarray:
    """Black cells not 4-connected to the border through black."""
    black = cells == 0
    if not black.any():
        return np.zeros_like(black)
    labels, n = _label(black, 4)
    if n == 0:
        return np.zeros_like(black)
    border = np.zeros_like(black)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    outside = np.unique(labels[border & black])
    interior = black.copy()
    for lab in outside:
        interior &= labels != lab
    return interior


def _topcol_value(cells: np.ndarray) -> int:
    counts = np.bincount(cells.ravel(), minlength=10)
    counts[0] = 0
    if counts.sum() == 0:
        raise PrimitiveFailure("topcol of an all-black grid")
    return int(np.argmax(counts))  # argmax keeps the lowest colour on ties


# --------------------------------------------------------------------------
# Rigid transforms


def rot90(g: Grid) -> Grid:
    return make_grid(np.rot90(g.cells, -1), g.origin)


def rot180(g: Grid) -> Grid:
    return make_grid(np.rot90(g.cells, 2), g.origin)


def rot270(g: Grid) -> Grid:
    return make_grid(np.rot90(g.cells, 1), g.origin)


def flipx(g: Grid) -> Grid:
    return make_grid(np.fliplr(g.cells), g.origin)


def flipy(g: Grid) -> Grid:
    return make_grid(np.flipud(g.cells), g.origin)


def swapxy(g: Grid) -> Grid:
    return make_grid(g.cells.T, g.origin)


# --------------------------------------------------------------------------
# Cropping (floor division; a 1-long dimension cannot be halved)


def left_half(g: Grid) -> Grid:
    w2 = g.width // 2
    if w2 < 1:
        raise PrimitiveFailure("cannot halve a width-1 grid")
    return make_grid(g.cells[:, :w2], g.origin)


def right_half(g: Grid) -> Grid:
    w2 = g.width // 2
    if w2 < 1:
        raise PrimitiveFailure("cannot halve a width-1 grid")
    off = g.width - w2
    return make_grid(g.cells[:, off:], (g.origin[0] + off, g.origin[1]))


def top_half(g: Grid) -> Grid:
    h2 = g.height // 2
    if h2 < 1:
        raise PrimitiveFailure("cannot halve a height-1 grid")
    return make_grid(g.cells[:h2, :], g.origin)


def bottom_half(g: Grid) -> Grid:
    h2 = g.height // 2
    if h2 < 1:
        raise PrimitiveFailure("cannot halve a height-1 grid")
    off = g.height - h2
    return make_grid(g.cells[off:, :], (g.origin[0], g.origin[1] + off))


# --------------------------------------------------------------------------
# Uncropping


def repeatX(g: Grid) -> Grid:
    return make_grid(np.hstack([g.cells, g.cells]), g.origin)


def repeatY(g: Grid) -> Grid:
    return make_grid(np.vstack([g.cells, g.cells]), g.origin)


def mirrorX(g: Grid) -> Grid:
    return make_grid(np.hstack([g.cells, np.fliplr(g.cells)]), g.origin)


def mirrorY(g: Grid) -> Grid:
    return make_grid(np.vstack([g.cells, np.flipud(g.cells)]), g.origin)


def ic_embed(g: Grid, hull: Grid) -> Grid:
    """Paint g at its own origin onto a black canvas of hull's size (clipped)."""
    H, W = hull.height, hull.width
    canvas = np.zeros((H, W), dtype=np.int8)
    _paint(canvas, g.cells, g.origin)
    return make_grid(canvas, (0, 0))


def _paint(canvas: np.ndarray, cells: np.ndarray, origin: tuple[int, int],
           transparent: bool = False) -> None:
    """Write cells onto canvas at origin, clipping out-of-bounds parts.

    transparent=True leaves canvas untouched where cells are 0."""
    H, W = canvas.shape
    h, w = cells.shape
    x0, y0 = origin
    sx0, sy0 = max(0, -x0), max(0, -y0)
    dx0, dy0 = max(0, x0), max(0, y0)
    cw = min(w - sx0, W - dx0)
    ch = min(h - sy0, H - dy0)
    if cw <= 0 or ch <= 0:
        return
    src = cells[sy0:sy0 + ch, sx0:sx0 + cw]
    dst = canvas[dy0:dy0 + ch, dx0:dx0 + cw]
    if transparent:
        np.copyto(dst, src, where=src != 0)
    else:
        dst[...] = src


# --------------------------------------------------------------------------
# Colour manipulation


def topcol(g: Grid) -> int:
    return _topcol_value(g.cells)


def rarestcol(g: Grid) -> int:
    counts = np.bincount(g.cells.ravel(), minlength=10)
    counts[0] = 0
    if counts.sum() == 0:
        raise PrimitiveFailure("rarestcol of an all-black grid")
    masked = np.where(counts > 0, counts, np.iinfo(np.int64).max)
    return int(np.argmin(masked))


def ic_filtercol(c: int, g: Grid) -> Grid:
    return make_grid(np.where(g.cells == c, g.cells, 0), g.origin)


def ic_erasecol(c: int, g: Grid) -> Grid:
    return make_grid(np.where(g.cells == c, 0, g.cells), g.origin)


def setcol(c: int, g: Grid) -> Grid:
    return make_grid(np.where(g.cells != 0, c, 0).astype(np.int8), g.origin)


def set_bg(c: int, g: Grid) -> Grid:
    return make_grid(np.where(g.cells == 0, c, g.cells).astype(np.int8), g.origin)


def get_bg(c: int, g: Grid) -> Grid:
    return make_grid(np.where(g.cells == 0, c, 0).astype(np.int8), g.origin)


def ic_invert(g: Grid) -> Grid:
    t = _topcol_value(g.cells)
    return make_grid(np.where(g.cells == 0, t, 0).astype(np.int8), g.origin)


def colourHull(c: int, g: Grid) -> Grid:
    return make_grid(np.full(g.cells.shape, c, dtype=np.int8), g.origin)


# --------------------------------------------------------------------------
# Position


def getpos(g: Grid) -> tuple[int, int]:
    return g.origin


def getsize(g: Grid) -> tuple[int, int]:
    return (g.width, g.height)


def ic_toorigin(g: Grid) -> Grid:
    return g.with_origin((0, 0))


# --------------------------------------------------------------------------
# Morphology


def fillobj(c: int, g: Grid) -> Grid:
    m = _interior_mask(g.cells)
    return make_grid(np.where(m, c, g.cells).astype(np.int8), g.origin)


def ic_fill(g: Grid) -> Grid:
    return fillobj(BLUE, g)


def ic_interior(g: Grid) -> Grid:
    t = _topcol_value(g.cells)
    m = _interior_mask(g.cells)
    return make_grid(np.where(m, t, 0).astype(np.int8), g.origin)


def ic_center(g: Grid) -> Grid:
    w2, h2 = g.width // 2, g.height // 2
    if w2 < 1 or h2 < 1:
        raise PrimitiveFailure("cannot centre within a 1-long dimension")
    ox = g.origin[0] + (g.width - w2) // 2
    oy = g.origin[1] + (g.height - h2) // 2
    return make_grid(np.full((h2, w2), BLUE, dtype=np.int8), (ox, oy))


def ic_makeborder(g: Grid) -> Grid:
    nb = g.cells != 0
    ring = ndimage.binary_dilation(nb, structure=EIGHT) & ~nb
    return make_grid(np.where(ring, BLUE, 0).astype(np.int8), g.origin)


def _nearest_fill(cells: np.ndarray, fillable: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Squared-Euclidean nearest source per fillable cell, ties by (dy, dx)."""
    out = cells.copy()
    fy, fx = np.nonzero(fillable)
    sy, sx = np.nonzero(sources)
    if len(fy) == 0:
        return out
    dy = fy[:, None] - sy[None, :]
    dx = fx[:, None] - sx[None, :]
    span = 2 * MAX_DIM - 1
    rank = (dy + MAX_DIM - 1) * span + (dx + MAX_DIM - 1)
    composite = (dy * dy + dx * dx) * (span * span) + rank
    pick = np.argmin(composite, axis=1)
    out[fy, fx] = cells[sy[pick], sx[pick]]
    return out


def ic_spread(g: Grid) -> Grid:
    sources = g.cells != 0
    if not sources.any():
        raise PrimitiveFailure("spread with no coloured cells")
    return make_grid(_nearest_fill(g.cells, ~sources, sources), g.origin)


def ic_spread_minor(g: Grid) -> Grid:
    t = _topcol_value(g.cells)
    sources = (g.cells != 0) & (g.cells != t)
    if not sources.any():
        raise PrimitiveFailure("spread_minor with no minority cells")
    fillable = ~sources
    return make_grid(_nearest_fill(g.cells, fillable, sources), g.origin)


# --------------------------------------------------------------------------
# Counting


def countPixels(g: Grid) -> int:
    return int((g.cells != 0).sum())


def countColours(g: Grid) -> int:
    return int(len(np.unique(g.cells[g.cells != 0])))


def countComponents(g: Grid) -> int:
    return _label(g.cells != 0, 4)[1]


def countToXY(n: int, c: int) -> Grid:
    if n < 1:
        raise PrimitiveFailure("cannot draw a zero-sized grid")
    if n > MAX_DIM:
        raise DimensionOverflow(f"count {n} exceeds the {MAX_DIM}-cell bound")
    return make_grid(np.full((n, n), c, dtype=np.int8), (0, 0))


def countToX(n: int, c: int) -> Grid:
    if n < 1:
        raise PrimitiveFailure("cannot draw a zero-sized grid")
    if n > MAX_DIM:
        raise DimensionOverflow(f"count {n} exceeds the {MAX_DIM}-cell bound")
    return make_grid(np.full((1, n), c, dtype=np.int8), (0, 0))


def countToY(n: int, c: int) -> Grid:
    if n < 1:
        raise PrimitiveFailure("cannot draw a zero-sized grid")
    if n > MAX_DIM:
        raise DimensionOverflow(f"count {n} exceeds the {MAX_DIM}-cell bound")
    return make_grid(np.full((n, 1), c, dtype=np.int8), (0, 0))


# --------------------------------------------------------------------------
# Compression


def ic_compress2(g: Grid) -> Grid:
    """Drop rows equal to the previous row, then columns likewise."""
    cells = g.cells
    keep_r = [0] + [i for i in range(1, cells.shape[0])
                    if not np.array_equal(cells[i], cells[i - 1])]
    cells = cells[keep_r]
    keep_c = [0] + [j for j in range(1, cells.shape[1])
                    if not np.array_equal(cells[:, j], cells[:, j - 1])]
    return make_grid(cells[:, keep_c], g.origin)


def ic_compress3(g: Grid) -> Grid:
    """Drop entirely black rows and columns; origin tracks leading removals."""
    rows = np.flatnonzero((g.cells != 0).any(axis=1))
    cols = np.flatnonzero((g.cells != 0).any(axis=0))
    if len(rows) == 0 or len(cols) == 0:
        raise PrimitiveFailure("compress3 of an all-black grid")
    origin = (g.origin[0] + int(cols[0]), g.origin[1] + int(rows[0]))
    return make_grid(g.cells[np.ix_(rows, cols)], origin)


# --------------------------------------------------------------------------
# Drawing


def _connect_fills(cells: np.ndarray) -> np.ndarray:
    """Per row: fill the black gap between equal-coloured cells with that colour."""
    fills = np.zeros_like(cells)
    for y in range(cells.shape[0]):
        row = cells[y]
        last_x = -1
        last_v = 0
        for x in range(len(row)):
            v = row[x]
            if v == 0:
                continue
            if v == last_v and x - last_x > 1:
                fills[y, last_x + 1:x] = v
            last_x, last_v = x, v
    return fills


def ic_connectX(g: Grid) -> Grid:
    out = g.cells.copy()
    fills = _connect_fills(g.cells)
    np.copyto(out, fills, where=fills != 0)
    return make_grid(out, g.origin)


def ic_connectY(g: Grid) -> Grid:
    out = g.cells.copy()
    fills = _connect_fills(g.cells.T).T
    np.copyto(out, fills, where=fills != 0)
    return make_grid(out, g.origin)


def ic_connectXY(g: Grid) -> Grid:
    """Both directions computed on the original grid; X wins conflicts."""
    out = g.cells.copy()
    fx = _connect_fills(g.cells)
    fy = _connect_fills(g.cells.T).T
    np.copyto(out, fy, where=fy != 0)
    np.copyto(out, fx, where=fx != 0)
    return make_grid(out, g.origin)


# --------------------------------------------------------------------------
# List creation (splits carry their position inside the parent)


def _crop_piece(cells: np.ndarray, origin: tuple[int, int]) -> Grid:
    ys, xs = np.nonzero(cells)
    y0, y1 = int(ys.min()), int(ys.max())
    x0, x1 = int(xs.min()), int(xs.max())
    return make_grid(cells[y0:y1 + 1, x0:x1 + 1], (origin[0] + x0, origin[1] + y0))


def ic_splitcols(g: Grid) -> list[Grid]:
    out = []
    for c in sorted(int(v) for v in np.unique(g.cells) if v != 0):
        out.append(_crop_piece(np.where(g.cells == c, g.cells, 0), g.origin))
    return out


def _split_components(g: Grid, connectivity: int) -> list[Grid]:
    labels, n = _label(g.cells != 0, connectivity)
    return [
        _crop_piece(np.where(labels == lab, g.cells, 0), g.origin)
        for lab in _component_order(labels, n)
    ]


def ic_splitall(g: Grid) -> list[Grid]:
    return _split_components(g, 4)


def split8(g: Grid) -> list[Grid]:
    return _split_components(g, 8)


def ic_splitcolumns(g: Grid) -> list[Grid]:
    return [
        make_grid(g.cells[:, x:x + 1], (g.origin[0] + x, g.origin[1]))
        for x in range(g.width)
    ]


def ic_splitrows(g: Grid) -> list[Grid]:
    return [
        make_grid(g.cells[y:y + 1, :], (g.origin[0], g.origin[1] + y))
        for y in range(g.height)
    ]


# --------------------------------------------------------------------------
# List reduction (ties always break to the earliest list position)


def pickcommon(gs: list[Grid]) -> Grid:
    if not gs:
        raise PrimitiveFailure("pickcommon of an empty list")
    counts: dict = {}
    first: dict = {}
    for i, g in enumerate(gs):
        k = g.key()
        counts[k] = counts.get(k, 0) + 1
        first.setdefault(k, i)
    best = max(counts.values())
    if best < 2:
        raise PrimitiveFailure("pickcommon with no repeated grid")
    key = min((k for k, c in counts.items() if c == best), key=first.get)
    return gs[first[key]]


def ic_pickunique(gs: list[Grid]) -> Grid:
    if not gs:
        raise PrimitiveFailure("pickunique of an empty list")
    counts: dict = {}
    first: dict = {}
    for i, g in enumerate(gs):
        k = g.key()
        counts[k] = counts.get(k, 0) + 1
        first.setdefault(k, i)
    singles = [k for k, c in counts.items() if c == 1]
    if len(singles) != 1:
        raise PrimitiveFailure(f"pickunique needs exactly one unique grid, got {len(singles)}")
    return gs[first[singles[0]]]


def _pickmax(gs: list[Grid], key) -> Grid:
    if not gs:
        raise PrimitiveFailure("pickmax of an empty list")
    return gs[max(range(len(gs)), key=lambda i: key(gs[i]))]


def _interior_count(g: Grid) -> int:
    return int(_interior_mask(g.cells).sum())


def pickmax_count(gs): return _pickmax(gs, countPixels)
def pickmax_neg_count(gs): return _pickmax(gs, lambda g: -countPixels(g))
def pickmax_size(gs): return _pickmax(gs, lambda g: g.width * g.height)
def pickmax_neg_size(gs): return _pickmax(gs, lambda g: -(g.width * g.height))
def pickmax_cols(gs): return _pickmax(gs, countColours)
def pickmax_interior_count(gs): return _pickmax(gs, _interior_count)
def pickmax_neg_interior_count(gs): return _pickmax(gs, lambda g: -_interior_count(g))
def pickmax_x_pos(gs): return _pickmax(gs, lambda g: g.origin[0])       # right-most
def pickmax_x_neg(gs): return _pickmax(gs, lambda g: -g.origin[0])      # left-most
def pickmax_y_pos(gs): return _pickmax(gs, lambda g: -g.origin[1])      # uppermost
def pickmax_y_neg(gs): return _pickmax(gs, lambda g: g.origin[1])       # lowermost


# --------------------------------------------------------------------------
# List processing


def mklist(a: Grid, b: Grid) -> list[Grid]:
    return [a, b]


def lcons(a: Grid, rest: list[Grid]) -> list[Grid]:
    return [a] + list(rest)


# --------------------------------------------------------------------------
# Composition


def ic_composegrowing(gs: list[Grid]) -> Grid:
    """Stack positioned pieces, largest area first (later pieces overwrite)."""
    if not gs:
        raise PrimitiveFailure("composegrowing of an empty list")
    W = max(g.origin[0] + g.width for g in gs)
    H = max(g.origin[1] + g.height for g in gs)
    if W > MAX_DIM or H > MAX_DIM:
        raise DimensionOverflow(f"composed hull {W}x{H} exceeds the {MAX_DIM} bound")
    canvas = np.zeros((max(H, 1), max(W, 1)), dtype=np.int8)
    order = sorted(range(len(gs)), key=lambda i: -(gs[i].width * gs[i].height))
    for i in order:
        _paint(canvas, gs[i].cells, gs[i].origin, transparent=True)
    return make_grid(canvas, (0, 0))


def overlay(a: Grid, b: Grid) -> Grid:
    """Transparent overlay; the first argument wins where both are coloured.

    Equal sizes align cell-on-cell (origins ignored); otherwise both grids are
    painted into their positioned hull."""
    if a.size == b.size:
        return make_grid(np.where(a.cells != 0, a.cells, b.cells), a.origin)
    W = max(a.origin[0] + a.width, b.origin[0] + b.width)
    H = max(a.origin[1] + a.height, b.origin[1] + b.height)
    if W > MAX_DIM or H > MAX_DIM:
        raise DimensionOverflow(f"overlay hull {W}x{H} exceeds the {MAX_DIM} bound")
    canvas = np.zeros((H, W), dtype=np.int8)
    _paint(canvas, b.cells, b.origin, transparent=True)
    _paint(canvas, a.cells, a.origin, transparent=True)
    return make_grid(canvas, (0, 0))


def logical_and(a: Grid, b: Grid) -> Grid:
    if a.size != b.size:
        raise PrimitiveFailure("logical_and needs equal-sized grids")
    both = (a.cells != 0) & (b.cells != 0)
    return make_grid(np.where(both, a.cells, 0).astype(np.int8), a.origin)


# --------------------------------------------------------------------------
# Higher-order


def mapSplit8(f, g: Grid) -> Grid:
    """Apply f to every 8-connected object; recompose on the original canvas."""
    canvas = np.zeros_like(g.cells)
    for piece in split8(g):
        q = f(piece)
        if not isinstance(q, Grid):
            raise PrimitiveFailure("mapSplit8 function must return a grid")
        _paint(canvas, q.cells, q.origin, transparent=True)
    return make_grid(canvas, g.origin)


# --------------------------------------------------------------------------
# Gravity


def _gravity(g: Grid, dx: int, dy: int) -> Grid:
    cells = g.cells
    labels, n = _label(cells != 0, 4)
    if n == 0:
        return g
    H, W = cells.shape
    objs = []
    for lab in range(1, n + 1):
        ys, xs = np.nonzero(labels == lab)
        # distance to the wall this object falls toward, then scan order
        if dy > 0:
            dist = H - 1 - ys.max()
        elif dy < 0:
            dist = ys.min()
        elif dx > 0:
            dist = W - 1 - xs.max()
        else:
            dist = xs.min()
        objs.append((int(dist), int(ys[0] * W + xs[0]), ys, xs))
    objs.sort(key=lambda o: (o[0], o[1]))

    settled = np.zeros_like(cells, dtype=bool)
    out = np.zeros_like(cells)
    for _dist, _tie, ys, xs in objs:
        d = 0
        while True:
            ny = ys + (d + 1) * dy
            nx = xs + (d + 1) * dx
            if ny.min() < 0 or ny.max() >= H or nx.min() < 0 or nx.max() >= W:
                break
            if settled[ny, nx].any():
                break
            d += 1
        fy, fx = ys + d * dy, xs + d * dx
        out[fy, fx] = cells[ys, xs]
        settled[fy, fx] = True
    return make_grid(out, g.origin)


def gravity_down(g: Grid) -> Grid:
    return _gravity(g, 0, 1)


def gravity_up(g: Grid) -> Grid:
    return _gravity(g, 0, -1)


def gravity_left(g: Grid) -> Grid:
    return _gravity(g, -1, 0)


def gravity_right(g: Grid) -> Grid:
    return _gravity(g, 1, 0)
