"""Primitive semantics: algebraic identities, independent oracles, edge cases.

The component-count and gravity oracles here are deliberately naive pure-Python
reimplementations (flood fill, step-by-step falling) so the vectorized
primitives are checked against a second route.  The identity battery and both
oracles are reused by the acceptance suite at full scale.
"""

import itertools

import numpy as np
import pytest

import pearlkit.lang.primitives as P
from pearlkit.grids import Grid, random_grid
from pearlkit.lang.errors import DimensionOverflow, PrimitiveFailure


# --------------------------------------------------------------------------
# Algebraic identity battery


def check_rigid(g):
    assert P.rot90(P.rot90(P.rot90(P.rot90(g)))) == g
    assert P.rot180(P.rot180(g)) == g
    assert P.rot270(g) == P.rot90(P.rot90(P.rot90(g)))
    assert P.rot90(P.rot270(g)) == g
    assert P.flipx(P.flipx(g)) == g
    assert P.flipy(P.flipy(g)) == g
    assert P.swapxy(P.swapxy(g)) == g
    assert P.rot180(g) == P.flipx(P.flipy(g))
    assert P.rot90(g) == P.flipx(P.swapxy(g))
    assert P.rot270(g) == P.flipy(P.swapxy(g))


def check_crop_uncrop(g):
    if 2 * g.width <= 30:
        assert P.left_half(P.mirrorX(g)) == g
        assert P.right_half(P.mirrorX(g)) == P.flipx(g)
        assert P.left_half(P.repeatX(g)) == g
        assert P.right_half(P.repeatX(g)) == g
    if 2 * g.height <= 30:
        assert P.top_half(P.mirrorY(g)) == g
        assert P.bottom_half(P.mirrorY(g)) == P.flipy(g)
        assert P.top_half(P.repeatY(g)) == g
        assert P.bottom_half(P.repeatY(g)) == g


def check_colours(g, c):
    assert P.overlay(P.ic_filtercol(c, g), P.ic_erasecol(c, g)) == g
    painted = P.setcol(c, g)
    assert set(np.unique(painted.cells)) <= {0, c}
    assert ((painted.cells != 0) == (g.cells != 0)).all()
    assert P.overlay(g, P.get_bg(c, g)) == P.set_bg(c, g)
    assert P.colourHull(c, g).size == g.size
    assert (P.colourHull(c, g).cells == c).all()
    if P.countPixels(g):
        assert P.ic_invert(g) == P.get_bg(P.topcol(g), g)


def check_counting(g):
    cells = np.asarray(g.tolist())
    assert P.countPixels(g) == int((cells != 0).sum())
    assert P.countColours(g) == len({v for v in cells.ravel().tolist() if v})
    assert P.countComponents(g) == flood_count(g.tolist())


def check_splits(g):
    pieces = P.ic_splitall(g)
    assert sum(P.countPixels(p) for p in pieces) == P.countPixels(g)
    assert len(pieces) == P.countComponents(g)
    cols = P.ic_splitcolumns(g)
    assert len(cols) == g.width
    assert Grid(np.hstack([p.cells for p in cols])) == g
    rows = P.ic_splitrows(g)
    assert len(rows) == g.height
    assert Grid(np.vstack([p.cells for p in rows])) == g
    # recomposition: pieces carry their absolute positions
    if P.countPixels(g):
        ys, xs = np.nonzero(g.cells)
        clipped = Grid(g.cells[:ys.max() + 1, :xs.max() + 1])
        assert P.ic_composegrowing(pieces) == clipped
    assert P.mapSplit8(lambda q: q, g) == g


def check_gravity(g):
    for fn in (P.gravity_down, P.gravity_up, P.gravity_left, P.gravity_right):
        once = fn(g)
        assert fn(once) == once
        assert P.countPixels(once) == P.countPixels(g)
    assert P.gravity_up(g) == P.rot180(P.gravity_down(P.rot180(g)))
    assert P.gravity_left(g) == P.swapxy(P.gravity_up(P.swapxy(g)))
    assert P.ic_connectY(g) == P.swapxy(P.ic_connectX(P.swapxy(g)))


def check_misc(g):
    assert P.ic_toorigin(g).origin == (0, 0)
    assert P.ic_compress2(P.ic_compress2(g)) == P.ic_compress2(g)
    if P.countPixels(g):
        assert P.ic_compress3(P.ic_compress3(g)) == P.ic_compress3(g)
        sp = P.ic_spread(g)
        assert (sp.cells != 0).all()
        assert P.countComponents(P.ic_makeborder(g)) >= 0  # total fn on coloured g
    assert P.logical_and(g, g) == g
    assert P.overlay(g, g) == g
    assert P.getsize(g) == (g.width, g.height)


def run_identity_battery(rng, n_grids):
    for i in range(n_grids):
        g = random_grid(rng, max_dim=10)
        c = int(rng.integers(1, 10))
        check_rigid(g)
        check_crop_uncrop(g)
        check_colours(g, c)
        check_counting(g)
        check_splits(g)
        check_gravity(g)
        check_misc(g)


def test_identity_battery_quick():
    run_identity_battery(np.random.default_rng(42), 150)


# --------------------------------------------------------------------------
# Component-count oracle (pure-python flood fill, 4-connectivity)


def flood_count(cells):
    h, w = len(cells), len(cells[0])
    seen = [[False] * w for _ in range(h)]
    n = 0
    for y in range(h):
        for x in range(w):
            if cells[y][x] and not seen[y][x]:
                n += 1
                stack = [(y, x)]
                seen[y][x] = True
                while stack:
                    cy, cx = stack.pop()
                    for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < h and 0 <= nx < w and cells[ny][nx] \
                                and not seen[ny][nx]:
                            seen[ny][nx] = True
                            stack.append((ny, nx))
    return n


# --------------------------------------------------------------------------
# Gravity oracle (pure-python step simulation)
#
# Objects are 4-connected colour-agnostic components. Nearest-to-wall falls
# first; ties break by the raster index of the object's first cell. Each
# object steps one cell at a time until it hits an edge or a settled cell.


def gravity_oracle(g, dx, dy):
    cells = g.tolist()
    H, W = len(cells), len(cells[0])
    seen = [[False] * W for _ in range(H)]
    comps = []
    for y in range(H):
        for x in range(W):
            if cells[y][x] and not seen[y][x]:
                comp = []
                stack = [(y, x)]
                seen[y][x] = True
                while stack:
                    cy, cx = stack.pop()
                    comp.append((cy, cx))
                    for ddy, ddx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        ny, nx = cy + ddy, cx + ddx
                        if 0 <= ny < H and 0 <= nx < W and cells[ny][nx] \
                                and not seen[ny][nx]:
                            seen[ny][nx] = True
                            stack.append((ny, nx))
                comps.append(comp)

    def wall_dist(comp):
        if dy > 0:
            return H - 1 - max(y for y, _ in comp)
        if dy < 0:
            return min(y for y, _ in comp)
        if dx > 0:
            return W - 1 - max(x for _, x in comp)
        return min(x for _, x in comp)

    comps.sort(key=lambda c: (wall_dist(c), min(y * W + x for y, x in c)))
    settled = set()
    out = [[0] * W for _ in range(H)]
    for comp in comps:
        d = 0
        while True:
            nxt = [(y + (d + 1) * dy, x + (d + 1) * dx) for y, x in comp]
            if any(not (0 <= y < H and 0 <= x < W) for y, x in nxt):
                break
            if any(p in settled for p in nxt):
                break
            d += 1
        for y, x in comp:
            out[y + d * dy][x + d * dx] = cells[y][x]
            settled.add((y + d * dy, x + d * dx))
    return out


def oracle_cases(rng, full=False):
    """Every (w, h) in 1..6 squared; exhaustive binary patterns while the
    pattern space is small, seeded multi-colour samples otherwise."""
    per_shape = 200 if full else 25
    for w in range(1, 7):
        for h in range(1, 7):
            if w * h <= 9:
                for bits in itertools.product((0, 3), repeat=w * h):
                    yield Grid(np.array(bits, dtype=np.int8).reshape(h, w))
            else:
                for _ in range(per_shape):
                    cells = rng.integers(0, 4, size=(h, w))
                    yield Grid(cells)


def run_component_oracle(rng, full=False):
    n = 0
    for g in oracle_cases(rng, full):
        assert P.countComponents(g) == flood_count(g.tolist()), g
        n += 1
    return n


def run_gravity_oracle(rng, full=False):
    dirs = {P.gravity_down: (0, 1), P.gravity_up: (0, -1),
            P.gravity_left: (-1, 0), P.gravity_right: (1, 0)}
    n = 0
    for g in oracle_cases(rng, full):
        for fn, (dx, dy) in dirs.items():
            assert fn(g).tolist() == gravity_oracle(g, dx, dy), (g, dx, dy)
        n += 1
    return n


def test_component_count_matches_flood_fill():
    assert run_component_oracle(np.random.default_rng(1)) > 1800


def test_gravity_matches_step_simulation():
    assert run_gravity_oracle(np.random.default_rng(2)) > 1800


# --------------------------------------------------------------------------
# Hand-worked examples for the under-determined corners


def test_connect_fills():
    assert P.ic_connectX(Grid([[2, 0, 0, 2]])) == Grid([[2, 2, 2, 2]])
    assert P.ic_connectX(Grid([[2, 0, 3, 0, 2]])) == Grid([[2, 0, 3, 0, 2]])
    assert P.ic_connectX(Grid([[2, 0, 2, 0, 2]])) == Grid([[2, 2, 2, 2, 2]])
    # adjacent equal cells leave no gap to fill
    assert P.ic_connectX(Grid([[4, 4]])) == Grid([[4, 4]])


def test_connectxy_x_wins_conflicts():
    g = Grid([[0, 3, 0],
              [2, 0, 2],
              [0, 3, 0]])
    out = P.ic_connectXY(g)
    assert out == Grid([[0, 3, 0],
                        [2, 2, 2],
                        [0, 3, 0]])


def test_compress2_rows_then_columns():
    g = Grid([[1, 1, 2],
              [1, 1, 2],
              [3, 3, 4]])
    assert P.ic_compress2(g) == Grid([[1, 2], [3, 4]])


def test_compress3_tracks_origin():
    g = Grid([[0, 0, 0], [0, 5, 0], [0, 0, 0]], origin=(1, 1))
    out = P.ic_compress3(g)
    assert out == Grid([[5]])
    assert out.origin == (2, 2)
    with pytest.raises(PrimitiveFailure):
        P.ic_compress3(Grid([[0, 0]]))


def test_spread_nearest_and_tie_break():
    assert P.ic_spread(Grid([[1, 0, 0, 2]])) == Grid([[1, 1, 2, 2]])
    # equidistant: smaller (dy, dx) offset wins, so the right source paints
    assert P.ic_spread(Grid([[1, 0, 2]])) == Grid([[1, 2, 2]])
    with pytest.raises(PrimitiveFailure):
        P.ic_spread(Grid([[0, 0]]))


def test_spread_minor_ignores_majority():
    g = Grid([[1, 1, 1, 0],
              [1, 0, 0, 2]])
    assert P.ic_spread_minor(g) == Grid([[2, 2, 2, 2], [2, 2, 2, 2]])
    with pytest.raises(PrimitiveFailure):
        P.ic_spread_minor(Grid([[1, 1], [0, 1]]))  # no minority cells


def test_interior_fill_border():
    donut = Grid([[3, 3, 3], [3, 0, 3], [3, 3, 3]])
    assert P.ic_interior(donut) == Grid([[0, 0, 0], [0, 3, 0], [0, 0, 0]])
    assert P.ic_fill(donut) == Grid([[3, 3, 3], [3, 1, 3], [3, 3, 3]])
    assert P.fillobj(7, donut) == Grid([[3, 3, 3], [3, 7, 3], [3, 3, 3]])
    dot = Grid([[0, 0, 0], [0, 5, 0], [0, 0, 0]])
    assert P.ic_makeborder(dot) == Grid([[1, 1, 1], [1, 0, 1], [1, 1, 1]])
    open_c = Grid([[3, 3], [3, 0]])  # gap reaches the border: no interior
    assert P.ic_interior(open_c) == Grid([[0, 0], [0, 0]])


def test_center():
    g = Grid(np.full((4, 4), 2), origin=(1, 0))
    out = P.ic_center(g)
    assert out == Grid([[1, 1], [1, 1]])
    assert out.origin == (2, 1)
    with pytest.raises(PrimitiveFailure):
        P.ic_center(Grid([[1, 2, 3]]))


def test_count_to_drawing():
    assert P.countToXY(3, 4) == Grid(np.full((3, 3), 4))
    assert P.countToX(4, 2) == Grid([[2, 2, 2, 2]])
    assert P.countToY(2, 9) == Grid([[9], [9]])
    with pytest.raises(PrimitiveFailure):
        P.countToX(0, 1)
    with pytest.raises(DimensionOverflow):
        P.countToXY(31, 1)


def test_halves_reject_thin_grids():
    with pytest.raises(PrimitiveFailure):
        P.left_half(Grid([[1], [2]]))
    with pytest.raises(PrimitiveFailure):
        P.top_half(Grid([[1, 2]]))


def test_uncrop_overflow():
    wide = Grid(np.zeros((1, 16), dtype=np.int8))
    with pytest.raises(DimensionOverflow):
        P.repeatX(wide)


def test_topcol_rarestcol():
    g = Grid([[1, 1, 2, 0]])
    assert P.topcol(g) == 1
    assert P.rarestcol(g) == 2
    with pytest.raises(PrimitiveFailure):
        P.topcol(Grid([[0]]))
    with pytest.raises(PrimitiveFailure):
        P.rarestcol(Grid([[0]]))
    # topcol tie breaks to the smaller colour code (bincount argmax)
    assert P.topcol(Grid([[2, 1]])) == 1


def test_pickcommon_pickunique():
    a, b, c = Grid([[1]]), Grid([[2]]), Grid([[3]])
    assert P.pickcommon([a, b, a]) is not None
    assert P.pickcommon([a, b, a]) == a
    assert P.pickcommon([a, a, b, b]) == a  # tie: earliest first occurrence
    with pytest.raises(PrimitiveFailure):
        P.pickcommon([a, b, c])
    assert P.ic_pickunique([a, a, b]) == b
    with pytest.raises(PrimitiveFailure):
        P.ic_pickunique([a, b])  # two uniques
    with pytest.raises(PrimitiveFailure):
        P.ic_pickunique([a, a])  # none


def test_pickmax_family():
    big = Grid([[1, 1], [1, 1]])
    small = Grid([[1]])
    colourful = Grid([[1, 2, 3]])
    assert P.pickmax_size([small, big]) == big
    assert P.pickmax_neg_size([big, small]) == small
    assert P.pickmax_count([small, big]) == big
    assert P.pickmax_neg_count([big, small]) == small
    assert P.pickmax_cols([big, colourful]) == colourful
    donut = Grid([[3, 3, 3], [3, 0, 3], [3, 3, 3]])
    assert P.pickmax_interior_count([big, donut]) == donut
    assert P.pickmax_neg_interior_count([donut, big]) == big
    left = Grid([[1]], origin=(0, 5))
    right = Grid([[2]], origin=(4, 2))
    assert P.pickmax_x_pos([left, right]) == right     # right-most
    assert P.pickmax_x_neg([right, left]) == left      # left-most
    assert P.pickmax_y_pos([left, right]) == right     # uppermost
    assert P.pickmax_y_neg([right, left]) == left      # lowermost
    assert P.pickmax_size([small, Grid([[2]])]) == small  # tie: earliest
    with pytest.raises(PrimitiveFailure):
        P.pickmax_count([])


def test_split_order_and_connectivity():
    g = Grid([[1, 0, 2]])
    pieces = P.ic_splitall(g)
    assert [p.tolist() for p in pieces] == [[[1]], [[2]]]
    assert [p.origin for p in pieces] == [(0, 0), (2, 0)]
    diag = Grid([[1, 0], [0, 1]])
    assert len(P.ic_splitall(diag)) == 2   # 4-connectivity
    assert len(P.split8(diag)) == 1        # 8-connectivity
    bycol = P.ic_splitcols(Grid([[2, 1]]))
    assert [p.tolist() for p in bycol] == [[[1]], [[2]]]  # ascending colour
    assert [p.origin for p in bycol] == [(1, 0), (0, 0)]


def test_list_construction():
    a, b, c = Grid([[1]]), Grid([[2]]), Grid([[3]])
    assert P.mklist(a, b) == [a, b]
    assert P.lcons(a, [b, c]) == [a, b, c]


def test_overlay_positioned():
    a = Grid([[5]], origin=(1, 0))
    b = Grid([[6, 6]], origin=(0, 1))
    out = P.overlay(a, b)
    assert out == Grid([[0, 5], [6, 6]])
    assert out.origin == (0, 0)
    # equal sizes align cellwise and the first argument wins
    x = Grid([[7, 0]])
    y = Grid([[8, 8]])
    assert P.overlay(x, y) == Grid([[7, 8]])


def test_logical_and():
    a = Grid([[1, 1, 0]])
    b = Grid([[2, 0, 2]])
    assert P.logical_and(a, b) == Grid([[1, 0, 0]])
    with pytest.raises(PrimitiveFailure):
        P.logical_and(a, Grid([[1]]))


def test_composegrowing_overwrite_order():
    big = Grid([[3, 3], [3, 3]], origin=(0, 0))
    small = Grid([[5]], origin=(0, 0))
    assert P.ic_composegrowing([small, big]) == Grid([[5, 3], [3, 3]])
    with pytest.raises(PrimitiveFailure):
        P.ic_composegrowing([])


def test_embed():
    g = Grid([[4]], origin=(1, 1))
    hull = Grid(np.zeros((3, 3), dtype=np.int8))
    out = P.ic_embed(g, hull)
    assert out == Grid([[0, 0, 0], [0, 4, 0], [0, 0, 0]])
    assert out.origin == (0, 0)


def test_mapsplit8_moves_pieces():
    g = Grid([[2, 0, 0, 2]])

    def blue(piece):
        return P.setcol(1, piece)

    assert P.mapSplit8(blue, g) == Grid([[1, 0, 0, 1]])
    with pytest.raises(PrimitiveFailure):
        P.mapSplit8(lambda q: 7, g)
