"""Fixed task featurization for the recognition model.

The feature table is versioned: checkpoints record FEATURE_TABLE_VERSION and
refuse to load against a different layout.  Scale constants are fixed by the
grid bounds (30 cells per side), keeping every entry roughly within [-1, 1].
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..grids import MAX_DIM, NUM_COLOURS, Grid, Task

FEATURE_TABLE_VERSION = 1
FEATURE_DIM = 64

_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.int8)

_DIM = float(MAX_DIM)          # 30
_DIM_DIFF = float(MAX_DIM - 1)  # 29
_AREA = float(MAX_DIM * MAX_DIM)  # 900
_COMPONENTS = _AREA / 2.0      # 450, the checkerboard bound


def _hist(g: Grid) -> np.ndarray:
    counts = np.bincount(g.cells.ravel(), minlength=NUM_COLOURS).astype(float)
    return counts / g.cells.size


def _components(g: Grid) -> int:
    _lab, n = ndimage.label(g.cells != 0, structure=_FOUR)
    return int(n)


def _is_subgrid(small: Grid, big: Grid) -> bool:
    """True when `small` appears as a contiguous window of `big`."""
    sh, sw = small.cells.shape
    bh, bw = big.cells.shape
    if sh > bh or sw > bw:
        return False
    for y in range(bh - sh + 1):
        for x in range(bw - sw + 1):
            if np.array_equal(big.cells[y:y + sh, x:x + sw], small.cells):
                return True
    return False


def _symmetries(g: Grid) -> list[float]:
    c = g.cells
    flags = [
        np.array_equal(c, c[:, ::-1]),   # mirror across the vertical axis
        np.array_equal(c, c[::-1, :]),   # mirror across the horizontal axis
        np.array_equal(c, c[::-1, ::-1]),  # 180-degree rotation
        c.shape[0] == c.shape[1] and np.array_equal(c, c.T),
    ]
    return [1.0 if f else 0.0 for f in flags]


def featurize_pair(gin: Grid, gout: Grid) -> np.ndarray:
    """64 floats describing one input/output example."""
    hin, hout = _hist(gin), _hist(gout)
    feats: list[float] = [
        gin.width / _DIM,
        gin.height / _DIM,
        gout.width / _DIM,
        gout.height / _DIM,
        (gout.width - gin.width) / _DIM_DIFF,
        (gout.height - gin.height) / _DIM_DIFF,
        gin.cells.size / _AREA,
        gout.cells.size / _AREA,
    ]
    feats.extend(hin)
    feats.extend(hout)
    feats.extend(hout - hin)
    feats.extend([
        float(np.count_nonzero(gin.cells)) / _AREA,
        float(np.count_nonzero(gout.cells)) / _AREA,
        _components(gin) / _COMPONENTS,
        _components(gout) / _COMPONENTS,
        1.0 if gin.key() == gout.key() else 0.0,
        1.0 if _is_subgrid(gin, gout) else 0.0,
        1.0 if _is_subgrid(gout, gin) else 0.0,
        1.0 if gin.cells.shape == gout.cells.shape else 0.0,
    ])
    feats.extend(_symmetries(gin))
    feats.extend(_symmetries(gout))
    vec = np.zeros(FEATURE_DIM)
    assert len(feats) <= FEATURE_DIM
    vec[:len(feats)] = feats
    return vec


def featurize_task(task: Task) -> np.ndarray:
    """Mean of the pair features over the train examples."""
    return np.mean([featurize_pair(a, b) for a, b in task.train], axis=0)
