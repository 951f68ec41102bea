"""Grid <-> text encodings for language-model prompting.

Three schemes:

- "digits": one character per cell, one line per row.
- "spaced": the same but cells separated by single spaces.
- "compact": byte-identical text to "digits"; it differs only in token
  accounting, crediting byte-pair tokenizers for merging digit runs.

Token estimates are intentionally conservative: for each scheme the estimate
is an upper bound on the reference tokenizer count of the encoded text, so a
prompt that fits the estimate fits the context.
"""

from __future__ import annotations

import math
import re

from ..grids import MAX_DIM, Grid, GridError

SCHEMES = ("digits", "spaced", "compact")


def _check_scheme(scheme: str) -> None:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown encoding scheme {scheme!r}; pick from {SCHEMES}")


def encode_grid(g: Grid, scheme: str = "digits") -> str:
    _check_scheme(scheme)
    if scheme == "spaced":
        return "\n".join(" ".join(str(int(v)) for v in row) for row in g.cells)
    return "\n".join("".join(str(int(v)) for v in row) for row in g.cells)


def decode_grid(text: str, scheme: str = "digits") -> Grid:
    """Strict inverse of encode_grid; raises GridError on malformed text."""
    _check_scheme(scheme)
    rows = []
    for line in text.split("\n"):
        line = line.replace(" ", "")
        if not line.isdigit():
            raise GridError(f"not a grid row: {line!r}", "values")
        rows.append([int(ch) for ch in line])
    return Grid(rows)


_DIGIT_RUN = re.compile(r"[0-9]+")


def count_tokens(text: str, scheme: str = "digits") -> int:
    """Reference tokenizer count.

    Worst case for byte-level tokenizers is one token per character, which is
    what "digits" and "spaced" assume.  "compact" credits merges of digit
    runs into groups of up to three, the behaviour this scheme is named for.
    """
    _check_scheme(scheme)
    if scheme != "compact":
        return len(text)
    tokens = 0
    last = 0
    for m in _DIGIT_RUN.finditer(text):
        tokens += m.start() - last
        tokens += math.ceil((m.end() - m.start()) / 3)
        last = m.end()
    return tokens + len(text) - last


def estimate_grid_tokens(g: Grid, scheme: str = "digits") -> int:
    """Closed-form upper bound on count_tokens(encode_grid(g, scheme))."""
    _check_scheme(scheme)
    w, h = g.width, g.height
    if scheme == "spaced":
        return 2 * w * h
    if scheme == "compact":
        return math.ceil(w / 3) * h + h
    return w * h + h


def parse_completion(text: str, max_dim: int = MAX_DIM) -> Grid | None:
    """Extract the first grid from free-form model output, or None.

    Tolerates prose before and after: spaces inside a line are dropped, and
    the first maximal run of all-digit lines is taken as the grid.  Ragged
    rows, empty output, or an oversized grid give None.
    """
    rows: list[list[int]] = []
    for raw in text.split("\n"):
        line = raw.replace(" ", "").replace("\t", "").strip()
        if line.isdigit():
            rows.append([int(ch) for ch in line])
        elif rows:
            break  # the grid run has ended
    if not rows:
        return None
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        return None
    if len(rows) > max_dim or width > max_dim:
        return None
    try:
        return Grid(rows)
    except GridError:
        return None
