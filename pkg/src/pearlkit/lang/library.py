"""Primitive registry and library container.

The default library lists every built-in primitive in a fixed canonical
order; that order is the tie-breaking index used by enumeration and is part
of the library fingerprint embedded in recognition checkpoints.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

from . import primitives as P
from .program import Program
from .types import (
    COLOUR,
    COUNT,
    GRID,
    POS,
    SIZE,
    ArrowType,
    PearlType,
    argument_types,
    arrow,
    list_of,
)

G = GRID
LG = list_of(GRID)


class Primitive:
    """A named, typed operation: a host function, a constant value (arity 0,
    stored in fn), or an invented lambda body."""

    __slots__ = ("name", "type", "fn", "arity", "arg_types", "return_type",
                 "body", "compiled")

    def __init__(self, name: str, pearl_type: PearlType, fn,
                 body: Program | None = None):
        self.name = name
        self.type = pearl_type
        self.fn = fn
        self.body = body  # defining program for invented primitives
        self.compiled = None  # lazily built runner for invented primitives
        self.arg_types, self.return_type = argument_types(pearl_type)
        self.arity = len(self.arg_types)

    @property
    def is_invented(self) -> bool:
        return self.body is not None

    def __repr__(self) -> str:
        return f"Primitive({self.name}: {self.type!r})"


class Library:
    """Ordered, name-unique collection of primitives."""

    def __init__(self, prims: Sequence[Primitive]):
        self.primitives = list(prims)
        self.by_name = {p.name: p for p in self.primitives}
        if len(self.by_name) != len(self.primitives):
            raise ValueError("duplicate primitive names in library")
        self.index = {p.name: i for i, p in enumerate(self.primitives)}

    def __len__(self) -> int:
        return len(self.primitives)

    def __iter__(self):
        return iter(self.primitives)

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def __getitem__(self, name: str) -> Primitive:
        return self.by_name[name]

    def names(self) -> list[str]:
        return [p.name for p in self.primitives]

    def extended(self, extra: Sequence[Primitive]) -> "Library":
        return Library(self.primitives + list(extra))

    def invented(self) -> list[Primitive]:
        return [p for p in self.primitives if p.is_invented]


def library_fingerprint(lib: Library) -> str:
    """Stable id of the primitive list (names in order)."""
    return hashlib.sha256(",".join(lib.names()).encode()).hexdigest()[:16]


def _colour_constant(c: int) -> Primitive:
    return Primitive(f"c{c}", COLOUR, c)


_SPEC: list[tuple[str, PearlType]] = [
    # rigid
    ("rot90", arrow(G, G)),
    ("rot180", arrow(G, G)),
    ("rot270", arrow(G, G)),
    ("flipx", arrow(G, G)),
    ("flipy", arrow(G, G)),
    ("swapxy", arrow(G, G)),
    # cropping
    ("left_half", arrow(G, G)),
    ("right_half", arrow(G, G)),
    ("top_half", arrow(G, G)),
    ("bottom_half", arrow(G, G)),
    # uncropping
    ("repeatX", arrow(G, G)),
    ("repeatY", arrow(G, G)),
    ("mirrorX", arrow(G, G)),
    ("mirrorY", arrow(G, G)),
    ("ic_embed", arrow(G, G, G)),
    # colour
    ("topcol", arrow(G, COLOUR)),
    ("rarestcol", arrow(G, COLOUR)),
    ("ic_filtercol", arrow(COLOUR, G, G)),
    ("ic_erasecol", arrow(COLOUR, G, G)),
    ("setcol", arrow(COLOUR, G, G)),
    ("set_bg", arrow(COLOUR, G, G)),
    ("get_bg", arrow(COLOUR, G, G)),
    ("ic_invert", arrow(G, G)),
    ("colourHull", arrow(COLOUR, G, G)),
    # position
    ("getpos", arrow(G, POS)),
    ("getsize", arrow(G, SIZE)),
    ("ic_toorigin", arrow(G, G)),
    # morphology
    ("fillobj", arrow(COLOUR, G, G)),
    ("ic_fill", arrow(G, G)),
    ("ic_interior", arrow(G, G)),
    ("ic_center", arrow(G, G)),
    ("ic_makeborder", arrow(G, G)),
    ("ic_spread", arrow(G, G)),
    ("ic_spread_minor", arrow(G, G)),
    # counting
    ("countPixels", arrow(G, COUNT)),
    ("countColours", arrow(G, COUNT)),
    ("countComponents", arrow(G, COUNT)),
    ("countToXY", arrow(COUNT, COLOUR, G)),
    ("countToX", arrow(COUNT, COLOUR, G)),
    ("countToY", arrow(COUNT, COLOUR, G)),
    # compression
    ("ic_compress2", arrow(G, G)),
    ("ic_compress3", arrow(G, G)),
    # drawing
    ("ic_connectX", arrow(G, G)),
    ("ic_connectY", arrow(G, G)),
    ("ic_connectXY", arrow(G, G)),
    # list creation
    ("ic_splitcols", arrow(G, LG)),
    ("ic_splitall", arrow(G, LG)),
    ("split8", arrow(G, LG)),
    ("ic_splitcolumns", arrow(G, LG)),
    ("ic_splitrows", arrow(G, LG)),
    # list reduction
    ("pickcommon", arrow(LG, G)),
    ("ic_pickunique", arrow(LG, G)),
    ("pickmax_count", arrow(LG, G)),
    ("pickmax_neg_count", arrow(LG, G)),
    ("pickmax_size", arrow(LG, G)),
    ("pickmax_neg_size", arrow(LG, G)),
    ("pickmax_cols", arrow(LG, G)),
    ("pickmax_interior_count", arrow(LG, G)),
    ("pickmax_neg_interior_count", arrow(LG, G)),
    ("pickmax_x_pos", arrow(LG, G)),
    ("pickmax_x_neg", arrow(LG, G)),
    ("pickmax_y_pos", arrow(LG, G)),
    ("pickmax_y_neg", arrow(LG, G)),
    # list processing
    ("mklist", arrow(G, G, LG)),
    ("lcons", arrow(G, LG, LG)),
    # composition
    ("ic_composegrowing", arrow(LG, G)),
    ("overlay", arrow(G, G, G)),
    ("logical_and", arrow(G, G, G)),
    # higher-order
    ("mapSplit8", arrow(ArrowType(G, G), G, G)),
    # gravity
    ("gravity_down", arrow(G, G)),
    ("gravity_up", arrow(G, G)),
    ("gravity_left", arrow(G, G)),
    ("gravity_right", arrow(G, G)),
]


def default_library() -> Library:
    """The full built-in registry: 73 operations plus colour constants c1..c9."""
    prims = [Primitive(name, t, getattr(P, name)) for name, t in _SPEC]
    prims.extend(_colour_constant(c) for c in range(1, 10))
    return Library(prims)


def invent(lib: Library, body: Program, pearl_type: PearlType) -> tuple[Library, Primitive]:
    """Append an invented primitive wrapping a closed lambda body."""
    n = sum(1 for p in lib.primitives if p.is_invented)
    name = f"fn_{n}"
    prim = Primitive(name, pearl_type, None, body=body)
    return lib.extended([prim]), prim
