"""The language's type universe.

Base types: grid, colour, size, pos, count.  Compound types: list(T) and
arrow types T1 -> T2.  Every primitive's type is fully concrete, so type
checking needs equality (plus defaulting for unconstrained lambda binders),
never full unification over polymorphic schemes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# Types sit on search hot paths (context-table keys, variable matching), so
# each instance caches its hash at construction and equality short-circuits
# on identity before falling back to structure.


@dataclass(frozen=True, eq=False)
class BaseType:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("t", self.name)))

    def __eq__(self, other):
        return self is other or (
            type(other) is BaseType and other.name == self.name
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class ListType:
    elem: "PearlType"

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("l", self.elem)))

    def __eq__(self, other):
        return self is other or (
            type(other) is ListType and other.elem == self.elem
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"list({self.elem!r})"


@dataclass(frozen=True, eq=False)
class ArrowType:
    arg: "PearlType"
    result: "PearlType"

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("a", self.arg, self.result)))

    def __eq__(self, other):
        return self is other or (
            type(other) is ArrowType
            and other.arg == self.arg
            and other.result == self.result
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        left = f"({self.arg!r})" if isinstance(self.arg, ArrowType) else f"{self.arg!r}"
        return f"{left} -> {self.result!r}"


PearlType = Union[BaseType, ListType, ArrowType]

GRID = BaseType("grid")
COLOUR = BaseType("colour")
SIZE = BaseType("size")
POS = BaseType("pos")
COUNT = BaseType("count")

BASE_TYPES = {t.name: t for t in (GRID, COLOUR, SIZE, POS, COUNT)}


# Interning lets most equality checks resolve by identity.
_arrow_cache: dict[tuple, ArrowType] = {}
_list_cache: dict[PearlType, ListType] = {}


def arrow(*types: PearlType) -> PearlType:
    """Right-associative arrow constructor: arrow(a, b, c) = a -> (b -> c)."""
    if not types:
        raise ValueError("arrow needs at least one type")
    result = types[-1]
    for t in reversed(types[:-1]):
        key = (t, result)
        cached = _arrow_cache.get(key)
        if cached is None:
            cached = _arrow_cache[key] = ArrowType(t, result)
        result = cached
    return result


def list_of(t: PearlType) -> ListType:
    cached = _list_cache.get(t)
    if cached is None:
        cached = _list_cache[t] = ListType(t)
    return cached


ARROWS = ArrowType  # convenience alias for isinstance checks


def argument_types(t: PearlType) -> tuple[list[PearlType], PearlType]:
    """Split a (possibly nested) arrow type into ([arg types], return type)."""
    args: list[PearlType] = []
    while isinstance(t, ArrowType):
        args.append(t.arg)
        t = t.result
    return args, t


def format_type(t: PearlType) -> str:
    return repr(t)


def parse_type(text: str) -> PearlType:
    """Parse "grid -> grid", "list(grid)", "(grid -> grid) -> grid -> grid"."""
    tokens = (
        text.replace("(", " ( ").replace(")", " ) ").replace("->", " -> ").split()
    )
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def parse_arrow() -> PearlType:
        nonlocal pos
        left = parse_atom()
        if peek() == "->":
            pos += 1
            return ArrowType(left, parse_arrow())
        return left

    def parse_atom() -> PearlType:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ValueError(f"unexpected end of type in {text!r}")
        if tok == "(":
            pos += 1
            inner = parse_arrow()
            if peek() != ")":
                raise ValueError(f"missing ')' in type {text!r}")
            pos += 1
            return inner
        if tok == "list":
            pos += 1
            if peek() != "(":
                raise ValueError(f"list type needs parentheses in {text!r}")
            pos += 1
            inner = parse_arrow()
            if peek() != ")":
                raise ValueError(f"missing ')' in type {text!r}")
            pos += 1
            return ListType(inner)
        if tok in BASE_TYPES:
            pos += 1
            return BASE_TYPES[tok]
        raise ValueError(f"unknown type token {tok!r} in {text!r}")

    result = parse_arrow()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in type {text!r}")
    return result
