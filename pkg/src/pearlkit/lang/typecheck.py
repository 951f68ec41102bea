"""Type inference for program terms.

All primitive types are concrete, so inference only has to thread equality
constraints through applications and resolve lambda-binder placeholders.
An unconstrained binder defaults to grid (so `λ. $0` types as grid -> grid).
"""

from __future__ import annotations

from .errors import PearlTypeError
from .library import Library
from .program import Apply, Lambda, PrimitiveRef, Program, Var
from .types import GRID, ArrowType, BaseType, ListType, PearlType


class _TV:
    """Mutable placeholder for a lambda binder's type."""

    __slots__ = ("ref",)

    def __init__(self):
        self.ref = None


def _resolve(t):
    while isinstance(t, _TV) and t.ref is not None:
        t = t.ref
    return t


def _occurs(tv: "_TV", t) -> bool:
    t = _resolve(t)
    if t is tv:
        return True
    if isinstance(t, ArrowType):
        return _occurs(tv, t.arg) or _occurs(tv, t.result)
    if isinstance(t, ListType):
        return _occurs(tv, t.elem)
    return False


def _bind(tv: "_TV", t, path: str) -> None:
    if _occurs(tv, t):
        raise PearlTypeError(f"infinite type (binder occurs in {_format(t)})", path)
    tv.ref = t


def _unify(a, b, path: str) -> None:
    a, b = _resolve(a), _resolve(b)
    if a is b:
        return
    if isinstance(a, _TV):
        _bind(a, b, path)
        return
    if isinstance(b, _TV):
        _bind(b, a, path)
        return
    if isinstance(a, BaseType) and isinstance(b, BaseType) and a.name == b.name:
        return
    if isinstance(a, ListType) and isinstance(b, ListType):
        _unify(a.elem, b.elem, path)
        return
    if isinstance(a, ArrowType) and isinstance(b, ArrowType):
        _unify(a.arg, b.arg, path)
        _unify(a.result, b.result, path)
        return
    raise PearlTypeError(f"type mismatch: {_format(a)} vs {_format(b)}", path)


def _format(t) -> str:
    t = _resolve(t)
    if isinstance(t, _TV):
        return "?"
    if isinstance(t, ArrowType):
        return f"{_format(t.arg)} -> {_format(t.result)}"
    if isinstance(t, ListType):
        return f"list({_format(t.elem)})"
    return t.name


def _default(t) -> PearlType:
    """Replace any still-unresolved placeholder with grid."""
    t = _resolve(t)
    if isinstance(t, _TV):
        return GRID
    if isinstance(t, ArrowType):
        return ArrowType(_default(t.arg), _default(t.result))
    if isinstance(t, ListType):
        return ListType(_default(t.elem))
    return t


def _infer(node: Program, env: list, lib: Library, path: str):
    if isinstance(node, Var):
        if node.index >= len(env):
            raise PearlTypeError(f"unbound variable ${node.index}", path)
        return env[node.index]
    if isinstance(node, PrimitiveRef):
        prim = lib.by_name.get(node.name)
        if prim is None:
            raise PearlTypeError(f"unknown primitive {node.name!r}", path)
        return prim.type
    if isinstance(node, Lambda):
        tv = _TV()
        body = _infer(node.body, [tv] + env, lib, f"{path}.body")
        return ArrowType(tv, body)
    ft = _resolve(_infer(node.fn, env, lib, f"{path}.fn"))
    at = _infer(node.arg, env, lib, f"{path}.arg")
    if isinstance(ft, _TV):
        result = _TV()
        _bind(ft, ArrowType(at, result), path)
        return result
    if not isinstance(ft, ArrowType):
        raise PearlTypeError(f"applied a non-function of type {_format(ft)}", path)
    _unify(ft.arg, at, f"{path}.arg")
    return ft.result


def typecheck(program: Program, lib: Library,
              goal: PearlType | None = None) -> PearlType:
    """Infer the program's type; unify with `goal` when provided."""
    t = _infer(program, [], lib, "root")
    if goal is not None:
        _unify(t, goal, "root")
    return _default(t)
