"""Program terms: de Bruijn lambda calculus over named primitives.

Textual syntax is `λ. <expr>` with `$n` variables ($0 = innermost binder),
juxtaposition for application (left-associative) and parentheses for
grouping.  `lambda.` is accepted as an ASCII spelling of `λ.`.
"""

from __future__ import annotations

import re
from typing import Callable, Iterator, Union


class Var:
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __eq__(self, other):
        return type(other) is Var and other.index == self.index

    def __hash__(self):
        return hash(("$", self.index))

    def __repr__(self):
        return f"Var({self.index})"


class PrimitiveRef:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return type(other) is PrimitiveRef and other.name == self.name

    def __hash__(self):
        return hash(("prim", self.name))

    def __repr__(self):
        return f"PrimitiveRef({self.name!r})"


class Lambda:
    __slots__ = ("body",)

    def __init__(self, body: "Program"):
        self.body = body

    def __eq__(self, other):
        return type(other) is Lambda and other.body == self.body

    def __hash__(self):
        return hash(("lam", self.body))

    def __repr__(self):
        return f"Lambda({self.body!r})"


class Apply:
    __slots__ = ("fn", "arg")

    def __init__(self, fn: "Program", arg: "Program"):
        self.fn = fn
        self.arg = arg

    def __eq__(self, other):
        return type(other) is Apply and other.fn == self.fn and other.arg == self.arg

    def __hash__(self):
        return hash(("app", self.fn, self.arg))

    def __repr__(self):
        return f"Apply({self.fn!r}, {self.arg!r})"


Program = Union[Var, PrimitiveRef, Lambda, Apply]

IDENTITY = Lambda(Var(0))


class ProgramSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


def apply_chain(p: Program) -> tuple[Program, list[Program]]:
    """Unroll left-nested applications: (f a b) -> (f, [a, b])."""
    args: list[Program] = []
    while isinstance(p, Apply):
        args.append(p.arg)
        p = p.fn
    args.reverse()
    return p, args


def pretty_print(p: Program) -> str:
    def atom(q: Program) -> str:
        text = expr(q)
        if isinstance(q, (Apply, Lambda)):
            return f"({text})"
        return text

    def expr(q: Program) -> str:
        if isinstance(q, Var):
            return f"${q.index}"
        if isinstance(q, PrimitiveRef):
            return q.name
        if isinstance(q, Lambda):
            return f"λ. {expr(q.body)}"
        head, args = apply_chain(q)
        return " ".join([atom(head)] + [atom(a) for a in args])

    return expr(p)


_TOKEN = re.compile(r"λ|lambda|\$\d+|[A-Za-z_][A-Za-z0-9_]*|[().]")


def parse_program(text: str, known_names: "set[str] | None" = None) -> Program:
    """Parse program text; if known_names is given, reject other identifiers."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    for m in _TOKEN.finditer(text):
        between = text[pos:m.start()]
        if between.strip():
            raise ProgramSyntaxError(f"unexpected {between.strip()!r}", pos + 1)
        tokens.append((m.group(), m.start() + 1))
        pos = m.end()
    if text[pos:].strip():
        raise ProgramSyntaxError(f"unexpected {text[pos:].strip()!r}", pos + 1)
    if not tokens:
        raise ProgramSyntaxError("empty program", 1)

    i = 0

    def peek() -> str | None:
        return tokens[i][0] if i < len(tokens) else None

    def column() -> int:
        return tokens[i][1] if i < len(tokens) else len(text) + 1

    def parse_expr() -> Program:
        nonlocal i
        if peek() in ("λ", "lambda"):
            i += 1
            if peek() != ".":
                raise ProgramSyntaxError("expected '.' after λ", column())
            i += 1
            return Lambda(parse_expr())
        parts: list[Program] = []
        while True:
            tok = peek()
            if tok is None or tok in (")", "."):
                break
            if tok == "(":
                nonlocal_i = column()
                i += 1
                inner = parse_expr()
                if peek() != ")":
                    raise ProgramSyntaxError("missing ')'", nonlocal_i)
                i += 1
                parts.append(inner)
            elif tok.startswith("$"):
                parts.append(Var(int(tok[1:])))
                i += 1
            elif tok in ("λ", "lambda"):
                # a bare lambda can only appear parenthesised inside applications
                if parts:
                    raise ProgramSyntaxError("lambda must be parenthesised here", column())
                return parse_expr()
            else:
                if known_names is not None and tok not in known_names:
                    raise ProgramSyntaxError(f"unknown primitive {tok!r}", column())
                parts.append(PrimitiveRef(tok))
                i += 1
        if not parts:
            raise ProgramSyntaxError("expected an expression", column())
        node = parts[0]
        for arg in parts[1:]:
            node = Apply(node, arg)
        return node

    result = parse_expr()
    if i != len(tokens):
        raise ProgramSyntaxError(f"trailing tokens starting at {peek()!r}", column())
    return result


# --------------------------------------------------------------------------
# Structural helpers shared by search and compression


def subtrees(p: Program) -> Iterator[Program]:
    """All subterms of p, including p itself (preorder)."""
    stack = [p]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Apply):
            stack.append(node.arg)
            stack.append(node.fn)
        elif isinstance(node, Lambda):
            stack.append(node.body)


def program_size(p: Program) -> int:
    """Total number of nodes."""
    return sum(1 for _ in subtrees(p))


def primitive_count(p: Program) -> int:
    return sum(1 for n in subtrees(p) if isinstance(n, PrimitiveRef))


def primitive_depth(p: Program) -> int:
    """Longest chain of primitive applications from the root to a leaf.

    λ. rot90 $0 has depth 1; λ. rot90 (flipx $0) has depth 2; λ. $0 is 0.
    """
    if isinstance(p, Lambda):
        return primitive_depth(p.body)
    if isinstance(p, (Var, PrimitiveRef)):
        return 0
    head, args = apply_chain(p)
    inner = max((primitive_depth(a) for a in args), default=0)
    return inner + (1 if isinstance(head, PrimitiveRef) else 0)


def free_vars(p: Program, depth: int = 0) -> set[int]:
    """Free de Bruijn indices, expressed relative to the root of p."""
    if isinstance(p, Var):
        return {p.index - depth} if p.index >= depth else set()
    if isinstance(p, PrimitiveRef):
        return set()
    if isinstance(p, Lambda):
        return free_vars(p.body, depth + 1)
    return free_vars(p.fn, depth) | free_vars(p.arg, depth)


def shift(p: Program, amount: int, cutoff: int = 0) -> Program:
    """Add `amount` to every free variable index at or above `cutoff`."""
    if isinstance(p, Var):
        return Var(p.index + amount) if p.index >= cutoff else p
    if isinstance(p, PrimitiveRef):
        return p
    if isinstance(p, Lambda):
        return Lambda(shift(p.body, amount, cutoff + 1))
    return Apply(shift(p.fn, amount, cutoff), shift(p.arg, amount, cutoff))


def structural_key(p: Program, index_of: Callable[[str], int]) -> tuple:
    """Deterministic ordering key: library index for primitives, then structure."""
    if isinstance(p, Var):
        return (0, p.index)
    if isinstance(p, PrimitiveRef):
        return (1, index_of(p.name))
    if isinstance(p, Lambda):
        return (2, structural_key(p.body, index_of))
    return (3, structural_key(p.fn, index_of), structural_key(p.arg, index_of))
