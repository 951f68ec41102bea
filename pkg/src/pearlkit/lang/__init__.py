from .types import (
    ARROWS,
    COLOUR,
    COUNT,
    GRID,
    POS,
    SIZE,
    ArrowType,
    BaseType,
    ListType,
    PearlType,
    arrow,
    list_of,
    parse_type,
)
from .program import (
    Apply,
    Lambda,
    PrimitiveRef,
    Program,
    ProgramSyntaxError,
    Var,
    parse_program,
    pretty_print,
    program_size,
    subtrees,
)
from .library import Library, Primitive, default_library, library_fingerprint
from .errors import (
    DimensionOverflow,
    EvalError,
    PearlTypeError,
    PrimitiveFailure,
    ResourceExceeded,
)
from .evaluate import EvalLimits, evaluate, compile_program
from .typecheck import typecheck

__all__ = [
    "ARROWS", "COLOUR", "COUNT", "GRID", "POS", "SIZE",
    "ArrowType", "BaseType", "ListType", "PearlType", "arrow", "list_of", "parse_type",
    "Apply", "Lambda", "PrimitiveRef", "Program", "ProgramSyntaxError", "Var",
    "parse_program", "pretty_print", "program_size", "subtrees",
    "Library", "Primitive", "default_library", "library_fingerprint",
    "DimensionOverflow", "EvalError", "PearlTypeError", "PrimitiveFailure",
    "ResourceExceeded",
    "EvalLimits", "evaluate", "compile_program", "typecheck",
]
