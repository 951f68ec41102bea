"""Language layer: terms, parsing, typechecking, evaluation."""

import numpy as np
import pytest

from pearlkit.grids import Grid
from pearlkit.lang.errors import (
    EvalError,
    PearlTypeError,
    PrimitiveFailure,
    ResourceExceeded,
)
from pearlkit.lang.evaluate import (
    DEFAULT_LIMITS,
    EvalLimits,
    compile_program,
    evaluate,
)
from pearlkit.lang.library import Library, Primitive, default_library, invent, library_fingerprint
from pearlkit.lang.program import (
    Apply,
    IDENTITY,
    Lambda,
    PrimitiveRef,
    ProgramSyntaxError,
    Var,
    free_vars,
    parse_program,
    pretty_print,
    primitive_count,
    primitive_depth,
    program_size,
    shift,
    structural_key,
    subtrees,
)
from pearlkit.lang.typecheck import typecheck
from pearlkit.lang.types import (
    COLOUR,
    GRID,
    arrow,
    format_type,
    list_of,
    parse_type,
)


# --------------------------------------------------------------------------
# Terms and syntax


def test_structural_equality():
    a = Lambda(Apply(PrimitiveRef("rot90"), Var(0)))
    b = Lambda(Apply(PrimitiveRef("rot90"), Var(0)))
    assert a == b and hash(a) == hash(b)
    assert a != Lambda(Apply(PrimitiveRef("flipx"), Var(0)))
    assert IDENTITY == Lambda(Var(0))


PARSE_CASES = [
    "λ. $0",
    "λ. rot90 $0",
    "λ. rot90 (flipx $0)",
    "λ. overlay $0 (rot180 $0)",
    "λ. mapSplit8 (λ. setcol c3 $0) $1",
    "λ. ic_filtercol (topcol $0) $0",
    "λ. λ. overlay $1 $0",
]


def test_parse_pretty_round_trip():
    for text in PARSE_CASES:
        p = parse_program(text)
        assert pretty_print(p) == text
        assert parse_program(pretty_print(p)) == p


def test_parse_lambda_keyword_and_spacing():
    assert parse_program("lambda. rot90 $0") == parse_program("λ. rot90 $0")
    assert parse_program("λ.rot90   $0") == parse_program("λ. rot90 $0")


def test_parse_errors():
    with pytest.raises(ProgramSyntaxError):
        parse_program("")
    with pytest.raises(ProgramSyntaxError):
        parse_program("λ. (rot90 $0")
    with pytest.raises(ProgramSyntaxError):
        parse_program("λ. rot90 $0)")
    with pytest.raises(ProgramSyntaxError):
        parse_program("λ rot90 $0")  # missing dot
    with pytest.raises(ProgramSyntaxError):
        parse_program("λ. rot90 @0")
    with pytest.raises(ProgramSyntaxError) as e:
        parse_program("λ. nosuch $0", known_names={"rot90"})
    assert "nosuch" in str(e.value)
    # the same text parses when names are not being checked
    parse_program("λ. nosuch $0")


def test_structural_helpers():
    p = parse_program("λ. overlay (rot90 $0) $0")
    # Lambda, two Applys for the overlay chain, one for rot90, two prims, two vars
    assert program_size(p) == 8
    assert primitive_count(p) == 2
    assert primitive_depth(p) == 2
    assert primitive_depth(parse_program("λ. $0")) == 0
    subs = list(subtrees(p))
    assert p in subs and Var(0) in subs
    assert len(subs) == 8


def test_free_vars_and_shift():
    body = Apply(PrimitiveRef("rot90"), Var(1))
    assert free_vars(Lambda(body)) == {0}
    assert free_vars(body) == {1}
    shifted = shift(body, 2)
    assert shifted == Apply(PrimitiveRef("rot90"), Var(3))
    assert shift(Lambda(Var(0)), 5) == Lambda(Var(0))  # bound vars stay put
    assert shift(Lambda(Var(1)), 1, cutoff=0) == Lambda(Var(2))


def test_structural_key_orders_by_library_index():
    lib = default_library()
    key = lambda p: structural_key(p, lambda n: lib.index[n])
    a = parse_program("λ. rot90 $0")
    b = parse_program("λ. flipx $0")
    assert (key(a) < key(b)) == (lib.index["rot90"] < lib.index["flipx"])


# --------------------------------------------------------------------------
# Types


def test_type_formatting_and_parsing():
    t = arrow(GRID, COLOUR, GRID)
    assert format_type(t) == "grid -> colour -> grid"
    assert parse_type("grid -> colour -> grid") == t
    assert parse_type("(grid -> grid) -> list(grid) -> grid") == arrow(
        arrow(GRID, GRID), list_of(GRID), GRID
    )
    assert parse_type("list(list(grid))") == list_of(list_of(GRID))
    with pytest.raises(ValueError):
        parse_type("grid ->")
    with pytest.raises(ValueError):
        parse_type("gridd")


def test_arrow_right_associativity():
    assert arrow(GRID, GRID, GRID) == arrow(GRID, arrow(GRID, GRID))


# --------------------------------------------------------------------------
# Typechecking (demo library built through the public API)


def test_typecheck_demo_library(demo_lib):
    p = parse_program("λ. filterCol $0 (topCol $0)")
    assert typecheck(p, demo_lib) == arrow(GRID, GRID)
    assert typecheck(parse_program("topCol"), demo_lib) == arrow(GRID, COLOUR)


def test_typecheck_rejects_misapplication(demo_lib):
    # colour where a grid is expected
    bad = parse_program("λ. filterCol (topCol $0) $0")
    with pytest.raises(PearlTypeError):
        typecheck(bad, demo_lib)
    with pytest.raises(PearlTypeError):
        typecheck(parse_program("λ. $1"), demo_lib)  # unbound variable
    with pytest.raises(PearlTypeError):
        typecheck(parse_program("λ. $0 $0"), demo_lib)  # grid applied as fn


def test_typecheck_goal_and_defaulting(default_lib):
    p = parse_program("λ. rot90 $0")
    assert typecheck(p, default_lib, goal=arrow(GRID, GRID)) == arrow(GRID, GRID)
    with pytest.raises(PearlTypeError):
        typecheck(p, default_lib, goal=arrow(GRID, COLOUR))
    # an unconstrained binder defaults to grid
    assert typecheck(IDENTITY, default_lib) == arrow(GRID, GRID)


def test_typecheck_unknown_primitive(default_lib):
    with pytest.raises(PearlTypeError):
        typecheck(parse_program("λ. mystery $0"), default_lib)


# --------------------------------------------------------------------------
# Evaluation


def test_evaluate_simple(default_lib):
    g = Grid([[1, 2], [3, 4]])
    out = evaluate(parse_program("λ. rot180 $0"), g, default_lib)
    assert out == Grid([[4, 3], [2, 1]])
    assert evaluate(IDENTITY, g, default_lib) == g


def test_evaluate_demo_pipeline(demo_lib):
    g = Grid([[1, 1, 2], [1, 0, 2]])
    p = parse_program("λ. filterCol $0 (topCol $0)")
    assert evaluate(p, g, demo_lib) == Grid([[1, 1, 0], [1, 0, 0]])


def test_evaluate_colour_constants(default_lib):
    g = Grid([[1, 2], [3, 0]])
    out = evaluate(parse_program("λ. setcol c5 $0"), g, default_lib)
    assert out == Grid([[5, 5], [5, 0]])


def test_evaluate_higher_order(default_lib):
    g = Grid([[2, 0, 0, 3]])
    p = parse_program("λ. mapSplit8 (λ. setcol c1 $0) $0")
    assert evaluate(p, g, default_lib) == Grid([[1, 0, 0, 1]])


def test_evaluate_propagates_failures(default_lib):
    with pytest.raises(PrimitiveFailure):
        evaluate(parse_program("λ. topcol $0"), Grid([[0]]), default_lib)


def test_step_limit(default_lib):
    g = Grid([[1]])
    deep = "λ. " + "rot90 (" * 60 + "$0" + ")" * 60
    p = parse_program(deep)
    with pytest.raises(ResourceExceeded):
        evaluate(p, g, default_lib, EvalLimits(max_steps=20, wall_ms=None))
    # same program passes with room to run
    assert evaluate(p, g, default_lib, EvalLimits(max_steps=10_000, wall_ms=None)) == g


def test_list_length_limit(default_lib):
    # 13 isolated dots on a 5x5 checkerboard
    g = Grid((np.indices((5, 5)).sum(0) % 2 == 0).astype(np.int8) * 3)
    p = parse_program("λ. pickmax_count (ic_splitall $0)")
    assert evaluate(p, g, default_lib) == Grid([[3]])
    with pytest.raises(ResourceExceeded):
        evaluate(p, g, default_lib, EvalLimits(max_list_len=3, wall_ms=None))


def test_wall_clock_limit(default_lib):
    g = Grid(np.ones((10, 10), dtype=np.int8))
    chain = "λ. " + "gravity_down (" * 40 + "$0" + ")" * 40
    p = parse_program(chain)
    with pytest.raises(ResourceExceeded):
        evaluate(p, g, default_lib, EvalLimits(wall_ms=0.0001))
    # wall_ms=None disables the clock entirely
    evaluate(p, g, default_lib, EvalLimits(wall_ms=None))


def test_compiled_reuse(default_lib):
    cp = compile_program(parse_program("λ. flipx $0"), default_lib)
    a, b = Grid([[1, 2]]), Grid([[3, 4, 5]])
    assert cp.run(a) == Grid([[2, 1]])
    assert cp.run(b) == Grid([[5, 4, 3]])


def test_default_limits_pinned():
    assert DEFAULT_LIMITS.max_steps == 10_000
    assert DEFAULT_LIMITS.max_list_len == 256
    assert DEFAULT_LIMITS.wall_ms == 50.0


# --------------------------------------------------------------------------
# Library and invention


def test_default_library_shape(default_lib):
    assert len(default_lib) == 82
    assert "rot90" in default_lib and "gravity_down" in default_lib
    assert all(f"c{i}" in default_lib for i in range(1, 10))
    assert default_lib["rot90"].arity == 1
    assert default_lib["overlay"].arity == 2
    names = default_lib.names()
    assert len(set(names)) == 82


def test_library_fingerprint_stable(default_lib):
    fp = library_fingerprint(default_lib)
    assert fp == library_fingerprint(default_library())
    assert fp == "2c1704e368d7db0d"
    bigger = default_lib.extended(
        [Primitive("zz", arrow(GRID, GRID), lambda g: g)]
    )
    assert library_fingerprint(bigger) != fp


def test_duplicate_names_rejected(default_lib):
    with pytest.raises(ValueError):
        default_lib.extended([Primitive("rot90", arrow(GRID, GRID), lambda g: g)])


def test_invent_and_evaluate(default_lib):
    body = parse_program("λ. rot90 (flipx $0)")
    lib2, prim = invent(default_lib, body, arrow(GRID, GRID))
    assert prim.name == "fn_0" and prim.is_invented
    assert len(lib2) == 83 and "fn_0" not in default_lib
    g = Grid([[1, 2], [3, 4]])
    direct = evaluate(body, g, default_lib)
    via_prim = evaluate(parse_program("λ. fn_0 $0"), g, lib2)
    assert direct == via_prim
    # a second invention keeps counting
    lib3, prim2 = invent(lib2, parse_program("λ. rot180 $0"), arrow(GRID, GRID))
    assert prim2.name == "fn_1"
