from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from midshift.scalar import sqrt
from midshift.shift_model import bergman
from midshift.spec_lang import (BinOp, Call, Int, Measure, Neg, ParseError, Sqrt, Var, Weights,
                                build_shift, eval_expr, format_expr, format_spec, parse_number,
                                parse_shift_spec)

CORPUS = [
    "bergman", "dirichlet", "geom2", "unweighted", "agler(2)", "agler(7)", "constant(1/2)",
    "constant(sqrt(2)/2)", "agler_family(5/2)", "agler_family(73/10)", "agler_preimage(3)",
    "stampfli(1/2, sqrt(1/2), 1)", "at(bergman)", "at(at(agler(3)))", "atq(1/3, bergman)",
    "atq(0, geom2)", "atinv(bergman)", "atinv(1/2, agler(4))", "atiter(3, bergman)",
    "quotient(1, bergman)", "quotient(3, agler(5))", "subshift(2, 1, agler(3))",
    "subshift(3, 0, geom2)", "schur(agler(2), agler(3))", "schur(bergman, at(bergman))",
    "power(1/2, bergman)", "power(2, geom2)", "scale(2, dirichlet)", "backstep(1/3, bergman)",
    "normalize(dirichlet)", "reciprocal(dirichlet)", "weights: sqrt((n + 1)/(n + 2))",
    "weights: 1", "weights: n + 1", "weights: (n + 1)/(n + 3)", "weights: 2^(-1) + n/(n + 2)",
    "weights: -(-1)", "weights: sqrt(n + 1)/sqrt(n + 2)", "weights: (n + 1)^2/(n + 2)^2",
    "weights: 1 - 1/(n + 2)^2", "weights: 1/2 - (1/4 - n/(4*n + 8))",
    "atoms[(1, 1/2)] + density[uniform(1/2)]", "atoms[(0, 1/2), (1/2, 1/2)]",
    "density[uniform(1)]", "density[agler_family(3)]", "density[agler_family(5/2, 1)]",
    "atoms[(1/3, 1/4)] + density[agler_family(4, 3/4)]",
    "at(quotient(1, bergman))", "schur(subshift(2, 1, agler(3)), backstep(1/2, geom2))",
    "normalize(scale(3/2, atq(1/4, agler_family(7/2))))",
]


def test_corpus_size():
    assert len(CORPUS) == 50 and len(set(CORPUS)) == 50


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    ast = parse_shift_spec(text)
    printed = format_spec(ast)
    assert parse_shift_spec(printed) == ast
    assert format_spec(parse_shift_spec(printed)) == printed


@pytest.mark.parametrize("text", CORPUS)
def test_corpus_builds(text):
    s = build_shift(parse_shift_spec(text))
    assert s.weight_squared(0) > 0 and s.weight_squared(5) > 0


def test_ast_shapes():
    assert parse_shift_spec("at(bergman)") == Call("at", (), (Call("bergman", (), ()),))
    assert parse_shift_spec("weights: n") == Weights(Var())
    m = parse_shift_spec("atoms[(1, 1/2)] + density[uniform(1/2)]")
    assert isinstance(m, Measure) and m.density.kind == "uniform"


def test_weights_spec_is_bergman():
    s = build_shift(parse_shift_spec("weights: sqrt((n+1)/(n+2))"))
    for n in range(20):
        assert s.weight_squared(n) == bergman().weight_squared(n)


def test_whitespace_insensitive():
    assert parse_shift_spec("quotient( 1 ,bergman )") == parse_shift_spec("quotient(1, bergman)")


@pytest.mark.parametrize("text,pos,expected", [
    ("agler(1)", 6, None),
    ("agler(5/2)", 6, None),
    ("atq(3/2, bergman)", 4, None),
    ("at(bergman", 10, ")"),
    ("bergmann", 0, None),
    ("agler(2, 3)", None, None),
    ("schur(bergman)", None, None),
    ("weights:", 8, None),
    ("weights: n +", 12, None),
    ("at(bergman) extra", 12, "end of input"),
    ("constant(0)", 9, None),
    ("constant(n)", None, None),
])
def test_parse_errors(text, pos, expected):
    with pytest.raises(ParseError) as info:
        parse_shift_spec(text)
    err = info.value
    if pos is not None:
        assert err.position == pos
    if expected is not None:
        assert expected in err.expected
    assert err.caret().splitlines()[0] == text


def test_measure_ranges_checked_on_build():
    from midshift.scalar import DomainError
    ast = parse_shift_spec("atoms[(2, 1)]")
    with pytest.raises(DomainError):
        build_shift(ast)


def test_parse_number():
    assert parse_number("1/3") == F(1, 3)
    assert parse_number("sqrt(1/2)") == sqrt(F(1, 2))
    assert parse_number("2^(1/2)") == sqrt(F(2))
    assert parse_number("-3 + 1/2") == F(-5, 2)
    with pytest.raises(ParseError):
        parse_number("1/0")
    with pytest.raises(ParseError):
        parse_number("n")


def test_eval_expr_exact():
    e = parse_shift_spec("weights: sqrt(n + 1)/sqrt(n + 2)").expr
    assert eval_expr(e, 0) == sqrt(F(1, 2))
    assert eval_expr(e, 2) == sqrt(F(3, 4))


# random expression trees

leaves = st.one_of(st.integers(0, 20).map(Int), st.just(Var()))


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Sqrt, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
    )


exprs = st.recursive(leaves, _extend, max_leaves=12)


@given(exprs)
def test_expression_round_trip(e):
    text = format_expr(e)
    back = parse_shift_spec(f"weights: {text}").expr
    assert back == e or format_expr(back) == text
    assert format_expr(back) == text


@given(exprs)
def test_printed_expression_evaluates_identically(e):
    back = parse_shift_spec(f"weights: {format_expr(e)}").expr
    for n in (0, 3):
        try:
            want = eval_expr(e, n)
        except Exception as exc:  # domain errors must reproduce too
            with pytest.raises(type(exc)):
                eval_expr(back, n)
            continue
        assert eval_expr(back, n) == want
