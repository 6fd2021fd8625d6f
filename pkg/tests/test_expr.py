import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnnd.errors import ExprSyntaxError, UnknownIdentifier
from cnnd.expr import (
    Add,
    Call,
    Div,
    Mul,
    Neg,
    Num,
    Pow,
    Sub,
    Var,
    as_polynomial,
    eval_curve_jet,
    eval_float,
    eval_jet,
    integrate_curve,
    parse,
    parse_curve,
    polynomial_source,
    substitute,
    to_source,
)
from cnnd.surface import SurfaceDef


def test_parse_shapes():
    assert parse("cos(x)") == Call("cos", Var("x"))
    assert parse("(x+y)^2 / 2") == Div(Pow(Add(Var("x"), Var("y")), 2), Num(2.0))
    assert parse("-x^2") == Neg(Pow(Var("x"), 2))
    assert parse("x - y - 1") == Sub(Sub(Var("x"), Var("y")), Num(1.0))
    assert parse("x^(-2)") == Pow(Var("x"), -2)


def test_syntax_error_offset_and_expected():
    with pytest.raises(ExprSyntaxError) as info:
        parse("x + * y")
    assert info.value.offset == 4
    assert "number" in info.value.expected


@pytest.mark.parametrize("src", ["x ^ 1.5", "sin x", "(x", "x y", "2 $ 3", ""])
def test_malformed_sources(src):
    with pytest.raises(ExprSyntaxError):
        parse(src)


def test_unknown_identifiers():
    with pytest.raises(UnknownIdentifier) as info:
        parse("x + z")
    assert info.value.name == "z" and info.value.offset == 4
    with pytest.raises(UnknownIdentifier):
        parse_curve("x")
    with pytest.raises(UnknownIdentifier):
        parse("tan(x)")


def test_eval_jet_examples():
    j = eval_jet(parse("(x+y)^2/2"), 1.0, 0.0)
    assert (j.v, j.dx, j.dy, j.dxx, j.dxy, j.dyy) == (0.5, 1.0, 1.0, 1.0, 1.0, 1.0)
    j = eval_jet(parse("x"), 0.3, -2.0)
    assert (j.v, j.dx, j.dy, j.dxx) == (0.3, 1.0, 0.0, 0.0)
    j = eval_jet(parse("sinh(y)"), 0.0, 0.0)
    assert (j.v, j.dy, j.dyy) == (0.0, 1.0, 0.0)
    assert eval_float(parse("pi * e"), x=0, y=0) == math.pi * math.e


# random ASTs over a small alphabet
leaves = st.one_of(st.sampled_from([Var("x"), Var("y")]), st.integers(0, 9).map(lambda k: Num(float(k))))


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from([Add, Sub, Mul, Div]), children, children).map(lambda t: t[0](t[1], t[2])),
        children.map(Neg),
        st.tuples(children, st.integers(-3, 4)).map(lambda t: Pow(t[0], t[1])),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(lambda t: Call(*t)),
    )


asts = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=100, deadline=None)
@given(asts)
def test_print_parse_round_trip(e):
    once = parse(to_source(e))
    assert parse(to_source(once)) == once


@settings(max_examples=100, deadline=None)
@given(asts, st.floats(0.1, 2.0), st.floats(0.1, 2.0))
def test_jet_value_channel_matches_plain_evaluation(e, x, y):
    try:
        plain = eval_float(e, x=x, y=y)
    except (ZeroDivisionError, OverflowError, ValueError):
        return
    try:
        jet = eval_jet(e, x, y).v
    except (ZeroDivisionError, OverflowError, ValueError):
        return
    if math.isfinite(plain) and abs(plain) < 1e8:
        assert jet == pytest.approx(plain, rel=1e-12, abs=1e-12)


def test_polynomials_and_quadrature():
    c = parse_curve("3*t^2 - 2*t + 1")
    p = as_polynomial(c)
    assert list(p.coef) == [1.0, -2.0, 3.0]
    src = polynomial_source(p.integ(), "t")
    assert eval_float(parse_curve(src), t=2.0) == pytest.approx(8.0 - 4.0 + 2.0)
    assert as_polynomial(parse_curve("sin(t)")) is None
    assert integrate_curve(parse_curve("cos(t)"), 2.5) == pytest.approx(math.sin(2.5), abs=1e-14)
    j = eval_curve_jet(parse_curve("t^3"), 2.0)
    assert (j.v, j.dx, j.dxx) == (8.0, 12.0, 12.0)


def test_substitute_curve_into_surface():
    e = substitute(parse_curve("t^2"), {"t": parse("x + y")})
    assert eval_float(e, x=1.0, y=2.0) == 9.0


def test_surface_def_validation():
    with pytest.raises(ValueError):
        SurfaceDef.from_sources(["y", "x", "0", "0"], kind="graph")
    with pytest.raises(ValueError):
        SurfaceDef.from_sources(["x", "y", "0", "0"], Z=[0, 0, 0, 1])  # timelike
    with pytest.raises(ValueError):
        SurfaceDef.from_sources(["x", "y", "0"])
    s = SurfaceDef.from_sources(["x", "y", "x*y", "0"], kind="graph")
    assert s.sources() == ("x", "y", "x * y", "0.0")
    assert list(s.point(2.0, 3.0)) == [2.0, 3.0, 6.0, 0.0]
