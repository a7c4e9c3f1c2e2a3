from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curvesing.coeff import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    gr,
    gr_arith,
    gr_conj,
    gr_nth_root,
    gr_root_of_unity_order,
    parse_coeff,
    render_coeff,
)
from curvesing.errors import DivisionByZero, NoRootInField, ParseError

small = st.fractions(min_value=-50, max_value=50, max_denominator=30)
gaussians = st.builds(GaussianRational, small, small)
nonzero = gaussians.filter(bool)


def test_arith_examples():
    assert gr_arith(gr("1+i"), gr("1-i"), "mul") == 2
    a = gr("3/4-5/7i")
    assert gr_arith(a, a, "div") == ONE
    assert gr_arith(gr("19/18"), gr("-1/18"), "add") == ONE
    assert gr_arith(gr("1/2"), gr("1/3"), "sub") == gr("1/6")


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        gr_arith(ONE, ZERO, "div")
    with pytest.raises(ZeroDivisionError):
        ONE / 0


def test_canonical_form():
    a = GaussianRational(Fraction(6, -4), Fraction(10, 20))
    assert a.re == Fraction(-3, 2) and a.re.denominator == 2
    assert a.im == Fraction(1, 2)
    assert hash(GaussianRational(2)) == hash(gr("4/2"))


def test_conj_examples():
    assert gr_conj(gr("1+i")) == gr("1-i")
    assert gr_conj(gr("3/2")) == gr("3/2")
    a = gr("-2/3+7i")
    assert gr_conj(gr_conj(a)) == a


def test_nth_root_examples():
    assert gr_nth_root(GaussianRational(4), 2) == 2
    assert gr_nth_root(-ONE, 2) == I
    with pytest.raises(NoRootInField):
        gr_nth_root(GaussianRational(2), 2)
    assert gr_nth_root(gr("2i"), 2) == gr("1+i")
    assert gr_nth_root(gr("-8/27"), 3) ** 3 == gr("-8/27")
    with pytest.raises(NoRootInField):
        gr_nth_root(gr("1+i"), 2)


def test_root_of_unity_examples():
    assert gr_root_of_unity_order(ONE) == 1
    assert gr_root_of_unity_order(-ONE) == 2
    assert gr_root_of_unity_order(-I) == 4
    assert gr_root_of_unity_order(I) == 4
    assert gr_root_of_unity_order(gr("1+i")) is None
    assert gr_root_of_unity_order(gr("3/5+4/5i")) is None


def test_literal_grammar():
    cases = {
        "19/18": GaussianRational(Fraction(19, 18)),
        "1/2+1/3i": GaussianRational(Fraction(1, 2), Fraction(1, 3)),
        "-i": -I,
        "i": I,
        "-3i": GaussianRational(0, -3),
        "2-i": GaussianRational(2, -1),
        "-5/4": GaussianRational(Fraction(-5, 4)),
    }
    for text, value in cases.items():
        assert parse_coeff(text) == value
        assert parse_coeff(render_coeff(value)) == value
    for bad in ("1//2", "", "1.5", "i2", "1+i+i", "2/0", "--1", "1 /2"):
        with pytest.raises(ParseError):
            parse_coeff(bad)


def test_floats_rejected():
    with pytest.raises(TypeError):
        gr(0.5)
    with pytest.raises(TypeError):
        gr(1j)


@given(gaussians)
def test_render_round_trip(a):
    assert parse_coeff(render_coeff(a)) == a


@given(gaussians, gaussians)
def test_conj_is_ring_automorphism(a, b):
    for op in ("add", "sub", "mul"):
        assert gr_conj(gr_arith(a, b, op)) == gr_arith(gr_conj(a), gr_conj(b), op)


@given(gaussians, nonzero)
def test_conj_respects_division(a, b):
    assert gr_conj(a / b) == gr_conj(a) / gr_conj(b)


@given(nonzero, st.integers(min_value=1, max_value=5))
def test_nth_root_of_power(x, n):
    a = x ** n
    r = gr_nth_root(a, n)
    assert r ** n == a


@given(nonzero, st.integers(min_value=2, max_value=4))
def test_nth_root_correct_when_found(a, n):
    try:
        r = gr_nth_root(a, n)
    except NoRootInField:
        return
    assert r ** n == a


@given(nonzero)
def test_root_of_unity_order_is_exact(a):
    k = gr_root_of_unity_order(a)
    if k is None:
        assert all(a ** j != ONE for j in (1, 2, 4))
        return
    assert a ** k == ONE
    assert all(a ** j != ONE for j in range(1, k))
