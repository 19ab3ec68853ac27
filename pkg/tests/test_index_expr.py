from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from pointfree.errors import UnboundIndexVariable
from pointfree.index_expr import (
    BinOp,
    Call,
    Const,
    Neg,
    Var,
    as_number,
    cantor_unpair,
    format_number,
    gaussian_tail_quantile,
    rational_enum,
)
from pointfree.cli.language import parse_index


def test_exact_arithmetic():
    n = Var("n")
    e = BinOp("**", Const(Fraction(2)), Neg(n))
    assert e.evaluate({"n": 3}) == Fraction(1, 8)
    assert BinOp("/", Const(Fraction(1)), n).evaluate({"n": 3}) == Fraction(1, 3)
    with pytest.raises(UnboundIndexVariable):
        e.evaluate({})


def test_substitute_partial_and_closed():
    e = BinOp("+", Var("n"), Var("m"))
    part = e.substitute({"n": 1})
    assert part.free_vars() == {"m"}
    assert part.substitute({"m": 2}) == 3


@pytest.mark.parametrize("n", [1, 2, 5, 10, 30])
def test_gaussian_quantile_against_mpmath(n):
    c = gaussian_tail_quantile(n)
    mpmath.mp.dps = 30
    tail = 0.5 * mpmath.erfc(mpmath.mpf(c) / mpmath.sqrt(2))
    assert abs(float(tail) - 2.0**-n) <= 1e-12 * 2.0**-n * 100


def test_cantor_unpair_is_a_bijection_on_a_prefix():
    pairs = [cantor_unpair(k) for k in range(200)]
    assert len(set(pairs)) == 200
    for k, (i, j) in enumerate(pairs):
        assert (i + j) * (i + j + 1) // 2 + j == k


def test_rational_enumeration_hits_every_small_rational():
    seen = {rational_enum(n) for n in range(200)}
    for d in range(1, 10):
        for p in range(d + 1):
            assert Fraction(p, d) in seen


def test_number_formatting():
    assert format_number(Fraction(5, 4)) == "1.25"
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(float("inf")) == "inf"
    assert as_number("0.1") == Fraction(1, 10)
    with pytest.raises(ValueError):
        as_number(float("nan"))


_leaf = st.one_of(st.integers(0, 9).map(lambda k: Const(Fraction(k))), st.just(Var("n")))
_expr = st.recursive(
    _leaf,
    lambda sub: st.one_of(
        st.builds(BinOp, st.sampled_from(["+", "-", "*"]), sub, sub),
        st.builds(Neg, sub),
        st.builds(lambda a: Call("abs", (a,)), sub),
    ),
    max_leaves=8,
)


@given(_expr)
def test_printer_round_trip(e):
    again = parse_index(str(e), ["n"])
    assert again.evaluate({"n": 3}) == e.evaluate({"n": 3})
    assert str(parse_index(str(again), ["n"])) == str(again)
