from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from capgames.rational import (INF, NEG_INF, common_denominator, format_rational,
                               parse_rational, parse_table)


@pytest.mark.parametrize("text, value", [
    ("3/4", Fraction(3, 4)), ("-0.8", Fraction(-4, 5)), ("2", Fraction(2)),
    (0.2, Fraction(1, 5)), (7, Fraction(7)), (" 1/3 ", Fraction(1, 3)),
])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "abc", True, None, [1]])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, TypeError)):
        parse_rational(bad)


@given(st.fractions())
def test_format_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@given(st.fractions())
def test_infinity_orders(q):
    assert NEG_INF < q < INF
    assert -INF == NEG_INF
    assert INF + q == INF


def test_helpers():
    assert parse_table(["1/2", 1]) == (Fraction(1, 2), Fraction(1))
    assert common_denominator([Fraction(1, 4), Fraction(5, 6), Fraction(2)]) == 12
    assert format_rational(INF) == str(INF)
