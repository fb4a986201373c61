import pytest

from toricdef.errors import ParseError
from toricdef.literals import format_chain, parse_chain, parse_scalar, parse_series
from toricdef.scalars import DvrSpec, Scalar

Q3 = DvrSpec("equal-char-0", 3)


def test_scalar_literals():
    assert parse_scalar("3/2*t^2 + 1", Q3) == Scalar.from_coeffs(Q3, [1, 0, "3/2"])
    Z = DvrSpec("mixed-char", 2, 5)
    assert parse_scalar("-2", Z).lift() == -2


def test_series_literal_with_grouped_coefficient():
    a = parse_series("(1 + t)*x1*x3^2 - x2", 3, Q3)
    assert a.coefficient((1, 0, 2)) == Scalar.from_coeffs(Q3, [1, 1])
    assert a.coefficient((0, 1, 0)) == Scalar.from_int(Q3, -1)


def test_variable_out_of_range():
    with pytest.raises(ParseError):
        parse_series("x4", 3, Q3)


def test_chain_literals():
    assert parse_chain("[3,2]") == (3, 2)
    assert parse_chain([]) == ()
    assert format_chain((3, 2)) == "[3,2]"
    with pytest.raises(ParseError):
        parse_chain("[2,")
    with pytest.raises(ParseError):
        parse_chain('["a"]')
