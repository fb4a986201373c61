import pytest
from hypothesis import given, settings, strategies as st

from toricdef.errors import DegreeCapExceeded
from toricdef.fields import FiniteField
from toricdef.literals import parse_series
from toricdef.scalars import DvrSpec
from toricdef.series import Series, format_series, invert_substitution

Q4 = DvrSpec("equal-char-0", 4)


def S(text, e=3, spec=Q4):
    return parse_series(text, e, spec)


def test_multiply_examples():
    assert S("x1 + t", 1) * S("x1 - t", 1) == S("x1^2 - t^2", 1)
    assert (S("x1 + x2") * Series.zero(3, Q4)).is_zero()
    Q1 = DvrSpec("equal-char-0", 1)
    assert S("1 + t*x2", 3, Q1) * S("1 + t*x2", 3, Q1) == S("1 + 2*t*x2", 3, Q1)


def test_substitute_examples():
    a = S("x1*x3 - x2^3 + t*x1*x2")
    assert a.substitute(3, S("x3 - t*x2")) == S("x1*x3 - x2^3")
    assert a.substitute(2, S("x2")) == a
    c = S("x2^2").substitute(2, S("x2 + 3*t"))
    assert c == S("x2^2 + 6*t*x2 + 9*t^2")


def test_invert_substitution_examples():
    assert invert_substitution(1, S("t*x2")) == S("x1 - t*x2")
    assert invert_substitution(1, Series.zero(3, Q4)) == S("x1")
    Q2 = DvrSpec("equal-char-0", 2)
    assert invert_substitution(3, S("t*x3", 3, Q2)) == S("x3 - t*x3 + t^2*x3", 3, Q2)


def test_evaluate_examples():
    F5, F7 = FiniteField(5), FiniteField(7)
    a = S("x1*x3 - x2^2")
    assert a.evaluate((0, 0, 0), F5, 1) == 0
    assert a.evaluate((1, 2, 4), F7, 1) == 0
    assert S("t*x2").evaluate((0, 3, 0), F5, 2) == 1


def test_degree_cap_is_an_error():
    a = S("x1^3").with_cap(4)
    with pytest.raises(DegreeCapExceeded):
        a * a


def test_min_t_degree_and_truncate():
    a = S("t^2*x1 + t^3*x2")
    assert a.min_t_degree() == 2
    assert a.truncate(3) == S("t^2*x1")
    assert a.divide_t(2) == S("x1 + t*x2")


def test_format_roundtrip_mixed():
    Z = DvrSpec("mixed-char", 3, 5)
    a = S("-7*x1*x3 + 10*x2 + 3", 3, Z)
    assert S(format_series(a), 3, Z) == a


monos = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
coeffs = st.lists(st.integers(-3, 3), min_size=1, max_size=3)
series = st.dictionaries(monos, coeffs, max_size=4)


def build(d):
    from toricdef.scalars import Scalar
    return Series(3, Q4, {m: Scalar.from_coeffs(Q4, c) for m, c in d.items()})


@settings(max_examples=60)
@given(series, series, series)
def test_ring_laws(a, b, c):
    a, b, c = build(a), build(b), build(c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@settings(max_examples=60)
@given(series, st.integers(1, 3))
def test_format_parse_roundtrip(a, e):
    a = build(a)
    assert parse_series(format_series(a), 3, Q4) == a


@settings(max_examples=40)
@given(series, st.integers(1, 3))
def test_invert_substitution_roundtrip(shift, l):
    # shifts of t-order >= 1 are invertible
    s = build(shift).shift_t(1)
    r = invert_substitution(l, s)
    xl = Series.var(3, Q4, l)
    assert (xl + s).substitute(l, r).truncate(Q4.N + 1) == xl
