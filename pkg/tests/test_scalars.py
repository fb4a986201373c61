import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from toricdef.errors import DenominatorCollision, NotAUnit, SpecMismatch
from toricdef.fields import FiniteField, QQ
from toricdef.scalars import DvrSpec, Scalar

Q4 = DvrSpec("equal-char-0", 4)
Z5 = DvrSpec("mixed-char", 3, 5)


def test_valuation_examples():
    assert Scalar.from_residue(Q4, mpq(3, 2), 2).valuation() == 2
    assert Scalar.from_int(Z5, 50).valuation() == 2
    for s in (Q4, Z5, DvrSpec("equal-char-p", 2, 7)):
        assert s.zero().valuation() == s.N + 1


def test_specialize_examples():
    F5 = FiniteField(5)
    s = Scalar.from_coeffs(Q4, [1, 1])
    assert s.specialize_t(F5, 2) == 3
    assert Q4.zero().specialize_t(F5, 2) == 0
    P7 = DvrSpec("equal-char-p", 3, 7)
    assert Scalar.from_residue(P7, 3, 2).specialize_t(FiniteField(7), 1) == 3


def test_invert_unit_examples():
    Q2 = DvrSpec("equal-char-0", 2)
    inv = Scalar.from_coeffs(Q2, [1, -1]).invert_unit()
    assert inv == Scalar.from_coeffs(Q2, [1, 1, 1])
    assert Q2.one().invert_unit() == Q2.one()
    Z25 = DvrSpec("mixed-char", 1, 5)
    assert Scalar.from_int(Z25, 2).invert_unit() == Scalar.from_int(Z25, 13)


def test_non_unit_and_mismatch():
    with pytest.raises(NotAUnit):
        Q4.t().invert_unit()
    with pytest.raises(SpecMismatch):
        Q4.one() + DvrSpec("equal-char-0", 3).one()


def test_denominator_collision():
    s = Scalar.from_residue(Q4, mpq(1, 5))
    with pytest.raises(DenominatorCollision):
        s.specialize_t(FiniteField(5), 1)
    assert s.specialize_t(FiniteField(7), 1) == 3


def test_mixed_specialization_uses_symmetric_lift():
    F7 = FiniteField(7)
    s = Scalar.from_int(Z5, -2)
    assert s.lift() == -2
    assert s.specialize_t(F7, 5) == 5
    with pytest.raises(ValueError):
        s.specialize_t(F7, 3)


def test_divide_t_keeps_small_negatives():
    s = Scalar.from_int(Z5, -10)
    assert s.divide_t(1).lift() == -2
    q = Scalar.from_coeffs(Q4, [0, 2, 3])
    assert q.divide_t(1) == Scalar.from_coeffs(Q4, [2, 3])


def test_truncation():
    s = Scalar.from_coeffs(Q4, [1, 2, 3, 4, 5])
    assert s.truncate(2) == Scalar.from_coeffs(Q4, [1, 2])
    assert (s * Q4.t()).valuation() == 1


scalars = st.lists(st.integers(-20, 20), min_size=1, max_size=5)


@given(scalars, scalars)
def test_ring_laws(a, b):
    for spec in (Q4, DvrSpec("equal-char-p", 4, 5), DvrSpec("mixed-char", 4, 5)):
        x, y = Scalar.from_coeffs(spec, a), Scalar.from_coeffs(spec, b)
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) * x == x * x + y * x
        assert x - x == spec.zero()


@given(scalars)
def test_unit_inverse_roundtrip(a):
    for spec in (Q4, DvrSpec("equal-char-p", 4, 5), DvrSpec("mixed-char", 4, 5)):
        x = Scalar.from_coeffs(spec, a)
        if x.is_unit():
            assert x * x.invert_unit() == spec.one()
        else:
            assert x.valuation() >= 1


@given(scalars, st.integers(1, 4))
def test_specialize_is_a_homomorphism(a, tau):
    F = FiniteField(7)
    x = Scalar.from_coeffs(Q4, a)
    y = Scalar.from_coeffs(Q4, list(reversed(a)))
    # products of degree <= N in t only: truncate first
    x, y = x.truncate(2), y.truncate(2)
    assert (x * y).specialize_t(F, tau) == F.mul(x.specialize_t(F, tau), y.specialize_t(F, tau))
    assert (x + y).specialize_t(F, tau) == F.add(x.specialize_t(F, tau), y.specialize_t(F, tau))


def test_rational_field_basics():
    assert QQ.char == 0
    assert QQ.mul(mpq(1, 2), mpq(2)) == QQ.one
