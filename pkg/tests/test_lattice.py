import itertools

import pytest

from toricdef.chain import Chain, generators
from toricdef.errors import NotInCone
from toricdef.lattice import build


def test_weights():
    assert build(Chain((2,))).w == ((1, 0), (1, 1), (1, 2))
    assert build(Chain((2, 2))).w == ((1, 0), (1, 1), (1, 2), (1, 3))
    assert build(Chain((3,))).w == ((1, 0), (1, 1), (2, 3))


@pytest.mark.parametrize("a", [(2,), (3, 2), (2, 5, 3), (4, 4, 2, 3)])
def test_recurrence_and_generators_are_homogeneous(a):
    c = Chain(a)
    L = build(c)
    for i in range(2, c.e):
        w0, w1, w2 = L.w[i - 2], L.w[i - 1], L.w[i]
        assert (w0[0] + w2[0], w0[1] + w2[1]) == (c[i] * w1[0], c[i] * w1[1])
    for g in generators(c).values():
        assert len({L.mu(m) for m in g.body.terms}) == 1


def test_cone_membership():
    L = build(Chain((2,)))
    assert L.cone_contains((1, 1))
    assert not L.cone_contains((0, 1))
    assert L.cone_contains((0, 0))


def test_quasi_divisibility():
    L = build(Chain((2,)))
    assert L.quasi_divisible((0, 2, 0), 1)
    assert not L.quasi_divisible((0, 1, 0), 1)
    for l in (1, 2, 3):
        m = [0, 0, 0]
        m[l - 1] = 1
        assert L.quasi_divisible(tuple(m), l)


def test_canonical_monomial_examples():
    L = build(Chain((2,)))
    assert L.canonical_monomial((2, 2)) == (0, 2, 0)
    assert L.canonical_monomial((2, 0)) == (2, 0, 0)
    assert build(Chain((2, 2))).canonical_monomial((2, 3)) == (0, 1, 1, 0)
    with pytest.raises(NotInCone):
        L.canonical_monomial((0, 1))


@pytest.mark.parametrize("a", [(2,), (3,), (3, 2), (2, 4, 2)])
def test_canonical_monomial_inverts_mu(a):
    L = build(Chain(a))
    for x, y in itertools.product(range(12), repeat=2):
        if L.cone_contains((x, y)):
            m = L.canonical_monomial((x, y))
            assert L.mu(m) == (x, y)
            assert sum(1 for v in m if v) <= 2
