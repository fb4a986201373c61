import pytest
from toricdef.chain import Chain
from toricdef.deform import GeneratorSet
from toricdef.errors import BudgetExceeded, DenominatorCollision, PointNotOnVariety
from toricdef.fields import FiniteField
from toricdef.literals import parse_series
from toricdef.oracle import enumerate_points, from_polys, jacobian_corank, smooth_scan, specialize_ideal
from toricdef.scalars import DvrSpec

from helpers import normalized

Q3 = DvrSpec("equal-char-0", 3)
F3, F5 = FiniteField(3), FiniteField(5)
CONE = {(1, 0, 1): 1, (0, 2, 0): -1}


def hyper(h):
    return GeneratorSet.from_tails(Chain((2,)), {(1, 3): parse_series(h, 3, Q3)}, Q3)


def test_specialize_examples():
    S = specialize_ideal(hyper("0"), F5, 1)
    assert sorted(S.polys[0], key=lambda t: t[1]) == [(4, (0, 2, 0)), (1, (1, 0, 1))]
    S = specialize_ideal(hyper("x2"), F5, 2)
    assert sorted(S.polys[0], key=lambda t: t[1]) == [(2, (0, 1, 0)), (4, (0, 2, 0)), (1, (1, 0, 1))]
    with pytest.raises(DenominatorCollision):
        specialize_ideal(hyper("1/5*x2"), F5, 1)


def test_enumerate_examples():
    # x1 x3 = x2^2 over F_3: x2 = 0 gives 5 pairs, x2 = +-1 gives 2 each
    S = from_polys(F3, [CONE], 3)
    brute = [(a, b, c) for a in range(3) for b in range(3) for c in range(3) if (a * c - b * b) % 3 == 0]
    assert enumerate_points(S) == brute and len(brute) == 9
    assert len(enumerate_points(from_polys(F5, [], 1))) == 5
    assert enumerate_points(from_polys(F5, [{(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1}], 3)) == [(0, 0, 0)]


def test_enumerate_over_extension():
    S = from_polys(F3, [CONE], 3)
    pts = enumerate_points(S, m=2)
    F9 = FiniteField(3, 2)
    brute = [(a, b, c) for a in F9.elements() for b in F9.elements() for c in F9.elements()
             if F9.sub(F9.mul(a, c), F9.mul(b, b)) == 0]
    assert pts == sorted(brute)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_points(from_polys(F5, [CONE], 3), budget=10)


def test_corank_examples():
    assert jacobian_corank(from_polys(F5, [CONE], 3), (0, 0, 0)) == 3
    smoothed = dict(CONE)
    smoothed[(0, 1, 0)] = 1
    assert jacobian_corank(from_polys(F5, [smoothed], 3), (0, 0, 0)) == 2
    assert jacobian_corank(from_polys(F5, [{(1,): 1}], 1), (0,)) == 0
    with pytest.raises(PointNotOnVariety):
        jacobian_corank(from_polys(F5, [CONE], 3), (1, 1, 0))


def test_scan_examples():
    assert smooth_scan(specialize_ideal(hyper("x2"), F5, 1)) == []
    assert smooth_scan(specialize_ideal(hyper("0"), F5, 1)) == [((0, 0, 0), 3)]
    D = normalized((4,), {2: "x2^2"}, Q3)
    # only the origin: at x2 = +-1 the x2-derivative 4x2^3 - 2x2 is nonzero
    assert smooth_scan(specialize_ideal(D.generators, F5, 1)) == [((0, 0, 0), 3)]


def test_rational_coefficients_specialize():
    S = specialize_ideal(hyper("1/2*x2"), F5, 1)
    assert (3, (0, 1, 0)) in S.polys[0]
