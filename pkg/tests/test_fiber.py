import pytest

from toricdef.errors import PointNotOnFiber
from toricdef.fiber import PointSpec, analyze_point, b_chain, fiber_polynomial, root_multiplicity, semicontinuity_report
from toricdef.fields import FiniteField
from toricdef.scalars import DvrSpec

from helpers import normalized

Q3 = DvrSpec("equal-char-0", 3)
F5 = FiniteField(5)


def test_b_chain_examples():
    assert b_chain(normalized((3, 2), {}, Q3)) == (3, 2)
    assert b_chain(normalized((4,), {2: "x2^2"}, Q3)) == (2,)
    assert b_chain(normalized((2,), {2: "x2"}, Q3)) == (1,)


def test_trivial_origin_keeps_the_singularity():
    D = normalized((2, 2), {}, Q3)
    r = analyze_point(D, PointSpec(F5, 1, (0, 0, 0, 0)))
    assert r.singular
    assert r.window == (2, 3) and r.b == (2, 2) and r.reduced == (2, 2)
    assert (r.e_prime, r.n_prime, r.n) == (4, 3, 3)
    assert r.semicontinuity_ok == (True, True, True)


def test_a1_smoothing_at_origin():
    D = normalized((2,), {2: "x2"}, Q3)
    r = analyze_point(D, PointSpec(F5, 1, (0, 0, 0)))
    assert not r.singular and r.b == (1,)


def test_a3_partial_smoothing_at_origin():
    D = normalized((4,), {2: "x2^2"}, Q3)
    r = analyze_point(D, PointSpec(F5, 1, (0, 0, 0)))
    assert r.singular and r.reduced == (2,)
    assert (r.e_prime, r.n_prime, r.n) == (3, 2, 4)
    assert all(r.semicontinuity_ok)


def test_away_from_origin_is_smooth():
    D = normalized((4,), {2: "x2^2"}, Q3)
    # x2^2 = 1, x1 = x3 = 0 lies on the fiber x1x3 = x2^4 - x2^2
    r = analyze_point(D, PointSpec(F5, 1, (0, 1, 0)))
    assert not r.singular


def test_point_off_fiber():
    D = normalized((2,), {}, Q3)
    with pytest.raises(PointNotOnFiber):
        analyze_point(D, PointSpec(F5, 1, (1, 1, 0)))


def test_root_multiplicity():
    F = FiniteField(7)
    # (x - 2)^2 (x + 1) = x^3 - 3x^2 + 4
    coeffs = [4, 0, F.from_int(-3), 1]
    assert root_multiplicity(coeffs, 2, F) == 2
    assert root_multiplicity(coeffs, 6, F) == 1
    assert root_multiplicity(coeffs, 0, F) == 0


def test_fiber_polynomial_reads_the_normal_form():
    D = normalized((4,), {2: "x2^2"}, Q3)
    # x^4 - tau * x^2 at tau = 3
    assert fiber_polynomial(D, 2, F5, 3) == [0, 0, F5.from_int(-3), 0, 1]


def test_semicontinuity_summary():
    D = normalized((2, 2), {}, Q3)
    reports = [analyze_point(D, PointSpec(F5, 1, (0, 0, 0, 0))),
               analyze_point(D, PointSpec(F5, 1, (1, 1, 1, 1)))]
    s = semicontinuity_report(D, reports)
    assert s.ok and s.total == 2 and s.singular == 1


def test_wild_flag():
    D = normalized((3, 2), {}, Q3)
    assert analyze_point(D, PointSpec(F5, 1, (0, 0, 0, 0))).wild
    assert not analyze_point(D, PointSpec(FiniteField(7), 1, (0, 0, 0, 0))).wild
