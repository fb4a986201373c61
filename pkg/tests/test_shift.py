import dataclasses
import random

import pytest

from toricdef.chain import Chain
from toricdef.deform import GeneratorSet, complete_to_flat, syzygy_residuals
from toricdef.fuzz import fuzz_case
from toricdef.literals import parse_series
from toricdef.scalars import DvrSpec
from toricdef.shift import LEFT, RIGHT, check_far_form, full_sweep, normalize, shift_at

Q3 = DvrSpec("equal-char-0", 3)


def S(text, e, spec=Q3):
    return parse_series(text, e, spec)


def test_shift_cancels_x1_multiple():
    G = GeneratorSet.from_tails(Chain((3,)), {(1, 3): S("x1*x2", 3)}, Q3)
    out = shift_at(G, 2, RIGHT)
    assert out.g[(1, 3)] == S("x1*x3 - x2^3", 3)


def test_shift_leaves_quasi_constant_tail():
    G = GeneratorSet.from_tails(Chain((2,)), {(1, 3): S("x2", 3)}, Q3)
    assert shift_at(G, 2, RIGHT).g == G.g


def test_zero_deformation_is_fixed():
    G = complete_to_flat(Chain((2, 3, 2)), {}, Q3)
    for i in range(2, G.e):
        for d in (RIGHT, LEFT):
            assert shift_at(G, i, d).g == G.g
    assert full_sweep(G).g == G.g


def test_hypersurface_sweep_is_single_shift():
    G = GeneratorSet.from_tails(Chain((3,)), {(1, 3): S("x1*x2 + x3", 3)}, Q3)
    assert full_sweep(G, RIGHT).g == shift_at(G, 2, RIGHT).g
    assert full_sweep(G, LEFT).g == shift_at(G, 2, LEFT).g


def test_audit_predicts_neighbour_correction():
    G = complete_to_flat(Chain((2, 2)), {2: S("x1*x2", 4)}, Q3)
    audit = []
    full_sweep(G, RIGHT, audit)
    first = audit[0]
    assert first.i == 2 and first.order == 1
    assert first.moved == S("t*x2", 4)
    (n,) = first.neighbours
    assert n["pair"] == [2, 4] and n["predicted"] == "2*t*x2*x3" and n["matches"]


def test_shuttle_term_is_not_moved():
    G = complete_to_flat(Chain((2, 2)), {2: S("x1", 4), 3: S("-x3", 4)}, Q3)
    audit = []
    full_sweep(G, RIGHT, audit)
    assert audit[0].moved.is_zero()


def test_normalize_examples():
    D = normalize(complete_to_flat(Chain((2, 2)), {}, Q3))
    assert D.passes == 1
    assert all(v.is_zero() for v in D.c.values()) and all(v.is_zero() for v in D.h.values())
    D = normalize(GeneratorSet.from_tails(Chain((3,)), {(1, 3): S("x1*x2", 3)}, Q3))
    assert D.c[2].is_zero() and D.h[2].is_zero()
    D = normalize(GeneratorSet.from_tails(Chain((2,)), {(1, 3): S("x2", 3)}, Q3))
    assert D.c[2].is_zero() and D.h[2] == S("1", 3)


def test_far_form_trivial_and_negative_control():
    D = normalize(complete_to_flat(Chain((2, 2, 2)), {}, Q3))
    assert check_far_form(D)
    G = D.generators
    bad = dict(G.g)
    bad[(1, 4)] = bad[(1, 4)] + S("t*x1^2", 5)
    D2 = dataclasses.replace(D, generators=GeneratorSet(G.chain, bad, G.spec))
    rep = check_far_form(D2)
    assert not rep
    assert rep.violations[0]["pair"] == [1, 4]
    assert "x1^2" in rep.violations[0]["term"]


def _shape_holds(D):
    G = D.generators
    for i in range(2, G.e):
        pair = (i - 1, i + 1)
        expect = (G.template(pair) + S(f"t*x{i-1}", G.e, G.spec).scale(D.c[i])
                  + D.h[i].mul_monomial(tuple(1 if k == i - 1 else 0 for k in range(G.e))).shift_t(1)
                  + S("t", G.e, G.spec).scale(D.d[i]))
        assert G.compact(G.g[pair] - expect).value.is_zero()


@pytest.mark.parametrize("seed", range(6))
def test_normalize_on_fuzzed_families(spec, seed):
    case = fuzz_case(seed, spec, max_entry=3, max_e=4)
    D = normalize(case.generators)
    assert D.passes <= spec.N + 1
    assert check_far_form(D)
    _shape_holds(D)
    # special fiber untouched
    for pair, g in D.generators.g.items():
        assert g.truncate(1) == D.generators.template(pair).truncate(1)
    # idempotent
    again = normalize(D.generators)
    assert again.generators.g == D.generators.g
    assert all(f.value.is_zero() for _, f in syzygy_residuals(D.generators))
