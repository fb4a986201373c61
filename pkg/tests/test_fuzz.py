import random

from toricdef.chain import Chain
from toricdef.deform import syzygy_residuals
from toricdef.fuzz import apply_automorphism, exact_family, fuzz_case, max_t_degree, random_flat, random_series
from toricdef.scalars import DvrSpec
from toricdef.shift import check_far_form


def _flat(G):
    return all(f.value.is_zero() for _, f in syzygy_residuals(G))


def test_random_flat_is_flat_and_deterministic(spec):
    a = random_flat(Chain((3, 2)), spec, random.Random(11))
    b = random_flat(Chain((3, 2)), spec, random.Random(11))
    assert _flat(a) and a.g == b.g


def test_automorphisms_preserve_flatness(spec):
    rng = random.Random(5)
    G = random_flat(Chain((2, 3)), spec, rng)
    for l in range(1, G.e + 1):
        H = apply_automorphism(G, l, random_series(G.e, spec, rng, 2, 1))
        assert _flat(H)
        for pair in G.g:
            assert H.g[pair].truncate(1) == G.g[pair].truncate(1)


def test_fuzz_case_is_reproducible():
    spec = DvrSpec("equal-char-0", 3)
    assert fuzz_case(4, spec).generators.g == fuzz_case(4, spec).generators.g


def test_exact_family_is_polynomial(spec):
    rng = random.Random(2)
    h, D, obstructed, nonexact = exact_family(Chain((3, 2)), spec, rng)
    assert D is not None and check_far_form(D)
    assert max_t_degree(D.generators) <= spec.N - 2
