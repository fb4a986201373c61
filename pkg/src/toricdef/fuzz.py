"""Random flat deformations for property tests and the fuzz harness.

A family is grown one t-order at a time: the linearised relation conditions
are solved with random values for the free variables, over a box of small
lattice weights.  Random coordinate changes x_l -> x_l + t*r are then applied
exactly, so the result is flat but far from any normal form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .chain import Chain, generator_pairs
from .deform import GeneratorSet, Obstruction, OrderSolver, syzygy_residuals
from .scalars import DvrSpec, Scalar
from .series import Series
from .shift import _relift


@dataclass
class FuzzCase:
    chain: Chain
    spec: DvrSpec
    generators: GeneratorSet
    seed: int

    def consecutive_h(self) -> dict[int, Series]:
        return {i: self.generators.h((i - 1, i + 1)) for i in range(2, self.chain.e)}


def _picker(field_, rng: random.Random, density: float, max_degree: int):
    def pick(pair, mono):
        if sum(mono) > max_degree or rng.random() > density:
            return field_.zero
        if field_.is_finite():
            return rng.randrange(field_.q)
        v = 0
        while v == 0:
            v = rng.randint(-2, 2)
        return mpq(v)
    return pick


def weight_box(G: GeneratorSet, max_degree: int) -> list[tuple[int, int]]:
    """Weights of corrections x^m to consecutive generators with deg m <= max_degree."""
    L = G.lattice
    monos = {(0,) * G.e}
    for k in range(G.e):
        for a in range(max_degree + 1):
            for b in range(max_degree + 1 - a):
                m = [0] * G.e
                m[k] += a
                if k + 1 < G.e:
                    m[k + 1] += b
                monos.add(tuple(m))
    out = set()
    for i in range(1, G.e - 1):
        wi, wj = L.w[i - 1], L.w[i + 1]
        for m in monos:
            z = L.mu(m)
            out.add((z[0] - wi[0] - wj[0], z[1] - wi[1] - wj[1]))
    return sorted(out)


def random_flat(chain: Chain, spec: DvrSpec, rng: random.Random, max_degree: int = 2,
                density: float = 0.3, attempts: int = 20) -> GeneratorSet:
    """A random flat generator set.

    Random first-order data is often obstructed further up; each retry thins
    out the random choices, so the search ends at the trivial family at worst.
    """
    chain.require_reduced()
    base = GeneratorSet.trivial(chain, spec)
    field_ = spec.residue_field()
    box = weight_box(base, max_degree)
    for attempt in range(attempts):
        dens = density * 0.75**attempt if attempt < attempts - 1 else 0.0
        solver = OrderSolver(base, generator_pairs(chain.e), pick=_picker(field_, rng, dens, max_degree),
                             extra_weights=box)
        G = base
        for order in range(1, spec.N + 1):
            G = solver.settle(G, order, randomize=True)
            if isinstance(G, Obstruction):
                break
        if isinstance(G, GeneratorSet) and all(f.value.is_zero() for _, f in syzygy_residuals(G)):
            return G
    raise RuntimeError(f"no flat family found for {chain} after {attempts} attempts")


def random_series(e: int, spec: DvrSpec, rng: random.Random, n_terms: int = 2,
                  max_degree: int = 2, min_order: int = 1) -> Series:
    terms = {}
    for _ in range(n_terms):
        m = [0] * e
        for _ in range(rng.randint(0, max_degree)):
            m[rng.randrange(e)] += 1
        k = rng.randint(min_order, max(min_order, spec.N))
        terms[tuple(m)] = Scalar.from_residue(spec, rng.randint(1, 4), k)
    return Series(e, spec, terms)


def apply_automorphism(G: GeneratorSet, l: int, shift: Series) -> GeneratorSet:
    """Substitute x_l <- x_l + shift (shift of t-order >= 1) and re-lift."""
    r = Series.var(G.e, G.spec, l) + shift
    gens = {p: g.substitute(l, r).truncate(G.spec.N + 1) for p, g in G.g.items()}
    return _relift(G, gens)


def scramble(G: GeneratorSet, rng: random.Random, n: int = 2, max_degree: int = 1) -> GeneratorSet:
    for _ in range(n):
        l = rng.randint(1, G.e)
        G = apply_automorphism(G, l, random_series(G.e, G.spec, rng, 2, max_degree))
    return G


def random_chain(rng: random.Random, max_entry: int = 4, max_e: int = 5, min_e: int = 3) -> Chain:
    e = rng.randint(min_e, max_e)
    return Chain(tuple(rng.randint(2, max_entry) for _ in range(e - 2)))


def fuzz_case(seed: int, spec: DvrSpec, max_entry: int = 4, max_e: int = 5,
              chain: Chain | None = None) -> FuzzCase:
    rng = random.Random(seed)
    c = chain if chain is not None else random_chain(rng, max_entry, max_e)
    G = random_flat(c, spec, rng)
    G = scramble(G, rng)
    return FuzzCase(c, spec, G, seed)


# --- exact families in normal form ------------------------------------------------

def random_shape(chain: Chain, spec: DvrSpec, rng: random.Random, t_degree: int = 1,
                 with_c: bool | None = None, with_d: bool | None = None) -> dict[int, Series]:
    """Random consecutive tails t*(c x_{i-1} + x_i h_i(x_i) + d), as h_{i-1,i+1}."""
    e = chain.e
    with_c = rng.random() < 0.3 if with_c is None else with_c
    with_d = rng.random() < 0.3 if with_d is None else with_d
    product = rng.random() < 0.6

    def coeff(p_zero=0.5):
        if rng.random() < p_zero:
            return None
        return Scalar.from_coeffs(spec, [rng.randint(-2, 2) for _ in range(t_degree)])

    out = {}
    for i in range(2, e):
        terms = {}
        if with_c:
            m = [0] * e
            m[i - 2] = 1
            terms[tuple(m)] = coeff(0.6)
        if with_d:
            terms[(0,) * e] = coeff(0.7)
        interior = 3 <= i <= e - 2
        for k in range(1, chain[i] + 1):
            if k == 1 and interior and product:
                continue
            m = [0] * e
            m[i - 1] = k
            terms[tuple(m)] = coeff()
        out[i] = Series(e, spec, {m: c for m, c in terms.items() if c is not None})
    return out


def _extent(c: Scalar) -> int:
    """Highest t-power in use; for Z/p^{N+1} measured on the symmetric lift."""
    if c.spec.kind == "mixed-char":
        v, k = 2 * abs(c.lift()), 0
        while v >= c.spec.p ** (k + 1):
            k += 1
        return k
    return max((k for k, _ in c.terms()), default=0)


def _key(c: Scalar):
    return c.lift() if c.spec.kind == "mixed-char" else str(c)


def max_t_degree(G: GeneratorSet) -> int:
    return max((_extent(c) for g in G.g.values() for _, c in g.items()), default=0)


def exact_family(chain: Chain, spec: DvrSpec, rng: random.Random, attempts: int = 50,
                 margin: int = 2, t_degree: int = 1):
    """A normalized flat family that is polynomial in t.

    Each draw is completed and normalized at truncation N and again at
    N + margin.  It is kept when the wider run has nothing beyond t-degree
    N - margin and agrees with the narrow one, so the normal form is a
    polynomial family and specialising t is meaningful.  Returns
    (consecutive h, NormalizedDeformation, obstructed draws, non-polynomial
    draws); the first two are None when every attempt fails.
    """
    from .deform import complete_to_flat
    from .errors import NoProgress
    from .shift import normalize
    wide = spec.with_truncation(spec.N + margin)
    obstructed = nonexact = 0
    for _ in range(attempts):
        state = rng.getstate()
        h = random_shape(chain, spec, rng, t_degree)
        after = rng.getstate()
        rng.setstate(state)
        h_wide = random_shape(chain, wide, rng, t_degree)
        rng.setstate(after)
        G = complete_to_flat(chain, h, spec)
        if isinstance(G, Obstruction):
            obstructed += 1
            continue
        G_wide = complete_to_flat(chain, h_wide, wide)
        try:
            D = normalize(G)
            D_wide = normalize(G_wide) if not isinstance(G_wide, Obstruction) else None
        except NoProgress:
            nonexact += 1
            continue
        if D_wide is None or max_t_degree(D_wide.generators) > spec.N - margin or not _same(D, D_wide):
            nonexact += 1
            continue
        return h, D, obstructed, nonexact
    return None, None, obstructed, nonexact


def _same(D, D_wide) -> bool:
    for pair, g in D.generators.g.items():
        w = D_wide.generators.g[pair]
        if {m: _key(c) for m, c in g.items()} != {m: _key(c) for m, c in w.items()}:
            return False
    return True
