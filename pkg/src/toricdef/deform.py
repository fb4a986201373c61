"""Deformation ideals I' over the truncated DVR.

A :class:`GeneratorSet` holds lifts ``g'_{i,j} = g_{i,j} + t h_{i,j}``.
Once every pair is present, any series can be rewritten into its compact
form, where each monomial lives on two consecutive variables.  Flatness is
reached order by order from the consecutive lifts alone, solving the
linearised relation conditions over the residue field.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linsolve
from .chain import Chain, generator_pairs, syzygies, template_body
from .errors import DegreeCapExceeded, ToricDefError
from .lattice import LatticeModel, build
from .scalars import DvrSpec, Scalar
from .series import Series, mono_support, unit_vector

Pair = tuple[int, int]


def default_cap(c: Chain) -> int:
    return 2 * max(c.a, default=2) * c.e


class GeneratorSet:
    """Lifted generators of I'; immutable once built."""

    def __init__(self, chain: Chain, g: dict[Pair, Series], spec: DvrSpec, cap: int | None = None):
        chain.require_reduced()
        self.chain = chain
        self.spec = spec
        self.e = chain.e
        self.cap = default_cap(chain) if cap is None else cap
        self.lattice: LatticeModel = build(chain)
        self.g = {}
        for pair, s in g.items():
            if s.e != self.e or s.spec != spec:
                raise ValueError(f"generator {pair} has the wrong shape")
            s = s.with_cap(None)
            tail = s - self.template(pair)
            if tail.min_t_degree() < 1:
                raise ToricDefError(f"g'{pair} does not reduce to g{pair} modulo t")
            self.g[pair] = s
        for i in range(1, self.e - 1):
            if (i, i + 2) not in self.g:
                raise ToricDefError(f"missing consecutive generator ({i},{i + 2})")
        self._memo: dict = {}

    # --- construction ------------------------------------------------------
    @classmethod
    def from_tails(cls, chain: Chain, h: dict[Pair, Series], spec: DvrSpec, cap=None):
        """g'_{i,j} = g_{i,j} + t*h_{i,j}; missing consecutive h default to 0."""
        g = {}
        pairs = set(h) | {(i, i + 2) for i in range(1, chain.e - 1)}
        for pair in pairs:
            body = template_body(chain, pair[0], pair[1], spec)
            tail = h.get(pair)
            g[pair] = body if tail is None else body + tail.with_cap(None).shift_t(1)
        return cls(chain, g, spec, cap)

    @classmethod
    def trivial(cls, chain: Chain, spec: DvrSpec, cap=None):
        return cls(chain, {p: template_body(chain, *p, spec) for p in generator_pairs(chain.e)}, spec, cap)

    def template(self, pair: Pair) -> Series:
        return template_body(self.chain, pair[0], pair[1], self.spec)

    def h(self, pair: Pair) -> Series:
        return (self.g[pair] - self.template(pair)).divide_t(1)

    @property
    def far_pairs(self) -> list[Pair]:
        return [p for p in generator_pairs(self.e) if p[1] - p[0] >= 3]

    @property
    def is_complete(self) -> bool:
        return all(p in self.g for p in generator_pairs(self.e))

    def _require_complete(self):
        if not self.is_complete:
            raise ToricDefError("far generators are missing; run complete_to_flat first")

    # --- compacting --------------------------------------------------------
    def _rule(self, pair: Pair):
        """x_i x_j == M - T in R: returns (M, [(coeff, mono) of T])."""
        key = ("rule", pair)
        hit = self._memo.get(key)
        if hit is None:
            i, j = pair
            lead = unit_vector(self.e, i)
            lead = tuple(a + b for a, b in zip(lead, unit_vector(self.e, j)))
            g = self.g[pair]
            body = self.template(pair)
            (mid,) = [m for m in body.terms if m != lead]
            tail = g - body
            hit = (mid, [(c, m) for m, c in tail.items()])
            self._memo[key] = hit
        return hit

    def compact_monomial(self, m: tuple[int, ...], prec: int | None = None) -> Series:
        """Compact form of x^m, correct modulo t^prec."""
        prec = self.spec.N + 1 if prec is None else prec
        if prec <= 0:
            return Series.zero(self.e, self.spec)
        if sum(m) > self.cap:
            raise DegreeCapExceeded(f"degree {sum(m)} exceeds cap {self.cap}")
        sup = mono_support(m)
        if sup is None or sup[1] - sup[0] <= 1:
            return Series.monomial(self.e, self.spec, m)
        key = (m, prec)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        i, j = sup
        mid, tail = self._rule((i, j))
        q = list(m)
        q[i - 1] -= 1
        q[j - 1] -= 1
        acc = dict(self.compact_monomial(_add(q, mid), prec).terms)
        for c, tm in tail:
            v = c.valuation()
            if v >= prec:
                continue
            sub = self.compact_monomial(_add(q, tm), prec - v)
            for mm, cc in sub.items():
                _accum(acc, mm, -(cc * c))
        out = Series(self.e, self.spec, acc).truncate(prec)
        self._memo[key] = out
        return out

    def compact(self, a: Series) -> "CompactForm":
        self._require_complete()
        if a.cap is not None and a.degree() > a.cap:
            raise DegreeCapExceeded(f"input degree {a.degree()} exceeds cap {a.cap}")
        acc: dict = {}
        top = self.spec.N + 1
        for m, c in a.items():
            v = c.valuation()
            for mm, cc in self.compact_monomial(m, top - v).items():
                _accum(acc, mm, cc * c)
        return CompactForm(Series(self.e, self.spec, acc))

    def compact_with_witness(self, a: Series, rng: random.Random | None = None,
                             max_steps: int = 200_000) -> tuple["CompactForm", dict[Pair, Series]]:
        """Worklist rewriting that records quotients.

        Returns ``(form, quotients)`` with ``a - sum(q_p * g'_p) == form``.
        With ``rng`` the far pair used at each step is random rather than
        extremal, and the monomial to rewrite is random too.
        """
        self._require_complete()
        cur = dict(a.items())
        quot: dict[Pair, dict] = {}
        steps = 0
        while True:
            bad = [m for m in cur if _far_pairs_in(m)]
            if not bad:
                break
            steps += 1
            if steps > max_steps:
                raise ToricDefError("rewriting did not terminate within the step budget")
            if rng is None:
                m = min(bad, key=lambda mm: (cur[mm].valuation(), mm))
                pair = mono_support(m)
            else:
                m = rng.choice(sorted(bad))
                pair = rng.choice(_far_pairs_in(m))
            c = cur[m]
            if sum(m) > self.cap:
                raise DegreeCapExceeded(f"degree {sum(m)} exceeds cap {self.cap}")
            q = list(m)
            q[pair[0] - 1] -= 1
            q[pair[1] - 1] -= 1
            q = tuple(q)
            _accum(quot.setdefault(pair, {}), q, c)
            for mm, cc in self.g[pair].items():
                _accum(cur, _add(q, mm), -(cc * c))
        quotients = {p: Series(self.e, self.spec, d) for p, d in quot.items()}
        return CompactForm(Series(self.e, self.spec, cur)), quotients

    def ideal_combination(self, quotients: dict[Pair, Series]) -> Series:
        out = Series.zero(self.e, self.spec)
        for pair, q in quotients.items():
            out = out + q * self.g[pair]
        return out

    def equal_in_R(self, a: Series, b: Series) -> bool:
        return self.compact(a) == self.compact(b)


def _add(a, b) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _accum(acc: dict, m, c: Scalar):
    s = acc.get(m)
    s = c if s is None else s + c
    if s.is_zero():
        acc.pop(m, None)
    else:
        acc[m] = s


def _far_pairs_in(m) -> list[Pair]:
    idx = [k + 1 for k, x in enumerate(m) if x]
    return [(i, j) for i in idx for j in idx if j - i >= 2]


@dataclass(frozen=True)
class CompactForm:
    value: Series

    def __post_init__(self):
        for m in self.value.terms:
            sup = mono_support(m)
            if sup is not None and sup[1] - sup[0] > 1:
                raise ToricDefError(f"monomial {m} is not compact")

    def __eq__(self, other):
        if isinstance(other, CompactForm):
            return self.value == other.value
        if isinstance(other, Series):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(self.value)


def compact(G: GeneratorSet, a: Series) -> CompactForm:
    return G.compact(a)


def equal_in_R(G: GeneratorSet, a: Series, b: Series) -> bool:
    return G.equal_in_R(a, b)


# --- maximally divisible representatives ------------------------------------

def max_divisible_representative(G: GeneratorSet, p: Series, l: int) -> Series:
    """Rewrite ``p`` so monomials quasi-divisible by x_l are multiples of x_l.

    Terms are handled from the lowest t-order up: a quasi-divisible monomial
    x^m is replaced by x_l times the compact monomial of weight mu(m) - w_l,
    and the difference of the two compact forms (which vanishes mod t) is
    pushed to the next orders.
    """
    G._require_complete()
    L = G.lattice
    wl = L.w[l - 1]
    cur = dict(p.items())
    while True:
        bad = [(c.valuation(), m) for m, c in cur.items()
               if m[l - 1] == 0 and L.quasi_divisible(m, l)]
        if not bad:
            break
        v0 = min(b[0] for b in bad)
        for v, m in bad:
            if v != v0 or m not in cur:
                continue
            c = cur.pop(m)
            z = L.mu(m)
            target = list(L.canonical_monomial((z[0] - wl[0], z[1] - wl[1])))
            target[l - 1] += 1
            target = tuple(target)
            _accum(cur, target, c)
            prec = G.spec.N + 1 - v
            delta = G.compact_monomial(m, prec) - G.compact_monomial(target, prec)
            if delta.min_t_degree() < 1:
                raise ToricDefError("lattice and rewriting disagree on quasi-divisibility")
            for mm, cc in delta.items():
                _accum(cur, mm, cc * c)
    return Series(G.e, G.spec, cur)


# --- completion to a flat family ---------------------------------------------

@dataclass(frozen=True)
class Obstruction:
    """The proposed consecutive lifts do not extend to a flat family."""

    order: int
    triple: tuple[int, int, int]
    kind: int
    weight: tuple[int, int] | None = None
    detail: str = ""

    def __bool__(self):
        return False

    def to_dict(self) -> dict:
        return {"order": self.order, "triple": list(self.triple), "kind": self.kind,
                "weight": list(self.weight) if self.weight else None, "detail": self.detail}


def syzygy_residuals(G: GeneratorSet) -> list[tuple[object, CompactForm]]:
    """Compact form of every relation evaluated on the lifted generators."""
    out = []
    for syz in syzygies(G.chain):
        total = Series.zero(G.e, G.spec)
        for sign, mono, pair in syz.terms:
            total = total + G.g[pair].mul_monomial(mono).scale(sign)
        out.append((syz, G.compact(total)))
    return out


def _relation_weight(L: LatticeModel, syz) -> tuple[int, int]:
    sign, mono, pair = syz.terms[0]
    z = L.mu(mono)
    wi, wj = L.w[pair[0] - 1], L.w[pair[1] - 1]
    return (z[0] + wi[0] + wj[0], z[1] + wi[1] + wj[1])


def complete_to_flat(c: Chain, consecutive: dict[int, Series], spec: DvrSpec | None = None,
                     cap: int | None = None, max_rounds: int = 4):
    """Extend consecutive lifts h_{i-1,i+1} to a flat generator set.

    Far lifts start at the undeformed g_{i,j}.  At each t-order k the
    relations are evaluated and compacted; their order-k parts are linear in
    the order-k corrections of the far h, graded by lattice weight, so each
    weight block is a small dense system over the residue field.  Returns the
    completed :class:`GeneratorSet` or an :class:`Obstruction`.
    """
    c.require_reduced()
    if spec is None:
        spec = next(iter(consecutive.values())).spec if consecutive else DvrSpec("equal-char-0", 1)
    h = {(i - 1, i + 1): s for i, s in consecutive.items()}
    for (i, j) in h:
        if not (1 <= i and j <= c.e):
            raise ToricDefError(f"no consecutive generator ({i},{j}) for e={c.e}")
    base = GeneratorSet.from_tails(c, h, spec, cap)
    g = dict(base.g)
    for pair in generator_pairs(c.e):
        g.setdefault(pair, template_body(c, pair[0], pair[1], spec))
    G = GeneratorSet(c, g, spec, base.cap)
    if c.e <= 3:
        return G
    solver = OrderSolver(G, G.far_pairs, prefer_inner=True)
    for order in range(1, spec.N + 1):
        G = solver.settle(G, order, max_rounds)
        if isinstance(G, Obstruction):
            return G
    for syz, form in syzygy_residuals(G):
        if not form.value.is_zero():
            return Obstruction(spec.N, syz.triple, syz.kind, None, "final verification failed")
    return G


class OrderSolver:
    """Order-by-order linearised flatness conditions for one chain.

    ``unknown_pairs`` are the generators whose order-k corrections may be
    chosen.  With ``pick(pair, mono)`` set, free variables get random residues and the
    extra weights in ``extra_weights`` are solved as well; this turns the
    solver into a generator of random flat families.
    """

    def __init__(self, G: GeneratorSet, unknown_pairs, prefer_inner: bool = False,
                 pick=None, extra_weights=()):
        self.chain = G.chain
        self.spec = G.spec
        self.field = G.spec.residue_field()
        self.L = G.lattice
        self.syz = syzygies(G.chain)
        self.weights = {(s.kind, s.triple): _relation_weight(self.L, s) for s in self.syz}
        self.pairs = list(unknown_pairs)
        self.prefer_inner = prefer_inner
        self.pick = pick
        self.extra = list(extra_weights)

    def blocks(self, G: GeneratorSet, order: int):
        """Order-`order` parts of the relation residuals, grouped by weight."""
        out: dict[tuple[int, int], dict] = {}
        for syz, form in syzygy_residuals(G):
            v = form.value.min_t_degree()
            if v < order:
                return Obstruction(v, syz.triple, syz.kind, None, "relation fails below the current order")
            D = self.weights[(syz.kind, syz.triple)]
            for m, coeff in form.value.items():
                if coeff.valuation() > order:
                    continue
                y = self.L.mu(m)
                zeta = (y[0] - D[0], y[1] - D[1])
                out.setdefault(zeta, {})[(syz.kind, syz.triple)] = coeff.digit(order)
        return out

    def step(self, G: GeneratorSet, order: int, randomize: bool = False):
        blocks = self.blocks(G, order)
        if isinstance(blocks, Obstruction):
            return blocks
        todo = set(blocks)
        if randomize:
            todo |= set(self.extra)
        if not todo:
            return G
        updates: dict[Pair, dict] = {}
        for zeta in sorted(todo):
            rhs = blocks.get(zeta, {})
            sol = self._solve_block(zeta, rhs, randomize)
            if sol is None:
                bad = next(s for s in self.syz if rhs.get((s.kind, s.triple)))
                return Obstruction(order, bad.triple, bad.kind, zeta, "linear conditions are inconsistent")
            for (pair, mono), val in sol.items():
                if val != self.field.zero:
                    _accum(updates.setdefault(pair, {}), mono, Scalar.from_residue(self.spec, val, order))
        if not updates:
            if blocks:
                bad = next(s for s in self.syz if any((s.kind, s.triple) in b for b in blocks.values()))
                return Obstruction(order, bad.triple, bad.kind, None, "no progress at this order")
            return G
        g = dict(G.g)
        for pair, d in updates.items():
            g[pair] = g[pair] + Series(G.e, self.spec, d)
        return GeneratorSet(G.chain, g, self.spec, G.cap)

    def settle(self, G: GeneratorSet, order: int, max_rounds: int = 4, randomize: bool = False):
        """Run steps until the order-`order` conditions hold."""
        for rnd in range(max_rounds):
            G = self.step(G, order, randomize and rnd == 0)
            if isinstance(G, Obstruction):
                return G
            blocks = self.blocks(G, order)
            if isinstance(blocks, Obstruction):
                return blocks
            if not blocks:
                return G
        for syz, form in syzygy_residuals(G):
            if form.value.min_t_degree() <= order:
                return Obstruction(order, syz.triple, syz.kind, None, "corrections did not settle")
        return G

    def _solve_block(self, zeta, rhs_map, randomize: bool):
        """Solve one weight block; prefer lifts supported on inner variables."""
        L, F = self.L, self.field
        rows_for = []
        for syz in self.syz:
            D = self.weights[(syz.kind, syz.triple)]
            y = (zeta[0] + D[0], zeta[1] + D[1])
            if not L.cone_contains(y):
                if rhs_map.get((syz.kind, syz.triple)):
                    return None
                continue
            rows_for.append(syz)
        candidates = []
        for pair in self.pairs:
            wi, wj = L.w[pair[0] - 1], L.w[pair[1] - 1]
            z = (zeta[0] + wi[0] + wj[0], zeta[1] + wi[1] + wj[1])
            if L.cone_contains(z):
                mono = L.canonical_monomial(z)
                inner = all(x == 0 or pair[0] < k + 1 < pair[1] for k, x in enumerate(mono))
                candidates.append((pair, mono, inner))
        tries = [candidates]
        if self.prefer_inner:
            tries.insert(0, [cd for cd in candidates if cd[2]])
        for subset in tries:
            rows, rhs = [], []
            for syz in rows_for:
                row = [F.zero] * len(subset)
                for sign, _mono, pair in syz.terms:
                    for n, (p2, _m2, _) in enumerate(subset):
                        if p2 == pair:
                            row[n] = F.add(row[n], F.from_int(sign))
                rows.append(row)
                rhs.append(F.neg(F.coerce(rhs_map.get((syz.kind, syz.triple), F.zero))))
            if not subset:
                sol = [] if all(b == F.zero for b in rhs) else None
            elif randomize:
                pick = lambda n, subset=subset: self.pick(subset[n][0], subset[n][1])
                sol = (linsolve.solve_random(rows, rhs, F, pick) if rows
                       else [pick(n) for n in range(len(subset))])
            else:
                sol = linsolve.solve(rows, rhs, F)
            if sol is not None:
                return {(pair, mono): sol[n] for n, (pair, mono, _) in enumerate(subset)}
        return None
