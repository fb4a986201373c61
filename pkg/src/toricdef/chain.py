"""The combinatorial type X(a): Hirzebruch-Jung data, Riemenschneider's
equations and their relations, and reduction of chains containing 1s.

A chain ``a = (a_2, ..., a_{e-1})`` is stored as a tuple; ``a_k`` lives at
position ``k - 2``.  The empty chain (e = 2) stands for a regular point.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .errors import InvalidFraction, NonReducedChain
from .scalars import DvrSpec
from .series import Series


class _Smooth:
    """Sentinel for a regular (smooth) point."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Smooth"

    def __reduce__(self):
        return (_Smooth, ())


SMOOTH = _Smooth()


@dataclass(frozen=True)
class Chain:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @property
    def e(self) -> int:
        return len(self.a) + 2

    def __getitem__(self, k: int) -> int:
        """a_k for 2 <= k <= e-1."""
        if not 2 <= k <= self.e - 1:
            raise IndexError(f"a_{k} is undefined for e={self.e}")
        return self.a[k - 2]

    def is_reduced(self) -> bool:
        return all(x >= 2 for x in self.a)

    def require_reduced(self):
        if not self.is_reduced():
            raise NonReducedChain(f"chain {list(self.a)} has entries < 2")

    def __str__(self):
        return "X(" + ",".join(map(str, self.a)) + ")"


def hj_expand(n: int, q: int) -> Chain:
    """Reduced chain with n/q = a_2 - 1/(a_3 - 1/(...))."""
    if n < 1 or not (0 < q < n) or gcd(n, q) != 1:
        if n == 1 and q in (0, 1):
            return Chain(())
        raise InvalidFraction(f"need 0 < q < n coprime, got n={n}, q={q}")
    out = []
    while q:
        a = -(-n // q)
        out.append(a)
        n, q = q, a * q - n
    return Chain(tuple(out))


def hj_value(c: Chain) -> tuple[int, int]:
    """(n, q) in lowest terms; the empty chain gives (1, 1)."""
    c.require_reduced()
    return _hj_value_raw(c.a)


def _hj_value_raw(a) -> tuple[int, int]:
    if not a:
        return (1, 1)
    num, den = a[-1], 1
    for x in reversed(a[:-1]):
        num, den = x * num - den, num
    g = gcd(num, den)
    return num // g, den // g


# --- Riemenschneider generators ------------------------------------------------

@dataclass(frozen=True)
class GeneratorTemplate:
    i: int
    j: int
    body: Series = field(compare=False)


def middle_exponents(c: Chain, i: int, j: int) -> tuple[int, ...]:
    """Exponent vector of the monomial subtracted in g_{i,j}."""
    e = c.e
    v = [0] * e
    if j == i + 2:
        v[i] = c[i + 1]
    else:
        v[i] = c[i + 1] - 1
        for k in range(i + 2, j - 1):
            v[k - 1] = c[k] - 2
        v[j - 2] = c[j - 1] - 1
    if any(x < 0 for x in v):
        raise NonReducedChain(f"g_{i},{j} has negative exponents for chain {list(c.a)}")
    return tuple(v)


def leading_exponents(e: int, i: int, j: int) -> tuple[int, ...]:
    v = [0] * e
    v[i - 1] += 1
    v[j - 1] += 1
    return tuple(v)


def generator_pairs(e: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, e + 1) for j in range(i + 2, e + 1)]


def template_body(c: Chain, i: int, j: int, spec: DvrSpec, cap=None) -> Series:
    one = spec.one()
    return Series(c.e, spec, {leading_exponents(c.e, i, j): one,
                              middle_exponents(c, i, j): -one}, cap)


def generators(c: Chain, spec: DvrSpec | None = None, cap=None) -> dict[tuple[int, int], GeneratorTemplate]:
    c.require_reduced()
    spec = spec or DvrSpec("equal-char-0", 1)
    return {(i, j): GeneratorTemplate(i, j, template_body(c, i, j, spec, cap))
            for (i, j) in generator_pairs(c.e)}


# --- relations ---------------------------------------------------------------

@dataclass(frozen=True)
class Syzygy:
    """sum(sign * x^mono * g_pair) == 0 for the undeformed generators."""

    kind: int
    triple: tuple[int, int, int]
    terms: tuple[tuple[int, tuple[int, ...], tuple[int, int]], ...]


def syzygies(c: Chain) -> list[Syzygy]:
    """The two families of relations generating the relation module."""
    c.require_reduced()
    e = c.e
    out = []
    for i in range(1, e + 1):
        for k in range(i + 3, e + 1):
            for j in range(i + 1, k - 1):
                # x_j g_{ik} = x_i g_{jk} + (x_{j+1}^{a-2} ... x_{k-2}^{a-2}) x_{k-1}^{a-1} g_{i,j+1}
                p = [0] * e
                for m in range(j + 1, k - 1):
                    p[m - 1] = c[m] - 2
                p[k - 2] += c[k - 1] - 1
                out.append(Syzygy(1, (i, j, k), (
                    (1, _unit(e, j), (i, k)),
                    (-1, _unit(e, i), (j, k)),
                    (-1, tuple(p), (i, j + 1)),
                )))
    for i in range(1, e + 1):
        for j in range(i + 2, e + 1):
            for k in range(j + 1, e + 1):
                # x_j g_{ik} = x_k g_{ij} + x_{i+1}^{a-1} (x_{i+2}^{a-2} ... x_{j-1}^{a-2}) g_{j-1,k}
                p = [0] * e
                p[i] = c[i + 1] - 1
                for m in range(i + 2, j):
                    p[m - 1] += c[m] - 2
                out.append(Syzygy(2, (i, j, k), (
                    (1, _unit(e, j), (i, k)),
                    (-1, _unit(e, k), (i, j)),
                    (-1, tuple(p), (j - 1, k)),
                )))
    return out


def _unit(e, l):
    v = [0] * e
    v[l - 1] = 1
    return tuple(v)


@dataclass
class SyzygyReport:
    ok: bool
    checked: int
    failure: tuple | None = None

    def __bool__(self):
        return self.ok


def verify_syzygies(c: Chain) -> SyzygyReport:
    """Expand every relation with the undeformed generators and check it vanishes."""
    spec = DvrSpec("equal-char-0", 1)
    gens = {k: g.body for k, g in generators(c, spec).items()}
    checked = 0
    for syz in syzygies(c):
        total = Series.zero(c.e, spec)
        for sign, mono, pair in syz.terms:
            total = total + gens[pair].mul_monomial(mono).scale(sign)
        checked += 1
        if not total.is_zero():
            return SyzygyReport(False, checked, (syz.kind, syz.triple, str(total)))
    return SyzygyReport(True, checked)


# --- reduction of chains with entries <= 1 -------------------------------------

def reduce_chain(a, rng: random.Random | None = None):
    """Remove entries equal to 1 (decrementing neighbours) until reduced.

    Returns a :class:`Chain`, or ``SMOOTH`` when an entry <= 0 appears or the
    chain empties.  ``rng`` picks which 1 to remove; the default removes the
    leftmost, and the result does not depend on the choice.
    """
    if isinstance(a, Chain):
        a = a.a
    cur = list(a)
    while True:
        if any(x <= 0 for x in cur):
            return SMOOTH
        ones = [k for k, x in enumerate(cur) if x == 1]
        if not ones:
            break
        k = rng.choice(ones) if rng is not None else ones[0]
        if k > 0:
            cur[k - 1] -= 1
        if k + 1 < len(cur):
            cur[k + 1] -= 1
        del cur[k]
    if not cur:
        return SMOOTH
    return Chain(tuple(cur))


def sub_chain_dominates(b, a, l: int) -> bool:
    """b_i <= a_{i+l} for every i (0-based positions, both sequences)."""
    b = b.a if isinstance(b, Chain) else tuple(b)
    a = a.a if isinstance(a, Chain) else tuple(a)
    if l < 0 or l + len(b) > len(a):
        return False
    return all(x <= a[k + l] for k, x in enumerate(b))
