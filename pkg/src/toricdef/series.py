"""Sparse truncated multivariate series over S in variables x_1..x_e.

A :class:`Series` is a finite map from exponent vectors to nonzero
:class:`~toricdef.scalars.Scalar` coefficients.  Variables are numbered from 1
in every public signature, matching the usual x_1, ..., x_e notation.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .errors import DegreeCapExceeded, NonConvergentSubstitution, SpecMismatch
from .scalars import DvrSpec, Scalar

Monomial = tuple  # exponent vector of length e


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_support(m: Monomial) -> tuple[int, int] | None:
    """(first, last) 1-based indices of variables occurring in m."""
    lo = hi = None
    for k, x in enumerate(m):
        if x:
            if lo is None:
                lo = k
            hi = k
    if lo is None:
        return None
    return lo + 1, hi + 1


def unit_vector(e: int, l: int) -> Monomial:
    v = [0] * e
    v[l - 1] = 1
    return tuple(v)


def grlex_key(m: Monomial):
    return (sum(m), m)


class Series:
    """Immutable sparse series; ``terms`` maps exponent tuples to Scalars."""

    __slots__ = ("e", "spec", "terms", "cap", "_hash")

    def __init__(self, e: int, spec: DvrSpec, terms: Mapping | None = None, cap: int | None = None,
                 _trusted: bool = False):
        self.e = e
        self.spec = spec
        self.cap = cap
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != e:
                raise ValueError(f"monomial {m} has wrong length for e={e}")
            if isinstance(c, int):
                c = Scalar.from_int(spec, c)
            if c.spec != spec:
                raise SpecMismatch(f"{c.spec} vs {spec}")
            if cap is not None and sum(m) > cap:
                raise DegreeCapExceeded(f"monomial {m} exceeds degree cap {cap}")
            if not c.is_zero():
                clean[m] = c
        self.terms = clean

    # --- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, e: int, spec: DvrSpec, cap=None) -> "Series":
        return cls(e, spec, {}, cap, _trusted=True)

    @classmethod
    def constant(cls, e: int, spec: DvrSpec, c, cap=None) -> "Series":
        return cls(e, spec, {(0,) * e: c}, cap)

    @classmethod
    def var(cls, e: int, spec: DvrSpec, l: int, cap=None) -> "Series":
        return cls(e, spec, {unit_vector(e, l): spec.one()}, cap, _trusted=True)

    @classmethod
    def monomial(cls, e: int, spec: DvrSpec, exps, coeff=None, cap=None) -> "Series":
        c = spec.one() if coeff is None else coeff
        return cls(e, spec, {tuple(exps): c}, cap)

    def _new(self, terms, cap=None) -> "Series":
        return Series(self.e, self.spec, terms, self.cap if cap is None else cap, _trusted=True)

    # --- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, m) -> Scalar:
        return self.terms.get(tuple(m), self.spec.zero())

    def min_t_degree(self) -> int:
        """Minimum coefficient valuation; N+1 for the zero series."""
        if not self.terms:
            return self.spec.N + 1
        return min(c.valuation() for c in self.terms.values())

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            out.update(k + 1 for k, x in enumerate(m) if x)
        return out

    def degree_in(self, l: int) -> int:
        return max((m[l - 1] for m in self.terms), default=-1)

    # --- arithmetic ---------------------------------------------------------
    def _check(self, other: "Series"):
        if other.e != self.e or other.spec != self.spec:
            raise SpecMismatch("series over different rings")

    def _coerce(self, other):
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)):
            return Series.constant(self.e, self.spec, other, self.cap)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
        return self._new(out, _merge_cap(self.cap, other.cap))

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        if isinstance(c, int):
            c = Scalar.from_int(self.spec, c)
        out = {}
        for m, a in self.terms.items():
            b = a * c
            if not b.is_zero():
                out[m] = b
        return self._new(out)

    def mul_monomial(self, m: Monomial, c: Scalar | None = None) -> "Series":
        cap = self.cap
        out = {}
        for k, a in self.terms.items():
            km = mono_mul(k, m)
            if cap is not None and sum(km) > cap:
                raise DegreeCapExceeded(f"degree {sum(km)} exceeds cap {cap}")
            b = a if c is None else a * c
            if not b.is_zero():
                out[km] = b
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        cap = _merge_cap(self.cap, other.cap)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                c = ca * cb
                if c.is_zero():
                    continue
                s = out.get(m)
                out[m] = c if s is None else s + c
        if cap is not None:
            for m in out:
                if sum(m) > cap:
                    raise DegreeCapExceeded(f"product degree {sum(m)} exceeds cap {cap}")
        return self._new({m: c for m, c in out.items() if not c.is_zero()}, cap)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Series":
        out = Series.constant(self.e, self.spec, 1, self.cap)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def truncate(self, prec: int) -> "Series":
        """Reduce every coefficient modulo t^prec."""
        out = {}
        for m, c in self.terms.items():
            d = c.truncate(prec)
            if not d.is_zero():
                out[m] = d
        return self._new(out)

    def divide_t(self, k: int = 1) -> "Series":
        return self._new({m: c.divide_t(k) for m, c in self.terms.items()
                          if not c.divide_t(k).is_zero()})

    def shift_t(self, k: int) -> "Series":
        out = {}
        for m, c in self.terms.items():
            d = c.shift_t(k)
            if not d.is_zero():
                out[m] = d
        return self._new(out)

    def with_cap(self, cap) -> "Series":
        return Series(self.e, self.spec, self.terms, cap)

    def filter(self, pred) -> "Series":
        return self._new({m: c for m, c in self.terms.items() if pred(m, c)})

    # --- substitution / evaluation -----------------------------------------
    def substitute(self, l: int, replacement: "Series") -> "Series":
        """Ring-homomorphic substitution x_l <- replacement."""
        self._check(replacement)
        _check_contract(l, replacement)
        by_power: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = m[l - 1]
            rest = m[: l - 1] + (0,) + m[l:]
            by_power.setdefault(k, {})[rest] = c
        if set(by_power) <= {0}:
            return self
        out = Series.zero(self.e, self.spec, self.cap)
        power = Series.constant(self.e, self.spec, 1, self.cap)
        for k in range(max(by_power) + 1):
            if k:
                power = power * replacement
            part = by_power.get(k)
            if part:
                out = out + self._new(part) * power
        return out

    def evaluate(self, point, field, tau=None):
        """Value at ``point`` after specializing every coefficient at t = tau."""
        if len(point) != self.e:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.e}")
        acc = field.zero
        for m, c in self.terms.items():
            v = c.specialize_t(field, tau)
            for x, k in zip(point, m):
                if k:
                    v = field.mul(v, field.pow(x, k))
            acc = field.add(acc, v)
        return acc

    # --- comparison / printing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = Series.constant(self.e, self.spec, other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.e == other.e and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.e, self.spec, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda mc: (grlex_key(mc[0]), -mc[1].valuation()),
                      reverse=True)

    def __repr__(self):
        return f"Series({self})"

    def __str__(self):
        return format_series(self)


def _merge_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _check_contract(l: int, r: Series):
    """x_l <- r must be x_l-linear up to t-adically small terms."""
    xl = unit_vector(r.e, l)
    for m, c in r.terms.items():
        if m == xl:
            continue
        if c.valuation() < 1:
            raise NonConvergentSubstitution(
                f"replacement for x_{l} has a t-constant term away from x_{l}: {format_monomial(m)}")


def format_monomial(m: Monomial) -> str:
    parts = []
    for k, x in enumerate(m):
        if x == 1:
            parts.append(f"x{k + 1}")
        elif x > 1:
            parts.append(f"x{k + 1}^{x}")
    return "*".join(parts) or "1"


def format_series(s: Series) -> str:
    if not s.terms:
        return "0"
    out = []
    for m, c in s.sorted_terms():
        ms = format_monomial(m)
        cs = str(c)
        multi = len(c.terms()) > 1 and s.spec.kind != "mixed-char"
        if multi:
            cs = f"({cs})"
        if ms == "1":
            out.append(cs)
        elif cs == "1":
            out.append(ms)
        elif cs == "-1":
            out.append(f"-{ms}")
        else:
            out.append(f"{cs}*{ms}")
    return " + ".join(out).replace("+ -", "- ")


def multiply(a: Series, b: Series) -> Series:
    return a * b


def substitute(a: Series, l: int, replacement: Series) -> Series:
    return a.substitute(l, replacement)


def invert_substitution(l: int, shift: Series) -> Series:
    """r with (x_l + shift)|_{x_l <- r} == x_l modulo t^(N+1).

    Fixed-point iteration r <- x_l - shift(x_l <- r), run N+1 times; each
    round fixes one more t-degree.
    """
    if not shift.is_zero() and shift.min_t_degree() < 1:
        raise NonConvergentSubstitution("shift must have min t-degree >= 1")
    xl = Series.var(shift.e, shift.spec, l, shift.cap)
    r = xl
    for _ in range(shift.spec.N + 1):
        r = xl - shift.substitute(l, r)
    if (xl + shift).substitute(l, r) != xl:
        raise NonConvergentSubstitution("fixed-point inverse did not round-trip")
    return r


def evaluate(a: Series, point, target, tau=None):
    return a.evaluate(point, target, tau)


def from_terms(e: int, spec: DvrSpec, items: Iterable[tuple[Monomial, object]], cap=None) -> Series:
    acc: dict = {}
    for m, c in items:
        if isinstance(c, int):
            c = Scalar.from_int(spec, c)
        m = tuple(m)
        acc[m] = acc[m] + c if m in acc else c
    return Series(e, spec, acc, cap)
