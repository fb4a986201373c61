"""Exact arithmetic in a truncated complete DVR S with uniformizer t.

Three flavours are modelled:

* ``equal-char-0``  Q[t]/(t^(N+1)), rational coefficients;
* ``equal-char-p``  F_p[t]/(t^(N+1));
* ``mixed-char``    Z/p^(N+1) with t = p.

Equal-characteristic scalars are stored densely as a tuple of N+1 residue
coefficients; mixed-characteristic scalars as an integer in [0, p^(N+1)).
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DenominatorCollision, NotAUnit, SpecMismatch
from .fields import FiniteField, RationalField, is_prime

EQUAL_CHAR_0 = "equal-char-0"
EQUAL_CHAR_P = "equal-char-p"
MIXED_CHAR = "mixed-char"
KINDS = (EQUAL_CHAR_0, EQUAL_CHAR_P, MIXED_CHAR)


@dataclass(frozen=True)
class DvrSpec:
    kind: str
    N: int
    p: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown DVR kind {self.kind!r}")
        if self.N < 1:
            raise ValueError("truncation order N must be >= 1")
        if self.kind == EQUAL_CHAR_0:
            if self.p is not None:
                raise ValueError("equal-char-0 takes no prime")
        elif self.p is None or not is_prime(self.p):
            raise ValueError(f"{self.kind} needs a prime p, got {self.p!r}")

    @property
    def modulus(self) -> int:
        """p^(N+1) for mixed characteristic."""
        return self.p ** (self.N + 1)

    @property
    def residue_char(self) -> int:
        return 0 if self.kind == EQUAL_CHAR_0 else self.p

    def with_truncation(self, N: int) -> "DvrSpec":
        return DvrSpec(self.kind, N, self.p)

    # residue-field helpers used by the order-by-order solvers
    def residue(self, v):
        if self.kind == EQUAL_CHAR_0:
            return mpq(v)
        return int(v) % self.p

    def residue_field(self):
        if self.kind == EQUAL_CHAR_0:
            return RationalField()
        return FiniteField(self.p)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "N": self.N}
        if self.p is not None:
            d["p"] = self.p
        return d

    def zero(self) -> "Scalar":
        return Scalar.from_int(self, 0)

    def one(self) -> "Scalar":
        return Scalar.from_int(self, 1)

    def t(self) -> "Scalar":
        return Scalar.t_power(self, 1)


class Scalar:
    """Immutable element of the truncated DVR described by ``spec``."""

    __slots__ = ("spec", "_c", "_hash")

    def __init__(self, spec: DvrSpec, data):
        self.spec = spec
        self._c = data
        self._hash = None

    # --- constructors -------------------------------------------------------
    @classmethod
    def from_int(cls, spec: DvrSpec, n: int) -> "Scalar":
        if spec.kind == MIXED_CHAR:
            return cls(spec, n % spec.modulus)
        return cls.from_residue(spec, n, 0)

    @classmethod
    def from_residue(cls, spec: DvrSpec, value, exponent: int = 0) -> "Scalar":
        """``value * t^exponent`` for a residue-field ``value``.

        In mixed characteristic ``value`` is read as an integer (or a rational
        with denominator prime to p) and multiplied by p^exponent.
        """
        if spec.kind == MIXED_CHAR:
            mod = spec.modulus
            if isinstance(value, int):
                v = value
            else:
                q = mpq(value)
                den = int(q.denominator)
                if den % spec.p == 0:
                    raise DenominatorCollision(f"{value} is not p-integral")
                v = int(q.numerator) * pow(den, -1, mod)
            return cls(spec, (v * pow(spec.p, exponent, mod)) % mod) if exponent <= spec.N else cls(spec, 0)
        coeffs = [_zero(spec)] * (spec.N + 1)
        if exponent <= spec.N:
            coeffs[exponent] = _coerce(spec, value)
        return cls(spec, tuple(coeffs))

    @classmethod
    def from_coeffs(cls, spec: DvrSpec, coeffs) -> "Scalar":
        """Build from residue coefficients of t^0, t^1, ...; excess is truncated."""
        if spec.kind == MIXED_CHAR:
            mod = spec.modulus
            v = 0
            for k, c in enumerate(coeffs):
                if k > spec.N:
                    break
                v += int(c) * spec.p**k
            return cls(spec, v % mod)
        out = [_zero(spec)] * (spec.N + 1)
        for k, c in enumerate(coeffs):
            if k > spec.N:
                break
            out[k] = _coerce(spec, c)
        return cls(spec, tuple(out))

    @classmethod
    def t_power(cls, spec: DvrSpec, k: int) -> "Scalar":
        return cls.from_residue(spec, 1, k)

    # --- structure ----------------------------------------------------------
    def valuation(self) -> int:
        """t-adic valuation; ``N+1`` for zero."""
        if self.spec.kind == MIXED_CHAR:
            v = self._c
            if v == 0:
                return self.spec.N + 1
            k = 0
            p = self.spec.p
            while v % p == 0:
                v //= p
                k += 1
            return k
        for k, c in enumerate(self._c):
            if c:
                return k
        return self.spec.N + 1

    def is_zero(self) -> bool:
        if self.spec.kind == MIXED_CHAR:
            return self._c == 0
        return not any(self._c)

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def digit(self, k: int):
        """Residue coefficient of t^k.

        For mixed characteristic this is the k-th base-p digit of the
        representative, which is the coefficient at order k whenever all lower
        digits vanish.
        """
        if self.spec.kind == MIXED_CHAR:
            return (self._c // self.spec.p**k) % self.spec.p
        return self._c[k] if k <= self.spec.N else _zero(self.spec)

    def terms(self) -> list[tuple[int, object]]:
        """Nonzero (t-exponent, residue coefficient) pairs."""
        if self.spec.kind == MIXED_CHAR:
            return [(k, self.digit(k)) for k in range(self.spec.N + 1) if self.digit(k)]
        return [(k, c) for k, c in enumerate(self._c) if c]

    @property
    def value(self):
        """Raw representative: an int (mixed) or the coefficient tuple."""
        return self._c

    def lift(self) -> int:
        """Symmetric integer representative (mixed characteristic only)."""
        if self.spec.kind != MIXED_CHAR:
            raise TypeError("lift() is defined for mixed characteristic only")
        v, mod = self._c, self.spec.modulus
        return v - mod if v > mod // 2 else v

    # --- arithmetic ---------------------------------------------------------
    def _check(self, other: "Scalar"):
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")

    def __add__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(self.spec, other)
        self._check(other)
        if self.spec.kind == MIXED_CHAR:
            return Scalar(self.spec, (self._c + other._c) % self.spec.modulus)
        if self.spec.kind == EQUAL_CHAR_P:
            p = self.spec.p
            return Scalar(self.spec, tuple((a + b) % p for a, b in zip(self._c, other._c)))
        return Scalar(self.spec, tuple(a + b for a, b in zip(self._c, other._c)))

    __radd__ = __add__

    def __neg__(self):
        if self.spec.kind == MIXED_CHAR:
            return Scalar(self.spec, (-self._c) % self.spec.modulus)
        if self.spec.kind == EQUAL_CHAR_P:
            p = self.spec.p
            return Scalar(self.spec, tuple((-a) % p for a in self._c))
        return Scalar(self.spec, tuple(-a for a in self._c))

    def __sub__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(self.spec, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        spec = self.spec
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, (self._c * other._c) % spec.modulus)
        a, b = self._c, other._c
        n = spec.N + 1
        out = [_zero(spec)] * n
        for i in range(n):
            ai = a[i]
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        if spec.kind == EQUAL_CHAR_P:
            p = spec.p
            out = [c % p for c in out]
        return Scalar(spec, tuple(out))

    __rmul__ = __mul__

    def scale(self, n: int) -> "Scalar":
        spec = self.spec
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, (self._c * n) % spec.modulus)
        if spec.kind == EQUAL_CHAR_P:
            return Scalar(spec, tuple((c * n) % spec.p for c in self._c))
        return Scalar(spec, tuple(c * n for c in self._c))

    def __pow__(self, k: int):
        if k < 0:
            return self.invert_unit() ** (-k)
        out = Scalar.from_int(self.spec, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift_t(self, k: int) -> "Scalar":
        """Multiply by t^k."""
        spec = self.spec
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, (self._c * pow(spec.p, k, spec.modulus)) % spec.modulus)
        if k > spec.N:
            return spec.zero()
        return Scalar(spec, (_zero(spec),) * k + self._c[: spec.N + 1 - k])

    def divide_t(self, k: int = 1) -> "Scalar":
        """Exact division by t^k; requires valuation >= k.

        The top k coefficients of the quotient are unknown after truncation and
        are set to zero.  In mixed characteristic the symmetric lift is divided
        instead, so small negative integers stay small.
        """
        if self.valuation() < k:
            raise ValueError("scalar is not divisible by t^%d" % k)
        spec = self.spec
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, (self.lift() // spec.p**k) % spec.modulus)
        return Scalar(spec, self._c[k:] + (_zero(spec),) * k)

    def truncate(self, prec: int) -> "Scalar":
        """Reduce modulo t^prec."""
        spec = self.spec
        if prec > spec.N:
            return self
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, self._c % spec.p ** max(prec, 0))
        z = _zero(spec)
        return Scalar(spec, tuple(c if k < prec else z for k, c in enumerate(self._c)))

    def invert_unit(self) -> "Scalar":
        """Inverse in S; raises :class:`NotAUnit` unless the valuation is 0."""
        spec = self.spec
        if not self.is_unit():
            raise NotAUnit(f"{self} has positive valuation")
        if spec.kind == MIXED_CHAR:
            return Scalar(spec, pow(self._c, -1, spec.modulus))
        a = self._c
        if spec.kind == EQUAL_CHAR_P:
            p = spec.p
            inv0 = pow(int(a[0]), -1, p)
        else:
            inv0 = 1 / mpq(a[0])
        # power-series division, one coefficient at a time
        b = [inv0]
        for n in range(1, spec.N + 1):
            s = sum(a[k] * b[n - k] for k in range(1, n + 1))
            b.append((-s * inv0) % p if spec.kind == EQUAL_CHAR_P else -s * inv0)
        return Scalar(spec, tuple(b))

    # --- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(self.spec, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.spec == other.spec and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self._c))
        return self._hash

    # --- specialization -----------------------------------------------------
    def specialize_t(self, field, tau=None):
        """Image in ``field`` after substituting t -> tau.

        Equal characteristic reads the truncated scalar as a polynomial in t of
        degree <= N.  Mixed characteristic uses the symmetric integer lift and
        tau is forced to be p.
        """
        spec = self.spec
        if spec.kind == MIXED_CHAR:
            if field.char == spec.p:
                raise ValueError("mixed-char specialization needs a field of characteristic != p")
            if tau is not None and field.coerce(tau) != field.from_int(spec.p):
                raise ValueError(f"mixed characteristic fixes tau = p = {spec.p}")
            return field.from_int(self.lift())
        if spec.kind == EQUAL_CHAR_P and field.char != spec.p:
            raise ValueError(f"equal-char-{spec.p} scalars need a field of characteristic {spec.p}")
        if tau is None:
            raise ValueError("tau is required for equal characteristic")
        tau = field.coerce(tau)
        acc = field.zero
        for c in reversed(self._c):
            acc = field.add(field.mul(acc, tau), field.coerce(c))
        return acc

    # --- printing -----------------------------------------------------------
    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.spec.kind == MIXED_CHAR:
            return str(self._c)
        parts = []
        for k, c in self.terms():
            cs = str(c)
            if k == 0:
                parts.append(cs)
            else:
                tk = "t" if k == 1 else f"t^{k}"
                parts.append(tk if cs == "1" else (f"-{tk}" if cs == "-1" else f"{cs}*{tk}"))
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def _zero(spec: DvrSpec):
    return mpq(0) if spec.kind == EQUAL_CHAR_0 else 0


def _coerce(spec: DvrSpec, value):
    if spec.kind == EQUAL_CHAR_0:
        return mpq(value)
    if isinstance(value, int):
        return value % spec.p
    q = mpq(value)
    den = int(q.denominator)
    if den % spec.p == 0:
        raise DenominatorCollision(f"{value} has denominator divisible by {spec.p}")
    return int(q.numerator) * pow(den, -1, spec.p) % spec.p


def valuation(s: Scalar) -> int:
    return s.valuation()


def invert_unit(s: Scalar) -> Scalar:
    return s.invert_unit()


def specialize_t(s: Scalar, target, tau=None):
    return s.specialize_t(target, tau)
