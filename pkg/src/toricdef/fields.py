"""Target fields for specialization: finite fields F_{p^m} and the rationals.

Field elements are plain Python values (``int`` for finite fields, ``mpq`` for
the rationals); arithmetic goes through the field object so that hot loops
avoid wrapper allocation.
"""
from __future__ import annotations

import itertools
from functools import cached_property

from gmpy2 import mpq

from .errors import DenominatorCollision


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FiniteField:
    """F_q with q = p**m.

    Elements are integers in ``range(q)``; the base-p digits of an element are
    the coefficients of its residue polynomial modulo a fixed irreducible
    polynomial, lowest degree first.  The prime field sits inside as the
    constants ``0..p-1``.
    """

    def __init__(self, p: int, m: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p**m
        self.char = p
        if m > 1:
            self.modulus = _find_irreducible(p, m)
            self._build_tables()

    def __repr__(self):
        return f"F_{self.p}" if self.m == 1 else f"F_{self.p}^{self.m}"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash(("FF", self.p, self.m))

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.m == 1 else f"F{self.p}^{self.m}"

    zero = 0
    one = 1

    # --- table construction for proper extensions -------------------------
    def _poly_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = _digits(a, p, m)
        db = _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus  # monic, low degree first, length m+1
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for j in range(m + 1):
                    prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
        return _undigits(prod[:m], p)

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._poly_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - a primitive element always exists
            raise RuntimeError("no primitive element found")
        log = [0] * q
        for k, v in enumerate(exp):
            log[v] = k
        self._exp = exp + exp
        self._log = log
        add = [[0] * q for _ in range(q)]
        p, m = self.p, self.m
        digs = [_digits(a, p, m) for a in range(q)]
        for a in range(q):
            da = digs[a]
            row = add[a]
            for b in range(q):
                row[b] = _undigits([(x + y) % p for x, y in zip(da, digs[b])], p)
        self._add = add
        self._neg = [_undigits([(-x) % p for x in digs[a]], p) for a in range(q)]

    # --- arithmetic --------------------------------------------------------
    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.m == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a, k: int):
        if k == 0:
            return 1
        if self.m == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, num: int, den: int):
        if den % self.p == 0:
            raise DenominatorCollision(f"denominator {den} vanishes in {self!r}")
        return (num * pow(den, -1, self.p)) % self.p

    def coerce(self, v):
        """Map an int, mpq or Fraction-like value into the field."""
        if isinstance(v, int):
            return v % self.p if self.m == 1 else v % self.p
        return self.from_fraction(int(v.numerator), int(v.denominator))

    def elements(self):
        return range(self.q)

    def is_finite(self) -> bool:
        return True

    def element_label(self, a) -> object:
        return a if self.m == 1 else list(_digits(a, self.p, self.m))

    @cached_property
    def prime_subfield(self) -> "FiniteField":
        return FiniteField(self.p)


class RationalField:
    """Exact rationals; only usable where no enumeration is required."""

    char = 0
    zero = mpq(0)
    one = mpq(1)
    name = "QQ"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(a)

    def pow(self, a, k):
        return mpq(a) ** k

    def from_int(self, n):
        return mpq(n)

    def from_fraction(self, num, den):
        return mpq(num, den)

    def coerce(self, v):
        return mpq(v)

    def elements(self):
        raise TypeError("the rationals cannot be enumerated")

    def is_finite(self) -> bool:
        return False

    def element_label(self, a):
        return str(a)


QQ = RationalField()


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(list(ds)):
        v = v * p + d
    return v


def _find_irreducible(p: int, m: int) -> list[int]:
    """Smallest monic irreducible of degree m over F_p (low degree first)."""
    for tail in itertools.product(range(p), repeat=m):
        poly = list(tail) + [1]
        if poly[0] == 0:
            continue
        if _is_irreducible(poly, p):
            return poly
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


def _is_irreducible(poly: list[int], p: int) -> bool:
    # degree <= 3 suffices for our extension degrees: irreducible iff rootless,
    # and for degree 4+ fall back to trial division by all monic factors.
    m = len(poly) - 1
    for x in range(p):
        if sum(c * pow(x, k, p) for k, c in enumerate(poly)) % p == 0:
            return False
    if m <= 3:
        return True
    for d in range(2, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            if _poly_divides(div, poly, p):
                return False
    return True


def _poly_divides(div, poly, p):
    r = list(poly)
    d = len(div) - 1
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            for j in range(d + 1):
                r[k - d + j] = (r[k - d + j] - c * div[j]) % p
    return not any(r[:d])


def parse_field(text: str):
    """Parse ``"F5"``, ``"F7^2"``, ``"GF(11)"`` or ``"QQ"``."""
    s = text.strip().replace("GF(", "F").replace(")", "").replace("**", "^")
    if s.upper() in ("QQ", "Q"):
        return QQ
    if not s or s[0] not in "Ff":
        raise ValueError(f"unrecognised field {text!r}")
    body = s[1:].lstrip("_")
    if "^" in body:
        base, m = body.split("^")
        return FiniteField(int(base), int(m))
    return FiniteField(int(body))
