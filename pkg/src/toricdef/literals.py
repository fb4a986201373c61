"""Text literals for scalars, series and chains.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | 't' | 'x' INT | '(' expr ')'

A scalar literal is an expression without ``x`` variables; in mixed
characteristic a bare decimal integer is the usual form and ``t`` means p.
Chains are bracketed integer lists such as ``[3,2]``.
"""
from __future__ import annotations

import json
import re

from gmpy2 import mpq

from .errors import ParseError
from .scalars import DvrSpec, Scalar
from .series import Series, unit_vector

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(t)|(\^)|(\*)|(\+)|(-)|(/)|(\()|(\)))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("x", int(m.group(3))))
        elif m.group(4):
            out.append(("t", None))
        else:
            sym = next(g for g in m.groups()[4:] if g)
            out.append((sym, None))
    return out


class _Parser:
    def __init__(self, text: str, e: int, spec: DvrSpec):
        self.toks = _tokenize(text)
        self.i = 0
        self.e = e
        self.spec = spec
        self.text = text

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ParseError(f"unexpected end of {self.text!r}")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[0]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Series:
        if not self.toks:
            raise ParseError("empty expression")
        out = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def expr(self):
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            k = self.take("int")[1]
            return base**k
        return base

    def atom(self):
        kind = self.peek()
        if kind == "int":
            num = self.take()[1]
            if self.peek() == "/":
                self.take()
                den = self.take("int")[1]
                if den == 0:
                    raise ParseError("division by zero in literal")
                value = mpq(num, den)
            else:
                value = num
            return Series.constant(self.e, self.spec, Scalar.from_residue(self.spec, value))
        if kind == "t":
            self.take()
            return Series.constant(self.e, self.spec, self.spec.t())
        if kind == "x":
            l = self.take()[1]
            if not 1 <= l <= self.e:
                raise ParseError(f"variable x{l} out of range for e={self.e}")
            return Series(self.e, self.spec, {unit_vector(self.e, l): self.spec.one()})
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {kind!r} in {self.text!r}")


def parse_series(text: str, e: int, spec: DvrSpec, cap: int | None = None) -> Series:
    s = _Parser(str(text), e, spec).parse()
    return s.with_cap(cap) if cap is not None else s


def parse_scalar(text: str, spec: DvrSpec) -> Scalar:
    if spec.kind == "mixed-char" and re.fullmatch(r"\s*-?\d+\s*", str(text)):
        return Scalar.from_int(spec, int(text))
    s = _Parser(str(text), 0, spec).parse()
    return s.coefficient(())


def parse_chain(text) -> tuple[int, ...]:
    """``"[3,2]"`` (or an already-decoded list) -> ``(3, 2)``."""
    if isinstance(text, (list, tuple)):
        vals = list(text)
    else:
        try:
            vals = json.loads(text)
        except (json.JSONDecodeError, TypeError) as exc:
            raise ParseError(f"malformed chain literal {text!r}") from exc
    if not isinstance(vals, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
        raise ParseError(f"chain literal must be a list of integers, got {text!r}")
    return tuple(vals)


def format_chain(a) -> str:
    return "[" + ",".join(str(x) for x in a) + "]"
