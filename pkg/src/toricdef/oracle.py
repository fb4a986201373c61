"""Brute-force verification over finite fields.

The generators are specialised at t = tau, every point of the fiber over
F_{q^m} is enumerated, and the Jacobian corank at each point gives its
embedding dimension.  Nothing here looks at the normal-form data.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linsolve
from .deform import GeneratorSet
from .errors import BudgetExceeded, PointNotOnVariety
from .fields import FiniteField

DEFAULT_BUDGET = 10**8

Poly = list  # [(coeff, exponent tuple)]


@dataclass
class SpecializedIdeal:
    field: object
    tau: object
    polys: list[Poly]
    e: int
    pairs: list | None = None

    def over(self, ext) -> "SpecializedIdeal":
        """The same polynomials read in an extension of a prime field."""
        return SpecializedIdeal(ext, self.tau, self.polys, self.e, self.pairs)


def specialize_ideal(G: GeneratorSet, field, tau) -> SpecializedIdeal:
    if tau == field.zero:
        raise ValueError("tau must be nonzero")
    polys, pairs = [], []
    for pair in sorted(G.g):
        poly = []
        for m, c in G.g[pair].sorted_terms():
            v = c.specialize_t(field, tau)
            if v != field.zero:
                poly.append((v, m))
        polys.append(poly)
        pairs.append(pair)
    return SpecializedIdeal(field, tau, polys, G.e, pairs)


def from_polys(field, polys, e: int, tau=None) -> SpecializedIdeal:
    """Build directly from ``{exponent tuple: coefficient}`` mappings."""
    return SpecializedIdeal(field, tau, [[(field.coerce(c), tuple(m)) for m, c in p.items()
                                          if field.coerce(c) != field.zero] for p in polys], e)


def evaluate_poly(poly: Poly, point, F):
    acc = F.zero
    for c, m in poly:
        v = c
        for x, k in zip(point, m):
            if k:
                v = F.mul(v, F.pow(x, k))
        acc = F.add(acc, v)
    return acc


def _univariate(poly: Poly, partial, k: int, F) -> list:
    """Coefficients in x_k after substituting x_1..x_{k-1} from ``partial``."""
    coeffs: list = []
    for c, m in poly:
        v = c
        for j in range(k - 1):
            if m[j]:
                v = F.mul(v, F.pow(partial[j], m[j]))
        d = m[k - 1]
        if d >= len(coeffs):
            coeffs.extend([F.zero] * (d + 1 - len(coeffs)))
        coeffs[d] = F.add(coeffs[d], v)
    while coeffs and coeffs[-1] == F.zero:
        coeffs.pop()
    return coeffs


def _eval_uni(coeffs, x, F):
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def enumerate_points(S: SpecializedIdeal, m: int = 1, budget: int = DEFAULT_BUDGET) -> list[tuple]:
    """All points of V(polys) over F_{q^m}, sorted.

    Coordinates are fixed left to right; at each step the polynomials whose
    last variable is the current one cut down the candidates, solving
    directly when one of them is linear there.  ``budget`` caps the number of
    candidate values tried.
    """
    F = S.field
    if m > 1:
        if not isinstance(F, FiniteField) or F.m != 1:
            raise ValueError("extensions are supported over prime fields only")
        F = FiniteField(F.p, m)
    e = S.e
    by_last: dict[int, list] = {k: [] for k in range(1, e + 1)}
    for poly in S.polys:
        if not poly:
            continue
        last = max((j + 1 for c, mono in poly for j, x in enumerate(mono) if x), default=0)
        if last == 0:
            # a nonzero constant: empty variety
            return []
        by_last[last].append(poly)
    elements = list(F.elements())
    work = 0
    out = []
    stack = [()]
    while stack:
        partial = stack.pop()
        k = len(partial) + 1
        if k > e:
            out.append(partial)
            continue
        unis = [_univariate(p, partial + (F.zero,) * (e - k + 1), k, F) for p in by_last[k]]
        if any(len(u) == 1 for u in unis):
            continue  # nonzero constant
        unis = [u for u in unis if u]
        linear = next((u for u in unis if len(u) == 2), None)
        if linear is not None:
            cands = [F.mul(F.neg(linear[0]), F.inv(linear[1]))]
        else:
            cands = elements
        work += len(cands)
        if work > budget:
            raise BudgetExceeded(f"point enumeration exceeded budget {budget}")
        for x in cands:
            if all(_eval_uni(u, x, F) == F.zero for u in unis):
                stack.append(partial + (x,))
    return sorted(out)


def jacobian(S: SpecializedIdeal, point, F=None) -> list[list]:
    F = F or S.field
    rows = []
    for poly in S.polys:
        row = []
        for l in range(S.e):
            acc = F.zero
            for c, m in poly:
                k = m[l]
                if not k:
                    continue
                v = F.mul(c, F.from_int(k))
                for j, (x, d) in enumerate(zip(point, m)):
                    dd = d - 1 if j == l else d
                    if dd:
                        v = F.mul(v, F.pow(x, dd))
                acc = F.add(acc, v)
            row.append(acc)
        rows.append(row)
    return rows


def jacobian_corank(S: SpecializedIdeal, point, F=None) -> int:
    """e minus the rank of the Jacobian at a point of V(polys)."""
    F = F or S.field
    for poly in S.polys:
        if evaluate_poly(poly, point, F) != F.zero:
            raise PointNotOnVariety(f"{[F.element_label(x) for x in point]} is not on the variety")
    rows = jacobian(S, point, F)
    return S.e - (linsolve.rank(rows, F) if rows else 0)


def extension_field(S: SpecializedIdeal, m: int):
    if m == 1:
        return S.field
    return FiniteField(S.field.p, m)


def smooth_scan(S: SpecializedIdeal, m: int = 1, budget: int = DEFAULT_BUDGET) -> list[tuple[tuple, int]]:
    """Points with corank > 2, i.e. the singular points of a surface fiber."""
    F = extension_field(S, m)
    out = []
    for pt in enumerate_points(S, m, budget):
        r = jacobian_corank(S, pt, F)
        if r > 2:
            out.append((pt, r))
    return out
