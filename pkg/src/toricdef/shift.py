"""Shifting automorphisms and the normal form they converge to.

Shifting to the right at i moves the x_{i-1}-multiples of the tail of
g'_{i-1,i+1} into the coordinate x_{i+1}; shifting to the left moves the
x_{i+1}-multiples into x_{i-1}.  Alternating full sweeps drive every
consecutive generator to

    x_{i-1}(x_{i+1} + t c_{i+1}) - x_i^{a_i} + t x_i h_i(x_i) + t d_i

modulo t^{N+1}.  The constant d_i is carried explicitly: without a marked
section, constants in the tails cannot be shifted away.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chain import Chain
from .deform import GeneratorSet, max_divisible_representative
from .errors import NoProgress, ToricDefError
from .scalars import Scalar
from .series import Series, format_series, invert_substitution, unit_vector

RIGHT = "right"
LEFT = "left"


@dataclass
class ShiftRecord:
    """One shift_at step: the moved part and the neighbour corrections."""

    i: int
    direction: str
    moved: Series
    order: int
    neighbours: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"i": self.i, "direction": self.direction, "moved": format_series(self.moved),
                "order": self.order, "neighbours": self.neighbours}


def _relift(G: GeneratorSet, gens: dict) -> GeneratorSet:
    """Subtract templates, compact the tails, and rebuild."""
    raw = GeneratorSet(G.chain, gens, G.spec, G.cap)
    out = {}
    for pair, g in gens.items():
        body = G.template(pair)
        out[pair] = body + raw.compact(g - body).value
    return GeneratorSet(G.chain, out, G.spec, G.cap)


def _split_shift(G: GeneratorSet, i: int, direction: str) -> Series:
    """The series S with g'_{i-1,i+1} = x_{i-1}(x_{i+1} + S) + ... (right)."""
    pair = (i - 1, i + 1)
    tail = G.compact(G.g[pair] - G.template(pair)).value
    l = i - 1 if direction == RIGHT else i + 1
    rep = max_divisible_representative(G, tail, l)
    xl = unit_vector(G.e, l)
    moved = {}
    for m, c in rep.items():
        if m[l - 1] == 0:
            continue
        if direction == RIGHT and m == xl:
            # x_{i-1} * c_{i+1}: the shuttle term stays put
            continue
        q = list(m)
        q[l - 1] -= 1
        moved[tuple(q)] = c
    return Series(G.e, G.spec, moved)


def shift_at(G: GeneratorSet, i: int, direction: str = RIGHT, audit: list | None = None) -> GeneratorSet:
    """Apply phi_i^+ (right) or phi_i^- (left) and re-lift every generator."""
    if not G.is_complete:
        raise ToricDefError("shift_at needs a completed generator set")
    if not 2 <= i <= G.e - 1:
        raise IndexError(f"shift index {i} outside 2..{G.e - 1}")
    if direction not in (RIGHT, LEFT):
        raise ValueError(f"direction must be {RIGHT!r} or {LEFT!r}")
    S = _split_shift(G, i, direction)
    if S.is_zero():
        if audit is not None:
            audit.append(ShiftRecord(i, direction, S, G.spec.N + 1))
        return G
    target = i + 1 if direction == RIGHT else i - 1
    r = invert_substitution(target, S)
    gens = {p: g.substitute(target, r).truncate(G.spec.N + 1) for p, g in G.g.items()}
    out = _relift(G, gens)
    if audit is not None:
        audit.append(_record(G, out, i, direction, S))
    return out


def _record(old: GeneratorSet, new: GeneratorSet, i: int, direction: str, S: Series) -> ShiftRecord:
    """Compare neighbour changes at the leading order with the predicted terms."""
    m = S.min_t_degree()
    rec = ShiftRecord(i, direction, S, m)
    e, c, spec = old.e, old.chain, old.spec
    k = i + 1 if direction == RIGHT else i - 1
    preds = []
    # x_k^{a_k} -> (x_k - S)^{a_k}: + a_k x_k^{a_k - 1} S at the leading order
    if 2 <= k <= e - 1:
        a = c[k]
        mono = [0] * e
        mono[k - 1] = a - 1
        preds.append(((k - 1, k + 1), S.mul_monomial(tuple(mono)).scale(a), "power"))
    # x_k x_far -> (x_k - S) x_far
    far = k + 2 if direction == RIGHT else k - 2
    if 1 <= far <= e:
        pair = (min(k, far), max(k, far))
        preds.append((pair, -S.mul_monomial(unit_vector(e, far)), "linear"))
    for pair, pred, kind in preds:
        actual = new.g[pair] - old.g[pair]
        lead_a = _order_part(new.compact(actual).value, m)
        lead_p = _order_part(new.compact(pred).value, m)
        rec.neighbours.append({"pair": list(pair), "kind": kind,
                               "predicted": format_series(lead_p),
                               "actual": format_series(lead_a),
                               "matches": lead_a == lead_p})
    return rec


def _order_part(s: Series, m: int) -> Series:
    return s.filter(lambda mono, c: c.valuation() <= m).truncate(m + 1)


def full_sweep(G: GeneratorSet, direction: str = RIGHT, audit: list | None = None) -> GeneratorSet:
    idx = range(2, G.e) if direction == RIGHT else range(G.e - 1, 1, -1)
    for i in idx:
        G = shift_at(G, i, direction, audit)
    return G


# --- normal form ---------------------------------------------------------------

@dataclass
class NormalizedDeformation:
    chain: Chain
    c: dict[int, Scalar]
    h: dict[int, Series]
    d: dict[int, Scalar]
    generators: GeneratorSet
    passes: int = 0
    audit: list = field(default_factory=list)
    residuals: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "chain": list(self.chain.a),
            "c": {str(i + 1): str(v) for i, v in self.c.items()},
            "h": {str(i): format_series(v) for i, v in self.h.items()},
            "d": {str(i): str(v) for i, v in self.d.items()},
            "passes": self.passes,
            "residual_orders": self.residuals,
            "generators": {f"{p[0]},{p[1]}": format_series(g)
                           for p, g in sorted(self.generators.g.items())},
        }


def shape_parts(G: GeneratorSet, i: int):
    """(c_{i+1}, h_i, d_i, residual) read off the compact tail of g'_{i-1,i+1}."""
    e, spec = G.e, G.spec
    a = G.chain[i]
    tail = G.compact(G.g[(i - 1, i + 1)] - G.template((i - 1, i + 1))).value
    xm = unit_vector(e, i - 1)
    one = (0,) * e
    c = tail.coefficient(xm).divide_t(1)
    d = tail.coefficient(one).divide_t(1)
    h_terms = {}
    residual = {}
    for m, coeff in tail.items():
        if m in (xm, one):
            continue
        if all(x == 0 for k, x in enumerate(m) if k != i - 1) and 1 <= m[i - 1] <= a:
            h_terms[_xpow(e, i, m[i - 1] - 1)] = coeff.divide_t(1)
        else:
            residual[m] = coeff
    return c, Series(e, spec, h_terms), d, Series(e, spec, residual)


def _xpow(e: int, i: int, k: int) -> tuple[int, ...]:
    v = [0] * e
    v[i - 1] = k
    return tuple(v)


def residual_order(G: GeneratorSet) -> int:
    """Minimum t-degree of everything outside the normal-form shape."""
    return min((shape_parts(G, i)[3].min_t_degree() for i in range(2, G.e)),
               default=G.spec.N + 1)


def normalize(G: GeneratorSet, max_passes: int | None = None) -> NormalizedDeformation:
    """Alternate full right and left sweeps until the shape holds mod t^{N+1}."""
    if not G.is_complete:
        raise ToricDefError("normalize needs a completed generator set")
    top = G.spec.N + 1
    limit = top if max_passes is None else max_passes
    audit: list = []
    orders = [residual_order(G)]
    passes = 0
    while passes == 0 or orders[-1] < top:
        if passes >= max(limit, 1):
            raise NoProgress(f"shape not reached after {passes} passes (residual orders {orders})")
        G = full_sweep(G, RIGHT, audit)
        G = full_sweep(G, LEFT, audit)
        passes += 1
        orders.append(residual_order(G))
        if orders[-1] < top and orders[-1] <= orders[-2]:
            raise NoProgress(f"residual t-degree stuck at {orders[-1]} after pass {passes}")
    c, h, d = {}, {}, {}
    for i in range(2, G.e):
        ci, hi, di, _ = shape_parts(G, i)
        c[i], h[i], d[i] = ci, hi, di
    return NormalizedDeformation(G.chain, c, h, d, G, passes, audit, orders)


# --- far generators -------------------------------------------------------------

@dataclass
class FarFormReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def check_far_form(D: NormalizedDeformation) -> FarFormReport:
    """Far tails must be t c_j x_i plus terms in x_{i+1}..x_{j-1} only."""
    G = D.generators
    violations = []
    for (i, j) in G.far_pairs:
        tail = G.compact(G.g[(i, j)] - G.template((i, j))).value
        xi = unit_vector(G.e, i)
        cj = D.c.get(j - 1)
        for m, coeff in tail.items():
            if m == xi:
                if cj is not None and coeff.divide_t(1).truncate(G.spec.N) != cj.truncate(G.spec.N):
                    violations.append({"pair": [i, j], "term": format_series(Series(G.e, G.spec, {m: coeff})),
                                       "reason": "x_i coefficient differs from t*c_j"})
                continue
            if any(x and not (i < k + 1 < j) for k, x in enumerate(m)):
                violations.append({"pair": [i, j], "term": format_series(Series(G.e, G.spec, {m: coeff})),
                                   "reason": "tail term outside the middle variables"})
    return FarFormReport(not violations, violations)
