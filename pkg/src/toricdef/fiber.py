"""Singularities of the generic fiber, read off the normal form.

At a point lambda of the fiber (t specialised to a nonzero tau), variables far
to the right of the first nonzero coordinate and far to the left of the last
coordinate off -tau*c are eliminated.  What remains is a window of consecutive
equations x_{i-1} y_{i+1} = F_i(x_i) with

    F_i(x) = x^{a_i} - tau * (x h_i(x) + d_i),

and the local type is X(b) with b_i the multiplicity of lambda_i as a root of
F_i, reduced by removing 1s.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chain import SMOOTH, Chain, hj_value, reduce_chain, sub_chain_dominates
from .errors import PointNotOnFiber
from .series import format_series
from .shift import NormalizedDeformation

SMOOTH_VERDICT = "Smooth"
SINGULAR_VERDICT = "Singular"


@dataclass(frozen=True)
class PointSpec:
    field: object
    tau: object
    lam: tuple

    def label(self) -> list:
        return [self.field.element_label(v) for v in self.lam]


@dataclass
class SingularityReport:
    verdict: str
    point: list
    window: tuple[int, int] | None = None
    b: tuple[int, ...] = ()
    reduced: tuple[int, ...] | None = None
    e_prime: int = 2
    n_prime: int = 1
    n: int = 1
    offset: int | None = None
    semicontinuity_ok: tuple[bool, bool, bool] = (True, True, True)
    wild: bool = False

    @property
    def singular(self) -> bool:
        return self.verdict == SINGULAR_VERDICT

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "point": self.point,
            "window": list(self.window) if self.window else None,
            "b": list(self.b),
            "reduced": list(self.reduced) if self.reduced is not None else None,
            "e_prime": self.e_prime,
            "n_prime": self.n_prime,
            "n": self.n,
            "offset": self.offset,
            "semicontinuity_ok": list(self.semicontinuity_ok),
            "wild": self.wild,
        }


def b_chain(D: NormalizedDeformation) -> tuple[int, ...]:
    """b_i = min(a_i, 1 + lowest x_i-degree of h_i); a_i when h_i vanishes."""
    out = []
    for i in range(2, D.chain.e):
        a = D.chain[i]
        h = D.h.get(i)
        if h is None or h.is_zero():
            out.append(a)
            continue
        low = min(m[i - 1] for m in h.terms)
        out.append(min(a, 1 + low))
    return tuple(out)


def fiber_polynomial(D: NormalizedDeformation, i: int, F, tau) -> list:
    """Coefficients (constant first) of F_i over the field F at t = tau."""
    a = D.chain[i]
    coeffs = [F.zero] * (a + 1)
    coeffs[a] = F.from_int(1)
    h = D.h.get(i)
    if h is not None:
        for m, c in h.items():
            k = m[i - 1] + 1
            v = F.mul(tau, c.specialize_t(F, tau))
            if k >= len(coeffs):
                coeffs.extend([F.zero] * (k + 1 - len(coeffs)))
            coeffs[k] = F.sub(coeffs[k], v)
    d = D.d.get(i)
    if d is not None:
        coeffs[0] = F.sub(coeffs[0], F.mul(tau, d.specialize_t(F, tau)))
    return coeffs


def root_multiplicity(coeffs: list, x, F) -> int:
    """Order of vanishing at x of the polynomial with the given coefficients."""
    cur = list(coeffs)
    while cur and cur[-1] == F.zero:
        cur.pop()
    if not cur:
        return -1
    k = 0
    while len(cur) > 1:
        # synthetic division by (X - x)
        q = [F.zero] * (len(cur) - 1)
        acc = F.zero
        for j in range(len(cur) - 1, 0, -1):
            acc = F.add(F.mul(acc, x), cur[j])
            q[j - 1] = acc
        rem = F.add(F.mul(acc, x), cur[0])
        if rem != F.zero:
            break
        cur = q
        k += 1
    return k


def is_wild(chain: Chain, F) -> bool:
    """Residue characteristic at most some a_i or dividing n."""
    p = F.char
    if p == 0:
        return False
    n = hj_value(chain)[0]
    return any(a >= p for a in chain.a) or n % p == 0


def _shift_value(D: NormalizedDeformation, j: int, F, tau):
    """tau * c_j specialised; c_1 = c_2 = 0."""
    c = D.c.get(j - 1) if j >= 3 else None
    if c is None:
        return F.zero
    return F.mul(tau, c.specialize_t(F, tau))


def analyze_point(D: NormalizedDeformation, P: PointSpec, check: bool = True) -> SingularityReport:
    F, tau, lam = P.field, P.tau, tuple(P.lam)
    chain = D.chain
    e = chain.e
    if len(lam) != e:
        raise ValueError(f"point has {len(lam)} coordinates, expected {e}")
    if check:
        for pair, g in D.generators.g.items():
            if g.evaluate(lam, F, tau) != F.zero:
                raise PointNotOnFiber(f"g'{pair} = {format_series(g)} does not vanish at {P.label()}")
    n = hj_value(chain)[0] if chain.a else 1
    wild = is_wild(chain, F)
    i_e = next((i for i in range(1, e + 1) if lam[i - 1] != F.zero), e + 1)
    i_1 = next((i for i in range(e, 0, -1)
                if lam[i - 1] != F.neg(_shift_value(D, i, F, tau))), 0)
    if i_1 > i_e:
        return SingularityReport(SMOOTH_VERDICT, P.label(), n=n, wild=wild)
    lo, hi = max(i_1, 2), min(i_e, e - 1)
    b = []
    for i in range(lo, hi + 1):
        coeffs = fiber_polynomial(D, i, F, tau)
        k = root_multiplicity(coeffs, lam[i - 1], F)
        b.append(chain[i] if k < 0 else min(k, chain[i]))
    b = tuple(b)
    window = (lo, hi)
    red = reduce_chain(b) if b else SMOOTH
    if red is SMOOTH:
        return SingularityReport(SMOOTH_VERDICT, P.label(), window, b, None, 2, 1, n, lo - 2, wild=wild)
    e_prime = red.e
    n_prime = hj_value(red)[0]
    offset = lo - 2
    dominated = sub_chain_dominates(red, chain, offset) or any(
        sub_chain_dominates(red, chain, l) for l in range(0, e - e_prime + 1))
    ok = (e_prime <= e, dominated, n_prime <= n)
    return SingularityReport(SINGULAR_VERDICT, P.label(), window, b, red.a, e_prime, n_prime, n,
                             offset, ok, wild)


@dataclass
class SemicontinuitySummary:
    total: int
    singular: int
    ok: bool
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"total": self.total, "singular": self.singular, "ok": self.ok,
                "violations": self.violations}


def semicontinuity_report(D: NormalizedDeformation, reports: list[SingularityReport]) -> SemicontinuitySummary:
    violations = []
    singular = 0
    for r in reports:
        if not r.singular:
            continue
        singular += 1
        if not all(r.semicontinuity_ok):
            violations.append(r.to_dict())
    return SemicontinuitySummary(len(reports), singular, not violations, violations)
