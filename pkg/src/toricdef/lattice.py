"""Semigroup model of X(a) in Z^2.

Variables map to lattice vectors w_1 = (1,0), w_2 = (1,1),
w_{i+1} = a_i w_i - w_{i-1}; a monomial maps to the weighted sum of the
w_i.  Each g_{i,j} is homogeneous for this grading, so membership and
divisibility questions in the special fiber become questions about lattice
points in the cone spanned by w_1 and w_e.
"""
from __future__ import annotations

from dataclasses import dataclass

from .chain import Chain
from .errors import NotInCone, NotRepresentable

Point = tuple[int, int]


def cross(u: Point, v: Point) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class LatticeModel:
    chain: Chain
    w: tuple[Point, ...]

    @property
    def e(self) -> int:
        return self.chain.e

    def mu(self, m) -> Point:
        x = y = 0
        for k, (wx, wy) in zip(m, self.w):
            if k:
                x += k * wx
                y += k * wy
        return (x, y)

    def cone_contains(self, z: Point) -> bool:
        return cross(self.w[0], z) >= 0 and cross(z, self.w[-1]) >= 0

    def quasi_divisible(self, m, l: int) -> bool:
        z = self.mu(m)
        wl = self.w[l - 1]
        return self.cone_contains((z[0] - wl[0], z[1] - wl[1]))

    def window_of(self, z: Point) -> int:
        """Smallest i (1-based) with z in cone(w_i, w_{i+1})."""
        for i in range(len(self.w) - 1):
            if cross(self.w[i], z) >= 0 and cross(z, self.w[i + 1]) >= 0:
                return i + 1
        raise NotInCone(f"{z} is outside the cone")

    def canonical_monomial(self, z: Point) -> tuple[int, ...]:
        """x_i^alpha x_{i+1}^beta with mu = z, smallest window index i."""
        if not self.cone_contains(z):
            raise NotInCone(f"{z} is outside the cone")
        e = self.e
        if e == 2:
            return self._solve_window(z, 1)
        i = self.window_of(z)
        return self._solve_window(z, i)

    def _solve_window(self, z: Point, i: int) -> tuple[int, ...]:
        u, v = self.w[i - 1], self.w[i]
        det = cross(u, v)
        a_num = cross(z, v)
        b_num = cross(u, z)
        if a_num % det or b_num % det:
            raise NotRepresentable(f"{z} is not in the semigroup")
        alpha, beta = a_num // det, b_num // det
        if alpha < 0 or beta < 0:
            raise NotRepresentable(f"{z} has no nonnegative representation in window {i}")
        out = [0] * self.e
        out[i - 1] = alpha
        out[i] = beta
        return tuple(out)


def build(c: Chain) -> LatticeModel:
    c.require_reduced()
    w = [(1, 0), (1, 1)]
    for i in range(2, c.e):
        a = c[i]
        prev, cur = w[-2], w[-1]
        w.append((a * cur[0] - prev[0], a * cur[1] - prev[1]))
    w = w[: c.e] if c.e >= 2 else w
    model = LatticeModel(c, tuple(w))
    for k in range(len(model.w) - 1):
        assert cross(model.w[k], model.w[k + 1]) > 0
    return model


def cone_contains(L: LatticeModel, z: Point) -> bool:
    return L.cone_contains(z)


def quasi_divisible(L: LatticeModel, m, l: int) -> bool:
    return L.quasi_divisible(m, l)


def canonical_monomial(L: LatticeModel, z: Point) -> tuple[int, ...]:
    return L.canonical_monomial(z)
