"""Dense Gaussian elimination over a field object from :mod:`toricdef.fields`."""
from __future__ import annotations


def solve(rows: list[list], rhs: list, field) -> list | None:
    """One solution of ``rows @ x == rhs`` (free variables set to 0), or None."""
    n_rows = len(rows)
    if n_rows == 0:
        return []
    n_cols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((k for k in range(r, n_rows) if aug[k][c] != field.zero), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = field.inv(aug[r][c])
        aug[r] = [field.mul(inv, v) for v in aug[r]]
        for k in range(n_rows):
            if k != r and aug[k][c] != field.zero:
                f = aug[k][c]
                aug[k] = [field.sub(v, field.mul(f, w)) for v, w in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for k in range(r, n_rows):
        if aug[k][-1] != field.zero:
            return None
    x = [field.zero] * n_cols
    for k, c in enumerate(pivots):
        x[c] = aug[k][-1]
    return x


def rank(rows: list[list], field) -> int:
    """Row rank of a matrix with entries in ``field``."""
    mat = [list(r) for r in rows if any(v != field.zero for v in r)]
    if not mat:
        return 0
    n_cols = len(mat[0])
    rk = 0
    for c in range(n_cols):
        piv = next((k for k in range(rk, len(mat)) if mat[k][c] != field.zero), None)
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        inv = field.inv(mat[rk][c])
        prow = [field.mul(inv, v) for v in mat[rk]]
        mat[rk] = prow
        for k in range(rk + 1, len(mat)):
            f = mat[k][c]
            if f != field.zero:
                mat[k] = [field.sub(v, field.mul(f, w)) for v, w in zip(mat[k], prow)]
        rk += 1
        if rk == len(mat):
            break
    return rk


def solve_random(rows: list[list], rhs: list, field, pick) -> list | None:
    """A solution whose free variable in column c is drawn with ``pick(c)``, or None."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((k for k in range(r, n_rows) if aug[k][c] != field.zero), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = field.inv(aug[r][c])
        aug[r] = [field.mul(inv, v) for v in aug[r]]
        for k in range(n_rows):
            if k != r and aug[k][c] != field.zero:
                f = aug[k][c]
                aug[k] = [field.sub(v, field.mul(f, w)) for v, w in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for k in range(r, n_rows):
        if aug[k][-1] != field.zero:
            return None
    pivot_set = set(pivots)
    x = [field.zero if c in pivot_set else pick(c) for c in range(n_cols)]
    for k, c in enumerate(pivots):
        v = aug[k][-1]
        for f in range(n_cols):
            if f not in pivot_set and aug[k][f] != field.zero:
                v = field.sub(v, field.mul(aug[k][f], x[f]))
        x[c] = v
    return x
