"""Exact linear algebra over the rationals.

Matrices are lists of rows of Fractions.  Everything reduces to reduced
row echelon form; subspaces compare by their canonical RREF basis.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows: list[list[Fraction]]):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m if any(x != 0 for x in row)], pivots


def kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the matrix."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def solve(rows: list[list[Fraction]], rhs: list[Fraction]):
    """One particular solution of A x = b (free variables zero), or None."""
    if not rows:
        return None
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:
        return None  # inconsistent: pivot in the rhs column
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return x


def span_basis(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Canonical (RREF) basis of the row span."""
    red, _ = rref(rows)
    return red


def span_equal(a: list[list[Fraction]], b: list[list[Fraction]]) -> bool:
    return span_basis(a) == span_basis(b)


def span_contains(rows: list[list[Fraction]], v: list[Fraction]) -> bool:
    red, _ = rref(rows)
    w = list(v)
    for row in red:
        pc = next(i for i, x in enumerate(row) if x != 0)
        if w[pc] != 0:
            f = w[pc]
            w = [a - f * b for a, b in zip(w, row)]
    return all(x == 0 for x in w)


def rank(rows: list[list[Fraction]]) -> int:
    return len(span_basis(rows))
