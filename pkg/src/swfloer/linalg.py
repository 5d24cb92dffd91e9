"""Exact dense linear algebra over Q on list-of-lists matrices.

Vectors are lists of :class:`~fractions.Fraction` (ints are accepted on
input). Everything here is deterministic: pivots are taken in column order,
first available row.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def zeros(rows: int, cols: int, zero=0) -> Matrix:
    return [[zero] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence], cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None, zero=0) -> Matrix:
    """Product of an ``r x k`` and a ``k x c`` matrix for any ring-like entries."""
    rows = len(a)
    k = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        ai = a[i]
        row = []
        for j in range(cols):
            acc = None
            for t in range(k):
                x = ai[t]
                if not x:
                    continue
                y = b[t][j]
                if not y:
                    continue
                acc = x * y if acc is None else acc + x * y
            row.append(zero if acc is None else acc)
        out.append(row)
    return out


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = m[r] = [x * inv for x in pr]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    m[i] = [x - f * y if y else x for x, y in zip(row, pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(m: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : m x = 0} as a list of length-``ncols`` vectors."""
    if not m:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(m)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_space_basis(vectors: Sequence[Sequence]) -> list[list[Fraction]]:
    return rref(vectors)[0]


def extend_to_quotient_basis(sub: Sequence[Sequence], space: Sequence[Sequence]) -> list[list[Fraction]]:
    """Vectors of ``space`` (in order) that extend a basis of ``span(sub)``.

    The returned vectors map to a basis of ``span(space) / span(sub)`` when
    ``span(sub)`` is contained in ``span(space)``.
    """
    red, piv = rref(sub)
    chosen = []
    for v in space:
        w = reduce_against(v, red, piv)
        if any(w):
            chosen.append([Fraction(x) for x in v])
            red, piv = rref(red + [w])
    return chosen


def reduce_against(v: Sequence, red: Sequence[Sequence], piv: Sequence[int]) -> list[Fraction]:
    """Remainder of ``v`` modulo the row space of an RREF basis."""
    w = [Fraction(x) for x in v]
    for row, p in zip(red, piv):
        f = w[p]
        if f:
            w = [x - f * y if y else x for x, y in zip(w, row)]
    return w


def solve_in_span(target: Sequence, basis: Sequence[Sequence]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == target``, or None."""
    n = len(target)
    k = len(basis)
    # augmented system: columns are basis vectors, last column is target
    aug = [[Fraction(basis[i][r]) for i in range(k)] + [Fraction(target[r])] for r in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    coeffs = [Fraction(0)] * k
    for row, p in zip(red, piv):
        coeffs[p] = row[k]
    return coeffs
