"""Finitely generated graded chain complexes and their homology.

Coefficient systems:

``"Z"``       integers, homology via Smith normal form
``"Q"``       rationals, homology via Gaussian elimination
``"Z[[t]]"``  integral power series; homology computed after base change to
              the discrete valuation ring Q[[t]]
``"Q[[t]]"``  rational power series, valuation-pivot Smith form
``"Q((t))"``  Laurent series field, valuation-aware elimination

A boundary matrix for grade ``n`` has one row per generator of the target
grade and one column per generator of grade ``n``: ``M[b][a] = <da, b>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .series import LaurentSeries, PowerSeries

__all__ = [
    "Z",
    "Q",
    "ZT",
    "QT",
    "QTT",
    "COEFFICIENT_SYSTEMS",
    "NotAComplex",
    "InsufficientTruncation",
    "HomologyGroup",
    "GradedComplex",
    "smith_normal_form",
    "invariant_factors",
    "dvr_smith_form",
    "laurent_rank",
    "homology",
]

Z = "Z"
Q = "Q"
ZT = "Z[[t]]"
QT = "Q[[t]]"
QTT = "Q((t))"
COEFFICIENT_SYSTEMS = (Z, Q, ZT, QT, QTT)


class NotAComplex(ValueError):
    """The composite of two consecutive boundary maps is nonzero."""


class InsufficientTruncation(ArithmeticError):
    """A pivot valuation (or a vanishing) cannot be certified at the current truncation order."""


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated module over a PID, in invariant-factor form.

    For ``ring == "Z"`` the torsion entries are integers ``d > 1`` with each
    dividing the next. For ``ring == "Q[[t]]"`` they are exponents ``a > 0``
    standing for the summand ``Q[[t]]/(t^a)``. Over a field the torsion is
    empty.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    ring: str = Z

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "ring": self.ring}


# ---------------------------------------------------------------------------
# Smith normal form over Z


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, src, dst, q):
    # row_dst += q * row_src
    rs = m[src]
    m[dst] = [x + q * y if y else x for x, y in zip(m[dst], rs)]


def _add_col(m, src, dst, q):
    for row in m:
        y = row[src]
        if y:
            row[dst] += q * y


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """Smith normal form of an integer matrix.

    Returns
    -------
    (U, D, V)
        Integer matrices with ``U @ M @ V == D``, ``U`` and ``V`` unimodular,
        and ``D`` diagonal with non-negative entries ``d_1 | d_2 | ...``.

    The pivot is always the nonzero entry of smallest absolute value in the
    remaining block.
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = linalg.identity(m)
    v = linalg.identity(n)
    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                row = a[i]
                for j in range(s, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                return u, a, v
            _, i, j = best
            if i != s:
                _swap_rows(a, s, i)
                _swap_rows(u, s, i)
            if j != s:
                _swap_cols(a, s, j)
                _swap_cols(v, s, j)
            p = a[s][s]
            clean = True
            for i in range(s + 1, m):
                x = a[i][s]
                if x:
                    q = x // p
                    _add_row(a, s, i, -q)
                    _add_row(u, s, i, -q)
                    if a[i][s]:
                        clean = False
            for j in range(s + 1, n):
                x = a[s][j]
                if x:
                    q = x // p
                    _add_col(a, s, j, -q)
                    _add_col(v, s, j, -q)
                    if a[s][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, m) if any(a[i][j] % p for j in range(s + 1, n))),
                None,
            )
            if bad is None:
                break
            _add_row(a, bad, s, 1)
            _add_row(u, bad, s, 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]
    return u, a, v


def invariant_factors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form (units included)."""
    _, d, _ = smith_normal_form(matrix)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return out


# ---------------------------------------------------------------------------
# elimination over truncated series


def _as_laurent(x) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, PowerSeries):
        return x.to_laurent()
    raise TypeError(f"expected a series entry, got {type(x).__name__}")


def _row_degree(row: Sequence[LaurentSeries]) -> float:
    top = -math.inf
    for x in row:
        if x.coefficients:
            top = max(top, max(x.coefficients))
    return top


def _valuation_pivots(matrix: Sequence[Sequence], order: int | None = None) -> list[int]:
    """Valuations of successive minimal-valuation pivots.

    Entries are read as exact Laurent polynomials (every complex assembled
    from a datum has this form); the truncation order only sets the working
    precision. A residual block that is zero to working precision is accepted
    as exactly zero only when a degree bound on the relevant minors certifies
    it, otherwise :class:`InsufficientTruncation` is raised.
    """
    rows = [[_as_laurent(x) for x in row] for row in matrix]
    if not rows or not rows[0]:
        return []
    degree = [_row_degree(r) for r in rows]
    if order is not None:
        rows = [[x.with_order(order) for x in row] for row in rows]
    active_rows = list(range(len(rows)))
    active_cols = list(range(len(rows[0])))
    pivots: list[int] = []
    used_degree = 0
    while active_rows and active_cols:
        best = None
        for i in active_rows:
            row = rows[i]
            for j in active_cols:
                v = row[j].valuation
                if v != math.inf and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            pivot_val = sum(pivots)
            for i in active_rows:
                if degree[i] == -math.inf:
                    continue
                # any nonzero (k+1)-minor through row i has valuation <= this
                needed = used_degree + degree[i] - pivot_val
                for j in active_cols:
                    if rows[i][j].order <= needed:
                        raise InsufficientTruncation(
                            f"cannot certify vanishing of residual entry ({i}, {j}): "
                            f"known to order {rows[i][j].order}, need > {needed}"
                        )
            break
        v, pi, pj = best
        pivots.append(int(v))
        used_degree += degree[pi]
        prow = rows[pi]
        pinv = prow[pj].inverse()
        active_rows.remove(pi)
        active_cols.remove(pj)
        for i in active_rows:
            row = rows[i]
            f = row[pj] * pinv
            for j in active_cols:
                row[j] = row[j] - f * prow[j]
    return pivots


def dvr_smith_form(matrix: Sequence[Sequence], order: int | None = None) -> list[int]:
    """Smith form over Q[[t]]: exponents ``a_1 <= a_2 <= ...`` of the diagonal ``t^a_i``.

    Units are normalized to 1, so a unit pivot contributes exponent 0.
    """
    for row in matrix:
        for x in row:
            if _as_laurent(x).valuation < 0:
                raise ValueError("dvr_smith_form needs power-series entries")
    return _valuation_pivots(matrix, order)


def laurent_rank(matrix: Sequence[Sequence], order: int | None = None) -> int:
    """Rank over the field Q((t))."""
    return len(_valuation_pivots(matrix, order))


# ---------------------------------------------------------------------------
# graded complexes


@dataclass(frozen=True, eq=False)
class GradedComplex:
    """A graded chain complex with boundary of degree -1.

    ``grading`` is ``"integer"`` or ``"cyclic"``; cyclic complexes keep grades
    as residues mod ``ell`` and the boundary of grade ``n`` lands in grade
    ``(n - 1) mod ell``. Missing boundary matrices are zero.
    """

    generators: Mapping[int, tuple[str, ...]]
    boundaries: Mapping[int, list[list]] = field(default_factory=dict)
    coefficients: str = Z
    grading: str = "integer"
    ell: int | None = None
    truncation_order: int | None = None

    def __post_init__(self):
        if self.coefficients not in COEFFICIENT_SYSTEMS:
            raise ValueError(f"unknown coefficient system {self.coefficients!r}")
        if self.grading not in ("integer", "cyclic"):
            raise ValueError(f"unknown grading {self.grading!r}")
        if self.grading == "cyclic" and (self.ell is None or self.ell < 1):
            raise ValueError("cyclic grading needs ell >= 1")
        gens = {int(k): tuple(v) for k, v in self.generators.items() if len(v)}
        if self.grading == "cyclic" and any(not 0 <= k < self.ell for k in gens):
            raise ValueError("cyclic grades must be residues in [0, ell)")
        object.__setattr__(self, "generators", dict(sorted(gens.items())))
        bds = {}
        for n, mat in self.boundaries.items():
            src = len(gens.get(n, ()))
            dst = len(gens.get(self.target(n), ()))
            if src == 0 or dst == 0:
                if any(any(_nonzero(x) for x in row) for row in mat):
                    raise ValueError(f"nonzero boundary out of empty grade {n}")
                continue
            if len(mat) != dst or any(len(row) != src for row in mat):
                raise ValueError(f"boundary at grade {n} should be {dst}x{src}")
            bds[int(n)] = [list(row) for row in mat]
        object.__setattr__(self, "boundaries", dict(sorted(bds.items())))

    # ------------------------------------------------------------------

    def target(self, n: int) -> int:
        return (n - 1) % self.ell if self.grading == "cyclic" else n - 1

    def source(self, n: int) -> int:
        """Grade whose boundary lands in grade ``n``."""
        return (n + 1) % self.ell if self.grading == "cyclic" else n + 1

    def grades(self) -> list[int]:
        return list(self.generators)

    def rank(self, n: int) -> int:
        return len(self.generators.get(n, ()))

    def zero_entry(self):
        if self.coefficients in (Z, Q):
            return 0
        order = self.truncation_order or 32
        if self.coefficients == QTT:
            return LaurentSeries.zero(order)
        return PowerSeries.zero(order)

    def boundary(self, n: int) -> list[list]:
        mat = self.boundaries.get(n)
        if mat is not None:
            return mat
        return linalg.zeros(self.rank(self.target(n)), self.rank(n), self.zero_entry())

    def check(self) -> "GradedComplex":
        """Raise :class:`NotAComplex` unless every composite ``d d`` vanishes."""
        for n in self.boundaries:
            m = self.target(n)
            if m not in self.boundaries:
                continue
            prod = linalg.matmul(self.boundaries[m], self.boundaries[n], zero=self.zero_entry())
            for r, row in enumerate(prod):
                for c, x in enumerate(row):
                    if _nonzero(x):
                        raise NotAComplex(
                            f"d∘d nonzero from grade {n}: generator {self.generators[n][c]} "
                            f"-> {self.generators[self.target(m)][r]} ({x})"
                        )
        return self

    def map_entries(self, fn, coefficients: str) -> "GradedComplex":
        return GradedComplex(
            self.generators,
            {n: [[fn(x) for x in row] for row in mat] for n, mat in self.boundaries.items()},
            coefficients=coefficients,
            grading=self.grading,
            ell=self.ell,
            truncation_order=self.truncation_order,
        )

    def permuted(self, perms: Mapping[int, Sequence[int]]) -> "GradedComplex":
        """Reorder generators within grades; ``perms[n][i]`` is the old index of new slot ``i``."""
        def p(n):
            return list(perms.get(n, range(self.rank(n))))

        gens = {n: tuple(g[i] for i in p(n)) for n, g in self.generators.items()}
        bds = {}
        for n, mat in self.boundaries.items():
            rp, cp = p(self.target(n)), p(n)
            bds[n] = [[mat[r][c] for c in cp] for r in rp]
        return GradedComplex(gens, bds, self.coefficients, self.grading, self.ell, self.truncation_order)


def _nonzero(x) -> bool:
    if isinstance(x, (LaurentSeries, PowerSeries)):
        return not x.is_zero()
    return bool(x)


def _field_rank(mat, coefficients, order) -> int:
    if not mat or not mat[0]:
        return 0
    if coefficients in (Z, Q):
        return linalg.rank(mat)
    return laurent_rank(mat, order)


def homology(c: GradedComplex, n: int, check: bool = True) -> HomologyGroup:
    """``ker d_n / im d_(n+1)`` in invariant-factor form.

    Over Z the torsion comes from the Smith form of the incoming boundary;
    over Z[[t]] and Q[[t]] from its valuation-pivot Smith form (the result is
    the Q[[t]]-module); over Q and Q((t)) it is empty.
    """
    if check:
        c.check()
    dim = c.rank(n)
    out_mat = c.boundary(n)
    in_mat = c.boundary(c.source(n)) if c.target(c.source(n)) == n else []
    order = c.truncation_order
    if c.coefficients == Z:
        rank_out = len(invariant_factors(out_mat)) if dim and out_mat else 0
        factors = invariant_factors(in_mat) if dim and in_mat and in_mat[0] else []
        torsion = tuple(d for d in factors if d > 1)
        return HomologyGroup(dim - rank_out - len(factors), torsion, Z)
    if c.coefficients in (ZT, QT):
        rank_out = len(dvr_smith_form(out_mat, order)) if dim and out_mat and out_mat[0] else 0
        factors = dvr_smith_form(in_mat, order) if dim and in_mat and in_mat[0] else []
        torsion = tuple(a for a in factors if a > 0)
        return HomologyGroup(dim - rank_out - len(factors), torsion, QT)
    rank_out = _field_rank(out_mat, c.coefficients, order) if dim else 0
    rank_in = _field_rank(in_mat, c.coefficients, order) if dim and in_mat else 0
    return HomologyGroup(dim - rank_out - rank_in, (), c.coefficients)


def to_rational(c: GradedComplex) -> GradedComplex:
    """Base change Z -> Q."""
    if c.coefficients not in (Z, Q):
        raise ValueError("only integer complexes tensor down to Q here")
    return c.map_entries(Fraction, Q)
