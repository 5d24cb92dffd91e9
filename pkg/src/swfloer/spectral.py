"""Spectral sequence of the lift filtration on a Z_ell-graded Floer complex.

For a nontorsion datum the cyclic complex ``C_n`` carries the decreasing
filtration ``F_q C_n = span{a : ind_lift(a) = q + j*ell, j >= 0}`` (for
``q = n mod ell``), and the boundary maps ``F_q`` into ``F_{q-1}``. Pages use
the filtration step ell, so

    Z^k_{q,n} = {x in F_q C_n : dx in F_{q-1+k*ell} C_{n-1}}
    E^k_{q,n} = Z^k_{q,n} / (Z^{k-1}_{q+ell,n} + d Z^{k-1}_{q+1-(k-1)ell,n+1})

and ``d^k : E^k_{q,n} -> E^k_{q-1+k*ell,n-1}`` is induced by the boundary.
All linear algebra is over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg
from .datum import NONTORSION, FloerDatum, ValidationFailed, assemble_boundary, validate
from .graded_complex import GradedComplex, Q, homology

__all__ = [
    "FilteredComplex",
    "SpectralPage",
    "build_filtered",
    "page",
    "pages",
    "converge",
    "stable_page_index",
]


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """A cyclic-graded complex over Q with the lift filtration."""

    base: GradedComplex
    filtration_index: Mapping[str, int]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ell(self) -> int:
        return self.base.ell

    def lifts(self, n: int) -> list[int]:
        return [self.filtration_index[g] for g in self.base.generators.get(n, ())]

    def occupied(self) -> list[tuple[int, int]]:
        """Sorted (q, n) cells with at least one generator of lift grade q."""
        return sorted({(q, q % self.ell) for q in self.filtration_index.values()})

    def width(self) -> int:
        qs = list(self.filtration_index.values())
        return max(qs) - min(qs) if qs else 0

    def span_F(self, q: int, n: int) -> list[int]:
        """Coordinates of C_n spanning F_q C_n."""
        return [i for i, lift in enumerate(self.lifts(n)) if lift >= q]

    def boundary(self, n: int) -> list[list[Fraction]]:
        return self.base.boundary(n)

    def apply(self, n: int, v) -> list[Fraction]:
        """Boundary of a vector of C_n, as a vector of C_{n-1}."""
        m = self.boundary(n)
        return [sum((Fraction(x) * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in m]

    # the building blocks of the pages --------------------------------------

    def Z(self, k: int, q: int) -> list[list[Fraction]]:
        """Basis of Z^k_{q,n}, n = q mod ell."""
        key = ("Z", k, q)
        if key not in self._cache:
            n = q % self.ell
            dim = self.base.rank(n)
            cols = self.span_F(q, n)
            if not cols:
                basis = []
            else:
                tgt = self.base.target(n)
                allowed = set(self.span_F(q - 1 + k * self.ell, tgt))
                m = self.boundary(n)
                bad_rows = [r for r in range(self.base.rank(tgt)) if r not in allowed]
                sub = [[m[r][c] for c in cols] for r in bad_rows]
                basis = []
                for w in linalg.nullspace(sub, len(cols)):
                    v = [Fraction(0)] * dim
                    for c, x in zip(cols, w):
                        v[c] = x
                    basis.append(v)
            self._cache[key] = basis
        return self._cache[key]

    def B(self, k: int, q: int) -> list[list[Fraction]]:
        """Spanning set of the denominator Z^{k-1}_{q+ell} + d Z^{k-1}_{q+1-(k-1)ell}."""
        key = ("B", k, q)
        if key not in self._cache:
            n = q % self.ell
            vecs = list(self.Z(k - 1, q + self.ell))
            p = q + 1 - (k - 1) * self.ell
            src = p % self.ell
            if self.base.target(src) == n:
                vecs += [self.apply(src, z) for z in self.Z(k - 1, p)]
            self._cache[key] = linalg.row_space_basis(vecs) if vecs else []
        return self._cache[key]

    def E(self, k: int, q: int) -> list[list[Fraction]]:
        """Representatives of a basis of E^k_{q,n}."""
        key = ("E", k, q)
        if key not in self._cache:
            self._cache[key] = linalg.extend_to_quotient_basis(self.B(k, q), self.Z(k, q))
        return self._cache[key]


@dataclass(frozen=True)
class SpectralPage:
    """One page E^k.

    ``entries`` maps each nonzero cell (q, n) to representative vectors in
    the generator coordinates of C_n; ``differential`` maps a cell to
    ``((q', n'), matrix)`` with the matrix of d^k in those bases.
    """

    page_index: int
    ell: int
    entries: Mapping[tuple[int, int], list[list[Fraction]]]
    differential: Mapping[tuple[int, int], tuple[tuple[int, int], list[list[Fraction]]]]

    def dims(self) -> dict[tuple[int, int], int]:
        return {cell: len(b) for cell, b in self.entries.items() if b}

    def dim(self, q: int, n: int) -> int:
        return len(self.entries.get((q, n), ()))

    def total_dims(self) -> dict[int, int]:
        """Sum over q of dim E^k_{q,n}, for each residue n."""
        out: dict[int, int] = {}
        for (q, n), b in self.entries.items():
            out[n] = out.get(n, 0) + len(b)
        return out

    def differential_ranks(self) -> dict[tuple[int, int], int]:
        return {cell: linalg.rank(m) for cell, (_, m) in self.differential.items() if m and m[0]}

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(b) for (q, n), b in self.entries.items())


def build_filtered(d: FloerDatum) -> FilteredComplex:
    """Filtered Q-complex of a valid nontorsion datum."""
    if d.mode != NONTORSION:
        raise ValueError("the lift filtration is defined for nontorsion data")
    report = validate(d)
    if not report.ok:
        raise ValidationFailed(report)
    base = assemble_boundary(d, Q, grading="cyclic", check=False)
    fil = {p.id: p.ind_lift for p in d.points}
    F = FilteredComplex(base, fil)
    _check_triangular(F)
    return F


def _check_triangular(F: FilteredComplex) -> None:
    for n, gens in F.base.generators.items():
        tgt_ids = F.base.generators.get(F.base.target(n), ())
        m = F.boundary(n)
        for c, a in enumerate(gens):
            for r, b in enumerate(tgt_ids):
                if m[r][c] and F.filtration_index[b] < F.filtration_index[a] - 1:
                    raise ValidationFailed(validate_failure(a, b))


def validate_failure(a, b):
    from .datum import ValidationReport, Violation

    return ValidationReport(
        (Violation("R1", "BelowDiagonalFlow", f"flow {a}->{b}", "boundary leaves the filtration"),)
    )


def _cell(F: FilteredComplex, k: int, q: int):
    n = q % F.ell
    basis = F.E(k, q)
    if not basis:
        return (q, n), basis, None
    q2 = q - 1 + k * F.ell
    n2 = F.base.target(n)
    tgt = F.E(k, q2)
    denom = F.B(k, q2)
    rows = len(tgt)
    mat = [[Fraction(0)] * len(basis) for _ in range(rows)]
    for j, v in enumerate(basis):
        w = F.apply(n, v)
        coeffs = linalg.solve_in_span(w, tgt + denom)
        if coeffs is None:
            raise ArithmeticError(f"d^{k} of a class at {(q, n)} left Z^{k}_{q2}")
        for i in range(rows):
            mat[i][j] = coeffs[i]
    return (q, n), basis, ((q2, n2), mat)


def page(F: FilteredComplex, k: int, executor=None) -> SpectralPage:
    """Page E^k with its differential.

    Cells are independent given ``F``; pass a ``concurrent.futures`` executor
    to evaluate them in parallel. Results are merged in cell order.
    """
    if k < 1:
        raise ValueError("pages start at k = 1")
    qs = [q for q, _ in F.occupied()]
    if executor is None:
        results = [_cell(F, k, q) for q in qs]
    else:
        results = list(executor.map(lambda q: _cell(F, k, q), qs))
    entries = {}
    diff = {}
    for cell, basis, d in results:
        if basis:
            entries[cell] = basis
            if d is not None:
                diff[cell] = d
    return SpectralPage(k, F.ell, entries, diff)


def stable_page_index(F: FilteredComplex) -> int:
    """First k from which every d^k vanishes (k*ell - 1 exceeds the filtration width)."""
    return max(1, math.ceil((F.width() + 2) / F.ell))


def pages(F: FilteredComplex, max_page: int | None = None, executor=None) -> list[SpectralPage]:
    """Pages E^1 .. E^K with K the stable index (or ``max_page`` if given)."""
    last = stable_page_index(F) if max_page is None else max_page
    return [page(F, k, executor) for k in range(1, last + 1)]


def converge(F: FilteredComplex, executor=None) -> tuple[SpectralPage, dict[int, int]]:
    """E-infinity and the per-residue dimensions of the Z_ell-graded homology over Q."""
    e_inf = page(F, stable_page_index(F), executor)
    target = {n: homology(F.base, n).free_rank for n in F.base.grades()}
    return e_inf, target
