"""Block-diagonal data: the boundary splits along lift grades.

When every flow has level 0 and drops the lift by exactly one, the total
Z_ell-graded boundary is the direct sum of the integer-graded boundaries
``d_(q+k*ell)``, and the homology in residue n is the direct sum of the
integer-graded homology groups in the lift grades congruent to n.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .datum import NONTORSION, FloerDatum, ValidationFailed, Violation, assemble_boundary, validate
from .graded_complex import Z, GradedComplex, HomologyGroup, homology

__all__ = [
    "NotBlockDiagonal",
    "BlockDecomposition",
    "decompose",
    "recombine",
    "direct_sum_homology",
    "prime_power_components",
]


class NotBlockDiagonal(ValueError):
    """Some flow crosses between blocks."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        first = self.violations[0]
        super().__init__(f"{len(self.violations)} cross-block flows, first at {first.location}")


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """The integer-graded slices of a block-diagonal datum.

    ``lifted`` is the complex graded by lift; ``blocks[q]`` is the slice
    ``C_(q+1) -> C_(q) -> C_(q-1)`` whose middle homology is ``HF_(q)``;
    ``total`` is the Z_ell-graded complex.
    """

    lifted: GradedComplex
    total: GradedComplex
    ell: int

    @property
    def blocks(self) -> dict[int, GradedComplex]:
        out = {}
        c = self.lifted
        for q in c.grades():
            gens = {g: c.generators[g] for g in (q - 1, q, q + 1) if g in c.generators}
            bds = {g: c.boundaries[g] for g in (q, q + 1) if g in c.boundaries}
            out[q] = GradedComplex(gens, bds, Z)
        return out

    def grades_in_residue(self, n: int) -> list[int]:
        return [q for q in self.lifted.grades() if q % self.ell == n]


def _cross_block(d: FloerDatum) -> list[Violation]:
    pts = d.point_map()
    out = []
    for f in d.flows:
        drop = pts[f.from_id].ind_lift - pts[f.to_id].ind_lift
        if f.level != 0 or drop != 1:
            loc = f"flow {f.from_id}->{f.to_id}@{f.level}"
            out.append(Violation("B1", "NotBlockDiagonal", loc, "flow leaves its block"))
    return sorted(out)


def decompose(d: FloerDatum) -> BlockDecomposition:
    """Split a block-diagonal nontorsion datum by lift grade."""
    if d.mode != NONTORSION:
        raise ValueError("block decomposition applies to nontorsion data")
    cross = _cross_block(d)
    if cross:
        raise NotBlockDiagonal(cross)
    report = validate(d)
    if not report.ok:
        b1 = [v for v in report.errors if v.rule == "B1"]
        if b1:
            raise NotBlockDiagonal(b1)
        raise ValidationFailed(report)
    lifted = assemble_boundary(d, Z, grading="lift", check=False)
    total = assemble_boundary(d, Z, grading="cyclic", check=False)
    return BlockDecomposition(lifted, total, d.ell)


def recombine(b: BlockDecomposition) -> GradedComplex:
    """Rebuild the Z_ell-graded complex as the direct sum of the slices.

    Generators of residue n are listed lift grade by lift grade, in the
    order they appear in each slice.
    """
    ell = b.ell
    c = b.lifted
    gens: dict[int, list[str]] = {}
    offset: dict[int, int] = {}
    for q in c.grades():
        n = q % ell
        lst = gens.setdefault(n, [])
        offset[q] = len(lst)
        lst.extend(c.generators[q])
    mats = {n: [[0] * len(g) for _ in gens.get((n - 1) % ell, ())] for n, g in gens.items()}
    for q, mat in c.boundaries.items():
        n = q % ell
        for r, row in enumerate(mat):
            for col, x in enumerate(row):
                if x:
                    mats[n][offset[q - 1] + r][offset[q] + col] = x
    return GradedComplex(
        {n: tuple(g) for n, g in gens.items()}, mats, Z, grading="cyclic", ell=ell
    )


def prime_power_components(factors) -> Counter:
    """Multiset of prime powers p^k in the primary decomposition of ⊕ Z/f."""
    out: Counter = Counter()
    for f in factors:
        f = abs(int(f))
        p = 2
        while p * p <= f:
            if f % p == 0:
                k = 0
                while f % p == 0:
                    f //= p
                    k += 1
                out[p**k] += 1
            p += 1
        if f > 1:
            out[f] += 1
    return out


def direct_sum_homology(b: BlockDecomposition) -> dict[int, dict]:
    """Compare HF_n of the total complex with the sum of the slice homologies.

    Returns, per residue n, the total group, the block groups, and match
    flags for free rank and prime-power torsion.
    """
    lifted = b.lifted
    lifted.check()
    b.total.check()
    out = {}
    residues = sorted(set(b.total.grades()))
    for n in residues:
        total = homology(b.total, n, check=False)
        parts: Mapping[int, HomologyGroup] = {
            q: homology(lifted, q, check=False) for q in b.grades_in_residue(n)
        }
        free = sum(h.free_rank for h in parts.values())
        torsion = Counter()
        for h in parts.values():
            torsion += prime_power_components(h.torsion)
        total_torsion = prime_power_components(total.torsion)
        out[n] = {
            "total": total,
            "blocks": dict(parts),
            "free_match": total.free_rank == free,
            "torsion_match": total_torsion == torsion,
            "match": total.free_rank == free and total_torsion == torsion,
        }
    return out
