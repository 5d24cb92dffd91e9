"""Novikov complexes: boundary entries are generating series in the flow level.

Torsion-novikov data give a complex over Z[[t]]; its t = 0 evaluation is the
integer complex of the level-0 flows, and its Q[[t]] structure records the
t-adic torsion. Gamma-laurent data give a complex over the field Q((t)).
Base change from Z[[t]] goes straight to Q((t)) when field dimensions are
wanted.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .datum import (
    GAMMA_LAURENT,
    TORSION_NOVIKOV,
    FloerDatum,
    ValidationFailed,
    assemble_boundary,
    validate,
)
from .graded_complex import QTT, Z, ZT, GradedComplex, HomologyGroup, homology
from .series import DEFAULT_ORDER, LaurentSeries, PowerSeries, power_eval_t0

__all__ = [
    "NovikovComplex",
    "build_novikov",
    "hf_gamma",
    "evaluate_t0",
    "t_torsion",
    "tensor_laurent",
]


@dataclass(frozen=True, eq=False)
class NovikovComplex:
    """A series-valued complex with the levels it was built from.

    ``level_data[(a, b)]`` lists the (level, count) terms of the flows a -> b.
    """

    underlying: GradedComplex
    level_data: Mapping[tuple[str, str], tuple[tuple[int, int], ...]]
    truncation_order: int
    mode: str

    @property
    def coefficients(self) -> str:
        return self.underlying.coefficients

    def grades(self) -> list[int]:
        return self.underlying.grades()


def build_novikov(d: FloerDatum, truncation_order: int = DEFAULT_ORDER) -> NovikovComplex:
    """Assemble the series complex of a torsion-novikov or gamma-laurent datum."""
    if d.mode not in (TORSION_NOVIKOV, GAMMA_LAURENT):
        raise ValueError(f"{d.mode} data have no Novikov complex")
    report = validate(d)
    if not report.ok:
        raise ValidationFailed(report)
    c = assemble_boundary(d, truncation_order=truncation_order, check=False)
    levels: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)
    for f in d.flows:
        levels[(f.from_id, f.to_id)].append((f.level, f.count))
    data = {k: tuple(sorted(v)) for k, v in sorted(levels.items())}
    return NovikovComplex(c, data, truncation_order, d.mode)


def hf_gamma(n: NovikovComplex) -> dict[int, int]:
    """Dimension over Q((t)) of each homology grade.

    Raises InsufficientTruncation when the truncation order cannot certify
    a rank.
    """
    c = n.underlying if n.coefficients == QTT else tensor_laurent(n).underlying
    return {g: homology(c, g, check=False).free_rank for g in c.grades()}


def evaluate_t0(n: NovikovComplex) -> GradedComplex:
    """Integer complex of constant terms."""
    if n.coefficients != ZT:
        raise ValueError("t = 0 evaluation needs a Z[[t]] complex")
    return n.underlying.map_entries(power_eval_t0, Z)


def t_torsion(n: NovikovComplex) -> dict[int, HomologyGroup]:
    """Homology as a Q[[t]]-module: free rank plus exponents a_i of Q[[t]]/(t^a_i)."""
    if n.coefficients != ZT:
        raise ValueError("t-torsion is defined for Z[[t]] complexes")
    c = n.underlying
    return {g: homology(c, g, check=False) for g in c.grades()}


def tensor_laurent(n: NovikovComplex) -> NovikovComplex:
    """Base change of a Z[[t]] complex to Q((t))."""
    if n.coefficients == QTT:
        return n

    def up(x):
        return x.to_laurent() if isinstance(x, PowerSeries) else LaurentSeries({0: x}, n.truncation_order)

    return NovikovComplex(n.underlying.map_entries(up, QTT), n.level_data, n.truncation_order, n.mode)
