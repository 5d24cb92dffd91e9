"""Relative invariants, the Q((t)) pairing, and the gluing check.

A relative invariant is a cycle in a Q((t)) Floer complex, with coefficient
``sum_m value * t^m`` on each generator. The complex of the reversed
boundary is modelled by the same generators with the transposed boundary,
so a class on that side must be a cocycle. The pairing of two chains is
``sum_a x(a) y(a)``; gluing compares it with the generating series of the
closed invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .graded_complex import QTT
from .novikov import NovikovComplex, build_novikov, tensor_laurent
from .datum import GAMMA_LAURENT, CriticalPoint, FloerDatum
from .series import DEFAULT_ORDER, LaurentSeries

__all__ = [
    "NotACycle",
    "MismatchedSupport",
    "RelativeInvariant",
    "ClosedInvariantTable",
    "apply_boundary",
    "apply_coboundary",
    "assemble_relative",
    "pair",
    "glue_check",
    "t2s1_model",
    "builtin_example_t2d2",
    "invariant_counts_from_json",
    "invariant_counts_to_json",
    "closed_table_from_json",
    "closed_table_to_json",
]


class NotACycle(ValueError):
    """The assembled chain has nonzero boundary; ``image`` holds it."""

    def __init__(self, image: Mapping[str, LaurentSeries]):
        self.image = dict(image)
        lead = next(iter(self.image))
        super().__init__(f"chain is not closed: boundary has component on {lead}: {self.image[lead]!r}")


class MismatchedSupport(ValueError):
    """The two chains live on different generator sets."""


@dataclass(frozen=True)
class RelativeInvariant:
    """A chain ``{generator id: coefficient}`` in a single grade.

    ``ambient`` is the full generator set of the complex the chain lives in.
    """

    chain: Mapping[str, LaurentSeries]
    grade: int
    label: str = ""
    ambient: tuple[str, ...] = ()

    def coefficient(self, gid: str, order: int = DEFAULT_ORDER) -> LaurentSeries:
        return self.chain.get(gid, LaurentSeries.zero(order))

    @property
    def truncation_order(self) -> int:
        return min((x.order for x in self.chain.values()), default=DEFAULT_ORDER)

    def scaled(self, c) -> "RelativeInvariant":
        return RelativeInvariant({k: v * c for k, v in self.chain.items()}, self.grade, self.label, self.ambient)


@dataclass(frozen=True)
class ClosedInvariantTable:
    """Closed invariants keyed by the exponent d; absent keys are zero."""

    values: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {int(k): int(v) for k, v in sorted(self.values.items()) if v})

    def series(self, order: int, shift: int = 0) -> LaurentSeries:
        return LaurentSeries({d + shift: v for d, v in self.values.items()}, order)


# ---------------------------------------------------------------------------
# chain-level maps


def _laurent(n: NovikovComplex) -> NovikovComplex:
    return n if n.coefficients == QTT else tensor_laurent(n)


def _grade_of(n: NovikovComplex) -> dict[str, int]:
    return {g: q for q, gens in n.underlying.generators.items() for g in gens}


def apply_boundary(n: NovikovComplex, chain: Mapping[str, LaurentSeries], grade: int) -> dict[str, LaurentSeries]:
    """The boundary of a chain in ``grade``; zero components are dropped."""
    c = _laurent(n).underlying
    src = c.generators.get(grade, ())
    dst = c.generators.get(c.target(grade), ())
    mat = c.boundary(grade)
    out = {}
    for r, b in enumerate(dst):
        acc = None
        for col, a in enumerate(src):
            if a in chain and not mat[r][col].is_zero():
                term = mat[r][col] * chain[a]
                acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            out[b] = acc
    return out


def apply_coboundary(n: NovikovComplex, chain: Mapping[str, LaurentSeries], grade: int) -> dict[str, LaurentSeries]:
    """The transposed boundary: a chain in ``grade`` goes to grade + 1."""
    c = _laurent(n).underlying
    up = c.source(grade)
    src = c.generators.get(grade, ())
    dst = c.generators.get(up, ())
    mat = c.boundary(up) if dst else []
    out = {}
    for col, b in enumerate(dst):
        acc = None
        for r, a in enumerate(src):
            if a in chain and not mat[r][col].is_zero():
                term = mat[r][col] * chain[a]
                acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            out[b] = acc
    return out


def assemble_relative(
    counts: Iterable[tuple[str, int, int]],
    n: NovikovComplex,
    label: str = "",
    transpose: bool = False,
    truncation_order: int | None = None,
) -> RelativeInvariant:
    """Chain with coefficient ``sum_m value t^m`` per point, checked closed.

    With ``transpose`` the chain is checked against the transposed boundary
    (the reversed side of a gluing).
    """
    order = truncation_order or n.truncation_order
    grade_of = _grade_of(n)
    terms: dict[str, list[tuple[int, int]]] = {}
    for gid, m, value in counts:
        if gid not in grade_of:
            raise ValueError(f"unknown point {gid!r}")
        terms.setdefault(gid, []).append((int(m), int(value)))
    grades = {grade_of[g] for g in terms}
    if len(grades) > 1:
        raise ValueError(f"supported points span several grades {sorted(grades)}")
    grade = grades.pop() if grades else min(grade_of.values(), default=0)
    chain = {}
    for gid, ts in terms.items():
        s = LaurentSeries.from_terms(ts, order)
        if not s.is_zero():
            chain[gid] = s
    image = apply_coboundary(n, chain, grade) if transpose else apply_boundary(n, chain, grade)
    if image:
        raise NotACycle(image)
    ambient = tuple(g for q in sorted(n.underlying.generators) for g in n.underlying.generators[q])
    return RelativeInvariant(chain, grade, label, ambient)


# ---------------------------------------------------------------------------
# pairing and gluing


def pair(x: RelativeInvariant, y: RelativeInvariant, shift: int = 0) -> LaurentSeries:
    """``t^shift * sum_a x(a) y(a)`` over Q((t))."""
    if set(x.ambient) != set(y.ambient):
        raise MismatchedSupport("chains live on different generator sets")
    order = min(x.truncation_order, y.truncation_order)
    acc = None
    for gid in sorted(set(x.chain) & set(y.chain)):
        term = x.chain[gid] * y.chain[gid]
        acc = term if acc is None else acc + term
    if acc is None:
        # empty overlap: the product of two zero series of this order
        acc = LaurentSeries.zero(order) * LaurentSeries.zero(order)
    return acc.shift(shift) if shift else acc


def glue_check(
    x: RelativeInvariant,
    y: RelativeInvariant,
    closed: ClosedInvariantTable,
    shift: int = 0,
    truncation: int | None = None,
) -> dict:
    """Compare ``sum_d closed[d] t^(d + shift)`` with ``pair(x, y)`` exponent by exponent.

    Exponents run from the lowest one either side can see up to one below
    the checked order (the pairing's known order, cut at ``truncation``).
    Closed entries at or beyond that order are listed as unchecked.
    """
    p = pair(x, y)
    hi = p.order if truncation is None else min(p.order, truncation)
    lows = [e for e, _ in p.terms()] + [d + shift for d in closed.values]
    lo = min(lows, default=0)
    entries = []
    for e in range(lo, hi):
        want = Fraction(closed.values.get(e - shift, 0))
        got = p[e]
        entries.append({"exponent": e, "closed": want, "paired": got, "match": want == got})
    unchecked = sorted(d for d in closed.values if d + shift >= hi)
    return {
        "shift": shift,
        "checked_below": hi,
        "entries": entries,
        "unchecked_closed_exponents": unchecked,
        "all_match": all(r["match"] for r in entries),
    }


# ---------------------------------------------------------------------------
# the worked example


def t2s1_model(truncation_order: int = DEFAULT_ORDER) -> NovikovComplex:
    """One generator, zero boundary: the Q((t)) complex with homology Q((t))."""
    d = FloerDatum(GAMMA_LAURENT, (CriticalPoint("u", "s0", 0, 0, Fraction(0)),), ())
    return build_novikov(d, truncation_order)


def builtin_example_t2d2(truncation: int = 10):
    """Self-pairing of the relative invariant 1/(t - t^-1) of the solid torus.

    Returns (invariant, pairing, report). The report compares the pairing
    with the closed table d = 2n -> n for 1 <= n, 2n < truncation.
    """
    if truncation < 4:
        raise ValueError("truncation must be at least 4")
    n = t2s1_model(truncation)
    denom = LaurentSeries({1: 1, -1: -1}, truncation)
    inv = denom.inverse()
    x = RelativeInvariant(dict(u=inv), 0, "solid torus", ("u",))
    counts = [("u", e, int(c)) for e, c in inv.terms()]
    y = assemble_relative(counts, n, label="solid torus", truncation_order=inv.order)
    if not y.chain["u"].agrees_with(inv):
        raise ArithmeticError("count assembly disagrees with the inverse series")
    p = pair(x, x)
    table = ClosedInvariantTable({2 * k: k for k in range(1, truncation // 2 + 1) if 2 * k < truncation})
    report = glue_check(x, x, table, truncation=truncation)
    check = inv * denom
    report["inverse_verified_through"] = check.order - 1
    report["inverse_times_denominator_is_one"] = check.agrees_with(LaurentSeries.one(check.order))
    return x, p, report


# ---------------------------------------------------------------------------
# file formats


def _exact(obj, keys, where):
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object")
    extra = set(obj) - set(keys)
    missing = set(keys) - set(obj)
    if extra or missing:
        raise ValueError(f"{where}: unexpected keys {sorted(extra)} / missing {sorted(missing)}")


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"{where}: expected an integer, got {x!r}")
    return x


def invariant_counts_from_json(obj) -> tuple[str, bool, list[tuple[str, int, int]]]:
    """Parse ``{"version": 1, "label", "side", "chain": [[id, [[m, value], ...]], ...]}``.

    ``side`` is ``"Y0"`` or ``"-Y0"`` (the transposed complex). Returns
    (label, transpose, counts).
    """
    _exact(obj, ("version", "label", "side", "chain"), "invariant")
    if obj["version"] != 1 or isinstance(obj["version"], bool):
        raise ValueError(f"unsupported version {obj['version']!r}")
    if not isinstance(obj["label"], str):
        raise ValueError("invariant: label must be a string")
    if obj["side"] not in ("Y0", "-Y0"):
        raise ValueError("invariant: side must be 'Y0' or '-Y0'")
    counts = []
    if not isinstance(obj["chain"], list):
        raise ValueError("invariant: chain must be a list")
    for item in obj["chain"]:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str) and isinstance(item[1], list)):
            raise ValueError(f"invariant: bad chain entry {item!r}")
        for pair_ in item[1]:
            if not (isinstance(pair_, list) and len(pair_) == 2):
                raise ValueError(f"invariant: bad term {pair_!r}")
            counts.append((item[0], _int(pair_[0], "exponent"), _int(pair_[1], "value")))
    return obj["label"], obj["side"] == "-Y0", counts


def invariant_counts_to_json(label: str, counts, side: str = "Y0") -> dict:
    grouped: dict[str, list] = {}
    for gid, m, v in counts:
        grouped.setdefault(gid, []).append([m, v])
    return {"version": 1, "label": label, "side": side, "chain": [[g, ts] for g, ts in grouped.items()]}


def closed_table_from_json(obj) -> ClosedInvariantTable:
    """Parse ``{"version": 1, "table": [[d, value], ...]}``."""
    _exact(obj, ("version", "table"), "closed table")
    if obj["version"] != 1 or isinstance(obj["version"], bool):
        raise ValueError(f"unsupported version {obj['version']!r}")
    vals: dict[int, int] = {}
    if not isinstance(obj["table"], list):
        raise ValueError("closed table: table must be a list")
    for item in obj["table"]:
        if not (isinstance(item, list) and len(item) == 2):
            raise ValueError(f"closed table: bad entry {item!r}")
        d = _int(item[0], "exponent")
        if d in vals:
            raise ValueError(f"closed table: exponent {d} repeated")
        vals[d] = _int(item[1], "value")
    return ClosedInvariantTable(vals)


def closed_table_to_json(t: ClosedInvariantTable) -> dict:
    return {"version": 1, "table": [[d, v] for d, v in t.values.items()]}
