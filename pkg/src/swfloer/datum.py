"""Floer datum: the finite input describing critical points and flow counts.

A datum lists critical points (with their integer index lift and the CSD
value of the chosen lift, in units of 8*pi^2) and signed counts of
zero-dimensional flow components, each tagged with an integer level. The
meaning of the level depends on the mode:

``nontorsion``      the k of the component d_{q,k}; a level-k flow goes from
                    lift grade q to q - 1 + k*ell
``torsion-novikov`` the n of the fixed-energy stratum e_min + n*e_rho (n >= 0)
``gamma-laurent``   the integer energy index n (any sign, bounded below)

:func:`validate` checks every structural rule such data must satisfy and
:func:`assemble_boundary` turns a valid datum into a :class:`GradedComplex`.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .graded_complex import QTT, ZT, Z, Q, GradedComplex, InsufficientTruncation
from .series import DEFAULT_ORDER, LaurentSeries, PowerSeries, format_rational, parse_rational

__all__ = [
    "MODES",
    "NONTORSION",
    "TORSION_NOVIKOV",
    "GAMMA_LAURENT",
    "CriticalPoint",
    "FlowClass",
    "FloerDatum",
    "Violation",
    "ValidationReport",
    "ValidationFailed",
    "MalformedDatum",
    "validate",
    "assemble_boundary",
    "boundary_blocks",
    "restrict_min_level",
    "load_datum",
    "loads_datum",
    "dumps_datum",
]

NONTORSION = "nontorsion"
TORSION_NOVIKOV = "torsion-novikov"
GAMMA_LAURENT = "gamma-laurent"
MODES = (NONTORSION, TORSION_NOVIKOV, GAMMA_LAURENT)

ERROR = "error"
WARNING = "warning"


class MalformedDatum(ValueError):
    """The document is not a well-formed datum file."""


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    spinc_label: str = ""
    grade_mod_ell: int = 0
    ind_lift: int = 0
    csd_lift: Fraction = Fraction(0)


@dataclass(frozen=True)
class FlowClass:
    from_id: str
    to_id: str
    level: int
    count: int


@dataclass(frozen=True)
class FloerDatum:
    mode: str
    points: tuple[CriticalPoint, ...] = ()
    flows: tuple[FlowClass, ...] = ()
    ell: int = 1
    omega: Fraction = Fraction(0)
    e_rho: Fraction = Fraction(1)
    block_diagonal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "flows", tuple(self.flows))
        object.__setattr__(self, "omega", Fraction(self.omega))
        object.__setattr__(self, "e_rho", Fraction(self.e_rho))

    def point_map(self) -> dict[str, CriticalPoint]:
        return {p.id: p for p in self.points}


@dataclass(frozen=True, order=True)
class Violation:
    rule: str
    name: str
    location: str
    message: str = field(compare=False)
    severity: str = field(default=ERROR, compare=False)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "name": self.name,
            "location": self.location,
            "message": self.message,
            "severity": self.severity,
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == ERROR)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def to_json(self) -> list[dict]:
        return [v.to_json() for v in self.violations]


class ValidationFailed(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        names = ", ".join(f"{v.rule}:{v.name}" for v in report.errors[:5])
        super().__init__(f"datum failed validation ({names})")


# ---------------------------------------------------------------------------
# validation


def _flow_loc(f: FlowClass) -> str:
    return f"flow {f.from_id}->{f.to_id}@{f.level}"


def _structural(d: FloerDatum) -> list[Violation]:
    out = []
    if d.mode not in MODES:
        out.append(Violation("S0", "UnknownMode", "datum", f"mode {d.mode!r} is not one of {MODES}"))
    if d.mode == NONTORSION and d.ell < 1:
        out.append(Violation("S5", "BadPeriodicity", "datum", f"ell = {d.ell} must be >= 1"))
    if d.mode != NONTORSION and d.e_rho <= 0:
        out.append(Violation("S6", "NonpositiveEnergyQuantum", "datum", f"e_rho = {d.e_rho} must be > 0"))
    seen = set()
    for p in d.points:
        if p.id in seen:
            out.append(Violation("S2", "DuplicatePoint", f"point {p.id}", "point identifiers must be unique"))
        seen.add(p.id)
    keys = set()
    for f in d.flows:
        for end in (f.from_id, f.to_id):
            if end not in seen:
                out.append(Violation("S1", "UnknownPoint", _flow_loc(f), f"no critical point {end!r}"))
        key = (f.from_id, f.to_id, f.level)
        if key in keys:
            out.append(Violation("S3", "DuplicateFlow", _flow_loc(f), "(from, to, level) must be unique"))
        keys.add(key)
        if f.count == 0:
            out.append(Violation("S4", "ZeroCount", _flow_loc(f), "zero counts must be omitted"))
    return out


def _square_zero(d: FloerDatum, pts: dict[str, CriticalPoint], rule: str) -> list[Violation]:
    """Check <d d a, c> = 0 level by level (levels add along broken flows)."""
    out_of: dict[str, list[FlowClass]] = defaultdict(list)
    for f in d.flows:
        if f.from_id in pts and f.to_id in pts:
            out_of[f.from_id].append(f)
    totals: dict[tuple[str, str, int], int] = defaultdict(int)
    for a in sorted(out_of):
        for f in out_of[a]:
            for g in out_of.get(f.to_id, ()):
                totals[(a, g.to_id, f.level + g.level)] += f.count * g.count
    out = []
    for (a, c, n), v in sorted(totals.items()):
        if v:
            out.append(
                Violation(
                    rule,
                    "BoundarySquareNonzero",
                    f"pair {a}->{c}@{n}",
                    f"sum over broken flows {a}->b->{c} at total level {n} is {v}, not 0",
                )
            )
    return out


def _validate_nontorsion(d: FloerDatum, pts) -> list[Violation]:
    out = []
    ell = d.ell
    if ell >= 1 and ell % 2:
        out.append(
            Violation("R4", "OddPeriodicity", "datum", f"ell = {ell} is odd; geometric data have even ell", WARNING)
        )
    for p in d.points:
        loc = f"point {p.id}"
        if ell >= 1:
            if not 0 <= p.grade_mod_ell < ell:
                out.append(Violation("R3", "GradeOutOfRange", loc, f"grade_mod_ell {p.grade_mod_ell} not in [0, {ell})"))
            elif (p.ind_lift - p.grade_mod_ell) % ell:
                out.append(
                    Violation("R3", "GradeLiftMismatch", loc, f"ind_lift {p.ind_lift} != grade {p.grade_mod_ell} mod {ell}")
                )
            if not d.omega < p.csd_lift < d.omega + ell:
                out.append(
                    Violation(
                        "R3",
                        "CsdWindowBreach",
                        loc,
                        f"csd_lift {p.csd_lift} outside ({d.omega}, {d.omega + ell})",
                    )
                )
    for f in d.flows:
        if f.from_id not in pts or f.to_id not in pts:
            continue
        a, b = pts[f.from_id], pts[f.to_id]
        loc = _flow_loc(f)
        drop = a.ind_lift - b.ind_lift
        if f.level < 0:
            out.append(Violation("R1", "BelowDiagonalFlow", loc, f"level {f.level} < 0 lies below the diagonal"))
        elif drop != 1 - f.level * ell:
            out.append(
                Violation("R1", "IndexDropMismatch", loc, f"index drop {drop} != 1 - {f.level}*{ell}")
            )
        if f.level == 0 and not a.csd_lift > b.csd_lift:
            out.append(
                Violation("R2", "CsdNotDecreasing", loc, f"csd {a.csd_lift} -> {b.csd_lift} does not decrease")
            )
        if d.block_diagonal and (f.level != 0 or drop != 1):
            out.append(Violation("B1", "NotBlockDiagonal", loc, "block-diagonal data need level 0 and index drop 1"))
    out += _square_zero(d, pts, "R5")
    return out


def _validate_novikov(d: FloerDatum, pts) -> list[Violation]:
    out = []
    for f in d.flows:
        if f.from_id not in pts or f.to_id not in pts:
            continue
        a, b = pts[f.from_id], pts[f.to_id]
        loc = _flow_loc(f)
        if a.ind_lift - b.ind_lift != 1:
            out.append(
                Violation("G1", "IndexDropMismatch", loc, f"relative index {a.ind_lift - b.ind_lift} != 1")
            )
        # levels of a finite list are always bounded below; torsion-novikov
        # strata start at the minimal energy, so the bound there is 0
        if d.mode == TORSION_NOVIKOV and f.level < 0:
            out.append(Violation("G2", "NegativeLevel", loc, f"level {f.level} < 0 in a Z[[t]] complex"))
        energy = a.csd_lift - b.csd_lift + f.level * d.e_rho
        if energy <= 0:
            out.append(Violation("G3", "EnergyNonpositive", loc, f"energy {energy} <= 0"))
        if d.block_diagonal:
            out.append(Violation("B1", "NotBlockDiagonal", loc, "block-diagonal mode needs nontorsion data"))
    out += _square_zero(d, pts, "G4")
    return out


def validate(d: FloerDatum) -> ValidationReport:
    """Check a datum against every structural rule. Violations are data, not faults."""
    out = _structural(d)
    pts = {}
    for p in d.points:
        pts.setdefault(p.id, p)
    if d.mode == NONTORSION:
        out += _validate_nontorsion(d, pts)
    elif d.mode in (TORSION_NOVIKOV, GAMMA_LAURENT):
        out += _validate_novikov(d, pts)
    return ValidationReport(tuple(sorted(set(out))))


# ---------------------------------------------------------------------------
# assembly


def _require_valid(d: FloerDatum) -> None:
    report = validate(d)
    if not report.ok:
        raise ValidationFailed(report)


def _grades(points: Iterable[CriticalPoint], key) -> dict[int, tuple[str, ...]]:
    gens: dict[int, list[str]] = defaultdict(list)
    for p in points:
        gens[key(p)].append(p.id)
    return {g: tuple(v) for g, v in sorted(gens.items())}


def _matrices(d, gens, grade_of, target, entry, zero):
    index = {g: {pid: i for i, pid in enumerate(ids)} for g, ids in gens.items()}
    acc: dict[int, dict[tuple[int, int], list]] = defaultdict(dict)
    for f in d.flows:
        g = grade_of[f.from_id]
        t = grade_of[f.to_id]
        if t != target(g):
            continue
        cell = acc[g].setdefault((index[t][f.to_id], index[g][f.from_id]), [])
        cell.append((f.level, f.count))
    mats = {}
    for g, cells in acc.items():
        rows = len(gens[target(g)])
        mat = [[zero for _ in gens[g]] for _ in range(rows)]
        for (r, c), terms in cells.items():
            mat[r][c] = entry(terms)
        mats[g] = mat
    return mats


def assemble_boundary(
    d: FloerDatum,
    coefficients: str | None = None,
    grading: str = "lift",
    truncation_order: int = DEFAULT_ORDER,
    check: bool = True,
) -> GradedComplex:
    """Build the chain complex a valid datum describes.

    ``nontorsion``, ``grading="lift"``
        integer-graded by ``ind_lift``; only level-0 counts are degree -1 in
        this grading, so this is the complex of the d^(omega) maps.
    ``nontorsion``, ``grading="cyclic"``
        graded by residue mod ell, entries summing every level: the total
        boundary of the Z_ell-graded complex.
    ``torsion-novikov``
        over Z[[t]], entry ``sum_n count(a, b, n) t^n``; over Z or Q, the
        complex of level-0 counts.
    ``gamma-laurent``
        over Q((t)), same entry shape with levels of either sign.
    """
    if check:
        _require_valid(d)
    grade_of: dict[str, int]
    if d.mode == NONTORSION:
        coefficients = coefficients or Z
        if coefficients not in (Z, Q):
            raise ValueError(f"nontorsion data assemble over Z or Q, not {coefficients}")
        conv = int if coefficients == Z else Fraction

        def entry(terms):
            return conv(sum(c for _, c in terms))

        zero = conv(0)
        if grading == "cyclic":
            gens = _grades(d.points, lambda p: p.ind_lift % d.ell)
            grade_of = {p.id: p.ind_lift % d.ell for p in d.points}
            c = GradedComplex(gens, {}, coefficients, "cyclic", d.ell)
            mats = _matrices(d, gens, grade_of, c.target, entry, zero)
            return GradedComplex(gens, mats, coefficients, "cyclic", d.ell)
        if grading != "lift":
            raise ValueError(f"unknown grading {grading!r}")
        gens = _grades(d.points, lambda p: p.ind_lift)
        grade_of = {p.id: p.ind_lift for p in d.points}
        level0 = replace(d, flows=tuple(f for f in d.flows if f.level == 0))
        mats = _matrices(level0, gens, grade_of, lambda g: g - 1, entry, zero)
        return GradedComplex(gens, mats, coefficients, "integer")

    gens = _grades(d.points, lambda p: p.ind_lift)
    grade_of = {p.id: p.ind_lift for p in d.points}
    if d.mode == TORSION_NOVIKOV and coefficients in (Z, Q):
        # the integer complex of level-0 flows
        conv = int if coefficients == Z else Fraction
        level0 = restrict_min_level(d)
        mats = _matrices(level0, gens, grade_of, lambda g: g - 1, lambda terms: conv(sum(c for _, c in terms)), conv(0))
        return GradedComplex(gens, mats, coefficients, "integer")
    top = max((f.level for f in d.flows), default=-1)
    if top >= truncation_order:
        raise InsufficientTruncation(f"flow level {top} needs truncation order > {top}")
    if d.mode == TORSION_NOVIKOV:
        coefficients = coefficients or ZT
        if coefficients != ZT:
            raise ValueError("torsion-novikov data assemble over Z[[t]], Z or Q")

        def entry(terms):
            acc: dict[int, int] = defaultdict(int)
            for n, c in terms:
                acc[n] += c
            return PowerSeries(acc, truncation_order)

        zero = PowerSeries.zero(truncation_order)
    else:
        coefficients = coefficients or QTT
        if coefficients != QTT:
            raise ValueError("gamma-laurent data assemble over Q((t))")

        def entry(terms):
            return LaurentSeries.from_terms(terms, truncation_order)

        zero = LaurentSeries.zero(truncation_order)
    mats = _matrices(d, gens, grade_of, lambda g: g - 1, entry, zero)
    return GradedComplex(gens, mats, coefficients, "integer", truncation_order=truncation_order)


def boundary_blocks(d: FloerDatum) -> dict[tuple[int, int], dict[tuple[str, str], int]]:
    """The components d_{q,k} of a nontorsion datum.

    Keyed by (source lift grade q, level k); each value maps (from, to) to
    the summed count.
    """
    pts = d.point_map()
    blocks: dict[tuple[int, int], dict[tuple[str, str], int]] = defaultdict(dict)
    for f in d.flows:
        q = pts[f.from_id].ind_lift
        cell = blocks[(q, f.level)]
        cell[(f.from_id, f.to_id)] = cell.get((f.from_id, f.to_id), 0) + f.count
    return dict(sorted(blocks.items()))


def restrict_min_level(d: FloerDatum) -> FloerDatum:
    """Copy of the datum keeping only level-0 flows."""
    return replace(d, flows=tuple(f for f in d.flows if f.level == 0))


# ---------------------------------------------------------------------------
# file format

_TOP = ("version", "mode", "ell", "omega", "e_rho", "block_diagonal", "points", "flows")
_POINT = ("id", "spinc_label", "grade_mod_ell", "ind_lift", "csd_lift")
_FLOW = ("from", "to", "level", "count")


def _int(obj, key, where):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedDatum(f"{where}: {key!r} must be an integer")
    return v


def _str(obj, key, where):
    v = obj[key]
    if not isinstance(v, str):
        raise MalformedDatum(f"{where}: {key!r} must be a string")
    return v


def _rat(obj, key, where):
    v = obj[key]
    if not isinstance(v, str):
        raise MalformedDatum(f"{where}: {key!r} must be a 'p/q' string")
    try:
        return parse_rational(v)
    except ValueError as exc:
        raise MalformedDatum(f"{where}: {exc}") from None


def _exact_keys(obj, keys, where):
    if not isinstance(obj, dict):
        raise MalformedDatum(f"{where}: expected an object")
    missing = [k for k in keys if k not in obj]
    extra = sorted(set(obj) - set(keys))
    if missing:
        raise MalformedDatum(f"{where}: missing field(s) {', '.join(missing)}")
    if extra:
        raise MalformedDatum(f"{where}: unknown field(s) {', '.join(extra)}")


def datum_from_json(obj) -> FloerDatum:
    _exact_keys(obj, _TOP, "datum")
    if obj["version"] != 1 or isinstance(obj["version"], bool):
        raise MalformedDatum(f"unsupported version {obj['version']!r}")
    mode = _str(obj, "mode", "datum")
    if mode not in MODES:
        raise MalformedDatum(f"unknown mode {mode!r}")
    if not isinstance(obj["block_diagonal"], bool):
        raise MalformedDatum("datum: 'block_diagonal' must be a boolean")
    if not isinstance(obj["points"], list) or not isinstance(obj["flows"], list):
        raise MalformedDatum("datum: 'points' and 'flows' must be lists")
    points = []
    for i, p in enumerate(obj["points"]):
        where = f"points[{i}]"
        _exact_keys(p, _POINT, where)
        points.append(
            CriticalPoint(
                _str(p, "id", where),
                _str(p, "spinc_label", where),
                _int(p, "grade_mod_ell", where),
                _int(p, "ind_lift", where),
                _rat(p, "csd_lift", where),
            )
        )
    flows = []
    for i, f in enumerate(obj["flows"]):
        where = f"flows[{i}]"
        _exact_keys(f, _FLOW, where)
        flows.append(FlowClass(_str(f, "from", where), _str(f, "to", where), _int(f, "level", where), _int(f, "count", where)))
    return FloerDatum(
        mode=mode,
        points=tuple(points),
        flows=tuple(flows),
        ell=_int(obj, "ell", "datum"),
        omega=_rat(obj, "omega", "datum"),
        e_rho=_rat(obj, "e_rho", "datum"),
        block_diagonal=obj["block_diagonal"],
    )


def datum_to_json(d: FloerDatum) -> dict:
    return {
        "version": 1,
        "mode": d.mode,
        "ell": d.ell,
        "omega": format_rational(d.omega),
        "e_rho": format_rational(d.e_rho),
        "block_diagonal": d.block_diagonal,
        "points": [
            {
                "id": p.id,
                "spinc_label": p.spinc_label,
                "grade_mod_ell": p.grade_mod_ell,
                "ind_lift": p.ind_lift,
                "csd_lift": format_rational(p.csd_lift),
            }
            for p in d.points
        ],
        "flows": [{"from": f.from_id, "to": f.to_id, "level": f.level, "count": f.count} for f in d.flows],
    }


def loads_datum(text: str) -> FloerDatum:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDatum(f"not valid JSON: {exc}") from None
    return datum_from_json(obj)


def load_datum(path) -> FloerDatum:
    with open(path, encoding="utf-8") as fh:
        return loads_datum(fh.read())


def dumps_datum(d: FloerDatum) -> str:
    return json.dumps(datum_to_json(d), indent=2, sort_keys=True) + "\n"
