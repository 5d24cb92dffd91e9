"""Independent brute-force verifiers and a seeded synthetic datum generator.

The verifiers here share no elimination code with the main path: ranks are
computed by fraction-free (Bareiss) elimination over Z and over Z[t], and
the graded pieces of the filtration on homology come from a rank formula
rather than from page recursion.

The generator draws data that pass :func:`swfloer.datum.validate` by
construction. It starts from an elementary complex made of disjoint
cancelling pairs and conjugates it by a random unipotent change of basis
that respects the lift filtration, so the boundary squares to zero exactly.
Randomness comes from numpy's PCG64 bit generator seeded with the config
seed, which makes output portable across platforms.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .datum import (
    GAMMA_LAURENT,
    MODES,
    NONTORSION,
    TORSION_NOVIKOV,
    CriticalPoint,
    FloerDatum,
    FlowClass,
    validate,
)
from .graded_complex import Q, QT, QTT, ZT, Z, GradedComplex
from .series import LaurentSeries, PowerSeries

__all__ = [
    "GeneratorConfig",
    "GenerationFailed",
    "generate",
    "brute_homology",
    "brute_e_infinity",
    "bareiss_rank",
    "poly_bareiss_rank",
]


class GenerationFailed(RuntimeError):
    """The generator could not produce a valid datum for this seed."""


# ---------------------------------------------------------------------------
# fraction-free ranks


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        m = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * m) for x in fr])
    return out


def bareiss_rank(rows) -> int:
    """Rank over Q of a rational matrix by fraction-free elimination."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            m[i] = [(piv * mi[j] - f * m[r][j]) // prev for j in range(ncols)]
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


# integer polynomials as coefficient lists, lowest degree first


def _ptrim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _psub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pdivexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    if not a:
        return []
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1]
        if coef % lead:
            raise ArithmeticError("inexact polynomial division")
        c = coef // lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim(q)


def _laurent_rows_to_poly(rows) -> list[list[list[int]]]:
    """Clear t-powers and denominators row by row, giving a matrix over Z[t]."""
    out = []
    for r in rows:
        low = min((x.valuation for x in r if not x.is_zero()), default=0)
        dens = [c.denominator for x in r for _, c in x.terms()]
        m = lcm(*dens) if dens else 1
        prow = []
        for x in r:
            p: list[int] = []
            for e, c in x.terms():
                k = e - low
                if len(p) <= k:
                    p.extend([0] * (k + 1 - len(p)))
                p[k] = int(c * m)
            prow.append(_ptrim(p))
        out.append(prow)
    return out


def _as_laurent(x) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, PowerSeries):
        return x.to_laurent()
    return LaurentSeries({0: x})


def poly_bareiss_rank(rows) -> int:
    """Rank over Q((t)) of a matrix of Laurent polynomials.

    Every stored term is taken at face value; the entries must be exact
    Laurent polynomials (as produced by assembling a finite datum).
    """
    if not rows or not rows[0]:
        return 0
    m = _laurent_rows_to_poly([[_as_laurent(x) for x in r] for r in rows])
    nrows, ncols = len(m), len(m[0])
    prev = [1]
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            m[i] = [_pdivexact(_psub(_pmul(piv, mi[j]), _pmul(f, m[r][j])), prev) for j in range(ncols)]
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def _rank(mat, coefficients) -> int:
    if coefficients in (Z, Q):
        return bareiss_rank(mat)
    if coefficients in (QTT, QT, ZT):
        return poly_bareiss_rank(mat)
    raise ValueError(f"brute_homology works over a field, not {coefficients}")


def brute_homology(c: GradedComplex) -> dict[int, int]:
    """Per-grade homology dimensions over Q, or over Q((t)) for series entries.

    Z entries are read as rationals; Z[[t]] and Q[[t]] entries are tensored
    up to Q((t)).
    """
    dims = {}
    ranks = {n: _rank(c.boundary(n), c.coefficients) for n in c.grades()}
    for n in c.grades():
        src = c.source(n)
        incoming = ranks.get(src, 0) if src in c.generators else 0
        dims[n] = c.rank(n) - ranks[n] - incoming
    return dims


# ---------------------------------------------------------------------------
# associated graded of the filtration on homology


def brute_e_infinity(F) -> dict[tuple[int, int], int]:
    """dim F_q HF_n / F_{q+ell} HF_n for every cell, nonzero cells only.

    Uses dim F_q H_n = dim F_q - rank(d|F_q) - rank d_{n+1} + rank(P d_{n+1}),
    where P projects C_n onto the coordinates outside F_q.
    """
    base = F.base
    ell = base.ell
    fil = F.filtration_index
    if not fil:
        return {}
    qs = list(fil.values())
    lo, hi = min(qs), max(qs)

    def lifts(n):
        return [fil[g] for g in base.generators.get(n, ())]

    def f_dim(q):
        n = q % ell
        lf = lifts(n)
        inside = [i for i, x in enumerate(lf) if x >= q]
        outside = [i for i, x in enumerate(lf) if x < q]
        d_out = base.boundary(n)
        restricted = [[row[i] for i in inside] for row in d_out]
        src = base.source(n)
        d_in = base.boundary(src) if src in base.generators else []
        projected = [d_in[i] for i in outside] if d_in else []
        return (
            len(inside)
            - bareiss_rank(restricted)
            - bareiss_rank(d_in)
            + bareiss_rank(projected)
        )

    memo = {}

    def fd(q):
        if q > hi:
            return 0
        if q not in memo:
            memo[q] = f_dim(q)
        return memo[q]

    out = {}
    for q in range(lo, hi + 1):
        v = fd(q) - fd(q + ell)
        if v:
            out[(q, q % ell)] = v
    return out


# ---------------------------------------------------------------------------
# generator


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of a synthetic datum.

    ``max_level`` bounds the flow levels: 0..max_level for nontorsion and
    torsion-novikov data, -max_level..max_level for gamma-laurent data.
    ``density`` is the probability of each admissible off-diagonal entry in
    the change of basis.
    """

    mode: str = NONTORSION
    seed: int = 0
    num_points: int = 8
    ell: int = 2
    max_level: int = 2
    density: Fraction = Fraction(1, 2)
    block_diagonal: bool = False
    max_attempts: int = 1

    def __post_init__(self):
        object.__setattr__(self, "density", Fraction(self.density))
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.num_points < 0:
            raise ValueError("num_points must be non-negative")
        if self.ell < 1:
            raise ValueError("ell must be positive")
        if self.max_level < 0:
            raise ValueError("max_level must be non-negative")
        if not (0 < self.density <= 1):
            raise ValueError("density must lie in (0, 1]")
        if self.block_diagonal and self.mode != NONTORSION:
            raise ValueError("block-diagonal data are nontorsion data")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")


_PAIR_COEFFS = (1, -1, 1, -1, 2, -2, 3, -3, 4, 6)


def _lift_range(cfg: GeneratorConfig, rng) -> tuple[int, int]:
    lo = int(rng.integers(-3, 4))
    if cfg.mode == NONTORSION and not cfg.block_diagonal and cfg.max_level > 0:
        # a level-k entry spans k*ell - 1 lift steps
        width = max(0, cfg.max_level * cfg.ell - 1)
    else:
        width = max(1, min(5, cfg.num_points // 3))
    return lo, lo + width


def _pairing(lifts: list[int], rng, levels=(0,), ell=1) -> list[tuple[int, int]]:
    """Disjoint (source, target) index pairs joined by a flow of one of the levels."""
    spans = {k * ell for k in levels}
    order = [int(i) for i in rng.permutation(len(lifts))]
    free = set(range(len(lifts)))
    pairs = []
    for a in order:
        if a not in free or rng.random() >= 0.75:
            continue
        cands = [b for b in sorted(free) if b != a and lifts[b] - lifts[a] + 1 in spans]
        if not cands:
            continue
        b = cands[int(rng.integers(len(cands)))]
        free.discard(a)
        free.discard(b)
        pairs.append((a, b))
    return pairs


def _admissible(cfg: GeneratorConfig, lifts, x: int, y: int) -> bool:
    """May the change of basis send generator x to a multiple of y?"""
    if y <= x:
        return False
    gap = lifts[y] - lifts[x]
    if cfg.mode != NONTORSION or cfg.block_diagonal or cfg.max_level == 0:
        return gap == 0
    return gap >= 0 and gap % cfg.ell == 0


def _unipotent(cfg, lifts, rng) -> list[list[int]]:
    n = len(lifts)
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    dens = float(cfg.density)
    for x in range(n):
        for y in range(n):
            if _admissible(cfg, lifts, x, y) and rng.random() < dens:
                p[y][x] = int(rng.choice((-2, -1, 1, 2)))
    return p


def _unipotent_inverse(p: list[list[int]]) -> list[list[int]]:
    # p is unit lower triangular in index order; forward substitution
    n = len(p)
    inv = [[0] * n for _ in range(n)]
    for col in range(n):
        inv[col][col] = 1
        for row in range(col + 1, n):
            inv[row][col] = -sum(p[row][k] * inv[k][col] for k in range(col, row))
    return inv


def _conjugate(p, pinv, entries: dict[tuple[int, int], dict[int, int]], n: int):
    """Entries of P M0 P^-1 where M0 has the given (row, col) -> {level: coeff} cells."""
    out: dict[tuple[int, int], dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for (b, a), poly in entries.items():
        rows = [(y, p[y][b]) for y in range(n) if p[y][b]]
        cols = [(x, pinv[a][x]) for x in range(n) if pinv[a][x]]
        for y, u in rows:
            for x, v in cols:
                for lev, c in poly.items():
                    out[(y, x)][lev] += u * c * v
    return out


def _level_poly(cfg: GeneratorConfig, rng) -> dict[int, int]:
    if cfg.mode == GAMMA_LAURENT:
        lo = -cfg.max_level
    else:
        lo = 0
    hi = cfg.max_level
    nterms = int(rng.integers(1, 3))
    poly: dict[int, int] = {}
    for _ in range(nterms):
        lev = int(rng.integers(lo, hi + 1))
        poly[lev] = poly.get(lev, 0) + int(rng.choice(_PAIR_COEFFS))
    poly = {k: v for k, v in poly.items() if v}
    return poly or {lo: 1}


def _jitter(rng) -> Fraction:
    # strictly inside (-1/4, 1/4)
    return Fraction(int(rng.integers(-15, 16)), 64)


def _generate_once(cfg: GeneratorConfig, rng) -> FloerDatum:
    n = cfg.num_points
    ell = cfg.ell if cfg.mode == NONTORSION else 1
    omega = Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 5)))
    e_rho = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    lo, hi = _lift_range(cfg, rng)
    lifts = sorted(int(rng.integers(lo, hi + 1)) for _ in range(n))
    ids = [f"p{i}" for i in range(n)]
    labels = [f"s{int(rng.integers(0, 2))}" for _ in range(n)]

    if cfg.mode == NONTORSION and not cfg.block_diagonal:
        pairs = _pairing(lifts, rng, range(cfg.max_level + 1), ell)
    else:
        pairs = _pairing(lifts, rng)
    if cfg.mode == NONTORSION:
        entries = {(b, a): {0: int(rng.choice(_PAIR_COEFFS))} for a, b in pairs}
    else:
        entries = {(b, a): _level_poly(cfg, rng) for a, b in pairs}
    p = _unipotent(cfg, lifts, rng)
    pinv = _unipotent_inverse(p)
    m = _conjugate(p, pinv, entries, n)

    flows = []
    for (y, x), poly in sorted(m.items()):
        for lev, c in sorted(poly.items()):
            if c == 0:
                continue
            if cfg.mode == NONTORSION:
                span = lifts[y] - lifts[x] + 1
                if span % ell:
                    raise GenerationFailed("entry off the lift lattice")
                lev = span // ell
            flows.append(FlowClass(ids[x], ids[y], lev, c))

    points = []
    if cfg.mode == NONTORSION:
        width = hi - lo + 1
        for i in range(n):
            slot = Fraction(lifts[i] - lo) + Fraction(1, 2) + _jitter(rng)
            csd = omega + ell * slot / width
            points.append(CriticalPoint(ids[i], labels[i], lifts[i] % ell, lifts[i], csd))
    else:
        low = -cfg.max_level if cfg.mode == GAMMA_LAURENT else 0
        spacing = e_rho * (1 - 2 * low)
        for i in range(n):
            csd = omega + spacing * (lifts[i] + _jitter(rng))
            points.append(CriticalPoint(ids[i], labels[i], 0, lifts[i], csd))

    return FloerDatum(
        cfg.mode,
        tuple(points),
        tuple(flows),
        ell=ell,
        omega=omega,
        e_rho=e_rho,
        block_diagonal=cfg.block_diagonal,
    )


def generate(cfg: GeneratorConfig) -> FloerDatum:
    """Deterministic valid datum for the config.

    Raises GenerationFailed when the result does not validate (within
    ``max_attempts`` draws from the same stream).
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    last = None
    for _ in range(max(1, cfg.max_attempts)):
        d = _generate_once(cfg, rng)
        report = validate(d)
        if not report.errors:
            return d
        last = report
    raise GenerationFailed(f"seed {cfg.seed}: {len(last.errors)} violations")
