"""Shared helpers: hand-built data and small independent oracles."""

from fractions import Fraction
from itertools import combinations
from math import gcd

from swfloer.datum import CriticalPoint, FloerDatum, FlowClass


def det(m):
    """Determinant by cofactor expansion (tiny matrices only)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det(minor)
    return total


def minors_gcd_invariants(m):
    """Invariant factors from determinantal divisors d_k = gcd of k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


def poly_det(m):
    """Determinant of a matrix of {exponent: coeff} Laurent polynomials."""
    n = len(m)
    if n == 0:
        return {0: 1}
    total = {}
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sub = poly_det(minor)
        for e1, c1 in m[0][j].items():
            for e2, c2 in sub.items():
                total[e1 + e2] = total.get(e1 + e2, 0) + (-1) ** j * c1 * c2
    return {e: c for e, c in total.items() if c}


def minors_valuation_invariants(m):
    """DVR exponents from minimal valuations of k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    vals = [0]
    for k in range(1, min(rows, cols) + 1):
        best = None
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                d = poly_det([[m[r][c] for c in cs] for r in rs])
                if d:
                    v = min(d)
                    best = v if best is None else min(best, v)
        if best is None:
            break
        vals.append(best)
    return [vals[i] - vals[i - 1] for i in range(1, len(vals))]


def point(pid, lift, csd, ell=2, label="s"):
    return CriticalPoint(pid, label, lift % ell, lift, Fraction(csd))


def nontorsion(points, flows, ell=2, omega=0, block_diagonal=False):
    return FloerDatum(
        "nontorsion",
        tuple(point(p, q, c, ell) for p, q, c in points),
        tuple(FlowClass(*f) for f in flows),
        ell=ell,
        omega=Fraction(omega),
        block_diagonal=block_diagonal,
    )


def novikov(mode, points, flows, e_rho=1):
    return FloerDatum(
        mode,
        tuple(CriticalPoint(p, "s", 0, q, Fraction(c)) for p, q, c in points),
        tuple(FlowClass(*f) for f in flows),
        e_rho=Fraction(e_rho),
    )
