"""Exact truncated series: Z[[t]] and Q((t)).

Both series types are immutable, store their coefficients sparsely and carry
an explicit truncation order ``N``: coefficients are known for exponents
``< N`` only. The order is contagious, so a binary operation returns the
tightest order implied by its inputs.

Rationals are :class:`fractions.Fraction`; they are reduced on construction,
which makes equality structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "DEFAULT_ORDER",
    "Rational",
    "LaurentSeries",
    "PowerSeries",
    "ZeroInverse",
    "parse_rational",
    "format_rational",
    "series_add",
    "series_mul",
    "series_inv",
    "power_eval_t0",
]

DEFAULT_ORDER = 32

Rational = Fraction
Number = Union[int, Fraction]


class ZeroInverse(ZeroDivisionError):
    """Raised when inverting a series that is zero to its known precision."""


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse ``"p/q"`` (or a bare integer) into a reduced Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or any(c.isspace() for c in text):
        raise ValueError(f"not a rational: {text!r}")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def format_rational(x: Number) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _lower_bound(valuation: float, order: int) -> int:
    # smallest exponent that may carry a nonzero (possibly unknown) coefficient
    return order if valuation == math.inf else int(valuation)


class LaurentSeries:
    """A truncated formal Laurent series over Q.

    Parameters
    ----------
    coeffs:
        Mapping from integer exponent to a rational coefficient. Zero
        coefficients and exponents ``>= order`` are dropped.
    order:
        Truncation order ``N``.
    """

    __slots__ = ("_coeffs", "_order", "_valuation")

    def __init__(self, coeffs: Mapping[int, Number] | None = None, order: int = DEFAULT_ORDER):
        if isinstance(order, bool) or not isinstance(order, int):
            raise TypeError("truncation order must be an integer")
        clean = {}
        for e, c in (coeffs or {}).items():
            if e < order:
                c = Fraction(c)
                if c:
                    clean[int(e)] = c
        self._coeffs = dict(sorted(clean.items()))
        self._order = order
        self._valuation = min(self._coeffs) if self._coeffs else math.inf

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "LaurentSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "LaurentSeries":
        return cls({0: 1}, order)

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1, order: int = DEFAULT_ORDER) -> "LaurentSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, Number]], order: int = DEFAULT_ORDER) -> "LaurentSeries":
        """Build from (exponent, coefficient) pairs; repeated exponents add up."""
        acc: dict[int, Fraction] = {}
        for e, c in terms:
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        return cls(acc, order)

    # accessors ------------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    truncation_order = order

    @property
    def valuation(self) -> float:
        """Smallest exponent with a nonzero coefficient; ``math.inf`` for zero."""
        return self._valuation

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, exponent: int) -> Fraction:
        if exponent >= self._order:
            raise IndexError(f"coefficient of t^{exponent} unknown at order {self._order}")
        return self._coeffs.get(exponent, Fraction(0))

    def terms(self) -> list[tuple[int, Fraction]]:
        return list(self._coeffs.items())

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def with_order(self, order: int) -> "LaurentSeries":
        """Re-truncate. Raising the order is only sound for exact inputs."""
        return LaurentSeries(self._coeffs, order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``t**k``."""
        return LaurentSeries({e + k: c for e, c in self._coeffs.items()}, self._order + k)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, PowerSeries):
            return other.to_laurent()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentSeries({0: other}, self._order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self._order, other._order)
        acc = dict(self._coeffs)
        for e, c in other._coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentSeries(acc, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -c for e, c in self._coeffs.items()}, self._order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentSeries({e: c * other for e, c in self._coeffs.items()}, self._order)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        va = _lower_bound(self._valuation, self._order)
        vb = _lower_bound(other._valuation, other._order)
        order = min(self._order + vb, other._order + va)
        acc: dict[int, Fraction] = {}
        for ea, ca in self._coeffs.items():
            limit = order - ea
            for eb, cb in other._coeffs.items():
                if eb >= limit:
                    break
                e = ea + eb
                acc[e] = acc.get(e, 0) + ca * cb
        return LaurentSeries(acc, order)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse, by geometric-series expansion of the unit part."""
        if not self._coeffs:
            raise ZeroInverse("series is zero to its known precision")
        v = int(self._valuation)
        precision = self._order - v  # relative precision of the unit part
        unit = [(e - v, c) for e, c in self._coeffs.items()]
        lead = unit[0][1]
        w = [Fraction(0)] * precision
        w[0] = 1 / lead
        for n in range(1, precision):
            s = Fraction(0)
            for i, c in unit[1:]:
                if i > n:
                    break
                s += c * w[n - i]
            w[n] = -s / lead
        return LaurentSeries({n - v: c for n, c in enumerate(w)}, precision - v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return self._order == other._order and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self._order, tuple(self._coeffs.items())))

    def agrees_with(self, other: "LaurentSeries", upto: int | None = None) -> bool:
        """Coefficient-exact agreement below the shared truncation order (or ``upto``)."""
        limit = min(self._order, other._order)
        if upto is not None:
            limit = min(limit, upto)
        keys = {e for e in self._coeffs if e < limit} | {e for e in other._coeffs if e < limit}
        return all(self._coeffs.get(e, 0) == other._coeffs.get(e, 0) for e in keys)

    def __repr__(self):
        if not self._coeffs:
            return f"LaurentSeries(0 + O(t^{self._order}))"
        body = " + ".join(f"({c})t^{e}" for e, c in self._coeffs.items())
        return f"LaurentSeries({body} + O(t^{self._order}))"

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [[e, format_rational(c)] for e, c in self._coeffs.items()],
            "truncation_order": self._order,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentSeries":
        if set(obj) != {"terms", "truncation_order"}:
            raise ValueError("series object needs exactly 'terms' and 'truncation_order'")
        order = obj["truncation_order"]
        if isinstance(order, bool) or not isinstance(order, int):
            raise ValueError("truncation_order must be an integer")
        terms = []
        for item in obj["terms"]:
            e, c = item
            if isinstance(e, bool) or not isinstance(e, int):
                raise ValueError(f"bad exponent {e!r}")
            terms.append((e, parse_rational(c)))
        return cls.from_terms(terms, order)


class PowerSeries:
    """A truncated formal power series over Z (non-negative exponents)."""

    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs: Mapping[int, int] | None = None, order: int = DEFAULT_ORDER):
        if isinstance(order, bool) or not isinstance(order, int) or order < 1:
            raise ValueError("truncation order must be a positive integer")
        clean = {}
        for e, c in (coeffs or {}).items():
            if e < 0:
                raise ValueError(f"negative exponent {e} in a power series")
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("power series coefficients must be integers")
                c = c.numerator
            if e < order and c:
                clean[int(e)] = int(c)
        self._coeffs = dict(sorted(clean.items()))
        self._order = order

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls({0: 1}, order)

    @property
    def order(self) -> int:
        return self._order

    truncation_order = order

    @property
    def valuation(self) -> float:
        return min(self._coeffs) if self._coeffs else math.inf

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._coeffs)

    def __getitem__(self, exponent: int) -> int:
        if exponent >= self._order:
            raise IndexError(f"coefficient of t^{exponent} unknown at order {self._order}")
        return self._coeffs.get(exponent, 0)

    def terms(self) -> list[tuple[int, int]]:
        return list(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def constant_term(self) -> int:
        return self._coeffs.get(0, 0)

    def to_laurent(self) -> LaurentSeries:
        """Base change Z[[t]] -> Q((t))."""
        return LaurentSeries(self._coeffs, self._order)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return PowerSeries({0: other}, self._order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._coeffs)
        for e, c in other._coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return PowerSeries(acc, min(self._order, other._order))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries({e: -c for e, c in self._coeffs.items()}, self._order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return PowerSeries({e: c * other for e, c in self._coeffs.items()}, self._order)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        va = _lower_bound(self.valuation, self._order)
        vb = _lower_bound(other.valuation, other._order)
        order = min(self._order + vb, other._order + va)
        acc: dict[int, int] = {}
        for ea, ca in self._coeffs.items():
            for eb, cb in other._coeffs.items():
                e = ea + eb
                if e >= order:
                    break
                acc[e] = acc.get(e, 0) + ca * cb
        return PowerSeries(acc, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self._order == other._order and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("P", self._order, tuple(self._coeffs.items())))

    def __repr__(self):
        body = " + ".join(f"({c})t^{e}" for e, c in self._coeffs.items()) or "0"
        return f"PowerSeries({body} + O(t^{self._order}))"

    def to_json(self) -> dict:
        return {
            "terms": [[e, format_rational(c)] for e, c in self._coeffs.items()],
            "truncation_order": self._order,
        }


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a + b


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_inv(a: LaurentSeries) -> LaurentSeries:
    return a.inverse()


def power_eval_t0(a: PowerSeries) -> int:
    """Evaluate a power series at t = 0."""
    return a.constant_term()
