"""Outward-rounded real intervals with exact dyadic endpoints.

Arithmetic is delegated to mpmath's interval context (one context object per
precision, never mutated after creation), and the resulting endpoints are
pulled back out as exact ``Fraction`` values. Comparisons between intervals
are therefore exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .errors import PrecisionError

DEFAULT_PRECISION = 128

Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def interval_context(prec: int) -> MPIntervalContext:
    """Return a dedicated interval context working at ``prec`` bits."""
    if prec < 32:
        raise ValueError("precision must be at least 32 bits")
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _raw_to_fraction(raw) -> Fraction:
    if raw in (libmp.finf, libmp.fninf, libmp.fnan):
        raise PrecisionError("non-finite interval endpoint")
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def to_iv(ctx: MPIntervalContext, value):
    """Enclose an exact rational (or an existing interval) in ``ctx``."""
    if isinstance(value, HeightInterval):
        return value.iv(ctx)
    if isinstance(value, int):
        return ctx.mpf(value)
    if isinstance(value, Rational):
        value = Fraction(value)
        if value.denominator == 1:
            return ctx.mpf(value.numerator)
        return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)
    return ctx.convert(value)


def iv_log(ctx: MPIntervalContext, value: Number):
    """Interval enclosure of log|value| for a nonzero exact rational."""
    value = Fraction(value)
    if value == 0:
        raise ValueError("log of zero")
    value = abs(value)
    num, den = value.numerator, value.denominator
    # log of a huge integer loses nothing by splitting numerator/denominator
    out = ctx.log(ctx.mpf(num))
    if den != 1:
        out = out - ctx.log(ctx.mpf(den))
    return out


@dataclass(frozen=True)
class HeightInterval:
    """A closed interval [lo, hi] with exact dyadic rational endpoints."""

    lo: Fraction
    hi: Fraction
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def from_iv(cls, value, prec: int) -> "HeightInterval":
        a, b = value._mpi_
        return cls(_raw_to_fraction(a), _raw_to_fraction(b), prec)

    @classmethod
    def point(cls, x: Number, prec: int = DEFAULT_PRECISION) -> "HeightInterval":
        ctx = interval_context(prec)
        return cls.from_iv(to_iv(ctx, x), prec)

    @classmethod
    def hull(cls, lo: Number, hi: Number, prec: int = DEFAULT_PRECISION) -> "HeightInterval":
        ctx = interval_context(prec)
        a = to_iv(ctx, lo)
        b = to_iv(ctx, hi)
        lo_end = HeightInterval.from_iv(a, prec).lo
        hi_end = HeightInterval.from_iv(b, prec).hi
        return cls(lo_end, hi_end, prec)

    # -- views ---------------------------------------------------------
    def iv(self, ctx: MPIntervalContext | None = None):
        ctx = ctx or interval_context(self.prec)
        return ctx.mpf([to_iv(ctx, self.lo).a, to_iv(ctx, self.hi).b])

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def is_inside(self, lo: Number, hi: Number) -> bool:
        """True iff this interval lies strictly inside the open (lo, hi)."""
        return lo < self.lo and self.hi < hi

    def intersects(self, other: "HeightInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def gap(self, other: "HeightInterval") -> Fraction:
        """Distance between the two intervals (0 when they overlap)."""
        return max(Fraction(0), self.lo - other.hi, other.lo - self.hi)

    def __float__(self) -> float:
        return float(self.mid)

    # -- arithmetic ----------------------------------------------------
    def _binop(self, other, op) -> "HeightInterval":
        prec = self.prec
        if isinstance(other, HeightInterval):
            prec = max(prec, other.prec)
        ctx = interval_context(prec)
        a = self.iv(ctx)
        b = other.iv(ctx) if isinstance(other, HeightInterval) else to_iv(ctx, other)
        return HeightInterval.from_iv(op(a, b), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HeightInterval) and other.contains(0):
            raise ZeroDivisionError("interval divisor contains 0")
        return self._binop(other, lambda a, b: a / b)

    def __neg__(self):
        return HeightInterval(-self.hi, -self.lo, self.prec)

    def sqrt(self) -> "HeightInterval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval reaching below 0")
        ctx = interval_context(self.prec)
        return HeightInterval.from_iv(ctx.sqrt(self.iv(ctx)), self.prec)

    def __repr__(self) -> str:
        return f"HeightInterval[{format_decimal(self.lo, 12, 'down')}, {format_decimal(self.hi, 12, 'up')}]"

    # -- serialization -------------------------------------------------
    def to_json(self, digits: int = 30) -> dict:
        return {
            "lo": format_decimal(self.lo, digits, "down"),
            "hi": format_decimal(self.hi, digits, "up"),
        }


def format_decimal(x: Fraction, digits: int, direction: str) -> str:
    """Format ``x`` with ``digits`` significant digits, rounded down or up."""
    rounding = ROUND_FLOOR if direction == "down" else ROUND_CEILING
    ctx = Context(prec=digits, rounding=rounding)
    x = Fraction(x)
    value = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(value, "E") if abs(value.adjusted()) > 20 else format(value, "f")
