"""Exact rational arithmetic on long Weierstrass models.

    E : y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6

Points are kept in weighted normal form (alpha/delta^2, beta/delta^3) with
delta > 0 and gcd(alpha, delta) = gcd(beta, delta) = 1, which is what the
p-adic height formulas consume. The point at infinity is (1 : 1 : 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Union

from .errors import (
    MalformedPointError,
    NotOnCurveError,
    SingularCurveError,
    TwoTorsionError,
)

RationalLike = Union[int, Fraction]


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class RationalPoint:
    """A rational point in normal form, or the point at infinity (delta = 0)."""

    alpha: int
    beta: int
    delta: int

    @classmethod
    def infinity(cls) -> "RationalPoint":
        return cls(1, 1, 0)

    @property
    def is_infinity(self) -> bool:
        return self.delta == 0

    @property
    def x(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("point at infinity has no affine x")
        return Fraction(self.alpha, self.delta**2)

    @property
    def y(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("point at infinity has no affine y")
        return Fraction(self.beta, self.delta**3)

    def __str__(self) -> str:
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


INFINITY = RationalPoint.infinity()


def normalize(x: RationalLike, y: RationalLike) -> RationalPoint:
    """Write (x, y) as (alpha/delta^2, beta/delta^3) with coprime parts."""
    x, y = _q(x), _q(y)
    delta = isqrt(x.denominator)
    if delta * delta != x.denominator:
        raise MalformedPointError(f"denominator of x = {x} is not a square")
    if y.denominator != delta**3:
        raise MalformedPointError(f"denominators of x = {x} and y = {y} are incompatible")
    return RationalPoint(x.numerator, y.numerator, delta)


class WeierstrassModel:
    """A nonsingular long Weierstrass model over the rationals.

    Derived quantities b2, b4, b6, b8, c4, c6 and the discriminant are
    computed once and cached. Singular models are rejected on construction.
    """

    def __init__(self, a1: RationalLike = 0, a2: RationalLike = 0, a3: RationalLike = 0,
                 a4: RationalLike = 0, a6: RationalLike = 0):
        self.a1, self.a2, self.a3, self.a4, self.a6 = map(_q, (a1, a2, a3, a4, a6))
        if self.discriminant == 0:
            raise SingularCurveError(f"singular model {self.coefficients}")

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeierstrassModel) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return "WeierstrassModel[{}]".format(", ".join(str(c) for c in self.coefficients))

    # -- invariants ----------------------------------------------------
    @cached_property
    def b2(self) -> Fraction:
        return self.a1**2 + 4 * self.a2

    @cached_property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self) -> Fraction:
        return self.a3**2 + 4 * self.a6

    @cached_property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.coefficients
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @cached_property
    def c4(self) -> Fraction:
        return self.b2**2 - 24 * self.b4

    @cached_property
    def c6(self) -> Fraction:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    def derive_quantities(self) -> tuple[Fraction, ...]:
        """(b2, b4, b6, b8, c4, c6, discriminant)."""
        return (self.b2, self.b4, self.b6, self.b8, self.c4, self.c6, self.discriminant)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    # -- points --------------------------------------------------------
    def is_on_curve(self, x: RationalLike, y: RationalLike) -> bool:
        x, y = _q(x), _q(y)
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def point(self, x: RationalLike, y: RationalLike) -> RationalPoint:
        """Validated, normalized point constructor."""
        if not self.is_on_curve(x, y):
            raise NotOnCurveError(f"point ({x}, {y}) not on curve {self!r}")
        return normalize(x, y)

    def contains(self, P: RationalPoint) -> bool:
        return P.is_infinity or self.is_on_curve(P.x, P.y)

    def _check(self, P: RationalPoint) -> None:
        if not self.contains(P):
            raise NotOnCurveError(f"point {P} not on curve {self!r}")

    def negate(self, P: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return P
        x, y = P.x, P.y
        return normalize(x, -y - self.a1 * x - self.a3)

    def add(self, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
        self._check(P)
        self._check(Q)
        return self._add(P, Q)

    def _add(self, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, _ = self.coefficients
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return INFINITY
            slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            slope = (y2 - y1) / (x2 - x1)
        nu = y1 - slope * x1
        x3 = slope * slope + a1 * slope - a2 - x1 - x2
        y3 = -(slope + a1) * x3 - nu - a3
        return normalize(x3, y3)

    def sub(self, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
        return self.add(P, self.negate(Q))

    def scalar_mul(self, k: int, P: RationalPoint) -> RationalPoint:
        """kP by double-and-add; negative k multiplies -P."""
        self._check(P)
        if k < 0:
            return self.scalar_mul(-k, self.negate(P))
        result, addend = INFINITY, P
        while k:
            if k & 1:
                result = self._add(result, addend)
            k >>= 1
            if k:
                addend = self._add(addend, addend)
        return result

    def combination(self, coeffs, points) -> RationalPoint:
        """Sum of k_i * P_i."""
        total = INFINITY
        for k, P in zip(coeffs, points):
            if k:
                total = self._add(total, self.scalar_mul(k, P))
        return total

    def x_double(self, x: RationalLike) -> Fraction:
        """x(2P) from x(P) alone."""
        x = _q(x)
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        den = 4 * x**3 + b2 * x * x + 2 * b4 * x + b6
        if den == 0:
            raise TwoTorsionError(f"x = {x} is the x-coordinate of a 2-torsion point")
        return (x**4 - b4 * x * x - 2 * b6 * x - b8) / den

    # -- change of model -----------------------------------------------
    def shift(self, d: RationalLike) -> "WeierstrassModel":
        """Model for x' = x + d, y' = y."""
        d = _q(d)
        a1, a2, a3, a4, a6 = self.coefficients
        return WeierstrassModel(
            a1,
            a2 - 3 * d,
            a3 - d * a1,
            a4 - 2 * d * a2 + 3 * d * d,
            a6 - d * a4 + d * d * a2 - d**3,
        )


class MordellCurve(WeierstrassModel):
    """The curve y^2 = x^3 + n for a nonzero integer n."""

    def __init__(self, n: int):
        if int(n) != n or n == 0:
            raise SingularCurveError("n must be a nonzero integer")
        self.n = int(n)
        super().__init__(0, 0, 0, 0, self.n)

    def __repr__(self) -> str:
        return f"MordellCurve(n={self.n})"


def shift_model(model: WeierstrassModel, d: RationalLike) -> WeierstrassModel:
    return model.shift(d)


def shift_point(P: RationalPoint, d: RationalLike) -> tuple[Fraction, Fraction]:
    """Affine coordinates of P on the model shifted by d."""
    return P.x + _q(d), P.y


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
