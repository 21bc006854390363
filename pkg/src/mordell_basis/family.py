"""The curves E_{a,b}: y^2 = x^3 + a^6 + 16 b^6 and their three points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .curve import MordellCurve, RationalPoint
from .errors import PreconditionError
from .factor import DEFAULT_RHO_STEPS, DEFAULT_TRIAL_BOUND, Factorization, factorize, valuation


def family_m(a: int, b: int) -> int:
    return a**6 + 16 * b**6


@dataclass(frozen=True)
class MembershipResult:
    """status is True, False, or None (undecided within the factoring budget)."""

    a: int
    b: int
    status: bool | None
    reason: str
    factorization: Factorization | None = None

    def __bool__(self) -> bool:
        return self.status is True

    @property
    def unknown(self) -> bool:
        return self.status is None

    def to_json(self) -> dict:
        status = {True: "member", False: "rejected", None: "unknown"}[self.status]
        out = {"a": self.a, "b": self.b, "status": status, "reason": self.reason}
        if self.factorization is not None:
            out["factorization"] = self.factorization.as_text()
        return out


def structural_reason(a: int, b: int) -> str | None:
    """Why (a, b) fails the cheap conditions, or None if it passes them."""
    if a < 1 or b < 1:
        return "a and b must be positive"
    if gcd(a, b) != 1:
        return f"gcd(a, b) = {gcd(a, b)}"
    if a % 2 == 0 or b % 2 == 0:
        return "ab is even"
    if valuation(b, 3) != 1:
        return f"v3(b) != 1 (v3(b) = {valuation(b, 3)})"
    if a < 3 or b < 3:
        return "a, b must be at least 3"
    return None


def is_family_member(a: int, b: int, trial_bound: int = DEFAULT_TRIAL_BOUND,
                     rho_steps: int = DEFAULT_RHO_STEPS) -> MembershipResult:
    reason = structural_reason(a, b)
    if reason:
        return MembershipResult(a, b, False, reason)
    m = family_m(a, b)
    f = factorize(m, trial_bound, rho_steps)
    sf = f.is_squarefree
    if sf is None:
        return MembershipResult(a, b, None, f"factoring budget exhausted: {f.as_text()}", f)
    if not sf:
        sq = [p for p, e in sorted(f.factors.items()) if e > 1]
        return MembershipResult(a, b, False, f"m is divisible by {sq[0]}^2" if sq else "m is not square-free", f)
    return MembershipResult(a, b, True, "member", f)


def construct_points(a: int, b: int) -> tuple[RationalPoint, RationalPoint, RationalPoint]:
    """P1 = (-a^2, 4b^3), P2 = (2ab, a^3 + 4b^3), P3 = (-2ab, a^3 - 4b^3), checked on the curve."""
    E = MordellCurve(family_m(a, b))
    try:
        return (E.point(-a * a, 4 * b**3),
                E.point(2 * a * b, a**3 + 4 * b**3),
                E.point(-2 * a * b, a**3 - 4 * b**3))
    except Exception as exc:  # an identity failing here is a bug, not bad input
        raise AssertionError(f"family points off the curve at (a, b) = ({a}, {b})") from exc


@dataclass(frozen=True)
class FamilyCurve:
    a: int
    b: int
    m: int
    curve: MordellCurve
    P1: RationalPoint
    P2: RationalPoint
    P3: RationalPoint
    factorization: Factorization | None = None

    @classmethod
    def build(cls, a: int, b: int, check: bool = True, **budget) -> "FamilyCurve":
        """Curve and points for (a, b); with ``check`` non-members raise PreconditionError."""
        fact = None
        if check:
            res = is_family_member(a, b, **budget)
            if not res:
                raise PreconditionError(f"(a, b) = ({a}, {b}) is not certified in the family: {res.reason}")
            fact = res.factorization
        m = family_m(a, b)
        return cls(a, b, m, MordellCurve(m), *construct_points(a, b), fact)

    @property
    def points(self) -> tuple[RationalPoint, RationalPoint, RationalPoint]:
        return (self.P1, self.P2, self.P3)

    def point(self, i: int) -> RationalPoint:
        if i not in (1, 2, 3):
            raise ValueError("point index must be 1, 2 or 3")
        return self.points[i - 1]

    def __repr__(self) -> str:
        return f"FamilyCurve(a={self.a}, b={self.b}, m={self.m})"


@dataclass(frozen=True)
class EnumerationEntry:
    a: int
    b: int
    membership: MembershipResult
    family: FamilyCurve | None


def enumerate_family(a_max: int, b_max: int, m_max: int | None = None,
                     include_unknown: bool = True, **budget) -> Iterator[EnumerationEntry]:
    """Members (and undecided pairs) with a <= a_max, b <= b_max in lexicographic order."""
    for a in range(5, a_max + 1, 2):
        for b in range(3, b_max + 1, 6):
            if m_max is not None and family_m(a, b) > m_max:
                break
            if structural_reason(a, b):
                continue
            res = is_family_member(a, b, **budget)
            if res.status is True:
                m = family_m(a, b)
                yield EnumerationEntry(a, b, res, FamilyCurve(a, b, m, MordellCurve(m), *construct_points(a, b),
                                                              res.factorization))
            elif res.unknown and include_unknown:
                yield EnumerationEntry(a, b, res, None)


def count_structural(a_max: int, b_max: int, m_max: int | None = None) -> int:
    """Pairs passing the cheap conditions, by a plain double loop over all a, b."""
    n = 0
    for a in range(1, a_max + 1):
        for b in range(1, b_max + 1):
            if m_max is not None and family_m(a, b) > m_max:
                continue
            if structural_reason(a, b) is None:
                n += 1
    return n


@dataclass(frozen=True)
class S0Point:
    k: int
    l: int
    raw: tuple[int, int]
    a: int
    b: int
    flags: tuple[str, ...]

    @property
    def necessary_conditions_hold(self) -> bool:
        return not self.flags


def s0_parametrize(k: int, l: int) -> S0Point:
    """(a, b) = (2k + 3l, 6k - 9l), with b folded to |b| (m only sees b^6)."""
    a, b = 2 * k + 3 * l, 6 * k - 9 * l
    flags = []
    if k == 0 or valuation(k, 3) != 0:
        flags.append("v3(k) != 0")
    if l == 0 or valuation(l, 2) != 0:
        flags.append("v2(l) != 0")
    return S0Point(k, l, (a, b), abs(a), abs(b), tuple(flags))


def closed_form_x(a: int, b: int) -> dict[str, Fraction]:
    """x-coordinates of ten combinations of P1, P2, P3 as polynomials in a, b."""
    A, B = a, b
    out = {
        "P1+P2": Fraction(2 * A * (A**3 + A**2 * B - 2 * A * B**2 - 4 * B**3), (A + 2 * B) ** 2),
        # the cubic b-term is 8ab^3; degree 4 in (a, b) throughout
        "P1-P2": Fraction(2 * (A**4 - 3 * A**3 * B + 6 * A**2 * B**2 - 8 * A * B**3 + 8 * B**4), A**2),
        "P1+P3": Fraction(2 * (A**4 + 3 * A**3 * B + 6 * A**2 * B**2 + 8 * A * B**3 + 8 * B**4), A**2),
        "P1-P3": Fraction(2 * A * (A**3 - A**2 * B - 2 * A * B**2 + 4 * B**3), (A - 2 * B) ** 2),
        "P2+P3": Fraction(4 * B**4, A**2),
        "P2-P3": Fraction(A**4, (2 * B) ** 2),
        "P1+P2+P3": Fraction(
            2 * A * (A**5 + 4 * A**4 * B + 8 * A**3 * B**2 + 12 * A**2 * B**3 + 14 * A * B**4 + 8 * B**5),
            (A**2 + 2 * A * B + 2 * B**2) ** 2),
        "P1-P2-P3": Fraction(
            2 * A * (A**5 - 4 * A**4 * B + 8 * A**3 * B**2 - 12 * A**2 * B**3 + 14 * A * B**4 - 8 * B**5),
            (A**2 - 2 * A * B + 2 * B**2) ** 2),
    }
    num = A * sum(c * A**i * B**(17 - i) for i, c in enumerate((
        -6144, 34816, -101376, 204544, -320128, 409472, -439840, 403168, -318248,
        217216, -128160, 65072, -28152, 10200, -3006, 684, -108, 9)))
    den = B**2 * (2 * B - A) ** 2 * (16 * B**6 - 40 * A * B**5 + 56 * A**2 * B**4 - 46 * A**3 * B**3
                                     + 28 * A**4 * B**2 - 12 * A**5 * B + 3 * A**6) ** 2
    out["2P1-2P2-P3"] = Fraction(num, den)
    num = sum(c * A**i * B**(18 - i) for i, c in enumerate((
        4096, 24576, 71680, 135680, 188160, 204800, 181632, 133536, 83488, 48472,
        30720, 22464, 16496, 10584, 5496, 2178, 612, 108, 9)))
    den = A**2 * B**2 * (48 * B**6 + 128 * A * B**5 + 156 * A**2 * B**4 + 114 * A**3 * B**3
                         + 56 * A**4 * B**2 + 18 * A**5 * B + 3 * A**6) ** 2
    out["2P1+2P2+P3"] = Fraction(num, den)
    return out


CLOSED_FORM_COMBOS = {
    "P1+P2": (1, 1, 0), "P1-P2": (1, -1, 0), "P1+P3": (1, 0, 1), "P1-P3": (1, 0, -1),
    "P2+P3": (0, 1, 1), "P2-P3": (0, 1, -1), "P1+P2+P3": (1, 1, 1), "P1-P2-P3": (1, -1, -1),
    "2P1-2P2-P3": (2, -2, -1), "2P1+2P2+P3": (2, 2, 1),
}

# combinations whose 5-divisibility is searched exhaustively on each curve
SWEEP5_COMBOS = (
    (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (1, 1, 0), (0, 1, 1), (1, 0, 1),
    (1, -1, 0), (0, 1, -1), (-1, 0, 1),
    (1, 2, 0), (1, -2, 0), (0, 1, 2), (0, 1, -2), (2, 0, 1), (-2, 0, 1),
)
