"""Proving that points are not p-th multiples, and lattice-index coprimality.

A verdict for Q and p comes from, in order:

* the 2- and 3-descent congruence criteria on x(Q) = u/s^2,
* the height argument k^2 * lambda > h(Q),
* the same congruences on an equivalent lift c*Q + p*W (c prime to p),
  since Q is in pE exactly when c*Q + p*W is,
* an exhaustive search for rational R with pR = Q (the only step able to
  produce a preimage).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .curve import MordellCurve, RationalPoint, rational_sqrt
from .divpoly import DEFAULT_PRIME_BUDGET, division_equation, rational_roots
from .errors import CoverageError, PreconditionError
from .factor import factorize, valuation
from .intervals import HeightInterval
from .lattice import canonical_height

SUPPORTED_PRIMES = (2, 3, 5)


class Status(str, Enum):
    PROVEN_NOT_DIVISIBLE = "ProvenNotDivisible"
    FOUND_PREIMAGE = "FoundPreimage"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DivisibilityVerdict:
    status: Status
    criterion: str
    preimages: tuple[RationalPoint, ...] = ()
    detail: str = ""

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN_NOT_DIVISIBLE

    def to_json(self) -> dict:
        out = {"status": self.status.value, "criterion": self.criterion}
        if self.detail:
            out["detail"] = self.detail
        if self.preimages:
            out["preimages"] = [{"x": str(R.x), "y": str(R.y)} for R in self.preimages]
        return out


def _inconclusive(detail: str = "") -> DivisibilityVerdict:
    return DivisibilityVerdict(Status.INCONCLUSIVE, "none", (), detail)


@dataclass(frozen=True)
class XFraction:
    """x(Q) = u / s^2, not necessarily in lowest terms."""

    u: int
    s: int

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("s must be positive")

    @property
    def value(self) -> Fraction:
        return Fraction(self.u, self.s * self.s)

    @property
    def reduced(self) -> bool:
        return gcd(self.u, self.s) == 1

    @classmethod
    def of(cls, Q: RationalPoint) -> "XFraction":
        return cls(Q.alpha, Q.delta)


def _fractions_for(Q: RationalPoint, fractions: Iterable[XFraction] | None) -> list[XFraction]:
    if Q.is_infinity:
        raise PreconditionError("criteria need an affine point")
    out = [XFraction.of(Q)]
    for fr in fractions or ():
        if fr.value != Q.x:
            raise ValueError(f"{fr.u}/{fr.s}^2 is not x(Q) = {Q.x}")
        if fr not in out:
            out.append(fr)
    return out


def criteria_2(n: int, fr: XFraction) -> str | None:
    """Tag of the first 2-descent congruence satisfied by (u, s), else None.

    Valid for unreduced fractions too: dividing out a common square keeps
    each hypothesis.
    """
    u, s = fr.u, fr.s
    if n % 2 and u % 8 and s % 2:
        return "2E:odd-n"
    if n % 9 == 1 and u % 3 == 2 and s % 3:
        return "2E:n=1mod9"
    return None


def criteria_3(n: int, fr: XFraction) -> str | None:
    """Tag of the first 3-descent congruence satisfied by a reduced (u, s), else None."""
    if not fr.reduced:
        return None
    u, s = fr.u, fr.s
    if n % 2 and u % 2 == 0:
        return "3E:odd-n"
    if n % 9 == 1 and u % 3 == 1 and valuation(s, 3) == 1:
        return "3E:n=1mod9"
    return None


def not_in_2E(n: int, Q: RationalPoint, fractions: Iterable[XFraction] | None = None) -> DivisibilityVerdict:
    """Congruence proof that Q is not twice a rational point (Q non-torsion)."""
    for fr in _fractions_for(Q, fractions):
        tag = criteria_2(n, fr)
        if tag:
            return DivisibilityVerdict(Status.PROVEN_NOT_DIVISIBLE, tag, (), f"u={fr.u}, s={fr.s}")
    return _inconclusive()


def not_in_3E(n: int, Q: RationalPoint, fractions: Iterable[XFraction] | None = None) -> DivisibilityVerdict:
    """Congruence proof that Q is not three times a rational point (Q non-torsion).

    These criteria need the reduced fraction; unreduced ones are ignored.
    """
    for fr in _fractions_for(Q, fractions):
        tag = criteria_3(n, fr)
        if tag:
            return DivisibilityVerdict(Status.PROVEN_NOT_DIVISIBLE, tag, (), f"u={fr.u}, s={fr.s}")
    return _inconclusive()


def congruence_verdict(n: int, Q: RationalPoint, p: int) -> DivisibilityVerdict:
    if p == 2:
        return not_in_2E(n, Q)
    if p == 3:
        return not_in_3E(n, Q)
    return _inconclusive("no congruence criterion for this prime")


def height_rules_out_division(curve: MordellCurve, Q: RationalPoint, k: int, lam,
                              height: HeightInterval | None = None, heights=None) -> DivisibilityVerdict:
    """Q = kR forces h(Q) = k^2 h(R) >= k^2 lambda; refute when h(Q).hi is smaller.

    ``height`` is a certified enclosure of h(Q); otherwise it is computed
    with ``heights`` (a callable returning a canonical height) or afresh.
    """
    if k <= 1:
        return _inconclusive("k <= 1")
    lam_lo = lam.lo if isinstance(lam, HeightInterval) else Fraction(lam)
    if lam_lo <= 0:
        return _inconclusive("lambda is not positive")
    if height is None:
        height = (heights(Q) if heights is not None else canonical_height(curve, Q)).total
    if k * k * lam_lo > height.hi:
        return DivisibilityVerdict(Status.PROVEN_NOT_DIVISIBLE, "height",
                                   (), f"{k}^2*lambda > h(Q).hi")
    return _inconclusive()


# ---------------------------------------------------------------------------

def division_points(curve: MordellCurve, Q: RationalPoint, k: int,
                    prime_budget: int = DEFAULT_PRIME_BUDGET) -> list[RationalPoint]:
    """Every rational R with kR = Q, found exactly."""
    if k not in SUPPORTED_PRIMES:
        raise PreconditionError(f"division by {k} is not supported")
    if Q.is_infinity:
        raise PreconditionError("division of the point at infinity is not supported")
    if not curve.contains(Q):
        raise PreconditionError(f"{Q} is not on {curve!r}")
    n = curve.n
    out = []
    for w in rational_roots(division_equation(n, k, Q.x), prime_budget):
        y = rational_sqrt(w**3 + n)
        if y is None:
            continue
        for yy in {y, -y}:
            R = curve.point(w, yy)
            if curve.scalar_mul(k, R) == Q:
                out.append(R)
    return sorted(out, key=lambda R: (R.x, R.y))


def exhaustive_verdict(curve: MordellCurve, Q: RationalPoint, p: int,
                       prime_budget: int = DEFAULT_PRIME_BUDGET) -> DivisibilityVerdict:
    pre = division_points(curve, Q, p, prime_budget)
    if pre:
        return DivisibilityVerdict(Status.FOUND_PREIMAGE, "exhaustive", tuple(pre))
    return DivisibilityVerdict(Status.PROVEN_NOT_DIVISIBLE, "exhaustive")


# ---------------------------------------------------------------------------
# lines of (Z/p)^s

def _sym(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def normalize_line(combo: Sequence[int], p: int) -> tuple[int, ...]:
    """Representative of the line through combo: first nonzero entry 1, entries symmetric mod p."""
    red = [c % p for c in combo]
    lead = next((c for c in red if c), None)
    if lead is None:
        raise ValueError("the zero vector spans no line")
    inv = pow(lead, -1, p)
    return tuple(_sym(c * inv, p) for c in red)


def line_representatives(s: int, p: int) -> list[tuple[int, ...]]:
    """All (p^s - 1)/(p - 1) lines, in a fixed order."""
    seen = []
    for combo in itertools.product(range(p), repeat=s):
        if any(combo):
            line = normalize_line(combo, p)
            if line not in seen:
                seen.append(line)
    # lexicographic order from the last coordinate reads naturally: P, Q, P+Q, ...
    return sorted(seen, key=lambda v: (sum(1 for c in v if c), [abs(c) for c in v][::-1], [-c for c in v]))


# ---------------------------------------------------------------------------

@dataclass
class CombinationResult:
    combo: tuple[int, ...]
    verdict: DivisibilityVerdict
    witness: tuple[int, ...] | None = None  # coefficients of the point the verdict was proven on
    height: HeightInterval | None = None

    def to_json(self) -> dict:
        out = {"combo": list(self.combo), **self.verdict.to_json()}
        if self.witness is not None and tuple(self.witness) != tuple(self.combo):
            out["witness"] = list(self.witness)
        if self.height is not None:
            out["height"] = self.height.to_json()
        return out


def _lifts(combo: Sequence[int], p: int) -> list[tuple[int, ...]]:
    """c*combo + p*w for c prime to p and w in {-1,0,1}^s, smallest first."""
    s = len(combo)
    out = set()
    for c in range(1, p):
        for w in itertools.product((0, 1, -1), repeat=s):
            v = tuple(c * k + p * wi for k, wi in zip(combo, w))
            if v != tuple(combo) and any(v):
                out.add(v)
    return sorted(out, key=lambda v: (sum(map(abs, v)), [-c for c in v]))


def combination_verdict(curve: MordellCurve, points: Sequence[RationalPoint], p: int,
                        combo: Sequence[int], height_of: Callable | None = None, lam=None,
                        exhaustive: bool = True, use_lifts: bool = True,
                        prime_budget: int = DEFAULT_PRIME_BUDGET) -> CombinationResult:
    combo = tuple(combo)
    Q = curve.combination(combo, points)
    if Q.is_infinity:
        return CombinationResult(combo, DivisibilityVerdict(
            Status.FOUND_PREIMAGE, "trivial", (Q,), "combination is the point at infinity"))
    n = curve.n
    v = congruence_verdict(n, Q, p)
    if v.proven:
        return CombinationResult(combo, v, combo)
    h = None
    if height_of is not None and lam is not None:
        h = height_of(Q).total
        v = height_rules_out_division(curve, Q, p, lam, height=h)
        if v.proven:
            return CombinationResult(combo, v, combo, h)
    if use_lifts and p in (2, 3):
        for lift in _lifts(combo, p):
            L = curve.combination(lift, points)
            if L.is_infinity:
                continue
            v = congruence_verdict(n, L, p)
            if v.proven:
                return CombinationResult(combo, DivisibilityVerdict(
                    v.status, v.criterion + "+lift", (), v.detail), lift, h)
    if exhaustive:
        return CombinationResult(combo, exhaustive_verdict(curve, Q, p, prime_budget), combo, h)
    return CombinationResult(combo, _inconclusive(), None, h)


def combination_non_divisibility(curve: MordellCurve, points: Sequence[RationalPoint], p: int,
                                 combos: Sequence[Sequence[int]] | None = None, height_of=None, lam=None,
                                 exhaustive: bool = True, use_lifts: bool = True,
                                 prime_budget: int = DEFAULT_PRIME_BUDGET) -> dict[tuple[int, ...], CombinationResult]:
    """Verdict for each combination sum k_i P_i (default: one per line of (Z/p)^s)."""
    if p not in SUPPORTED_PRIMES:
        raise PreconditionError(f"prime {p} is not supported (use 2, 3 or 5)")
    if combos is None:
        combos = line_representatives(len(points), p)
    return {tuple(c): combination_verdict(curve, points, p, c, height_of, lam, exhaustive, use_lifts, prime_budget)
            for c in combos}


def index_not_divisible(s: int, p: int, verdicts: dict[tuple[int, ...], CombinationResult | DivisibilityVerdict]) -> bool:
    """True iff every line of (Z/p)^s has a proven non-divisibility verdict.

    Raises :class:`CoverageError` when some line has no verdict at all.
    """
    proven: dict[tuple[int, ...], bool] = {}
    for combo, res in verdicts.items():
        if len(combo) != s:
            raise ValueError(f"combination {combo} has the wrong length")
        if not any(c % p for c in combo):
            continue
        line = normalize_line(combo, p)
        verdict = res.verdict if isinstance(res, CombinationResult) else res
        proven[line] = proven.get(line, False) or verdict.proven
    missing = [line for line in line_representatives(s, p) if line not in proven]
    if missing:
        raise CoverageError(f"no verdict for lines {missing} of (Z/{p})^{s}")
    return all(proven.values())


def line_count(s: int, p: int) -> int:
    return (p**s - 1) // (p - 1)


def torsion_trivial(n: int, squarefree: bool | None = None) -> bool:
    """Trivial rational torsion on y^2 = x^3 + n for square-free n other than +-1."""
    if squarefree is None:
        squarefree = factorize(n).is_squarefree
        if squarefree is None:
            raise PreconditionError(f"square-freeness of {n} undecided; supply a factorization")
    return bool(squarefree) and n not in (1, -1)
