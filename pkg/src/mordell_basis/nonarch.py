"""Non-archimedean local heights on Mordell curves y^2 = x^3 + n.

All values are exact: an :class:`ExactLogCombination` stores sum q_b log b with
rational q_b. The bases are primes whenever factoring succeeds; a composite
that resisted factoring is kept as its own base, and equality is then decided
on a common gcd-free basis so the comparison stays exact.

Normalization: heights here are twice those of the usual ``log|x|/2``
convention, so local heights of integral points at good primes are
2 v_p(delta) log p.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .curve import MordellCurve, RationalPoint
from .errors import PreconditionError
from .factor import factorize, valuation
from .intervals import DEFAULT_PRECISION, HeightInterval, interval_context


def _coprime_basis(values) -> list[int]:
    """Gcd-free basis of a collection of integers > 1."""
    basis: list[int] = []
    for v in values:
        pending = [v]
        while pending:
            x = pending.pop()
            if x == 1:
                continue
            for i, b in enumerate(basis):
                g = gcd(x, b)
                if g > 1:
                    basis.pop(i)
                    pending.extend(t for t in (g, b // g, x // g) if t > 1)
                    break
            else:
                basis.append(x)
    return sorted(basis)


def _express(n: int, basis: list[int]) -> dict[int, int]:
    out = {}
    for b in basis:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        if e:
            out[b] = e
    if n != 1:
        raise ArithmeticError("integer does not factor over the given basis")
    return out


class ExactLogCombination:
    """sum_b q_b * log(b), with integer bases b > 1 and rational q_b != 0."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean = {}
        for base, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if base < 2:
                raise ValueError(f"invalid log base {base}")
            if coeff:
                clean[int(base)] = clean.get(int(base), Fraction(0)) + coeff
        self.terms = {b: q for b, q in sorted(clean.items()) if q}

    @classmethod
    def log_of(cls, n: int, coeff: Fraction | int = 1) -> "ExactLogCombination":
        """coeff * log|n|, split over the primes of n where possible."""
        n = abs(n)
        if n == 0:
            raise ValueError("log of zero")
        if n == 1:
            return cls()
        f = factorize(n)
        terms = {p: Fraction(coeff) * e for p, e in f.factors.items()}
        for c in f.unfactored:
            terms[c] = terms.get(c, Fraction(0)) + Fraction(coeff)
        return cls(terms)

    def _refined(self, basis: list[int]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for b, q in self.terms.items():
            for p, e in _express(b, basis).items():
                out[p] = out.get(p, Fraction(0)) + q * e
        return {p: q for p, q in out.items() if q}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactLogCombination):
            return NotImplemented
        if self.terms == other.terms:
            return True
        basis = _coprime_basis(list(self.terms) + list(other.terms))
        return self._refined(basis) == other._refined(basis)

    __hash__ = None

    def __add__(self, other: "ExactLogCombination") -> "ExactLogCombination":
        terms = dict(self.terms)
        for b, q in other.terms.items():
            terms[b] = terms.get(b, Fraction(0)) + q
        return ExactLogCombination(terms)

    def __neg__(self) -> "ExactLogCombination":
        return ExactLogCombination({b: -q for b, q in self.terms.items()})

    def __sub__(self, other: "ExactLogCombination") -> "ExactLogCombination":
        return self + (-other)

    def __mul__(self, k) -> "ExactLogCombination":
        return ExactLogCombination({b: q * Fraction(k) for b, q in self.terms.items()})

    __rmul__ = __mul__

    def coefficient(self, base: int) -> Fraction:
        return self.terms.get(base, Fraction(0))

    def evaluate(self, prec: int = DEFAULT_PRECISION) -> HeightInterval:
        """Outward-rounded enclosure of the real value."""
        ctx = interval_context(prec)
        total = ctx.mpf(0)
        for b, q in self.terms.items():
            total += ctx.mpf(q.numerator) * ctx.log(ctx.mpf(b)) / ctx.mpf(q.denominator)
        return HeightInterval.from_iv(total, prec)

    def to_json(self) -> dict[str, str]:
        return {str(b): str(q) for b, q in self.terms.items()}

    @classmethod
    def from_json(cls, data: dict[str, str]) -> "ExactLogCombination":
        return cls({int(b): Fraction(q) for b, q in data.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b, q in self.terms.items():
            coeff = "" if q == 1 else ("-" if q == -1 else f"{q}*")
            parts.append(f"{coeff}log({b})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ExactLogCombination({self})"


# ---------------------------------------------------------------------------

def is_global_minimal(n: int) -> bool:
    """Minimality of y^2 = x^3 + n for sixth-power-free n."""
    return n % 64 != 16


def _v(n: int, p: int) -> float:
    return float("inf") if n == 0 else valuation(n, p)


def _check_point(curve: MordellCurve, P: RationalPoint) -> None:
    if P.is_infinity:
        raise PreconditionError("local height undefined at the point at infinity")
    if not curve.contains(P):
        raise PreconditionError(f"{P} is not on {curve!r}")


def silverman_abc(p: int, P: RationalPoint, n: int) -> tuple[float, float, float]:
    """The valuations (A, B, C) that drive the case split; inf when the argument is 0."""
    al, be, de = P.alpha, P.beta, P.delta
    vd = valuation(de, p)
    A = _v(3, p) + 2 * _v(al, p) - 4 * vd
    B = _v(2, p) + _v(be, p) - 3 * vd
    C = _v(3, p) + _v(al, p) + _v(al**3 + 4 * n * de**6, p) - 8 * vd
    return A, B, C


def silverman_lambda_p(p: int, P: RationalPoint, curve: MordellCurve) -> ExactLogCombination:
    """Local height at p = 2 or 3 via the c4 = 0 case split of Silverman's algorithm."""
    if p not in (2, 3):
        raise PreconditionError("silverman_lambda_p handles p = 2, 3 only")
    _check_point(curve, P)
    n = curve.n
    if not is_global_minimal(n):
        raise PreconditionError(f"y^2 = x^3 + {n} is not minimal at 2")
    if n % p == 0:
        raise PreconditionError(f"{p} divides n = {n}")
    A, B, C = silverman_abc(p, P, n)
    if A <= 0 or B <= 0:
        v_x = valuation(P.alpha, p) - 2 * valuation(P.delta, p) if P.alpha else float("inf")
        lam = 2 * max(Fraction(0), -Fraction(v_x) / 2) if v_x != float("inf") else Fraction(0)
    elif C >= 3 * B:
        lam = Fraction(-2 * int(B), 3)
    else:
        # never reached at p = 2 when v_2(n) = 0
        assert p != 2, "C < 3B at p = 2 contradicts v_2(n) = 0"
        lam = Fraction(-int(C), 4)
    return ExactLogCombination({p: lam})


def lambda_p_generic(p: int, P: RationalPoint, curve: MordellCurve) -> ExactLogCombination:
    """Local height 2 v_p(delta) log p at a prime p >= 5 (n square-free)."""
    if p in (2, 3):
        raise PreconditionError("lambda_p_generic requires p >= 5")
    _check_point(curve, P)
    if P.alpha % p == 0 and P.beta % p == 0:
        raise ArithmeticError(f"p = {p} divides alpha and beta; n cannot be square-free")
    return ExactLogCombination({p: 2 * valuation(P.delta, p)})


def lambda_prime_2(P: RationalPoint) -> ExactLogCombination:
    if P.alpha % 2:
        return ExactLogCombination()
    return ExactLogCombination({2: Fraction(-2, 3)})


def lambda_prime_3(P: RationalPoint) -> ExactLogCombination:
    if P.beta % 3:
        return ExactLogCombination()
    return ExactLogCombination({3: Fraction(-1, 2)})


def check_height_hypotheses(curve: MordellCurve, squarefree: bool | None = None) -> bool | None:
    """Validate the hypotheses of the closed form; returns square-freeness status.

    ``squarefree`` may be supplied by a caller that already factored n; None
    means "decide here", and an undecidable factorization is returned as None
    (the caller records the hypothesis as assumed).
    """
    n = curve.n
    if n % 2 == 0 or n % 3 == 0:
        raise PreconditionError(f"closed form needs gcd(n, 6) = 1, got n = {n}")
    if squarefree is None:
        squarefree = factorize(n).is_squarefree
    if squarefree is False:
        raise PreconditionError(f"n = {n} is not square-free")
    return squarefree


def hf(P: RationalPoint, curve: MordellCurve, squarefree: bool | None = None) -> ExactLogCombination:
    """Non-archimedean part 2 log(delta) + lambda'_2 + lambda'_3 of the canonical height."""
    _check_point(curve, P)
    check_height_hypotheses(curve, squarefree)
    return ExactLogCombination.log_of(P.delta, 2) + lambda_prime_2(P) + lambda_prime_3(P)


def hf_by_primes(P: RationalPoint, curve: MordellCurve) -> ExactLogCombination:
    """Sum of the per-prime local heights over 2, 3 and the primes of delta."""
    total = silverman_lambda_p(2, P, curve) + silverman_lambda_p(3, P, curve)
    for p in factorize(P.delta).factors:
        if p > 3:
            total = total + lambda_p_generic(p, P, curve)
    return total


def family_valuations_2_3(a: int, b: int) -> tuple[int, int]:
    """(v_3(m), v_2(m)) for m = a^6 + 16 b^6 with gcd(a, b) = 1."""
    if gcd(a, b) != 1:
        raise PreconditionError(f"gcd({a}, {b}) != 1")
    m = a**6 + 16 * b**6
    v3, v2 = valuation(m, 3), valuation(m, 2)
    assert v3 == 0, f"3 divides {m}"
    if m % 64 != 16:
        assert v2 == 0, f"2 divides {m} although m mod 64 != 16"
    return v3, v2
