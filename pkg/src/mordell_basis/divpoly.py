"""Division polynomials of y^2 = x^3 + n and exact rational division points.

For even k the classical psi_k carries a factor 2y; we work with the x-only
polynomials f_k (psi_k = f_k for odd k, psi_k = 2y f_k for even k), so

    x(kR) = (x f_k^2 - 4 F f_{k-1} f_{k+1}) / f_k^2               (k odd)
    x(kR) = (4 x F f_k^2 - f_{k-1} f_{k+1}) / (4 F f_k^2)          (k even)

with F = x^3 + n.

Rational roots of the resulting integer polynomial are found p-adically: a
prime l not dividing the leading coefficient with only simple roots mod l is
chosen, each root is Newton-lifted to l^e beyond a Cauchy-type bound, and the
candidate is confirmed exactly. This needs no factorization of the
coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import Poly, nextprime
from sympy.abc import x as X

from .errors import BudgetExceededError

DEFAULT_PRIME_BUDGET = 400


@lru_cache(maxsize=64)
def _f_table(n: int, top: int) -> tuple[Poly, ...]:
    F = Poly(X**3 + n, X, domain="ZZ")
    f = [Poly(0, X, domain="ZZ"), Poly(1, X, domain="ZZ"), Poly(1, X, domain="ZZ"),
         Poly(3 * X**4 + 12 * n * X, X, domain="ZZ"),
         Poly(2 * (X**6 + 20 * n * X**3 - 8 * n * n), X, domain="ZZ")]
    F2_16 = F**2 * 16
    for k in range(5, top + 1):
        m = k // 2
        if k % 2:
            if m % 2 == 0:
                f.append(F2_16 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3)
            else:
                f.append(f[m + 2] * f[m] ** 3 - F2_16 * f[m - 1] * f[m + 1] ** 3)
        else:
            f.append(f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2))
    return tuple(f)


def division_poly(n: int, k: int) -> Poly:
    """f_k for y^2 = x^3 + n (x-only; psi_k / 2y for even k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _f_table(n, max(k, 4))[k]


@lru_cache(maxsize=64)
def multiplication_map(n: int, k: int) -> tuple[Poly, Poly]:
    """(num, den) with x(kR) = num(x(R)) / den(x(R)), coprime integer polynomials."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return Poly(X, X, domain="ZZ"), Poly(1, X, domain="ZZ")
    f = _f_table(n, max(k + 1, 4))
    F = Poly(X**3 + n, X, domain="ZZ")
    xp = Poly(X, X, domain="ZZ")
    if k % 2:
        num = xp * f[k] ** 2 - 4 * F * f[k - 1] * f[k + 1]
        den = f[k] ** 2
    else:
        num = 4 * xp * F * f[k] ** 2 - f[k - 1] * f[k + 1]
        den = 4 * F * f[k] ** 2
    return num, den


# ---------------------------------------------------------------------------
# integer polynomials as coefficient lists, constant term first

def _eval_mod(coeffs: list[int], r: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * r + c) % mod
    return acc


def _eval(coeffs: list[int], r) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def _deriv(coeffs: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _roots_mod(coeffs: list[int], ell: int) -> list[int]:
    red = [c % ell for c in coeffs]
    return [r for r in range(ell) if _eval_mod(red, r, ell) == 0]


def rational_roots(coeffs: list[int], prime_budget: int = DEFAULT_PRIME_BUDGET,
                   start_prime: int = 101) -> list[Fraction]:
    """All rational roots of a nonzero integer polynomial (constant term first).

    Multiple rational roots are reported once. ``prime_budget`` caps the
    number of auxiliary primes tried while looking for one with only simple
    roots; when exhausted a :class:`BudgetExceededError` is raised.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    roots: list[Fraction] = []
    # strip the root 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(coeffs) == 1:
        return roots
    d = _deriv(coeffs)
    ell = start_prime - 1
    reduced = False
    for attempt in range(prime_budget):
        if attempt == 20 and not reduced:
            # persistent repeated roots mod ell: pass to the squarefree part
            coeffs = [int(c) for c in reversed(Poly(list(reversed(coeffs)), X).sqf_part().all_coeffs())]
            d = _deriv(coeffs)
            reduced = True
        ell = nextprime(ell)
        lc = coeffs[-1]
        if lc % ell == 0:
            continue
        rs = _roots_mod(coeffs, ell)
        if any(_eval_mod(d, r, ell) == 0 for r in rs):
            continue
        bound = 2 * (abs(lc) + max(abs(c) for c in coeffs)) + 1
        for r in rs:
            cand = _lift_and_recover(coeffs, d, r, ell, lc, bound)
            if _eval(coeffs, cand) == 0 and cand not in roots:
                roots.append(cand)
        return sorted(roots)
    raise BudgetExceededError(f"no suitable auxiliary prime among {prime_budget} tried")


def _lift_and_recover(coeffs, d, r, ell, lc, bound) -> Fraction:
    mod = ell
    root = r
    while mod <= bound:
        mod = mod * mod
        # Newton step modulo the squared modulus
        fr = _eval(coeffs, root) % mod
        dr = _eval(d, root) % mod
        root = (root - fr * pow(dr, -1, mod)) % mod
    y = (lc * root) % mod
    if y > mod // 2:
        y -= mod
    return Fraction(y, lc)


# ---------------------------------------------------------------------------

def division_equation(n: int, k: int, xq: Fraction) -> list[int]:
    """Primitive integer polynomial (constant term first) whose roots are the x(R) with kR = +-Q."""
    u, s2 = xq.numerator, xq.denominator
    num, den = multiplication_map(n, k)
    P = num * s2 - den * u
    _, P = P.primitive()
    return [int(c) for c in reversed(P.all_coeffs())]
