"""Integer factorization with an explicit work budget.

Trial division by the primes below ``trial_bound`` first, then Pollard rho
(Brent's variant, from sympy) on any composite cofactor. When the budget
runs out the result is reported as incomplete instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

from sympy import isprime
from sympy.ntheory import pollard_pm1, pollard_rho, primerange

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_RHO_STEPS = 200_000


@lru_cache(maxsize=4)
def _small_primes(bound: int) -> tuple[int, ...]:
    return tuple(primerange(2, bound))


def valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass
class Factorization:
    """Prime factorization, possibly with an unfactored composite left over."""

    n: int
    factors: dict[int, int] = field(default_factory=dict)
    unfactored: list[int] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.unfactored

    @property
    def is_squarefree(self) -> bool | None:
        """True/False when decidable from the known part, else None."""
        if any(e > 1 for e in self.factors.values()):
            return False
        if len(set(self.unfactored)) < len(self.unfactored):
            return False
        return True if self.complete else None

    def as_text(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.factors.items())]
        parts += [f"C{len(str(c))}({c})" for c in self.unfactored]
        return " * ".join(parts) if parts else "1"


def _split(c: int, rho_steps: int) -> int | None:
    r = isqrt(c)
    if r * r == c:
        return r
    for seed in range(1, 6):
        d = pollard_rho(c, a=seed, retries=0, seed=seed, max_steps=rho_steps)
        if d:
            return d
    return pollard_pm1(c, B=10_000, retries=2)


def factorize(
    n: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_steps: int = DEFAULT_RHO_STEPS,
) -> Factorization:
    """Factor |n|; composites that resist ``rho_steps`` stay in ``unfactored``."""
    if n == 0:
        raise ValueError("cannot factor 0")
    out = Factorization(n)
    m = abs(n)
    for p in _small_primes(trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.factors[p] = e
    pending = [m] if m > 1 else []
    while pending:
        c = pending.pop()
        if c < trial_bound * trial_bound or isprime(c):
            # below trial_bound^2 a cofactor free of small primes is prime
            out.factors[c] = out.factors.get(c, 0) + 1
            continue
        d = _split(c, rho_steps)
        if d is None or d in (1, c):
            out.unfactored.append(c)
            continue
        pending.extend([d, c // d])
    return out


def is_squarefree(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND,
                  rho_steps: int = DEFAULT_RHO_STEPS) -> bool | None:
    """Square-freeness of n; None if the budget was insufficient to decide."""
    return factorize(n, trial_bound, rho_steps).is_squarefree


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing n; raises if the factorization is incomplete."""
    f = factorize(n)
    if not f.complete:
        raise ArithmeticError(f"could not fully factor {n}")
    return sorted(f.factors)
