"""Elementary prime arithmetic: sieving, factorization, classical functions.

Provides:
    * sieve_primes     -- Eratosthenes sieve packaged as a PrimeTable
    * factorize        -- prime power decomposition by trial division
    * von_mangoldt     -- Lambda(m), log p on prime powers and 0 elsewhere
    * divisor_dn       -- m-th coefficient of zeta(s)**n (generalized divisor count)
    * prime_powers     -- ascending list of prime powers up to a limit
    * smallest_factor_table -- SPF sieve backing multiplicative table fills

The sieve works on odd numbers only, halving the transient working set; the
returned table stores just the primes themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Limits
from .errors import CapacityError, DomainError


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to an inclusive limit, ascending.

    Attributes:
        limit: inclusive sieving bound.
        primes: ascending int64 array of the primes <= limit.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def count(self) -> int:
        """Number of primes in the table (pi(limit))."""
        return len(self.primes)


@dataclass(frozen=True)
class PrimePowerDecomposition:
    """Factorization of a positive integer into prime powers.

    Attributes:
        m: the factored integer.
        factors: tuple of (prime, exponent) pairs with ascending primes.
    """

    m: int
    factors: tuple[tuple[int, int], ...]

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1


def sieve_primes(limit: int, limits: Limits = DEFAULT.limits) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` inclusive.

    Raises:
        DomainError: when ``limit`` < 2 (an empty sieve request).
        CapacityError: when ``limit`` exceeds the configured cap.
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be at least 2, got {limit}")
    if limit > limits.sieve:
        raise CapacityError(f"sieve limit {limit} exceeds cap {limits.sieve}")
    # Odd-only sieve: entry i represents 2*i + 1.
    half = (limit + 1) // 2
    odd = np.ones(half, dtype=bool)
    odd[0] = False  # 1 is not prime
    for i in range(1, min(half, (math.isqrt(limit) + 1) // 2 + 1)):
        if odd[i]:
            p = 2 * i + 1
            start = (p * p) // 2
            odd[start::p] = False
    primes = 2 * np.nonzero(odd)[0] + 1
    primes = np.concatenate(([2], primes)).astype(np.int64)
    return PrimeTable(limit=limit, primes=primes)


def factorize(m: int) -> PrimePowerDecomposition:
    """Trial-division factorization of a positive integer.

    Raises:
        DomainError: when ``m`` < 1.
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"cannot factor {m}; argument must be positive")
    factors: list[tuple[int, int]] = []
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return PrimePowerDecomposition(m=m, factors=tuple(factors))


def von_mangoldt(m: int) -> float:
    """The von Mangoldt function: log p when m = p**r, otherwise 0."""
    dec = factorize(m)
    if len(dec.factors) != 1:
        return 0.0
    return math.log(dec.factors[0][0])


def divisor_dn(m: int, n: int) -> int:
    """Number of ordered n-tuples of positive integers with product m.

    This is the m-th Dirichlet coefficient of zeta(s)**n; at prime powers it
    equals binomial(k + n - 1, n - 1).

    Raises:
        DomainError: when ``n`` < 1 or ``m`` < 1.
    """
    if n < 1:
        raise DomainError(f"tuple length must be positive, got {n}")
    dec = factorize(m)  # validates m
    out = 1
    for _, e in dec.factors:
        out *= math.comb(e + n - 1, n - 1)
    return out


def prime_powers(limit: int, table: PrimeTable | None = None) -> list[tuple[int, int, int]]:
    """All prime powers p**r <= limit as (m, p, r) triples, ascending in m."""
    limit = int(limit)
    if table is None or table.limit < limit:
        if limit < 2:
            return []
        table = sieve_primes(limit)
    out: list[tuple[int, int, int]] = []
    for p in table.primes[table.primes <= limit]:
        p = int(p)
        m, r = p, 1
        while m <= limit:
            out.append((m, p, r))
            m *= p
            r += 1
    out.sort()
    return out


def smallest_factor_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (entries 0 and 1 are 0)."""
    limit = int(limit)
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        sieve = np.arange(limit + 1, dtype=np.int64)
        spf[2::2] = 2
        for p in range(3, math.isqrt(limit) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p :: p]
                unmarked = block == 0
                block[unmarked] = p
        odd = spf[3::2]
        odd[odd == 0] = sieve[3::2][odd == 0]
    return spf
