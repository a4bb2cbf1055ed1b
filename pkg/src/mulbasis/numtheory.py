"""Prime tables, valuations, and residue vectors.

Everything downstream leans on this module: sieving with a
smallest-prime-factor array, p-adic valuations v_p(x), the reduction map

    rho(x) = (v_{p_1}(x) mod q, ..., v_{p_n}(x) mod q)

into F_q^n for a fixed list of primes, doubling shifts of an integer into
a window [a+1, a+M], and Gaussian-elimination rank over F_q.

Products that can exceed machine words (factorial divisibility checks)
go through ``big_product``, which stays in arbitrary-precision integers.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "IncompleteTableError",
    "ResourceLimitError",
    "PrimeTable",
    "Factorization",
    "ValuationVector",
    "sieve",
    "is_prime",
    "valuation",
    "factorize",
    "rho_vector",
    "shift_into_interval",
    "rank_mod_q",
    "big_product",
]

# Hard cap on sieve size, in table entries.  Overridable via environment
# so constrained hosts can lower it; exceeding it raises instead of
# attempting a huge allocation.
_ENV_LIMIT = "MULBASIS_SIEVE_LIMIT"
_DEFAULT_SIEVE_CAP = 100_000_000


class ResourceLimitError(Exception):
    """Requested table exceeds the configured memory budget."""


class IncompleteTableError(ValueError):
    """A factorization ran past the prime table.

    ``cofactor`` is the remaining part of the input whose prime factors
    all exceed the table limit.
    """

    def __init__(self, value: int, cofactor: int, limit: int):
        self.value = value
        self.cofactor = cofactor
        self.limit = limit
        super().__init__(
            f"cannot factor {value}: residual cofactor {cofactor} has no "
            f"prime factor <= table limit {limit}"
        )


def _sieve_cap() -> int:
    raw = os.environ.get(_ENV_LIMIT)
    if raw is None:
        return _DEFAULT_SIEVE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_LIMIT} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"{_ENV_LIMIT} must be positive, got {cap}")
    return cap


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primes up to ``limit`` plus a smallest-prime-factor array.

    ``primes`` is ascending and complete below the limit.  ``spf[x]`` is
    the least prime factor of x for 2 <= x <= limit, which makes repeated
    factorization below the limit a chain of array lookups.
    """

    limit: int
    primes: np.ndarray
    spf: np.ndarray

    def prime_count(self, x: int) -> int:
        """pi(x): number of primes <= x.  Requires x <= limit."""
        if x > self.limit:
            raise ValueError(f"prime_count({x}) beyond table limit {self.limit}")
        if x < 2:
            return 0
        return int(np.searchsorted(self.primes, x, side="right"))

    def is_prime(self, x: int) -> bool:
        if x > self.limit:
            raise ValueError(f"is_prime({x}) beyond table limit {self.limit}")
        return x >= 2 and int(self.spf[x]) == x

    def primes_in(self, lo: int, hi: int) -> list[int]:
        """Primes p with lo <= p <= hi, ascending."""
        if hi > self.limit:
            raise ValueError(f"primes_in upper end {hi} beyond table limit {self.limit}")
        i = int(np.searchsorted(self.primes, lo, side="left"))
        j = int(np.searchsorted(self.primes, hi, side="right"))
        return [int(p) for p in self.primes[i:j]]


def sieve(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes with a smallest-prime-factor array."""
    if limit < 1:
        raise ValueError(f"sieve limit must be >= 1, got {limit}")
    cap = _sieve_cap()
    if limit > cap:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds budget {cap} (set {_ENV_LIMIT} to raise it)"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    # untouched entries >= 2 are prime
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    primes = np.flatnonzero(spf == np.arange(limit + 1, dtype=np.uint32))
    primes = primes[primes >= 2].astype(np.int64)
    return PrimeTable(limit=limit, primes=primes, spf=spf)


# Deterministic Miller-Rabin witness set, valid far past desk scale.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def valuation(p: int, x: int) -> int:
    """v_p(x): exponent of the prime p in x.  Requires x >= 1."""
    if x < 1:
        raise ValueError(f"valuation needs x >= 1, got {x}")
    if not is_prime(p):
        raise ValueError(f"valuation base {p} is not prime")
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


@dataclass(frozen=True)
class Factorization:
    """value = prod p**e over ``factors``; keys ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def largest_prime(self) -> int:
        """Largest prime factor; 1 for value 1."""
        return self.factors[-1][0] if self.factors else 1


def factorize(x: int, table: PrimeTable) -> Factorization:
    """Full factorization of x using the table.

    Below the table limit this walks the smallest-prime-factor array;
    above it, trial division by the listed primes.  If a cofactor with
    no listed prime factor survives, raises IncompleteTableError naming
    it (the caller's table was too small).
    """
    if x < 1:
        raise ValueError(f"factorize needs x >= 1, got {x}")
    factors: dict[int, int] = {}
    rem = x
    if rem <= table.limit:
        spf = table.spf
        while rem > 1:
            p = int(spf[rem])
            factors[p] = factors.get(p, 0) + 1
            rem //= p
        return Factorization(value=x, factors=tuple(sorted(factors.items())))
    for p in table.primes:
        p = int(p)
        if p * p > rem:
            break
        while rem % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rem //= p
        if rem <= table.limit:
            break
    if rem > 1:
        if rem <= table.limit:
            spf = table.spf
            while rem > 1:
                p = int(spf[rem])
                factors[p] = factors.get(p, 0) + 1
                rem //= p
        else:
            # every prime factor of rem exceeds the table limit
            raise IncompleteTableError(value=x, cofactor=rem, limit=table.limit)
    return Factorization(value=x, factors=tuple(sorted(factors.items())))


@dataclass(frozen=True)
class ValuationVector:
    """Residue vector (v_{p_i}(x) mod q)_i over a fixed prime list."""

    primes: tuple[int, ...]
    q: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.coords):
            raise ValueError("coordinate count must match prime list length")

    def _check_compat(self, other: "ValuationVector") -> None:
        if self.primes != other.primes or self.q != other.q:
            raise ValueError("vectors over different prime lists or moduli")

    def __add__(self, other: "ValuationVector") -> "ValuationVector":
        self._check_compat(other)
        q = self.q
        return ValuationVector(
            self.primes, q, tuple((a + b) % q for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "ValuationVector") -> "ValuationVector":
        self._check_compat(other)
        q = self.q
        return ValuationVector(
            self.primes, q, tuple((a - b) % q for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "ValuationVector":
        q = self.q
        return ValuationVector(self.primes, q, tuple((-a) % q for a in self.coords))

    def scale(self, c: int) -> "ValuationVector":
        q = self.q
        return ValuationVector(self.primes, q, tuple((c * a) % q for a in self.coords))

    def halve(self) -> "ValuationVector":
        """Multiply by the inverse of 2 mod q (q odd)."""
        return self.scale(pow(2, -1, self.q))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c != 0)

    @classmethod
    def zero(cls, primes: Sequence[int], q: int) -> "ValuationVector":
        return cls(tuple(primes), q, (0,) * len(primes))


def rho_vector(x: int, primes: Sequence[int], q: int) -> ValuationVector:
    """rho(x): valuations of x at the listed primes, reduced mod q.

    q must be an odd prime so that halving (division by 2 in F_q) is
    defined.  Prime factors of x outside the list are ignored.
    """
    if q == 2 or not is_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")
    plist = tuple(primes)
    if len(set(plist)) != len(plist):
        raise ValueError("prime list contains duplicates")
    if x < 1:
        raise ValueError(f"rho_vector needs x >= 1, got {x}")
    coords = []
    for p in plist:
        if not is_prime(p):
            raise ValueError(f"prime list entry {p} is not prime")
        e = 0
        y = x
        while y % p == 0:
            y //= p
            e += 1
        coords.append(e % q)
    return ValuationVector(plist, q, tuple(coords))


def shift_into_interval(x: int, a: int, M: int) -> int:
    """Smallest k >= 0 with a+1 <= 2**k * x <= a+M.

    Needs 1 <= x <= M and 0 <= a <= M; a doubling shift into the window
    always exists then, because the window is wider than one doubling gap.
    """
    if not 1 <= x <= M:
        raise ValueError(f"need 1 <= x <= M, got x={x}, M={M}")
    if not 0 <= a <= M:
        raise ValueError(f"need 0 <= a <= M, got a={a}, M={M}")
    k = 0
    y = x
    while y <= a:
        y *= 2
        k += 1
    if y > a + M:  # cannot happen under the precondition
        raise ArithmeticError(f"no doubling of {x} lands in [{a + 1}, {a + M}]")
    return k


def rank_mod_q(vectors: Iterable, q: int) -> int:
    """Rank over F_q of a list of vectors, by Gaussian elimination.

    Accepts ValuationVector, any object with integer ``coords``, or raw
    integer sequences.  All rows must have the same length.
    """
    if not is_prime(q):
        raise ValueError(f"modulus {q} is not prime")
    rows: list[list[int]] = []
    for v in vectors:
        coords = getattr(v, "coords", v)
        rows.append([int(c) % q for c in coords])
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rank_mod_q rows have mixed lengths")
    rank = 0
    for col in range(width):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, q)
        rows[rank] = [(inv * c) % q for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(c - f * pc) % q for c, pc in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def big_product(values: Iterable[int]) -> int:
    """Exact product in arbitrary precision (empty product is 1)."""
    return math.prod(values, start=1)
