"""Normal-form reduction of covered progressions and span certificates.

A pair (A, B) with A an M-term progression inside B*B can be cleaned up
so that the offset and step of A, written g*u and g*v, satisfy
gcd(v, g) = 1: any prime dividing the step more often than the offset
can be stripped without losing the cover, shrinking the product of B
each time.  On a reduced pair, indices m whose term u + v*m carries a
private prime give a rank certificate: the valuation map into F_q^r
sends those terms to independent vectors inside a sumset of the mapped
basis, so |B| is at least the number of marked indices.

Also here: the factorial-divisibility check for terms with no large or
exceptional prime content, and the two shift-into-interval marking
constructions (single large prime / product of three small primes) that
feed the end-to-end pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .numtheory import (
    PrimeTable,
    big_product,
    factorize,
    is_prime,
    rank_mod_q,
    rho_vector,
    shift_into_interval,
    valuation,
)
from .productsets import APSpec, icbrt, verify_cover

__all__ = [
    "InvariantViolationError",
    "ReducedPair",
    "MarkingSet",
    "MarkingSets",
    "LowerBoundCertificate",
    "FactorialCheck",
    "reduce_pair",
    "certify_lower_bound",
    "factorial_divisibility_check",
    "build_marking_sets",
    "random_injected_pair",
    "random_divisibility_instance",
]


class InvariantViolationError(AssertionError):
    """A step broke a property the construction guarantees; a bug, not bad input."""


@dataclass(frozen=True)
class ReducedPair:
    """Progression plus multiplicative cover; ``reduced`` asserts gcd(v, g) = 1."""

    ap: APSpec
    basis: frozenset[int]
    reduced: bool = False

    def __post_init__(self):
        if not all(isinstance(b, int) and b >= 1 for b in self.basis):
            raise ValueError("basis elements must be positive integers")
        if self.reduced and math.gcd(self.ap.v, self.ap.g) != 1:
            raise ValueError(
                f"reduced flag set but gcd(v, g) = {math.gcd(self.ap.v, self.ap.g)}"
            )

    @classmethod
    def of(cls, ap: APSpec, basis) -> "ReducedPair":
        return cls(ap=ap, basis=frozenset(basis), reduced=math.gcd(ap.v, ap.g) == 1)

    def verify(self):
        return verify_cover(self.ap.elements(), self.basis)

    def to_record(self) -> dict:
        return {
            "ap": {"g": self.ap.g, "u": self.ap.u, "v": self.ap.v, "M": self.ap.M},
            "basis": sorted(self.basis),
            "reduced": self.reduced,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReducedPair":
        ap = rec["ap"]
        return cls(
            ap=APSpec(g=ap["g"], u=ap["u"], v=ap["v"], M=ap["M"]),
            basis=frozenset(int(b) for b in rec["basis"]),
            reduced=bool(rec.get("reduced", False)),
        )


@dataclass(frozen=True, eq=True)
class MarkingSet:
    """Indices m, each owning a prime that divides its term and no other's."""

    indices: frozenset[int]
    prime_of: dict[int, int] = field(compare=True)

    def __post_init__(self):
        if self.indices != frozenset(self.prime_of):
            raise ValueError("indices and prime_of keys disagree")
        bad = [p for p in self.prime_of.values() if not is_prime(p)]
        if bad:
            raise ValueError(f"non-prime marks: {sorted(set(bad))}")

    def __len__(self) -> int:
        return len(self.indices)

    def validate(self, u: int, v: int) -> None:
        """Divisibility and privacy of each mark; raises naming the offense."""
        for m in sorted(self.indices):
            p = self.prime_of[m]
            if (u + v * m) % p:
                raise ValueError(f"mark invariant fails: (m={m}, m'={m}, p={p}) does not divide its term")
            for m2 in sorted(self.indices):
                if m2 != m and (u + v * m2) % p == 0:
                    raise ValueError(f"mark invariant fails: (m={m}, m'={m2}, p={p}) divides both terms")

    def to_record(self) -> dict:
        return {"prime_of": {str(m): p for m, p in sorted(self.prime_of.items())}}

    @classmethod
    def from_record(cls, rec: dict) -> "MarkingSet":
        prime_of = {int(m): int(p) for m, p in rec["prime_of"].items()}
        return cls(indices=frozenset(prime_of), prime_of=prime_of)


def _least_prime_factor(x: int) -> int:
    if x % 2 == 0:
        return 2
    d = 3
    while d * d <= x:
        if x % d == 0:
            return d
        d += 2
    return x


def reduce_pair(pair: ReducedPair) -> ReducedPair:
    """Strip primes over-dividing the step until gcd(v, g) = 1.

    Each pass takes the smallest prime p with v_p(step) > v_p(offset) = f >= 1.
    For f = 1 the progression is divided by p and the basis keeps
    {v_p = 0} elements plus {b/p : v_p(b) = 1}; otherwise division is by
    p**2 and the basis keeps {v_p = 0}, {b/p : 0 < v_p(b) < f} and
    {b/p**2 : v_p(b) >= f}.  The cover survives every pass and the
    product of the basis strictly shrinks, which bounds the loop.
    """
    check = pair.verify()
    if not check.covered:
        raise ValueError(f"input pair is not a cover; first failure at {check.first_uncovered}")
    ap = pair.ap
    basis = set(pair.basis)
    if math.gcd(ap.v, ap.g) == 1:
        return pair if pair.reduced else replace(pair, reduced=True)
    product = big_product(basis)
    while True:
        common = math.gcd(ap.v, ap.g)
        if common == 1:
            break
        p = _least_prime_factor(common)
        a, d = ap.offset, ap.step
        f = valuation(p, a)
        e = valuation(p, d)
        if not e > f >= 1:
            raise InvariantViolationError(f"prime {p} has v_p(step)={e}, v_p(offset)={f}")
        if f == 1:
            basis = {b for b in basis if b % p} | {
                b // p for b in basis if valuation(p, b) == 1
            }
            ap = APSpec.from_offset_step(a // p, d // p, ap.M)
        else:
            vals = {b: valuation(p, b) for b in basis}
            basis = (
                {b for b, w in vals.items() if w == 0}
                | {b // p for b, w in vals.items() if 0 < w < f}
                | {b // p**2 for b, w in vals.items() if w >= f}
            )
            ap = APSpec.from_offset_step(a // p**2, d // p**2, ap.M)
        step_check = verify_cover(ap.elements(), basis)
        if not step_check.covered:
            raise InvariantViolationError(
                f"reduction at p={p} lost the cover at {step_check.first_uncovered}"
            )
        new_product = big_product(basis)
        if new_product >= product:
            raise InvariantViolationError(f"basis product did not decrease at p={p}")
        product = new_product
    return ReducedPair(ap=ap, basis=frozenset(basis), reduced=True)


@dataclass(frozen=True)
class LowerBoundCertificate:
    q: int
    bound: int
    verified: bool
    rank: int
    basis_size: int


def certify_lower_bound(pair: ReducedPair, marks: MarkingSet) -> LowerBoundCertificate:
    """Span certificate: |basis| >= |marks| on a reduced pair.

    With q the smallest odd prime above every marked valuation, the map
    x -> (v_p(x) mod q) over the mark primes sends each marked term to a
    vector supported on its own coordinate; those land in the sumset of
    the shifted basis image, so the target rank |marks| forces at least
    that many basis elements.  Every link is checked computationally.
    """
    ap = pair.ap
    u, v, g = ap.u, ap.v, ap.g
    marks.validate(u, v)
    idx = sorted(marks.indices)
    n_marks = len(idx)
    if n_marks == 0:
        return LowerBoundCertificate(q=3, bound=0, verified=True, rank=0, basis_size=len(pair.basis))
    primes = tuple(marks.prime_of[m] for m in idx)
    max_val = max(valuation(marks.prime_of[m], u + v * m) for m in idx)
    q = 3
    while q <= max_val or not is_prime(q):
        q += 2
    cover = pair.verify()
    if not cover.covered:
        raise ValueError(f"pair is not a cover; first failure at {cover.first_uncovered}")
    shift = rho_vector(g, primes, q).halve()
    image = {b: rho_vector(b, primes, q) - shift for b in pair.basis}
    all_ok = True
    targets = []
    for pos, m in enumerate(idx):
        t = rho_vector(u + v * m, primes, q)
        targets.append(t)
        single = all((c != 0) == (i == pos) for i, c in enumerate(t.coords))
        b1, b2 = cover.witness[g * (u + v * m)]
        in_sumset = (image[b1] + image[b2]) == t
        all_ok = all_ok and single and in_sumset
    rank = rank_mod_q(targets, q)
    all_ok = all_ok and rank == n_marks
    return LowerBoundCertificate(
        q=q,
        bound=n_marks,
        verified=all_ok and len(pair.basis) >= n_marks,
        rank=rank,
        basis_size=len(pair.basis),
    )


@dataclass(frozen=True)
class FactorialCheck:
    u: int
    v: int
    M: int
    marked_large: frozenset[int]
    exceptional: dict[int, int]  # prime -> index of its valuation maximizer
    surviving: tuple[int, ...]
    divides: bool


def factorial_divisibility_check(u: int, v: int, M: int, table: PrimeTable) -> FactorialCheck:
    """Product of unmarked terms u + m*v, m in [1..M], divides (M-1)!.

    Skipped indices: those whose term has a prime factor >= M, and one
    valuation maximizer per prime p < M (smallest index on ties; primes
    dividing no term contribute nothing).  Divisibility is computed on
    exact integers, never assumed.
    """
    if M < 1:
        raise ValueError("M must be positive")
    if u < 1 or v < 1:
        raise ValueError("u and v must be positive")
    if math.gcd(u, v) != 1:
        raise ValueError(f"gcd(u, v) = {math.gcd(u, v)}, expected 1")
    top = u + M * v
    if table.limit < top:
        raise ValueError(f"prime table limit {table.limit} below largest term {top}")
    terms = {m: u + m * v for m in range(1, M + 1)}
    marked = frozenset(
        m for m, t in terms.items() if factorize(t, table).largest_prime() >= M
    )
    exceptional: dict[int, int] = {}
    for p in (int(x) for x in table.primes_in(2, M - 1)) if M > 2 else ():
        if v % p == 0:
            continue  # p never divides u + m*v when gcd(u, v) = 1
        start = (-u * pow(v, -1, p)) % p
        if start == 0:
            start = p
        best_m, best_val = 0, 0
        for m in range(start, M + 1, p):
            val = valuation(p, terms[m])
            if val > best_val:
                best_m, best_val = m, val
        if best_val >= 1:
            exceptional[p] = best_m
    skip = set(marked) | set(exceptional.values())
    surviving = tuple(m for m in range(1, M + 1) if m not in skip)
    product = math.prod(terms[m] for m in surviving)
    divides = math.factorial(M - 1) % product == 0
    return FactorialCheck(
        u=u,
        v=v,
        M=M,
        marked_large=marked,
        exceptional=exceptional,
        surviving=surviving,
        divides=divides,
    )


@dataclass(frozen=True)
class MarkingSets:
    """Both shift-into-interval constructions over the window [u+1, u+M]."""

    single_prime_marks: MarkingSet  # m with u + m = 2^k * p, p a large prime
    triple_product_marks: dict[int, int]  # m -> x = p1*p2*p3, small primes
    large_primes: tuple[int, ...]
    small_primes: tuple[int, ...]


def build_marking_sets(M: int, u: int, table: PrimeTable) -> MarkingSets:
    """Marks for step-1 progressions: each index m has u + m = 2^k * x.

    Large primes are the odd p in (M^(1/3), M]; their marks form a
    MarkingSet (p divides only its own shifted term, since every term is
    a power of two times one odd prime).  Small primes are those in
    [3, M^(1/3)]; products of three distinct ones are at most M and mark
    indices kept as a plain map, with no privacy claim.
    """
    if M < 1:
        raise ValueError("M must be positive")
    if not 0 <= u <= M:
        raise ValueError(f"u must lie in [0, {M}], got {u}")
    if table.limit < M:
        raise ValueError(f"prime table limit {table.limit} below M = {M}")
    odd_primes = [int(p) for p in table.primes_in(3, M)]
    large = tuple(p for p in odd_primes if p**3 > M)
    small = tuple(p for p in odd_primes if p**3 <= M)
    prime_of: dict[int, int] = {}
    for p in large:
        k = shift_into_interval(p, u, M)
        prime_of[(p << k) - u] = p
    triple: dict[int, int] = {}
    for trio in combinations(small, 3):
        x = trio[0] * trio[1] * trio[2]
        if x > M:  # cannot happen: each factor is at most M^(1/3)
            raise InvariantViolationError(f"triple product {x} exceeds M = {M}")
        k = shift_into_interval(x, u, M)
        triple[(x << k) - u] = x
    return MarkingSets(
        single_prime_marks=MarkingSet(indices=frozenset(prime_of), prime_of=prime_of),
        triple_product_marks=triple,
        large_primes=large,
        small_primes=small,
    )


def _divisor_list(x: int) -> list[int]:
    divs = []
    d = 1
    while d * d <= x:
        if x % d == 0:
            divs.append(d)
            if d != x // d:
                divs.append(x // d)
        d += 1
    return sorted(divs)


_INJECT_PRIMES = (2, 3, 5, 7, 11)


def random_injected_pair(rng: np.random.Generator) -> ReducedPair:
    """Seeded unreduced instance with a known-good cover.

    A base progression coprime to the chosen primes is multiplied
    through by p^f on the offset and p^e (e > f) on the step; each term
    then factors as (injected power) * c_m with the injected exponents
    split arbitrarily across a random divisor pair of c_m.  Junk basis
    elements are thrown in to exercise the discard branches.
    """
    M = int(rng.integers(3, 9))
    count = int(rng.integers(1, 3))
    picks = rng.choice(len(_INJECT_PRIMES), size=count, replace=False)
    primes = [_INJECT_PRIMES[int(i)] for i in picks]
    pool = [x for x in range(1, 61) if all(x % p for p in primes)]
    a0 = int(pool[int(rng.integers(0, len(pool)))])
    d0 = int(pool[int(rng.integers(0, len(pool)))])
    f_of = {p: int(rng.integers(1, 3)) for p in primes}
    e_of = {p: f_of[p] + int(rng.integers(1, 3)) for p in primes}
    inject = math.prod(p ** f_of[p] for p in primes)
    extra = math.prod(p ** (e_of[p] - f_of[p]) for p in primes)
    offset = a0 * inject
    step = d0 * inject * extra
    basis: set[int] = set()
    for m in range(1, M + 1):
        c = a0 + m * d0 * extra
        divs = _divisor_list(c)
        s = divs[int(rng.integers(0, len(divs)))]
        left, right = s, c // s
        for p in primes:
            i = int(rng.integers(0, f_of[p] + 1))
            left *= p**i
            right *= p ** (f_of[p] - i)
        basis.add(left)
        basis.add(right)
    for _ in range(int(rng.integers(0, 4))):
        basis.add(int(rng.integers(1, 10_001)))
    return ReducedPair(
        ap=APSpec.from_offset_step(offset, step, M), basis=frozenset(basis), reduced=False
    )


def random_divisibility_instance(rng: np.random.Generator, max_m: int = 200) -> tuple[int, int, int]:
    """Seeded (u, v, M) with gcd(u, v) = 1 and M <= max_m."""
    while True:
        u = int(rng.integers(1, 51))
        v = int(rng.integers(1, 13))
        if math.gcd(u, v) == 1:
            break
    return u, v, int(rng.integers(1, max_m + 1))
