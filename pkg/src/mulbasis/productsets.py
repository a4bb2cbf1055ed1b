"""Multiplicative bases of integer sets.

A set B is a multiplicative basis of order two for A when every a in A
splits as a = b * b' with b, b' in B.  This module verifies covers,
searches for exact minimum bases (branch and bound over factor pairs),
builds the standard three-block basis for the interval [1..M], and scans
short arithmetic progressions for the smallest basis size they admit.

Cover witnesses are canonical: for each target we record the
lexicographically smallest factor pair (b, b'), ordered b <= b'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .numtheory import PrimeTable, sieve

__all__ = [
    "APSpec",
    "CoverCheck",
    "BasisSolution",
    "MbpSearchResult",
    "product_set",
    "verify_cover",
    "witness_covers",
    "exact_min_basis",
    "construct_interval_basis",
    "mbp_empirical",
    "icbrt",
]

# verify_cover switches to an array sweep when targets are dense; above
# this many candidate products the per-element divisor scan wins.
_DENSE_MAX = 1 << 23
_DENSE_MIN_COUNT = 512


def icbrt(n: int) -> int:
    """Exact integer cube root: largest x with x**3 <= n."""
    if n < 0:
        raise ValueError("icbrt of negative value")
    x = round(n ** (1.0 / 3.0))
    while x > 0 and x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


@dataclass(frozen=True)
class APSpec:
    """The progression {g*(u + v*m) : 1 <= m <= M}.

    g carries the common factor of offset and step, so gcd(u, v) = 1
    exactly when the progression is in reduced form (``normalized``).
    """

    g: int
    u: int
    v: int
    M: int

    def __post_init__(self):
        if self.g < 1 or self.v < 1 or self.u < 0 or self.M < 1:
            raise ValueError(f"bad progression parameters {self}")

    @property
    def offset(self) -> int:
        return self.g * self.u

    @property
    def step(self) -> int:
        return self.g * self.v

    @property
    def normalized(self) -> bool:
        return math.gcd(self.u, self.v) == 1

    def elements(self) -> list[int]:
        g, u, v = self.g, self.u, self.v
        return [g * (u + v * m) for m in range(1, self.M + 1)]

    @classmethod
    def from_offset_step(cls, a: int, d: int, M: int) -> "APSpec":
        """Normal form of {a + m*d : 1 <= m <= M}: pull out g = gcd(a, d)."""
        if a < 0 or d < 1 or M < 1:
            raise ValueError(f"need a >= 0, d >= 1, M >= 1, got a={a}, d={d}, M={M}")
        g = math.gcd(a, d)
        return cls(g=g, u=a // g, v=d // g, M=M)


@dataclass(frozen=True)
class CoverCheck:
    """Outcome of a cover verification.

    ``witness`` maps each target to its lexicographically smallest
    factor pair; on failure ``first_uncovered`` is the smallest target
    with no factor pair in B.
    """

    covered: bool
    witness: dict[int, tuple[int, int]]
    first_uncovered: int | None = None


def product_set(B: Iterable[int]) -> list[int]:
    """Sorted {b * b' : b, b' in B}, unordered pairs with repetition."""
    elems = sorted(set(B))
    if not elems:
        raise ValueError("product_set of empty set")
    if elems[0] < 1:
        raise ValueError("basis elements must be positive")
    out = set()
    for i, b in enumerate(elems):
        for c in elems[i:]:
            out.add(b * c)
    return sorted(out)


def _cover_sparse(targets: list[int], bset: set[int]) -> CoverCheck:
    witness: dict[int, tuple[int, int]] = {}
    for a in targets:
        found = None
        for d in range(1, math.isqrt(a) + 1):
            if a % d == 0 and d in bset and a // d in bset:
                found = (d, a // d)
                break
        if found is None:
            return CoverCheck(False, witness, first_uncovered=a)
        witness[a] = found
    return CoverCheck(True, witness)


def _cover_dense(targets: list[int], B: Sequence[int]) -> CoverCheck:
    amax = targets[-1]
    barr = np.array(sorted(b for b in set(B) if 1 <= b <= amax), dtype=np.int64)
    is_t = np.zeros(amax + 1, dtype=bool)
    is_t[targets] = True
    w1 = np.zeros(amax + 1, dtype=np.int64)
    w2 = np.zeros(amax + 1, dtype=np.int64)
    for b in barr:
        b = int(b)
        hi = amax // b
        if hi < b:
            break
        j = int(np.searchsorted(barr, b, side="left"))
        k = int(np.searchsorted(barr, hi, side="right"))
        part = barr[j:k]
        prod = b * part
        mask = is_t[prod] & (w1[prod] == 0)
        sel = prod[mask]
        w1[sel] = b
        w2[sel] = part[mask]
    witness: dict[int, tuple[int, int]] = {}
    for a in targets:
        if w1[a] == 0:
            return CoverCheck(False, witness, first_uncovered=a)
        witness[a] = (int(w1[a]), int(w2[a]))
    return CoverCheck(True, witness)


def verify_cover(A: Iterable[int], B: Iterable[int]) -> CoverCheck:
    """Check A subset of B*B, producing canonical witnesses.

    Dense target sets go through a product sweep over sorted B (first
    write wins, which is exactly the lexicographic-minimum rule); sparse
    sets get a per-element divisor scan.  Both yield identical pairs.
    """
    targets = sorted(set(A))
    bset = set(int(b) for b in B)
    if not bset:
        raise ValueError("basis must be nonempty")
    if min(bset) < 1:
        raise ValueError("basis elements must be positive")
    if not targets:
        return CoverCheck(True, {})
    if targets[0] < 1:
        raise ValueError("targets must be positive")
    if targets[-1] <= _DENSE_MAX and len(targets) >= _DENSE_MIN_COUNT:
        return _cover_dense(targets, list(bset))
    return _cover_sparse(targets, bset)


def witness_covers(A: Iterable[int], B: Iterable[int], witness: Mapping[int, tuple[int, int]]) -> bool:
    """Validate a witness: every target paired, pairs multiply, members in B."""
    bset = set(B)
    for a in set(A):
        pair = witness.get(a)
        if pair is None:
            return False
        b, c = pair
        if b * c != a or b not in bset or c not in bset:
            return False
    return True


def _divisors(a: int) -> set[int]:
    out = set()
    for d in range(1, math.isqrt(a) + 1):
        if a % d == 0:
            out.add(d)
            out.add(a // d)
    return out


@dataclass(frozen=True)
class BasisSolution:
    """A basis with its cover witness.

    ``optimal`` means the search proved no strictly smaller basis exists
    (ties broken toward the lexicographically smallest basis).  A search
    that ran out of node budget returns its incumbent with optimal False.
    """

    basis: tuple[int, ...]
    witness: dict[int, tuple[int, int]] = field(repr=False)
    optimal: bool
    nodes_explored: int = 0

    @property
    def size(self) -> int:
        return len(self.basis)

    def to_record(self, M: int | None = None) -> dict:
        rec = {
            "basis": list(self.basis),
            "size": self.size,
            "witness": [[a, b, c] for a, (b, c) in sorted(self.witness.items())],
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
        }
        if M is not None:
            rec["M"] = M
        return rec


def _min_additions(s: int, r: int) -> int:
    # adding the i-th new element to a basis of size s covers at most
    # s + i new targets
    t = 0
    cap = 0
    while cap < r:
        t += 1
        cap += s + t
    return t


def exact_min_basis(
    A: Iterable[int],
    pool: Iterable[int] | None = None,
    budget: int = 2_000_000,
) -> BasisSolution:
    """Exact minimum multiplicative basis of order two for A.

    Branch and bound: always branch on the uncovered target with the
    fewest factor pairs, prune with the pair-counting bound.  Once the
    optimum size is proved, a second lexicographic pass extracts the
    smallest basis of that size.  ``pool`` defaults to all divisors of
    targets, which loses no minimum basis (every element of one divides
    some target).
    """
    targets = sorted(set(A))
    if not targets:
        raise ValueError("exact_min_basis needs a nonempty target set")
    if targets[0] < 1:
        raise ValueError("targets must be positive")
    if pool is None:
        pool_set: set[int] = set()
        for a in targets:
            pool_set |= _divisors(a)
    else:
        pool_set = set(int(b) for b in pool)
        if pool_set and min(pool_set) < 1:
            raise ValueError("pool elements must be positive")
    pool_sorted = sorted(pool_set)

    pairs: dict[int, list[tuple[int, int]]] = {}
    for a in targets:
        opts = [
            (d, a // d)
            for d in range(1, math.isqrt(a) + 1)
            if a % d == 0 and d in pool_set and a // d in pool_set
        ]
        if not opts:
            raise ValueError(f"target {a} has no factor pair inside the pool")
        pairs[a] = opts

    def covered(a: int, basis: set[int]) -> bool:
        return any(b in basis and c in basis for b, c in pairs[a])

    # incumbent: first pair of every target
    inc: set[int] = set()
    for a in targets:
        inc.update(pairs[a][0])
    best = tuple(sorted(inc))
    best_size = len(best)

    nodes = 0
    exhausted = False

    def dfs(basis: set[int]) -> None:
        nonlocal best, best_size, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        unc = [a for a in targets if not covered(a, basis)]
        if not unc:
            if len(basis) < best_size:
                best_size = len(basis)
                best = tuple(sorted(basis))
            return
        if len(basis) + _min_additions(len(basis), len(unc)) >= best_size:
            return
        branch = min(unc, key=lambda a: (len(pairs[a]), a))
        for b, c in pairs[branch]:
            new = {b, c} - basis
            basis |= new
            dfs(basis)
            basis -= new
            if exhausted:
                return

    dfs(set())
    proven = not exhausted

    if proven:
        # lexicographically smallest basis of the proved optimum size
        found: tuple[int, ...] | None = None

        def dfs_lex(i: int, chosen: list[int], unc: list[int]) -> None:
            nonlocal nodes, exhausted, found
            if exhausted or found is not None:
                return
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            if not unc:
                found = tuple(chosen)
                return
            r = best_size - len(chosen)
            if r <= 0 or _min_additions(len(chosen), len(unc)) > r or i >= len(pool_sorted):
                return
            lo = pool_sorted[i]
            cset = set(chosen)
            for a in unc:
                if not any(
                    (b in cset or b >= lo) and (c in cset or c >= lo) for b, c in pairs[a]
                ):
                    return
            x = pool_sorted[i]
            chosen.append(x)
            cset.add(x)
            dfs_lex(i + 1, chosen, [a for a in unc if not covered(a, cset)])
            chosen.pop()
            if found is None and not exhausted:
                dfs_lex(i + 1, chosen, unc)

        dfs_lex(0, [], list(targets))
        if found is not None:
            best = found

    check = verify_cover(targets, best)
    if not check.covered:  # pragma: no cover - would be a solver bug
        raise AssertionError(f"search produced a non-cover, uncovered {check.first_uncovered}")
    return BasisSolution(basis=best, witness=check.witness, optimal=proven, nodes_explored=nodes)


def construct_interval_basis(M: int, table: PrimeTable | None = None) -> BasisSolution:
    """Three-block basis of [1..M]: {1}, all of [2..M^(2/3)], primes above M^(1/3).

    Witness rule: a target with a prime factor p, p**3 > M, splits as
    (p, a/p); otherwise a is M^(1/3)-smooth and splits at its largest
    divisor d <= floor(M^(2/3)), whose cofactor also lands under that
    bound.  Size is at most pi(M) + M^(2/3) + 1.
    """
    if M < 1:
        raise ValueError(f"interval bound must be >= 1, got {M}")
    if table is None or table.limit < M:
        table = sieve(max(M, 2))
    t23 = icbrt(M * M)
    basis: set[int] = {1}
    basis.update(range(2, t23 + 1))
    big_primes = [int(p) for p in table.primes if p <= M and p * p * p > M]
    basis.update(big_primes)

    # largest prime factor for every a <= M, by ascending overwrite
    lpf = np.zeros(M + 1, dtype=np.int64)
    for p in table.primes:
        p = int(p)
        if p > M:
            break
        lpf[p::p] = p

    witness: dict[int, tuple[int, int]] = {1: (1, 1)}
    for a in range(2, M + 1):
        p = int(lpf[a])
        if p * p * p > M:
            c = a // p
            witness[a] = (c, p) if c <= p else (p, c)
        else:
            d = max(x for x in _divisors(a) if x <= t23)
            c = a // d
            if c > t23:  # pragma: no cover - smooth split bound
                raise AssertionError(f"smooth split failed for {a}: {d} * {c}")
            witness[a] = (d, c) if d <= c else (c, d)
    return BasisSolution(
        basis=tuple(sorted(basis)), witness=witness, optimal=False, nodes_explored=0
    )


@dataclass(frozen=True)
class MbpSearchResult:
    """Smallest basis size found over a rectangle of progressions.

    This is an upper bound for the progression-minimum at length M: the
    scan is over 1 <= a <= a_max, 1 <= d <= d_max only.
    """

    M: int
    a_max: int
    d_max: int
    best_a: int
    best_d: int
    best: BasisSolution
    all_optimal: bool
    per_ap: tuple[tuple[int, int, int, bool], ...]  # (a, d, size, optimal)

    @property
    def upper_bound(self) -> int:
        return self.best.size

    def to_record(self) -> dict:
        return {
            "M": self.M,
            "a_max": self.a_max,
            "d_max": self.d_max,
            "best_a": self.best_a,
            "best_d": self.best_d,
            "upper_bound": self.upper_bound,
            "all_optimal": self.all_optimal,
            "solution": self.best.to_record(M=self.M),
            "per_ap": [list(row) for row in self.per_ap],
        }


def mbp_empirical(
    M: int, a_max: int, d_max: int, budget: int = 2_000_000
) -> MbpSearchResult:
    """Scan progressions {a + m*d : m <= M} for the smallest exact basis.

    The offset ranges over 0 <= a <= a_max so the grid always contains
    the plain interval (a=0, d=1 gives [1..M] scaled by d).  Reports the
    best (size, a, d) in lexicographic order.  Budget applies per
    progression; any budget exhaustion clears ``all_optimal``.
    """
    if M < 1 or a_max < 1 or d_max < 1:
        raise ValueError("M, a_max, d_max must all be >= 1")
    best_key: tuple[int, int, int] | None = None
    best_sol: BasisSolution | None = None
    rows: list[tuple[int, int, int, bool]] = []
    all_opt = True
    for a in range(0, a_max + 1):
        for d in range(1, d_max + 1):
            ap = [a + m * d for m in range(1, M + 1)]
            sol = exact_min_basis(ap, budget=budget)
            rows.append((a, d, sol.size, sol.optimal))
            all_opt &= sol.optimal
            key = (sol.size, a, d)
            if best_key is None or key < best_key:
                best_key = key
                best_sol = sol
    assert best_key is not None and best_sol is not None
    return MbpSearchResult(
        M=M,
        a_max=a_max,
        d_max=d_max,
        best_a=best_key[1],
        best_d=best_key[2],
        best=best_sol,
        all_optimal=all_opt,
        per_ap=tuple(rows),
    )
