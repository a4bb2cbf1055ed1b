"""Additive bases of Hamming spheres in F_3^n.

S_k(n) is the set of 0-1 vectors of weight k.  The objects here answer
three kinds of question about S_3:

* difference structure: for a fixed d, how many ordered pairs
  (a, a') in S_3 x S_3 have a - a' = d?  The count depends only on the
  pattern of 1s and 2s in d (the difference case), with closed formulas.
* covering: is S_3 contained in B + B, and what is the smallest such B?
  The union S_1 | S_2 always works (size n(n+1)/2); tiny dimensions
  admit an exact search with coordinate-permutation symmetry reduction.
* overlap: how much of S_2 can a structured sumset X + Y capture?

Scalar vectors are immutable byte strings (one coordinate per byte);
bulk checks at n ~ 2048 run on numpy matrices instead.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DifferenceCase",
    "TernaryVector",
    "SphereCoverCheck",
    "SphereBasisSolution",
    "OverlapCheck",
    "OverlapRefinedCheck",
    "CensusRow",
    "DifferenceCensus",
    "enumerate_sphere",
    "classify_difference",
    "count_difference_solutions",
    "difference_census",
    "sphere_cover_verify",
    "sphere_basis_construct",
    "sphere_min_basis",
    "check_sphere_overlap",
    "check_sphere_overlap_general",
    "overlap_trial",
    "overlap_refined_trial",
    "as_matrix",
    "OVERLAP_MIN_N",
    "SMALL_SET_DIVISOR",
]

# The fixed-fraction overlap bound is a statement about large n; below
# this dimension it is reported but not claimed.
OVERLAP_MIN_N = 2048

# "Small" sets in the overlap checks: at most n / 2**10 elements.
SMALL_SET_DIVISOR = 1 << 10

# residues of x + y and x - y + 3 for single coordinates in {0, 1, 2}
_MOD3 = np.array([0, 1, 2, 0, 1], dtype=np.uint8)


class DifferenceCase(Enum):
    ZERO = "zero"
    CASE1 = "case1"  # three 1s and three 2s
    CASE2 = "case2"  # two 1s and two 2s
    CASE3 = "case3"  # one 1 and one 2
    OTHER = "other"


@dataclass(frozen=True, order=True)
class TernaryVector:
    """Immutable vector over F_3; one coordinate per byte, lex-ordered."""

    coords: bytes

    def __post_init__(self):
        if any(c > 2 for c in self.coords):
            raise ValueError("coordinates must lie in {0, 1, 2}")

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def from_coords(cls, values: Iterable[int]) -> "TernaryVector":
        return cls(bytes(int(v) % 3 for v in values))

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "TernaryVector":
        buf = bytearray(n)
        for i in support:
            buf[i] = 1
        return cls(bytes(buf))

    @classmethod
    def zero(cls, n: int) -> "TernaryVector":
        return cls(bytes(n))

    def _check(self, other: "TernaryVector") -> None:
        if len(self.coords) != len(other.coords):
            raise ValueError("dimension mismatch")

    def __add__(self, other: "TernaryVector") -> "TernaryVector":
        self._check(other)
        return TernaryVector(bytes((a + b) % 3 for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "TernaryVector") -> "TernaryVector":
        self._check(other)
        return TernaryVector(bytes((a - b) % 3 for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TernaryVector":
        return TernaryVector(bytes((-a) % 3 for a in self.coords))

    def scale(self, c: int) -> "TernaryVector":
        c %= 3
        return TernaryVector(bytes((c * a) % 3 for a in self.coords))

    def weight(self) -> int:
        return len(self.coords) - self.coords.count(0)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c)

    def is_zero_one(self) -> bool:
        return 2 not in self.coords

    def in_sphere(self, k: int) -> bool:
        return self.is_zero_one() and self.weight() == k

    def project(self, indices: Sequence[int]) -> "TernaryVector":
        return TernaryVector(bytes(self.coords[i] for i in indices))

    def to_numpy(self) -> np.ndarray:
        return np.frombuffer(self.coords, dtype=np.uint8).copy()


def as_matrix(vectors, n: int) -> np.ndarray:
    """Normalize a vector collection to a (m, n) uint8 matrix."""
    if isinstance(vectors, np.ndarray):
        mat = np.ascontiguousarray(vectors, dtype=np.uint8)
        if mat.ndim != 2 or mat.shape[1] != n:
            raise ValueError(f"expected shape (*, {n}), got {mat.shape}")
        if mat.size and mat.max() > 2:
            raise ValueError("matrix entries must lie in {0, 1, 2}")
        return mat
    rows = []
    for v in vectors:
        buf = v.coords if isinstance(v, TernaryVector) else bytes(v)
        if len(buf) != n:
            raise ValueError(f"vector of dimension {len(buf)}, expected {n}")
        rows.append(buf)
    if not rows:
        return np.zeros((0, n), dtype=np.uint8)
    return np.frombuffer(b"".join(rows), dtype=np.uint8).reshape(len(rows), n).copy()


def enumerate_sphere(n: int, k: int) -> list[TernaryVector]:
    """All 0-1 vectors of weight k, in lexicographic order of support."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        raise ValueError(f"weight {k} exceeds dimension {n}")
    return [TernaryVector.from_support(n, c) for c in itertools.combinations(range(n), k)]


def classify_difference(d: TernaryVector) -> DifferenceCase:
    ones = d.coords.count(1)
    twos = d.coords.count(2)
    if ones == 0 and twos == 0:
        return DifferenceCase.ZERO
    if ones == 3 and twos == 3:
        return DifferenceCase.CASE1
    if ones == 2 and twos == 2:
        return DifferenceCase.CASE2
    if ones == 1 and twos == 1:
        return DifferenceCase.CASE3
    return DifferenceCase.OTHER


def count_difference_solutions(d: TernaryVector) -> int:
    """Number of ordered pairs (a, a') in S_3 x S_3 with a - a' = d.

    A coordinate of d equal to 1 forces (a_i, a'_i) = (1, 0), equal to 2
    forces (0, 1); zero coordinates are shared.  Filling the remaining
    weight of a with shared 1s gives the closed forms below.
    """
    n = d.n
    case = classify_difference(d)
    if case is DifferenceCase.ZERO:
        return math.comb(n, 3)
    if case is DifferenceCase.CASE1:
        return 1
    if case is DifferenceCase.CASE2:
        return max(n - 4, 0)
    if case is DifferenceCase.CASE3:
        return math.comb(n - 2, 2)
    return 0


@dataclass(frozen=True)
class CensusRow:
    n: int
    case: DifferenceCase
    formula_count: int
    enumerated_count: int
    bound: int
    holds: bool


@dataclass(frozen=True)
class DifferenceCensus:
    n: int
    rows: tuple[CensusRow, ...]
    total_pairs: int
    identity_ok: bool  # counts over all differences sum to |S_3|^2
    other_seen: int

    @property
    def all_hold(self) -> bool:
        return self.identity_ok and self.other_seen == 0 and all(r.holds for r in self.rows)


def _case_bound(case: DifferenceCase, n: int) -> int:
    if case is DifferenceCase.ZERO:
        return math.comb(n, 3)
    if case is DifferenceCase.CASE1:
        return 1
    if case is DifferenceCase.CASE2:
        return n  # strict
    return n * n  # CASE3, strict


def difference_census(n: int) -> DifferenceCensus:
    """Exhaustive pair scan of S_3(n)^2 against the difference formulas.

    For every difference that occurs, the enumerated count must equal the
    closed formula; case2 counts stay strictly below n and case3 strictly
    below n^2.  The per-difference counts must add back up to |S_3|^2.
    """
    sphere = enumerate_sphere(n, 3)
    mat = as_matrix(sphere, n).astype(np.int16)
    m = len(sphere)
    counts: Counter[bytes] = Counter()
    for i in range(m):
        diff = ((mat[i] - mat) % 3).astype(np.uint8)
        buf = diff.tobytes()
        for j in range(m):
            counts[buf[j * n : (j + 1) * n]] += 1
    per_case: dict[DifferenceCase, list[int]] = {}
    other_seen = 0
    mismatch: set[DifferenceCase] = set()
    for raw, c in counts.items():
        d = TernaryVector(raw)
        case = classify_difference(d)
        if case is DifferenceCase.OTHER:
            other_seen += c
            continue
        if count_difference_solutions(d) != c:
            mismatch.add(case)
        per_case.setdefault(case, []).append(c)
    rows = []
    for case in (DifferenceCase.ZERO, DifferenceCase.CASE1, DifferenceCase.CASE2, DifferenceCase.CASE3):
        if case not in per_case:
            continue  # not realizable at this dimension
        got = per_case[case]
        formula = {
            DifferenceCase.ZERO: math.comb(n, 3),
            DifferenceCase.CASE1: 1,
            DifferenceCase.CASE2: max(n - 4, 0),
            DifferenceCase.CASE3: math.comb(n - 2, 2),
        }[case]
        bound = _case_bound(case, n)
        if case in (DifferenceCase.CASE2, DifferenceCase.CASE3):
            within = all(c < bound for c in got)
        else:
            within = all(c <= bound for c in got)
        holds = case not in mismatch and within and all(c == got[0] for c in got)
        rows.append(
            CensusRow(
                n=n,
                case=case,
                formula_count=formula,
                enumerated_count=got[0],
                bound=bound,
                holds=holds,
            )
        )
    total = sum(counts.values())
    return DifferenceCensus(
        n=n,
        rows=tuple(rows),
        total_pairs=total,
        identity_ok=total == m * m,
        other_seen=other_seen,
    )


@dataclass(frozen=True)
class SphereCoverCheck:
    covered: bool
    witness: dict[TernaryVector, tuple[TernaryVector, TernaryVector]]
    first_uncovered: TernaryVector | None = None


def _pack_pow(n: int) -> np.ndarray:
    # big-endian base-3 so numeric order equals lex order on coords
    return 3 ** np.arange(n - 1, -1, -1, dtype=np.int64)


def sphere_cover_verify(B: Iterable[TernaryVector], n: int, k: int = 3) -> SphereCoverCheck:
    """Check S_k(n) subset of B + B.

    For each target the witness is the pair (b1, b2), b1 lexicographically
    least over all valid pairs; targets are scanned in support order and
    the first failure is reported.
    """
    basis = sorted(set(B))
    targets = enumerate_sphere(n, k)
    if not targets:
        return SphereCoverCheck(True, {})
    if not basis:
        return SphereCoverCheck(False, {}, first_uncovered=targets[0])
    if any(v.n != n for v in basis):
        raise ValueError("basis vector dimension mismatch")
    witness: dict[TernaryVector, tuple[TernaryVector, TernaryVector]] = {}
    if n <= 32:
        pw = _pack_pow(n)
        bmat = as_matrix(basis, n).astype(np.int16)
        packed = (bmat.astype(np.int64) @ pw)  # ascending: basis is lex-sorted
        for t in targets:
            trow = np.frombuffer(t.coords, dtype=np.uint8).astype(np.int16)
            diff = (trow - bmat) % 3
            dp = diff.astype(np.int64) @ pw
            pos = np.searchsorted(packed, dp)
            ok = (pos < len(packed)) & (packed[np.minimum(pos, len(packed) - 1)] == dp)
            hits = np.flatnonzero(ok)
            if hits.size == 0:
                return SphereCoverCheck(False, witness, first_uncovered=t)
            i = int(hits[0])
            witness[t] = (basis[i], TernaryVector(diff[i].astype(np.uint8).tobytes()))
    else:
        bset = {v.coords for v in basis}
        for t in targets:
            hit = None
            for b in basis:
                d = bytes((x - y) % 3 for x, y in zip(t.coords, b.coords))
                if d in bset:
                    hit = (b, TernaryVector(d))
                    break
            if hit is None:
                return SphereCoverCheck(False, witness, first_uncovered=t)
            witness[t] = hit
    return SphereCoverCheck(True, witness)


@dataclass(frozen=True)
class SphereBasisSolution:
    basis: frozenset[TernaryVector]
    witness: dict[TernaryVector, tuple[TernaryVector, TernaryVector]] = field(repr=False)
    optimal: bool
    nodes_explored: int = 0

    @property
    def size(self) -> int:
        return len(self.basis)


def sphere_basis_construct(n: int) -> SphereBasisSolution:
    """S_1 union S_2 covers S_3: split {i, j, k} as e_i + e_{jk}, i least.

    Size n(n+1)/2; optimality is not claimed.
    """
    if n < 3:
        raise ValueError(f"construction needs n >= 3, got {n}")
    basis = frozenset(enumerate_sphere(n, 1)) | frozenset(enumerate_sphere(n, 2))
    witness = {}
    for t in enumerate_sphere(n, 3):
        i, j, k = t.support()
        single = TernaryVector.from_support(n, (i,))
        double = TernaryVector.from_support(n, (j, k))
        witness[t] = (double, single) if double < single else (single, double)
    return SphereBasisSolution(basis=basis, witness=witness, optimal=False)


def _digit_matrix(n: int) -> np.ndarray:
    ids = np.arange(3**n, dtype=np.int64)
    digits = np.empty((3**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        digits[:, i] = ids % 3
        ids = ids // 3
    return digits


def sphere_min_basis(
    n: int, budget: int = 5_000_000, exact_limit: int = 4
) -> SphereBasisSolution:
    """Exact minimum B subset of F_3^n with S_3 subset B + B.

    Depth-first search over lex-sorted subsets with two prunes: the
    pair-counting bound |B|(|B|+1)/2 >= C(n, 3), and minimum-image
    canonicity under coordinate permutations (a prefix that is not the
    lex-least member of its orbit is skipped; prefixes of canonical sets
    are canonical, so no optimum is lost).  The first basis found is the
    lexicographically smallest optimum.  Exhausting the node budget falls
    back to the S_1 | S_2 construction with optimal unset.
    """
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    if n > exact_limit:
        raise ValueError(
            f"exact search limited to n <= {exact_limit} (3^n subsets); got n={n}"
        )
    if n < 3:
        # S_3 is empty below dimension 3; the empty basis covers it.
        return SphereBasisSolution(basis=frozenset(), witness={}, optimal=True)
    target_vecs = enumerate_sphere(n, 3)
    pw = _pack_pow(n)
    digits = _digit_matrix(n)
    targets = frozenset(int(x) for x in as_matrix(target_vecs, n).astype(np.int64) @ pw)
    add_table = ((digits[:, None, :] + digits[None, :, :]) % 3) @ pw  # 3^n x 3^n

    perm_maps = []
    for perm in itertools.permutations(range(n)):
        perm_maps.append(digits[:, list(perm)] @ pw)

    space = 3**n
    nodes = 0
    exhausted = False
    found: tuple[int, ...] | None = None

    def canonical(chosen: tuple[int, ...]) -> bool:
        for pm in perm_maps:
            img = sorted(int(pm[c]) for c in chosen)
            if tuple(img) < chosen:
                return False
        return True

    def dfs(start: int, chosen: tuple[int, ...], covered: frozenset[int], size: int) -> None:
        nonlocal nodes, exhausted, found
        if exhausted or found is not None:
            return
        nodes += 1
        if nodes > budget:
            exhausted = True
            return
        if targets <= covered:
            found = chosen
            return
        rem = size - len(chosen)
        if rem <= 0:
            return
        missing = len(targets - covered)
        cap = rem * len(chosen) + rem * (rem + 1) // 2
        if cap < missing:
            return
        for cand in range(start, space):
            nxt = chosen + (cand,)
            if not canonical(nxt):
                continue
            row = add_table[cand]
            new_cov = {int(row[c]) for c in nxt}
            dfs(cand + 1, nxt, covered | (new_cov & targets), size)
            if exhausted or found is not None:
                return

    lower = 1
    while lower * (lower + 1) // 2 < len(targets):
        lower += 1
    upper = n * (n + 1) // 2
    for size in range(lower, upper + 1):
        dfs(0, (), frozenset(), size)
        if found is not None or exhausted:
            break

    if found is None:
        fallback = sphere_basis_construct(n)
        return SphereBasisSolution(
            basis=fallback.basis, witness=fallback.witness, optimal=False, nodes_explored=nodes
        )
    basis = frozenset(
        TernaryVector(bytes(int(d) for d in digits[c])) for c in found
    )
    check = sphere_cover_verify(basis, n)
    if not check.covered:  # pragma: no cover - would be a search bug
        raise AssertionError("exact search returned a non-cover")
    return SphereBasisSolution(
        basis=basis, witness=check.witness, optimal=True, nodes_explored=nodes
    )


def _dedupe_rows(mat: np.ndarray) -> np.ndarray:
    """Distinct rows, first occurrence first; hashing beats a lexsort here."""
    if mat.shape[0] <= 1:
        return mat
    n = mat.shape[1]
    buf = mat.tobytes()
    seen: set[bytes] = set()
    keep = []
    for i in range(mat.shape[0]):
        row = buf[i * n : (i + 1) * n]
        if row not in seen:
            seen.add(row)
            keep.append(i)
    return mat if len(keep) == mat.shape[0] else mat[keep]


def _two_sphere_hits(xmat: np.ndarray, ymat: np.ndarray, n: int) -> int:
    """|(X + Y) & S_2|: distinct sums that are 0-1 of weight 2."""
    seen: set[bytes] = set()
    for x in xmat:
        s = _MOD3[ymat + x]  # entries of x + y are at most 4
        good = ~(s == 2).any(axis=1) & ((s == 1).sum(axis=1) == 2)
        if good.any():
            rows = s[good]
            buf = rows.tobytes()
            for j in range(rows.shape[0]):
                seen.add(buf[j * n : (j + 1) * n])
    return len(seen)


@dataclass(frozen=True)
class OverlapCheck:
    """Fixed-fraction capture bound |(X+Y) & S_2| <= n^2 / 50.

    Claimed when X has at most n/2^10 elements, Y at most n^2/100, and
    n >= OVERLAP_MIN_N; smaller instances are evaluated and reported
    with the corresponding flag cleared.
    """

    n: int
    x_size: int
    y_size: int
    lhs: int
    bound: float
    hypotheses_ok: bool
    n_large_enough: bool
    holds: bool


def check_sphere_overlap(X, Y, n: int) -> OverlapCheck:
    xmat = _dedupe_rows(as_matrix(X, n))
    ymat = _dedupe_rows(as_matrix(Y, n))
    lhs = _two_sphere_hits(xmat, ymat, n) if len(xmat) and len(ymat) else 0
    hyp = (SMALL_SET_DIVISOR * len(xmat) <= n) and (100 * len(ymat) <= n * n)
    return OverlapCheck(
        n=n,
        x_size=len(xmat),
        y_size=len(ymat),
        lhs=lhs,
        bound=n * n / 50.0,
        hypotheses_ok=hyp,
        n_large_enough=n >= OVERLAP_MIN_N,
        holds=50 * lhs <= n * n,
    )


@dataclass(frozen=True)
class OverlapRefinedCheck:
    """Pair-count capture bound, valid at every n.

    |(A+B) & S_2| <= C(n,2) - C(n-|A|,2) + |B| <= n|A| + |B| whenever
    |A| <= n/2^10 (enforced).
    """

    n: int
    a_size: int
    b_size: int
    lhs: int
    pair_bound: int
    linear_bound: int
    holds: bool


def check_sphere_overlap_general(A, B, n: int) -> OverlapRefinedCheck:
    amat = _dedupe_rows(as_matrix(A, n))
    bmat = _dedupe_rows(as_matrix(B, n))
    if SMALL_SET_DIVISOR * len(amat) > n:
        raise ValueError(
            f"|A| = {len(amat)} exceeds n/{SMALL_SET_DIVISOR} = {n / SMALL_SET_DIVISOR}"
        )
    lhs = _two_sphere_hits(amat, bmat, n) if len(amat) and len(bmat) else 0
    a = len(amat)
    pair_bound = math.comb(n, 2) - math.comb(n - a, 2) + len(bmat)
    linear_bound = n * a + len(bmat)
    return OverlapRefinedCheck(
        n=n,
        a_size=a,
        b_size=len(bmat),
        lhs=lhs,
        pair_bound=pair_bound,
        linear_bound=linear_bound,
        holds=lhs <= pair_bound <= linear_bound,
    )


def _random_near_sphere(rng: np.random.Generator, count: int, n: int, shifts: np.ndarray) -> np.ndarray:
    """Rows of the form s - x: s random in S_2, x cycling over ``shifts``.

    Sums with the matching shift land back in S_2, so overlap checks on
    these sets exercise the nontrivial region instead of counting zeros.
    """
    cols = rng.integers(0, n, size=(count, 2))
    resample = cols[:, 0] == cols[:, 1]
    while resample.any():
        cols[resample, 1] = rng.integers(0, n, size=int(resample.sum()))
        resample = cols[:, 0] == cols[:, 1]
    s = np.zeros((count, n), dtype=np.int16)
    s[np.arange(count), cols[:, 0]] = 1
    s[np.arange(count), cols[:, 1]] = 1
    x = shifts[np.arange(count) % len(shifts)].astype(np.int16)
    return ((s - x) % 3).astype(np.uint8)


def overlap_trial(n: int, x_size: int, y_size: int, rng: np.random.Generator) -> OverlapCheck:
    """One seeded fixed-fraction check: random X, mixed random/near-sphere Y."""
    xmat = rng.integers(0, 3, size=(x_size, n), dtype=np.uint8)
    half = y_size // 2
    yrand = rng.integers(0, 3, size=(y_size - half, n), dtype=np.uint8)
    ynear = _random_near_sphere(rng, half, n, xmat) if half and x_size else yrand[:0]
    ymat = np.concatenate([yrand, ynear]) if len(ynear) else yrand
    return check_sphere_overlap(xmat, ymat, n)


def overlap_refined_trial(n: int, a_size: int, b_size: int, rng: np.random.Generator) -> OverlapRefinedCheck:
    """One seeded pair-count check: random A, mixed random/near-sphere B."""
    amat = rng.integers(0, 3, size=(a_size, n), dtype=np.uint8)
    half = b_size // 2
    brand = rng.integers(0, 3, size=(b_size - half, n), dtype=np.uint8)
    bnear = _random_near_sphere(rng, half, n, amat) if half and a_size else brand[:0]
    bmat = np.concatenate([brand, bnear]) if len(bnear) else brand
    return check_sphere_overlap_general(amat, bmat, n)
