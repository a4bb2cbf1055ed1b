"""Independent reference implementations used to freeze expected values.

Everything here is deliberately written against different algorithms
than the package: segmented sieving instead of a flat sieve, exhaustive
subset search instead of branch and bound, dict-based row reduction
instead of column elimination, plain tuple arithmetic instead of numpy.
Slow and obviously correct beats fast.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter


# ------------------------------------------------------------ primes


def primes_segmented(limit: int, segment: int = 1 << 15) -> list:
    """All primes <= limit by segmented sieving over fixed-width windows."""
    if limit < 2:
        return []
    root = math.isqrt(limit)
    base = []
    flags = bytearray(root + 1)
    for i in range(2, root + 1):
        if not flags[i]:
            base.append(i)
            for j in range(i * i, root + 1, i):
                flags[j] = 1
    out = list(base)
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment - 1, limit)
        win = bytearray(hi - lo + 1)
        for p in base:
            start = ((lo + p - 1) // p) * p
            for j in range(start, hi + 1, p):
                win[j - lo] = 1
        out.extend(i + lo for i, f in enumerate(win) if not f)
        lo = hi + 1
    return out


def is_prime_trial(x: int) -> bool:
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


def valuation_loop(p: int, x: int) -> int:
    f = 0
    while x % p == 0:
        x //= p
        f += 1
    return f


# ------------------------------------------------------ product sets


def product_set_brute(B) -> list:
    out = set()
    for a in B:
        for b in B:
            out.add(a * b)
    return sorted(out)


def smallest_witness_pair(target: int, basis) -> tuple | None:
    """Lexicographically least (b1, b2), b1 <= b2, with b1*b2 = target."""
    best = None
    bset = set(basis)
    for b1 in sorted(bset):
        if target % b1 == 0 and target // b1 in bset and b1 * b1 <= target:
            pair = (b1, target // b1)
            if best is None or pair < best:
                best = pair
    return best


def _divisors(x: int) -> set:
    out = set()
    d = 1
    while d * d <= x:
        if x % d == 0:
            out.add(d)
            out.add(x // d)
        d += 1
    return out


def min_basis_exhaustive(targets, size_cap: int = 16) -> tuple:
    """Smallest multiplicative cover by exhaustive subset search.

    Any useful basis element divides a target, so the divisor union is a
    complete candidate pool.  A target with a single factor pair forces
    both members of that pair into every cover; the exhaustive scan then
    runs over subsets of the residual pool only, smallest size first.

    Returns (size, basis-frozenset).
    """
    targets = sorted(set(targets))
    if not targets:
        return 0, frozenset()
    pair_lists = {}
    forced = set()
    for t in targets:
        pairs = [(d, t // d) for d in sorted(_divisors(t)) if d * d <= t]
        pair_lists[t] = pairs
        if len(pairs) == 1:
            forced.update(pairs[0])
    remaining = []
    for t in targets:
        needed = [frozenset(p) - forced for p in pair_lists[t]]
        if not any(len(n) == 0 for n in needed):
            remaining.append(needed)
    pool = sorted(set().union(*[set().union(*n) for n in remaining]) if remaining else set())
    for k in range(0, len(pool) + 1):
        if len(forced) + k > size_cap:
            break
        for combo in itertools.combinations(pool, k):
            chosen = set(combo)
            if all(any(n <= chosen for n in needs) for needs in remaining):
                return len(forced) + k, frozenset(forced | chosen)
    raise RuntimeError("size cap exceeded")


def mbp_exhaustive(M: int, a_max: int, d_max: int) -> int:
    """Minimum exhaustive-search basis size over the progression grid."""
    best = None
    for a in range(0, a_max + 1):
        for d in range(1, d_max + 1):
            size, _ = min_basis_exhaustive([a + m * d for m in range(1, M + 1)])
            if best is None or size < best:
                best = size
    return best


# ------------------------------------------------------ linear algebra


def rank_rowreduce(rows, q: int) -> int:
    """Rank over F_q by echelon-by-leading-index elimination."""
    echelon = {}
    for row in rows:
        row = [c % q for c in row]
        while any(row):
            lead = next(i for i, c in enumerate(row) if c)
            if lead not in echelon:
                inv = pow(row[lead], q - 2, q)
                echelon[lead] = [c * inv % q for c in row]
                break
            factor = row[lead]
            row = [(c - factor * e) % q for c, e in zip(row, echelon[lead])]
    return len(echelon)


# ------------------------------------------------------ ternary spheres


def sphere_tuples(n: int, k: int) -> list:
    out = []
    for support in itertools.combinations(range(n), k):
        v = [0] * n
        for i in support:
            v[i] = 1
        out.append(tuple(v))
    return out


def diff_mod3(a, b) -> tuple:
    return tuple((x - y) % 3 for x, y in zip(a, b))


def case_of(d) -> str:
    ones, twos = d.count(1), d.count(2)
    if ones == 0 and twos == 0:
        return "zero"
    if ones == 3 and twos == 3:
        return "case1"
    if ones == 2 and twos == 2:
        return "case2"
    if ones == 1 and twos == 1:
        return "case3"
    return "other"


def count_diff_brute(d, n: int) -> int:
    sphere = sphere_tuples(n, 3)
    return sum(1 for a in sphere for b in sphere if diff_mod3(a, b) == tuple(d))


def census_brute(n: int) -> dict:
    """Per-case sets of observed per-difference counts, plus the total."""
    sphere = sphere_tuples(n, 3)
    per_diff = Counter(diff_mod3(a, b) for a in sphere for b in sphere)
    cases = {}
    for d, c in per_diff.items():
        cases.setdefault(case_of(d), set()).add(c)
    return {"cases": cases, "total": sum(per_diff.values())}


def sphere_min_brute(n: int) -> tuple:
    """Exact sphere-cover minimum by depth-first subset search, n <= 4.

    Pair hit masks are precomputed; the first element of a candidate set
    is restricted to coordinate-permutation orbit minima.  Sizes are
    tried in increasing order, so the first hit is the minimum.

    Returns (size, basis as tuple of coordinate tuples).
    """
    if n > 4:
        raise ValueError("brute force capped at n = 4")
    targets = sphere_tuples(n, 3)
    if not targets:
        return 0, ()
    vectors = list(itertools.product(range(3), repeat=n))
    index = {v: i for i, v in enumerate(vectors)}
    tmask = {t: 1 << j for j, t in enumerate(targets)}
    full = (1 << len(targets)) - 1
    nv = len(vectors)
    pair_mask = [[0] * nv for _ in range(nv)]
    for i in range(nv):
        for j in range(i, nv):
            s = tuple((x + y) % 3 for x, y in zip(vectors[i], vectors[j]))
            m = tmask.get(s, 0)
            pair_mask[i][j] = m
            pair_mask[j][i] = m
    perms = list(itertools.permutations(range(n)))
    roots = [
        i
        for i, v in enumerate(vectors)
        if all(v <= tuple(v[p] for p in perm) for perm in perms)
    ]

    def extend(chosen, mask, start, depth):
        if mask == full:
            return list(chosen)
        if depth == 0:
            return None
        for i in range(start, nv):
            add = pair_mask[i][i]
            for c in chosen:
                add |= pair_mask[c][i]
            if add | mask == mask and depth == 1:
                continue
            got = extend(chosen + [i], mask | add, i + 1, depth - 1)
            if got is not None:
                return got
        return None

    lower = 1
    while lower * (lower + 1) // 2 < len(targets):
        lower += 1
    for k in range(lower, len(targets) + 2):
        for r in roots:
            got = extend([r], pair_mask[r][r], r + 1, k - 1)
            if got is not None:
                return k, tuple(vectors[i] for i in got)
    raise RuntimeError("unreachable: construction bounds the minimum")
