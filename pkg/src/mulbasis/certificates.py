"""Inequality certificates for sphere covers and the combined lower bound.

Everything here turns statements used in the lower-bound argument into
computed checks.  A pairing graph fixes one representing pair per
covered target; reports then evaluate both sides of each inequality in
the degree-counting argument (common-neighbour identity, per-case
contribution bounds, pruning losses, edge retention, Cauchy-Schwarz).
The end-to-end pipeline embeds an integer basis into F_3 valuation
vectors, pairs off the single-prime marks, analyzes the resulting
components, runs the sphere reports on the small-prime block, and
assembles a numeric lower bound on |B| that is asserted sound on every
run.  A failed report localizes a hypothesis violation or a bug; it is
never silently absorbed.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .numtheory import PrimeTable, sieve
from .productsets import verify_cover
from .reduction import InvariantViolationError, build_marking_sets
from .spherelab import (
    DifferenceCase,
    TernaryVector,
    as_matrix,
    classify_difference,
    enumerate_sphere,
)

__all__ = [
    "PipelineError",
    "InequalityReport",
    "PairingGraph",
    "PruneResult",
    "ComponentSummary",
    "ComponentAnalysis",
    "PipelineResult",
    "build_pairing_graph",
    "build_integer_pairing_graph",
    "decompose_by_coordinate",
    "prune_heavy",
    "sphere_cover_report",
    "case2_routing_ok",
    "component_analysis",
    "end_to_end_lower_bound",
    "DEGREE_PRUNE_FACTOR",
]

# degree cutoff multiplier for heavy right-class vertices
DEGREE_PRUNE_FACTOR = 1 << 10


class PipelineError(Exception):
    """A pipeline stage rejected its input; ``stage`` names the stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated inequality; holds is always computed as lhs <= rhs."""

    name: str
    lhs: float
    rhs: float
    hypotheses_ok: bool
    holds: bool

    @classmethod
    def of(cls, name: str, lhs, rhs, hypotheses_ok: bool = True) -> "InequalityReport":
        return cls(name=name, lhs=lhs, rhs=rhs, hypotheses_ok=hypotheses_ok, holds=lhs <= rhs)

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "hypotheses_ok": self.hypotheses_ok,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class PairingGraph:
    """Bipartite pairing: two indexed copies of B, one edge per target.

    Vector mode pairs additively (left + right = target); integer mode
    multiplicatively (left * right = target).  Each edge is the
    lexicographically (numerically, in integer mode) smallest
    representing pair, stored with left <= right.
    """

    mode: str  # "vector" | "integer"
    left: tuple
    right: tuple
    edges: tuple  # (left vertex, right vertex, target)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def right_degrees(self) -> Counter:
        return Counter(e[1] for e in self.edges)

    def left_neighbors(self) -> dict:
        out: dict = defaultdict(set)
        for b1, b2, _ in self.edges:
            out[b1].add(b2)
        return dict(out)


def _as_sorted_vectors(B, n: int) -> list[TernaryVector]:
    if isinstance(B, np.ndarray):
        mat = as_matrix(B, n)
        return sorted({TernaryVector(mat[i].tobytes()) for i in range(mat.shape[0])})
    out = set()
    for v in B:
        if not isinstance(v, TernaryVector):
            v = TernaryVector.from_coords(v)
        if v.n != n:
            raise ValueError(f"vector of dimension {v.n}, expected {n}")
        out.add(v)
    return sorted(out)


def build_pairing_graph(B, targets, n: int) -> PairingGraph:
    """One edge per target: the lex-smallest (b1, b2) in B*B summing to it."""
    vecs = _as_sorted_vectors(B, n)
    if not vecs:
        raise ValueError("empty vertex set")
    vset = {v.coords for v in vecs}
    bmat = as_matrix(vecs, n).astype(np.int16)
    k = len(vecs)
    tlist = sorted(
        t if isinstance(t, TernaryVector) else TernaryVector.from_coords(t) for t in set(targets)
    )
    edges = []
    chunk = 256
    for t in tlist:
        trow = np.frombuffer(t.coords, dtype=np.uint8).astype(np.int16)
        hit = None
        for lo in range(0, k, chunk):
            diff = ((trow - bmat[lo : lo + chunk]) % 3).astype(np.uint8)
            buf = diff.tobytes()
            for i in range(diff.shape[0]):
                partner = buf[i * n : (i + 1) * n]
                if partner in vset:
                    hit = (vecs[lo + i], TernaryVector(partner))
                    break
            if hit is not None:
                break
        if hit is None:
            raise ValueError(f"target {tuple(t.coords)} is not a sum of two basis vectors")
        edges.append((hit[0], hit[1], t))
    verts = tuple(vecs)
    return PairingGraph(mode="vector", left=verts, right=verts, edges=tuple(edges))


def build_integer_pairing_graph(B: Iterable[int], targets: Iterable[int]) -> PairingGraph:
    """Multiplicative variant: smallest factor pair from B per integer target."""
    basis = sorted(set(B))
    tlist = sorted(set(targets))
    check = verify_cover(tlist, basis)
    if not check.covered:
        raise ValueError(f"target {check.first_uncovered} is not a product of two basis elements")
    edges = tuple((check.witness[t][0], check.witness[t][1], t) for t in tlist)
    verts = tuple(basis)
    return PairingGraph(mode="integer", left=verts, right=verts, edges=edges)


def decompose_by_coordinate(G: PairingGraph, n: int) -> list[PairingGraph]:
    """Subgraph i keeps the edges whose target has coordinate i equal to 1.

    Every weight-3 target lands in exactly three subgraphs.
    """
    for _, _, t in G.edges:
        if not t.in_sphere(3):
            raise ValueError(f"target {tuple(t.coords)} is not a weight-3 0-1 vector")
    out = []
    for i in range(n):
        sub = tuple(e for e in G.edges if e[2].coords[i] == 1)
        out.append(PairingGraph(mode=G.mode, left=G.left, right=G.right, edges=sub))
    return out


@dataclass(frozen=True)
class PruneResult:
    pruned: PairingGraph
    removed_edges: int
    heavy: tuple


def prune_heavy(H: PairingGraph, n: int, threshold: int | None = None) -> PruneResult:
    """Drop every edge at a right-class vertex of degree above the threshold."""
    if threshold is None:
        threshold = DEGREE_PRUNE_FACTOR * n
    deg = H.right_degrees()
    heavy = {w for w, d in deg.items() if d > threshold}
    kept = tuple(e for e in H.edges if e[1] not in heavy)
    removed = len(H.edges) - len(kept)
    return PruneResult(
        pruned=PairingGraph(mode=H.mode, left=H.left, right=H.right, edges=kept),
        removed_edges=removed,
        heavy=tuple(sorted(heavy)),
    )


def _sphere_report_full(B, n: int) -> tuple[list[InequalityReport], dict]:
    vecs = _as_sorted_vectors(B, n)
    size = len(vecs)
    targets = enumerate_sphere(n, 3)
    graph = build_pairing_graph(vecs, targets, n)

    # (a) common-neighbour identity, both sides from different walks of the data
    neighbors = graph.left_neighbors()
    lefts = sorted(neighbors)
    lhs_identity = 0
    for v1 in lefts:
        n1 = neighbors[v1]
        for v2 in lefts:
            lhs_identity += len(n1 & neighbors[v2])
    deg_full = graph.right_degrees()
    rhs_identity = sum(d * d for d in deg_full.values())
    reports = [InequalityReport.of("degree_square_identity", lhs_identity, rhs_identity)]

    # sparse common-neighbour counts: only pairs sharing a right vertex matter
    by_right: dict = defaultdict(list)
    for b1, b2, t in graph.edges:
        by_right[b2].append(b1)
    common: Counter = Counter()
    for w, vs in by_right.items():
        for v1 in vs:
            for v2 in vs:
                common[(v1, v2)] += 1
    case1_total = 0
    case3_by_diff: Counter = Counter()
    case3_total = 0
    for (v1, v2), c in common.items():
        case = classify_difference(v1 - v2)
        if case is DifferenceCase.CASE1:
            if c > 1:
                raise InvariantViolationError(
                    f"six-coordinate difference pair with {c} common neighbours"
                )
            case1_total += c
        elif case is DifferenceCase.CASE3:
            case3_by_diff[(v1 - v2).coords] += c
            case3_total += c
    reports.append(InequalityReport.of("case1_total", case1_total, size * size))
    worst_case3 = max(case3_by_diff.values(), default=0)
    reports.append(InequalityReport.of("case3_per_difference", worst_case3, n * n))
    reports.append(InequalityReport.of("case3_total", case3_total, n**4))

    # (d) per-coordinate pruning losses, worst instance folded into one row
    subs = decompose_by_coordinate(graph, n)
    prunes = [prune_heavy(H, n) for H in subs]
    worst_loss = max((p.removed_edges for p in prunes), default=0)
    small_left = 100 * size < n * n
    reports.append(
        InequalityReport.of("pruning_loss", worst_loss, n * n / 50.0, hypotheses_ok=small_left)
    )

    # global pruned graph: an edge dies if any coordinate slice pruned it
    dead = set()
    for H, p in zip(subs, prunes):
        heavy = set(p.heavy)
        for e in H.edges:
            if e[1] in heavy:
                dead.add(e[2])
    kept_edges = tuple(e for e in graph.edges if e[2] not in dead)
    pruned_graph = PairingGraph(mode="vector", left=graph.left, right=graph.right, edges=kept_edges)

    # (e) squared degrees per pruned slice against the slice's full size
    worst = None
    for i, (H, p) in enumerate(zip(subs, prunes)):
        deg_i = Counter(e[1] for e in H.edges if e[2] not in dead)
        lhs_i = sum(d * d for d in deg_i.values())
        rhs_i = DEGREE_PRUNE_FACTOR * n * len(H.edges)
        if worst is None or lhs_i - rhs_i > worst[0] - worst[1]:
            worst = (lhs_i, rhs_i)
    lhs_e, rhs_e = worst if worst is not None else (0, 0)
    reports.append(InequalityReport.of("case2_degree_square", lhs_e, rhs_e))

    # (f) retention of edges after pruning
    reports.append(
        InequalityReport.of(
            "edge_retention", len(graph.edges) - n**3 / 50.0, len(pruned_graph.edges)
        )
    )

    # (g) Cauchy-Schwarz on the pruned graph, then the bound it implies
    deg_pruned = pruned_graph.right_degrees()
    sum_d = sum(deg_pruned.values())
    sum_d2 = sum(d * d for d in deg_pruned.values())
    reports.append(InequalityReport.of("cauchy_schwarz", sum_d * sum_d, size * sum_d2))
    implied = (sum_d * sum_d / sum_d2) if sum_d2 else 0.0
    reports.append(InequalityReport.of("implied_basis_lower_bound", implied, size))
    if implied > size:
        raise InvariantViolationError(
            f"implied lower bound {implied} exceeds actual size {size}"
        )
    extras = {
        "graph": graph,
        "pruned": pruned_graph,
        "implied_bound": implied,
        "edges_full": len(graph.edges),
        "edges_pruned": len(pruned_graph.edges),
        "sum_d2_pruned": sum_d2,
    }
    return reports, extras


def sphere_cover_report(B, n: int) -> list[InequalityReport]:
    """Evaluate the degree-counting inequalities for a weight-3 cover.

    The identity and case bounds are computed on the full pairing graph;
    pruning, retention and Cauchy-Schwarz rows use the globally pruned
    graph.  Per-slice and per-difference families are folded to their
    worst instance, so one row holding means the whole family holds.
    Raises on a non-cover and on any soundness breach.
    """
    reports, _ = _sphere_report_full(B, n)
    return reports


def case2_routing_ok(B, n: int) -> bool:
    """Pairs with a four-coordinate difference meeting at w share a slice.

    For edges v1-w and v2-w of the pruned graph whose targets exist, the
    two weight-3 targets must both have coordinate 1 on some common
    index, placing both edges in that coordinate's subgraph.
    """
    _, extras = _sphere_report_full(B, n)
    by_right: dict = defaultdict(list)
    for b1, b2, t in extras["pruned"].edges:
        by_right[b2].append((b1, t))
    for w, pairs in by_right.items():
        for (v1, t1), (v2, t2) in combinations(pairs, 2):
            if classify_difference(v1 - v2) is DifferenceCase.CASE2:
                shared = any(
                    a == 1 and b == 1 for a, b in zip(t1.coords, t2.coords)
                )
                if not shared:
                    return False
    return True


@dataclass(frozen=True)
class ComponentSummary:
    ident: int
    vertex_count: int
    edge_count: int
    is_tree: bool
    has_odd_cycle: bool
    p2_projections: frozenset[TernaryVector]


@dataclass(frozen=True)
class ComponentAnalysis:
    components: tuple[ComponentSummary, ...]
    tree_count: int
    reports: tuple[InequalityReport, ...]
    vertex_count: int
    distinct_projections: int


def component_analysis(m1_edges: Sequence, split: tuple[int, int]) -> ComponentAnalysis:
    """Connected components of the single-prime-mark edges.

    Each edge joins vectors whose second-block projections are mutual
    negatives, so a component carries at most two projection values; an
    odd cycle collapses them to zero, and an even cycle (or any second
    independent cycle) contradicts the independence of the targets and
    is a hard error.  Also checks the projection count against 2T + 1
    and edges-plus-trees against the vertex count.
    """
    n1, n2 = split
    n = n1 + n2
    p2_range = range(n1, n)
    edges = []
    for e in m1_edges:
        v1, v2, t = e
        if v1.n != n or v2.n != n or t.n != n:
            raise ValueError("edge vector dimension does not match the split")
        if (v1 + v2) != t:
            raise ValueError(f"edge endpoints do not sum to the target {tuple(t.coords)}")
        head = t.coords[:n1]
        if sum(1 for c in head if c) != 1 or any(t.coords[i] for i in p2_range):
            raise ValueError(
                f"target {tuple(t.coords)} is not supported on one first-block coordinate"
            )
        edges.append((v1, v2, t))
    verts = sorted({v for e in edges for v in (e[0], e[1])})
    index = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))
    parity = [0] * len(verts)  # parity of the path to the current parent
    cycle_closed = [False] * len(verts)
    odd_cycle = [False] * len(verts)

    def find_with_parity(x: int) -> tuple[int, int]:
        root = x
        p = 0
        while parent[root] != root:
            p ^= parity[root]
            root = parent[root]
        # path compression, re-pointing everything at the root
        cur, cp = x, p
        while parent[cur] != root:
            nxt, np_ = parent[cur], parity[cur]
            parent[cur], parity[cur] = root, cp
            cur, cp = nxt, cp ^ np_
        return root, p

    edge_count_at: Counter = Counter()
    for v1, v2, _ in edges:
        a, b = index[v1], index[v2]
        ra, pa = find_with_parity(a)
        rb, pb = find_with_parity(b)
        if ra == rb:
            rel = pa ^ pb
            if rel == 1:
                raise InvariantViolationError(
                    "even cycle: dependent single-prime targets in one component"
                )
            if cycle_closed[ra]:
                raise InvariantViolationError(
                    "second independent cycle in a component: dependent targets"
                )
            cycle_closed[ra] = True
            odd_cycle[ra] = True
            edge_count_at[ra] += 1
        else:
            # attach rb under ra; parity so that endpoints get opposite classes
            parent[rb] = ra
            parity[rb] = pa ^ pb ^ 1
            cycle_closed[ra] = cycle_closed[ra] or cycle_closed[rb]
            odd_cycle[ra] = odd_cycle[ra] or odd_cycle[rb]
            edge_count_at[ra] += edge_count_at.pop(rb, 0) + 1
    groups: dict = defaultdict(list)
    for v in verts:
        r, _ = find_with_parity(index[v])
        groups[r].append(v)
    summaries = []
    tree_count = 0
    total_edges = 0
    zero_tail = TernaryVector.zero(n2)
    for ident, root in enumerate(sorted(groups, key=lambda r: verts[r])):
        members = groups[root]
        ec = edge_count_at[root]
        vc = len(members)
        total_edges += ec
        projections = frozenset(v.project(p2_range) for v in members)
        if len(projections) > 2:
            raise InvariantViolationError(
                f"component carries {len(projections)} distinct second-block projections"
            )
        if not all(-p in projections for p in projections):
            raise InvariantViolationError("component projections are not negation-closed")
        is_tree = not odd_cycle[root] and ec == vc - 1
        if odd_cycle[root] and projections != {zero_tail}:
            raise InvariantViolationError("odd-cycle component with nonzero projection")
        if ec > vc:
            raise InvariantViolationError(
                f"component has {ec} edges on {vc} vertices; targets cannot be independent"
            )
        if is_tree:
            tree_count += 1
        summaries.append(
            ComponentSummary(
                ident=ident,
                vertex_count=vc,
                edge_count=ec,
                is_tree=is_tree,
                has_odd_cycle=odd_cycle[root],
                p2_projections=projections,
            )
        )
    all_projections = {v.project(p2_range) for v in verts}
    reports = (
        InequalityReport.of("projection_tree_bound", len(all_projections), 2 * tree_count + 1),
        InequalityReport.of("component_edge_bound", total_edges + tree_count, len(verts)),
    )
    return ComponentAnalysis(
        components=tuple(summaries),
        tree_count=tree_count,
        reports=reports,
        vertex_count=len(verts),
        distinct_projections=len(all_projections),
    )


@dataclass(frozen=True)
class PipelineResult:
    M: int
    u: int
    g: int
    basis_size: int
    bound: float
    m1_size: int
    m2_size: int
    p1_size: int
    p2_size: int
    bprime_size: int
    graph_vertices: int
    tree_count: int
    proj_vertices: int
    proj_rest: int
    sphere_size: int
    sphere_ran: bool
    chain: tuple[InequalityReport, ...]
    sphere_reports: tuple[InequalityReport, ...]
    components: tuple[ComponentSummary, ...] = field(repr=False)

    @property
    def all_hold(self) -> bool:
        applicable = [r for r in self.chain + self.sphere_reports if r.hypotheses_ok]
        return all(r.holds for r in applicable)

    def to_record(self) -> dict:
        return {
            "M": self.M,
            "u": self.u,
            "g": self.g,
            "basis_size": self.basis_size,
            "bound": self.bound,
            "m1_size": self.m1_size,
            "m2_size": self.m2_size,
            "p1_size": self.p1_size,
            "p2_size": self.p2_size,
            "bprime_size": self.bprime_size,
            "graph_vertices": self.graph_vertices,
            "tree_count": self.tree_count,
            "sphere_size": self.sphere_size,
            "sphere_ran": self.sphere_ran,
            "chain": [r.to_record() for r in self.chain],
            "sphere_reports": [r.to_record() for r in self.sphere_reports],
        }


def _valuation_columns(values: Sequence[int], primes: Sequence[int]) -> np.ndarray:
    """Matrix of v_p(value) mod 3; vectorized per prime."""
    arr = np.array(values, dtype=np.int64)
    out = np.zeros((len(values), len(primes)), dtype=np.uint8)
    for j, p in enumerate(primes):
        x = arr.copy()
        v = np.zeros(len(values), dtype=np.int64)
        mask = x % p == 0
        while mask.any():
            v[mask] += 1
            x[mask] //= p
            mask &= x % p == 0
        out[:, j] = (v % 3).astype(np.uint8)
    return out


def end_to_end_lower_bound(
    M: int, B: Iterable[int], u: int = 0, g: int = 1, table: PrimeTable | None = None
) -> PipelineResult:
    """Lower bound on |B| from a cover of the progression g*(u+m), m in [1..M].

    Stages: verify the cover, build both marking constructions, embed
    the basis by prime valuations mod 3 (shifted so target vectors land
    in the sumset), pair off single-prime targets, analyze components,
    run the sphere reports on the small-prime block when it is wide
    enough, then chain the counts into one number.  Every link is an
    evaluated report and the final bound is asserted to be at most |B|.
    """
    if M < 1:
        raise PipelineError("input", f"M must be positive, got {M}")
    basis = sorted(set(int(b) for b in B))
    if not basis:
        raise PipelineError("input", "empty basis")
    if table is None:
        table = sieve(max(M, 4))
    elements = [g * (u + m) for m in range(1, M + 1)]
    cover = verify_cover(elements, basis)
    if not cover.covered:
        raise PipelineError("cover", f"element {cover.first_uncovered} is not covered")
    try:
        marks = build_marking_sets(M, u, table)
    except ValueError as exc:
        raise PipelineError("marks", str(exc)) from exc
    p1, p2 = marks.large_primes, marks.small_primes
    primes = list(p1) + list(p2)
    n1, n2 = len(p1), len(p2)
    n = n1 + n2

    rho_basis = _valuation_columns(basis, primes)
    shift = (2 * _valuation_columns([g], primes)[0]) % 3  # halving is doubling mod 3
    bprime_mat = (rho_basis + 3 - shift) % 3
    bprime = sorted({TernaryVector(bprime_mat[i].tobytes()) for i in range(len(basis))})

    m1_idx = sorted(marks.single_prime_marks.indices)
    term_vecs = _valuation_columns([u + m for m in m1_idx], primes)
    targets = []
    for row_idx, m in enumerate(m1_idx):
        t = TernaryVector(term_vecs[row_idx].tobytes())
        head = t.coords[:n1]
        if sum(1 for c in head if c) != 1 or any(t.coords[n1:]):
            raise PipelineError(
                "targets", f"mark {m} does not give a single first-block coordinate"
            )
        targets.append(t)
    try:
        graph = build_pairing_graph(bprime, targets, n)
    except ValueError as exc:
        raise PipelineError("pairing", str(exc)) from exc
    if len(graph.edges) != len(m1_idx):
        raise PipelineError("pairing", "edge count differs from single-prime mark count")

    try:
        analysis = component_analysis(graph.edges, (n1, n2))
    except ValueError as exc:
        raise PipelineError("components", str(exc)) from exc

    p2_range = range(n1, n)
    in_graph = {v for e in graph.edges for v in (e[0], e[1])}
    rest = [v for v in bprime if v not in in_graph]
    proj_v = {v.project(p2_range) for v in in_graph}
    proj_rest = {v.project(p2_range) for v in rest}
    sphere_set = sorted(proj_v | proj_rest)

    sphere_reports: tuple[InequalityReport, ...] = ()
    sphere_bound = None
    if n2 >= 3:
        try:
            s_reports, extras = _sphere_report_full(sphere_set, n2)
        except ValueError as exc:
            raise PipelineError("sphere", str(exc)) from exc
        sphere_reports = tuple(s_reports)
        sphere_bound = extras["implied_bound"]

    bound = len(m1_idx) + (len(proj_v) + len(proj_rest)) / 2.0 - 1
    chain = [
        InequalityReport.of("embedding_collapse", len(bprime), len(basis)),
        InequalityReport.of("vertex_partition", len(in_graph) + len(rest), len(bprime)),
        InequalityReport.of("edges_equal_marks", len(graph.edges), len(m1_idx)),
        *analysis.reports,
        InequalityReport.of(
            "chain_tree_link",
            len(graph.edges) + analysis.tree_count + len(proj_rest),
            len(in_graph) + len(rest),
        ),
        InequalityReport.of(
            "chain_half_link",
            bound,
            len(graph.edges) + analysis.tree_count + len(proj_rest),
        ),
    ]
    if sphere_bound is not None:
        chain.append(
            InequalityReport.of("projection_union", len(sphere_set), len(proj_v) + len(proj_rest))
        )
        chain.append(InequalityReport.of("sphere_block_bound", sphere_bound, len(sphere_set)))
    chain.append(InequalityReport.of("bound_soundness", bound, len(basis)))
    if bound > len(basis):
        raise InvariantViolationError(
            f"final bound {bound} exceeds the actual basis size {len(basis)}"
        )
    return PipelineResult(
        M=M,
        u=u,
        g=g,
        basis_size=len(basis),
        bound=bound,
        m1_size=len(m1_idx),
        m2_size=len(marks.triple_product_marks),
        p1_size=n1,
        p2_size=n2,
        bprime_size=len(bprime),
        graph_vertices=len(in_graph),
        tree_count=analysis.tree_count,
        proj_vertices=len(proj_v),
        proj_rest=len(proj_rest),
        sphere_size=len(sphere_set),
        sphere_ran=n2 >= 3,
        chain=tuple(chain),
        sphere_reports=sphere_reports,
        components=analysis.components,
    )
