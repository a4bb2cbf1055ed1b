import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulbasis.certificates import (
    InequalityReport,
    PairingGraph,
    PipelineError,
    build_integer_pairing_graph,
    build_pairing_graph,
    case2_routing_ok,
    component_analysis,
    decompose_by_coordinate,
    end_to_end_lower_bound,
    prune_heavy,
    sphere_cover_report,
)
from mulbasis.productsets import construct_interval_basis
from mulbasis.reduction import InvariantViolationError
from mulbasis.spherelab import TernaryVector, as_matrix, enumerate_sphere

V = TernaryVector.from_coords

REPORT_NAMES = [
    "degree_square_identity",
    "case1_total",
    "case3_per_difference",
    "case3_total",
    "pruning_loss",
    "case2_degree_square",
    "edge_retention",
    "cauchy_schwarz",
    "implied_basis_lower_bound",
]


def small_spheres(n: int) -> list[TernaryVector]:
    return enumerate_sphere(n, 1) + enumerate_sphere(n, 2)


# ---------------------------------------------------------- reports


def test_report_of_computes_holds():
    r = InequalityReport.of("x", 3, 3)
    assert r.holds and r.hypotheses_ok
    assert not InequalityReport.of("x", 4, 3).holds
    assert not InequalityReport.of("x", 1, 2, hypotheses_ok=False).hypotheses_ok


def test_report_round_trips_through_record():
    r = InequalityReport.of("edge_retention", 1.5, 2.0)
    rec = json.loads(json.dumps(r.to_record()))
    assert rec == {
        "name": "edge_retention",
        "lhs": 1.5,
        "rhs": 2.0,
        "hypotheses_ok": True,
        "holds": True,
    }


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_report_holds_matches_comparison(lhs, rhs):
    assert InequalityReport.of("p", lhs, rhs).holds == (lhs <= rhs)


# ---------------------------------------------------------- pairing graphs


def test_self_pair_edge():
    g = build_pairing_graph([V((2, 2, 2))], [V((1, 1, 1))], 3)
    assert g.mode == "vector"
    assert g.edges == ((V((2, 2, 2)), V((2, 2, 2)), V((1, 1, 1))),)
    assert g.right_degrees()[V((2, 2, 2))] == 1


def test_small_sphere_graph_shape():
    n = 5
    B = small_spheres(n)
    g = build_pairing_graph(B, enumerate_sphere(n, 3), n)
    assert g.edge_count == 10
    for b1, b2, t in g.edges:
        assert b1 + b2 == t
        assert b1 <= b2
        assert b1.weight() == 1 and b2.weight() == 2
    assert set(g.left_neighbors()) <= set(g.left)


def test_edges_are_lex_smallest_pairs():
    n = 5
    B = small_spheres(n)
    g = build_pairing_graph(B, enumerate_sphere(n, 3), n)
    for b1, b2, t in g.edges:
        pairs = sorted((x, y) for x in B for y in B if x + y == t)
        assert (b1, b2) == pairs[0]


def test_graph_accepts_matrix_input_and_dedupes():
    n = 4
    B = small_spheres(n) + small_spheres(n)  # duplicates collapse
    g = build_pairing_graph(as_matrix(B, n), enumerate_sphere(n, 3) * 2, n)
    assert len(g.left) == 10
    assert g.edge_count == 4


def test_graph_rejections():
    with pytest.raises(ValueError, match="empty vertex set"):
        build_pairing_graph([], [V((1, 1, 1))], 3)
    with pytest.raises(ValueError, match=r"\(1, 1, 1\) is not a sum"):
        build_pairing_graph([V((0, 0, 1))], [V((1, 1, 1))], 3)
    with pytest.raises(ValueError, match="dimension"):
        build_pairing_graph([V((0, 1))], [V((1, 1, 1))], 3)


def test_empty_target_list_gives_empty_graph():
    g = build_pairing_graph([V((0, 0, 1))], [], 3)
    assert g.edges == ()


def test_integer_graph_uses_smallest_factor_pairs():
    g = build_integer_pairing_graph([1, 2, 3, 4, 5, 7], range(1, 9))
    assert g.mode == "integer"
    assert g.edge_count == 8
    assert g.edges[-1] == (2, 4, 8)
    for b1, b2, t in g.edges:
        assert b1 * b2 == t and b1 <= b2


def test_integer_graph_rejects_uncovered_target():
    with pytest.raises(ValueError, match="11 is not a product"):
        build_integer_pairing_graph([1, 2, 3], [1, 2, 3, 11])


# ---------------------------------------------------------- decomposition and pruning


def test_decompose_counts_per_coordinate():
    n = 4
    g = build_pairing_graph(small_spheres(n), enumerate_sphere(n, 3), n)
    subs = decompose_by_coordinate(g, n)
    assert len(subs) == 4
    assert [h.edge_count for h in subs] == [3, 3, 3, 3]
    t = V((1, 1, 1, 0))
    membership = [any(e[2] == t for e in h.edges) for h in subs]
    assert membership == [True, True, True, False]


def test_decompose_total_is_three_per_target():
    n = 10
    g = build_pairing_graph(small_spheres(n), enumerate_sphere(n, 3), n)
    subs = decompose_by_coordinate(g, n)
    assert sum(h.edge_count for h in subs) == 3 * g.edge_count == 360


def test_decompose_rejects_non_sphere_targets():
    g = build_pairing_graph([V((1, 1, 1))], [V((2, 2, 2))], 3)
    with pytest.raises(ValueError, match="not a weight-3 0-1 vector"):
        decompose_by_coordinate(g, 3)


def test_prune_light_graph_is_identity():
    n = 5
    g = build_pairing_graph(small_spheres(n), enumerate_sphere(n, 3), n)
    for h in decompose_by_coordinate(g, n):
        res = prune_heavy(h, n)
        assert res.removed_edges == 0
        assert res.heavy == ()
        assert res.pruned.edges == h.edges


def test_prune_star_above_threshold():
    w = TernaryVector.zero(3)
    edges = tuple((V(t), w, V(t)) for t in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    star = PairingGraph(mode="vector", left=(w,), right=(w,), edges=edges)
    res = prune_heavy(star, 3, threshold=2)
    assert res.removed_edges == 3
    assert res.heavy == (w,)
    assert res.pruned.edge_count == 0
    assert prune_heavy(star, 3).removed_edges == 0  # default threshold is 3072


@given(st.integers(1, 12))
@settings(max_examples=20, deadline=None)
def test_prune_bookkeeping_consistent(threshold):
    n = 5
    g = build_pairing_graph(small_spheres(n), enumerate_sphere(n, 3), n)
    res = prune_heavy(g, n, threshold=threshold)
    assert res.removed_edges == g.edge_count - res.pruned.edge_count
    before = g.right_degrees()
    assert all(before[w] > threshold for w in res.heavy)
    assert all(d <= threshold for d in res.pruned.right_degrees().values())


# ---------------------------------------------------------- sphere cover reports


def test_report_suite_names_and_order():
    reports = sphere_cover_report(small_spheres(5), 5)
    assert [r.name for r in reports] == REPORT_NAMES


def test_report_suite_holds_on_small_sphere_cover():
    reports = sphere_cover_report(small_spheres(16), 16)
    assert all(r.holds for r in reports if r.hypotheses_ok)
    identity = reports[0]
    assert identity.name == "degree_square_identity"
    assert identity.lhs == identity.rhs == 4200


def test_pruning_hypothesis_flagged_for_wide_basis():
    full = [V(t) for t in product(range(3), repeat=4)]
    reports = sphere_cover_report(full, 4)
    loss = next(r for r in reports if r.name == "pruning_loss")
    assert not loss.hypotheses_ok


def test_implied_bound_is_positive_and_sound():
    reports = sphere_cover_report(small_spheres(24), 24)
    implied = next(r for r in reports if r.name == "implied_basis_lower_bound")
    assert implied.lhs == 176.0
    assert implied.rhs == 300
    assert implied.holds


def test_report_suite_rejects_non_cover():
    with pytest.raises(ValueError, match="is not a sum"):
        sphere_cover_report(enumerate_sphere(5, 1), 5)


@pytest.mark.parametrize("n", [6, 12])
def test_case2_routing_on_small_sphere_cover(n):
    assert case2_routing_ok(small_spheres(n), n)


# ---------------------------------------------------------- component analysis

TRI_A, TRI_B, TRI_C = V((2, 1, 2, 0, 0)), V((2, 2, 1, 0, 0)), V((1, 2, 2, 0, 0))
E1, E2, E3 = V((1, 0, 0, 0, 0)), V((0, 1, 0, 0, 0)), V((0, 0, 1, 0, 0))
TRIANGLE = [(TRI_A, TRI_B, E1), (TRI_B, TRI_C, E2), (TRI_A, TRI_C, E3)]


def test_single_edge_component():
    res = component_analysis([(V((0, 1, 2)), V((1, 2, 1)), V((1, 0, 0)))], (1, 2))
    assert res.tree_count == 1
    assert res.vertex_count == 2
    assert res.distinct_projections == 2
    comp = res.components[0]
    assert comp.is_tree and not comp.has_odd_cycle
    assert comp.p2_projections == {V((1, 2)), V((2, 1))}
    assert all(r.holds for r in res.reports)
    assert [r.name for r in res.reports] == ["projection_tree_bound", "component_edge_bound"]


def test_odd_cycle_collapses_projections():
    res = component_analysis(TRIANGLE, (3, 2))
    assert res.tree_count == 0
    comp = res.components[0]
    assert comp.vertex_count == comp.edge_count == 3
    assert comp.has_odd_cycle and not comp.is_tree
    assert comp.p2_projections == {TernaryVector.zero(2)}
    assert all(r.holds for r in res.reports)


def test_duplicated_tree_edge_is_even_cycle():
    edges = [(TRI_A, TRI_B, E1), (TRI_A, TRI_B, E1)]
    with pytest.raises(InvariantViolationError, match="even cycle"):
        component_analysis(edges, (3, 2))


def test_second_closure_in_one_component_rejected():
    with pytest.raises(InvariantViolationError, match="second independent cycle"):
        component_analysis(TRIANGLE + [(TRI_A, TRI_C, E3)], (3, 2))


def test_component_edge_validation():
    with pytest.raises(ValueError, match="do not sum"):
        component_analysis([(TRI_A, TRI_B, E2)], (3, 2))
    with pytest.raises(ValueError, match="one first-block coordinate"):
        component_analysis([(V((1, 1, 2, 0, 0)), V((1, 1, 1, 0, 0)), V((2, 2, 0, 0, 0)))], (3, 2))
    with pytest.raises(ValueError, match="dimension"):
        component_analysis([(V((0, 1)), V((1, 2)), V((1, 0)))], (3, 2))


def test_two_components_counted_separately():
    second = (V((0, 0, 0, 0, 1, 2)), V((0, 1, 0, 0, 2, 1)), V((0, 1, 0, 0, 0, 0)))
    edges = [(V((0, 0, 1, 0, 1, 2)), V((1, 0, 2, 0, 2, 1)), V((1, 0, 0, 0, 0, 0))), second]
    res = component_analysis(edges, (4, 2))
    assert len(res.components) == 2
    assert res.tree_count == 2
    assert res.vertex_count == 4
    assert res.distinct_projections == 2  # both edges share the same projection pair


# ---------------------------------------------------------- end-to-end bound


def test_pipeline_narrow_small_prime_block():
    M = 100
    res = end_to_end_lower_bound(M, construct_interval_basis(M).basis)
    assert not res.sphere_ran
    assert res.sphere_reports == ()
    assert res.p2_size == 1
    assert res.m1_size == 23
    assert res.bound == 23.5
    assert res.basis_size == 38
    assert res.all_hold
    assert [r.name for r in res.chain] == [
        "embedding_collapse",
        "vertex_partition",
        "edges_equal_marks",
        "projection_tree_bound",
        "component_edge_bound",
        "chain_tree_link",
        "chain_half_link",
        "bound_soundness",
    ]


def test_pipeline_with_sphere_stage():
    M = 1000
    res = end_to_end_lower_bound(M, construct_interval_basis(M).basis)
    assert res.sphere_ran
    assert res.p2_size == 3
    assert res.m1_size == 164
    assert res.bound == 169.5
    assert res.basis_size == 243
    assert res.all_hold
    assert [r.name for r in res.sphere_reports] == REPORT_NAMES
    chain_names = [r.name for r in res.chain]
    assert "projection_union" in chain_names
    assert "sphere_block_bound" in chain_names
    assert chain_names[-1] == "bound_soundness"


def test_pipeline_bound_is_sound_and_anchored():
    res = end_to_end_lower_bound(300, construct_interval_basis(300).basis)
    assert res.m1_size - 1 <= res.bound <= res.basis_size


def test_pipeline_rejects_non_cover():
    with pytest.raises(PipelineError, match=r"\[cover\]") as exc:
        end_to_end_lower_bound(10, [1])
    assert exc.value.stage == "cover"


def test_pipeline_rejects_bad_input():
    with pytest.raises(PipelineError) as exc:
        end_to_end_lower_bound(0, [1, 2])
    assert exc.value.stage == "input"
    with pytest.raises(PipelineError) as exc:
        end_to_end_lower_bound(5, [])
    assert exc.value.stage == "input"


def test_pipeline_record_is_json_serializable():
    res = end_to_end_lower_bound(100, construct_interval_basis(100).basis)
    rec = json.loads(json.dumps(res.to_record()))
    assert rec["M"] == 100
    assert rec["bound"] == res.bound
    assert len(rec["chain"]) == len(res.chain)
    assert rec["sphere_ran"] is False
