"""FPTアルゴリズム（分離族・閾値・抽出・2つのソルバー）のテスト"""

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coloring.colorings import WitnessCertificate, WitnessKind, verify_b_coloring, verify_partial_grundy
from coloring.errors import (
    ContractBreachError,
    ExtractionFailure,
    MalformedCertificateError,
    PreconditionError,
)
from coloring.exact import find_b_core_witness, find_partial_grundy_witness
from coloring.fpt import (
    StarOrCliqueWitness,
    TowerNumber,
    anti_biclique_extract,
    clique_or_multipartite_is,
    exchange_component,
    hyperedge_bound_holds,
    problem_kind,
    separating_family,
    solve_almost_bounded_degree,
    solve_ktt_free,
    star_forest_extract,
    thresholds,
    tower,
)
from coloring.generators import star_forest
from coloring.graph_core import Graph, LabeledComponent, has_biclique, is_clique, is_independent
from tests.strategies import C4, P4, graphs


def test_problem_kind():
    assert problem_kind("partial-grundy") == WitnessKind.PARTIAL_GRUNDY
    assert problem_kind("bcore") == WitnessKind.B_COLORING
    with pytest.raises(ValueError):
        problem_kind("grundy")
    with pytest.raises(ValueError):
        problem_kind(WitnessKind.GRUNDY)


class TestSeparatingFamily:
    @pytest.mark.parametrize("n, a, b", [(4, 1, 1), (5, 2, 1), (5, 1, 3), (6, 2, 2)])
    def test_trivial_family_separates(self, n, a, b):
        assert separating_family(n, a, b, construction="trivial").verify_exhaustive()

    def test_hash_family_separates(self):
        family = separating_family(8, 1, 1, construction="hash")
        assert family.construction == "hash"
        assert family.verify_exhaustive()

    def test_auto_family_separates(self):
        assert separating_family(8, 1, 1).verify_exhaustive().ok

    def test_degenerate_sides(self):
        assert separating_family(5, 0, 3).sets == ((),)
        assert separating_family(5, 2, 0).sets == ((0, 1, 2, 3, 4),)

    def test_separator_for(self):
        family = separating_family(5, 2, 2)
        s = family.separator_for([0, 3], [1, 4])
        assert s is not None
        assert {0, 3} <= set(s) and not {1, 4} & set(s)

    def test_to_dict(self):
        data = separating_family(4, 1, 1, construction="trivial").to_dict()
        assert data["construction"] == "trivial"
        assert data["size"] == 5

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            separating_family(4, 1, 1, construction="random")
        with pytest.raises(ValueError):
            separating_family(-1, 1, 1)


class TestTowerAndThresholds:
    def test_small_towers(self):
        assert tower(1, 1) == 8
        assert tower(2, 1) == 16777216
        assert tower(2, 2) == 8 ** 64
        assert tower(0, 5) == 5

    def test_huge_tower_is_symbolic(self):
        value = tower(3, 3)
        assert isinstance(value, TowerNumber)
        assert value > 10 ** 100
        assert not value < 10 ** 100

    def test_faithful_thresholds_with_huge_tower(self):
        limits = thresholds(3, 3, n_t_eps=10)
        assert isinstance(limits.m, TowerNumber)
        assert limits.is_symbolic
        assert limits.f_tk == 2 ** 258
        assert limits.to_dict()["M"] == str(limits.m)

    def test_faithful_f(self):
        assert thresholds(1, 1).f_tk == 16
        assert thresholds(2, 2).f_tk == 2 ** 24

    def test_faithful_g_needs_n(self):
        limits = thresholds(1, 1)
        assert limits.m == 8
        assert limits.g_tk is None and limits.m_prime is None
        assert limits.degree_threshold is None

    def test_faithful_g_with_n(self):
        limits = thresholds(1, 1, n_t_eps=100)
        assert limits.m_prime == 100
        assert limits.g_tk == 400
        assert limits.degree_threshold == 416
        assert limits.to_dict()["g"] == 400

    def test_practical_defaults_and_overrides(self):
        limits = thresholds(2, 3, mode="practical")
        assert (limits.f_tk, limits.g_tk, limits.m_prime) == (3, 0, 3)
        assert limits.degree_threshold == 3
        assert thresholds(2, 3, "practical", overrides={"g": 5}).degree_threshold == 8

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            thresholds(2, 3, "practical", overrides={"h": 1})
        with pytest.raises(ValueError):
            thresholds(2, 3, "practical", overrides={"f": -1})
        with pytest.raises(ValueError):
            thresholds(2, 3, "faithful", overrides={"f": 1})
        with pytest.raises(ValueError):
            thresholds(2, 3, n_t_eps=0)
        with pytest.raises(ValueError):
            thresholds(2, 3, mode="eager")


class TestStarOrCliqueWitness:
    def test_stars_verify_and_convert(self):
        g = star_forest(3, 3)
        witness = StarOrCliqueWitness(centers=(0, 4, 8), leaf_sets=((1, 2, 3), (5, 6, 7), (9, 10, 11)))
        assert witness.variant == "stars"
        assert witness.verify(g, 3)
        assert verify_partial_grundy(g, witness.to_certificate("partial-grundy"))
        assert verify_b_coloring(g, witness.to_certificate("bcore"))

    def test_two_stars(self):
        g = star_forest(2, 2)
        cert = StarOrCliqueWitness(centers=(0, 3), leaf_sets=((1, 2), (4, 5))).to_certificate("bcore")
        assert cert.classes == ((0, 4), (1, 3))
        assert cert.centers == (0, 3)
        assert verify_b_coloring(g, cert)

    def test_shared_leaf_is_rejected(self):
        g = Graph.from_edges(5, [(0, 2), (1, 2), (0, 3), (1, 4)])
        witness = StarOrCliqueWitness(centers=(0, 1), leaf_sets=((2, 3), (2, 4)))
        assert not witness.verify(g)

    def test_clique(self):
        witness = StarOrCliqueWitness(clique=(0, 1, 2))
        assert witness.verify(Graph.complete(4))
        assert not witness.verify(Graph.complete(4), 4)
        cert = witness.to_certificate(WitnessKind.B_COLORING)
        assert cert.classes == ((0,), (1,), (2,))
        assert witness.to_dict() == {"variant": "clique", "clique": [0, 1, 2]}

    def test_malformed(self):
        with pytest.raises(MalformedCertificateError):
            StarOrCliqueWitness()
        with pytest.raises(MalformedCertificateError):
            StarOrCliqueWitness(clique=(0, 1), centers=(2,), leaf_sets=((3,),))
        with pytest.raises(MalformedCertificateError):
            StarOrCliqueWitness(centers=(0, 1), leaf_sets=((2,),))


class TestExtraction:
    def test_anti_biclique_on_empty_graph(self):
        result = anti_biclique_extract(Graph.empty(6), [0, 1, 2], [3, 4, 5], 2, 2)
        assert result.a_side == (0, 1, 2)
        assert result.b_side == (3, 4, 5)

    def test_anti_biclique_reports_biclique(self):
        g = Graph.from_networkx(nx.complete_bipartite_graph(3, 3))
        with pytest.raises(ContractBreachError) as excinfo:
            anti_biclique_extract(g, [0, 1, 2], [3, 4, 5], 1, 2)
        left, right = excinfo.value.witness
        assert all(g.has_edge(u, v) for u in left for v in right)

    def test_anti_biclique_too_small(self):
        g = Graph.from_edges(4, [(0, 2), (1, 3)])
        with pytest.raises(ExtractionFailure) as excinfo:
            anti_biclique_extract(g, [0, 1], [2, 3], 2, 3)
        assert excinfo.value.step == "anti_biclique"

    @settings(max_examples=40, deadline=None)
    @given(st.randoms(use_true_random=False), st.floats(0.05, 0.9))
    def test_anti_biclique_faithful_on_k22_free_inputs(self, rnd, density):
        # |A| = N·2^(N+t) = 32, |B| = N+t = 4 で N = t = 2
        a_side, b_side = list(range(32)), list(range(32, 36))
        nbrs = {v: set() for v in a_side + b_side}
        pairs = [(a, b) for a in a_side for b in b_side]
        rnd.shuffle(pairs)
        for a, b in pairs:
            if rnd.random() > density:
                continue
            # a-b を足すと a-w-x-b の4サイクルができるなら見送る
            if any(nbrs[w] & nbrs[b] for w in nbrs[a]):
                continue
            nbrs[a].add(b)
            nbrs[b].add(a)
        g = Graph.from_edges(36, [(a, b) for a in a_side for b in nbrs[a]])
        assert not has_biclique(g, 2)
        result = anti_biclique_extract(g, a_side, b_side, 2, 2, mode="faithful")
        assert len(result.a_side) >= 2 and len(result.b_side) >= 2
        assert not any(g.has_edge(a, b) for a in result.a_side for b in result.b_side)

    def test_anti_biclique_input_checks(self):
        with pytest.raises(ValueError):
            anti_biclique_extract(Graph.empty(4), [0, 1], [1, 2], 1, 1)
        with pytest.raises(PreconditionError):
            anti_biclique_extract(Graph.empty(8), [0, 1, 2], [3, 4, 5], 2, 2, mode="faithful")

    def test_multipartite_independent_sets(self):
        g = Graph.empty(9)
        material = clique_or_multipartite_is(g, [[0, 1, 2], [3, 4, 5], [6, 7, 8]], 2)
        assert not material.is_clique
        assert all(len(s) == 3 for s in material.independent_sets)
        assert is_independent(g, [v for s in material.independent_sets for v in s])

    def test_multipartite_finds_clique(self):
        g = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2)])
        material = clique_or_multipartite_is(g, [[0, 1, 2], [3, 4, 5]], 2)
        assert material.is_clique
        assert len(material.clique) == 2 and is_clique(g, material.clique)

    def test_multipartite_rejects_overlap(self):
        with pytest.raises(ValueError):
            clique_or_multipartite_is(Graph.empty(4), [[0, 1], [1, 2]], 2)

    def test_star_forest_extract(self):
        g = star_forest(2, 2)
        witness = star_forest_extract(g, [0, 3], [1, 2, 4, 5], 2, 2, thresholds(2, 2, "practical"))
        assert witness.variant == "stars"
        assert witness.verify(g, 2)
        assert sorted(witness.centers) == [0, 3]

    def test_star_forest_extract_faithful_needs_g(self):
        g = star_forest(2, 2)
        with pytest.raises(PreconditionError):
            star_forest_extract(g, [0, 3], [1, 2, 4, 5], 1, 1, thresholds(1, 1))
        with pytest.raises(ValueError):
            star_forest_extract(g, [0, 1], [1, 2], 2, 2, thresholds(2, 2, "practical"))

    def test_hyperedge_bound(self):
        g = star_forest(1, 3)
        assert hyperedge_bound_holds(g, [0], [1, 2, 3], 0, 2, 1)
        k23 = Graph.from_networkx(nx.complete_bipartite_graph(3, 2))
        verdict = hyperedge_bound_holds(k23, [0, 1, 2], [3, 4], 0, 1, 1)
        assert not verdict
        assert "bound is 1" in verdict.reason


class TestBoundedDegree:
    def test_p4(self):
        assert solve_almost_bounded_degree(P4, 3, 2, 0, "partial-grundy")
        assert not solve_almost_bounded_degree(P4, 3, 2, 0, "bcore")

    def test_too_many_high_degree_vertices(self):
        with pytest.raises(PreconditionError):
            solve_almost_bounded_degree(star_forest(1, 3), 2, 2, 0, "bcore")

    def test_high_degree_vertex_as_anchor(self):
        result = solve_almost_bounded_degree(star_forest(1, 3), 2, 1, 1, "partial-grundy")
        assert result.decision
        assert verify_partial_grundy(star_forest(1, 3), result.certificate)
        assert result.audit["branch"] == "bounded-degree"

    def test_empty_graph(self):
        result = solve_almost_bounded_degree(Graph.empty(0), 1, 0, 0, "bcore")
        assert not result
        assert result.to_dict()["certificate"] is None

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_n=6), st.integers(1, 3), st.sampled_from(["partial-grundy", "bcore"]))
    def test_agrees_with_exact_search(self, g, k, problem):
        finder = find_partial_grundy_witness if problem == "partial-grundy" else find_b_core_witness
        expected = finder(g, k) is not None
        result = solve_almost_bounded_degree(g, k, g.max_degree, 0, problem)
        assert result.decision == expected
        if result.decision:
            assert result.certificate.order == k

    @settings(max_examples=20, deadline=None)
    @given(graphs(max_n=6), st.integers(1, 3))
    def test_split_degree_agrees(self, g, k):
        s = sum(1 for v in range(g.n) if g.degree(v) > 1)
        result = solve_almost_bounded_degree(g, k, 1, s, "partial-grundy")
        assert result.decision == (find_partial_grundy_witness(g, k) is not None)


def test_exchange_component():
    g = Graph.from_edges(5, [(0, 1), (0, 3), (1, 2), (3, 4)])
    cert = WitnessCertificate(WitnessKind.PARTIAL_GRUNDY, ((0, 2), (1,)), (0, 1))
    assert verify_partial_grundy(g, cert)
    source = LabeledComponent.from_subset(g, [1, 2], [0])
    target = LabeledComponent.from_subset(g, [3, 4], [0])
    moved = exchange_component(cert, source, target)
    assert moved.classes == ((0, 4), (3,))
    assert moved.centers == (0, 3)
    assert verify_partial_grundy(g, moved)

    lonely = LabeledComponent.from_subset(g, [4], [0])
    with pytest.raises(ValueError):
        exchange_component(cert, source, lonely)


class TestKttFree:
    def test_star_forest_branch(self):
        g = star_forest(3, 3)
        result = solve_ktt_free(g, 3, 2, "bcore")
        assert result.decision
        assert result.audit["branch"] == "star-forest"
        assert result.witness is not None
        assert verify_b_coloring(g, result.certificate)

    def test_bounded_degree_branch(self):
        result = solve_ktt_free(P4, 3, 2, "partial-grundy")
        assert result.decision
        assert result.audit["branch"] == "bounded-degree"
        assert result.audit["ktt_check"] == "passed"

    def test_biclique_is_contract_breach(self):
        with pytest.raises(ContractBreachError) as excinfo:
            solve_ktt_free(C4, 2, 2, "bcore")
        assert excinfo.value.witness is not None

    def test_faithful_needs_n(self):
        with pytest.raises(PreconditionError):
            solve_ktt_free(P4, 2, 2, "bcore", mode="faithful")

    @settings(max_examples=20, deadline=None)
    @given(graphs(max_n=6), st.integers(1, 3))
    def test_agrees_with_exact_search_on_forests(self, g, k):
        forest = Graph.from_networkx(nx.minimum_spanning_tree(g.to_networkx()))
        result = solve_ktt_free(forest, k, 2, "bcore")
        assert result.decision == (find_b_core_witness(forest, k) is not None)

    @pytest.mark.parametrize("problem", ["partial-grundy", "bcore"])
    def test_single_edge_at_k1_falls_back(self, problem):
        result = solve_ktt_free(Graph.from_edges(2, [(0, 1)]), 1, 2, problem)
        assert result.decision
        assert result.audit["branch"] == "bounded-degree"
        assert result.audit["extraction_failure"]["step"] == "star 1"

    def test_empty_neighborhood_is_extraction_failure(self):
        g = Graph.from_edges(2, [(0, 1)])
        with pytest.raises(ExtractionFailure) as excinfo:
            star_forest_extract(g, [0, 1], [], 1, 2, thresholds(2, 1, "practical"))
        assert excinfo.value.step == "star 1"
