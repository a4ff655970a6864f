"""ガジェット生成のテスト"""

from itertools import combinations

import networkx as nx
import pytest

from coloring.colorings import verify_grundy
from coloring.errors import InvalidInstanceError
from coloring.exact import grundy_number, rooted_grundy
from coloring.generators import (
    GadgetFamily,
    GadgetSpec,
    anti_matching,
    attach_color_providers,
    binomial_tree,
    binomial_tree_coloring,
    check_cycle_level_structure,
    half_graph,
    half_graph_cycle,
    half_graph_path,
    has_cross_2k2,
    layers_of,
    parse_gadget_params,
    pruned_binomial_tree,
    random_almost_bounded_graph,
    random_graph,
    star_forest,
    t5_edge_tree,
)
from coloring.graph_core import is_connected
from tests.strategies import C4, to_nx


class TestBinomialTree:
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_size_and_grundy_number(self, k):
        tree = binomial_tree(k)
        assert tree.n == 2 ** (k - 1)
        assert tree.num_edges == tree.n - 1
        assert tree.role(0) == "root"
        assert grundy_number(tree).value == k

    def test_t3_root_degree(self):
        assert binomial_tree(3).degree(0) == 2

    def test_refuses_huge_trees(self):
        with pytest.raises(ValueError):
            binomial_tree(26)
        with pytest.raises(ValueError):
            binomial_tree(0)

    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_coloring_is_grundy(self, k):
        cert = binomial_tree_coloring(k)
        assert verify_grundy(binomial_tree(k), cert)
        assert cert.color_of()[0] == k
        for c in range(1, k):
            assert len(cert.classes[c - 1]) == 2 ** (k - 1 - c)


class TestPrunedBinomialTree:
    def test_removes_one_pendant_subtree(self):
        pruned = pruned_binomial_tree(5, 2, 1)
        assert pruned.eligible_roots == 2
        assert pruned.graph.n == 15
        assert len(pruned.x_members) == 1
        assert pruned.graph.role(pruned.x_members[0]) == "x"

    def test_empty_x_keeps_tree(self):
        pruned = pruned_binomial_tree(5, 3, 0)
        assert pruned.x_members == ()
        assert pruned.graph == binomial_tree(5)

    def test_smallest_case(self):
        pruned = pruned_binomial_tree(4, 2, 1)
        assert pruned.graph.n == 7
        assert is_connected(pruned.graph)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            pruned_binomial_tree(5, 4, 0)
        with pytest.raises(ValueError):
            pruned_binomial_tree(5, 2, 3)

    @pytest.mark.parametrize("k,i", [(4, 2), (5, 2), (5, 3)])
    def test_providers_restore_root_color(self, k, i):
        eligible = pruned_binomial_tree(k, i, 0).eligible_roots
        for x_count in range(1, eligible + 1):
            pruned = pruned_binomial_tree(k, i, x_count)
            helped = attach_color_providers(pruned.graph, pruned.x_members, i - 1)
            assert rooted_grundy(helped, 0) == k
            for dropped in pruned.x_members:
                rest = tuple(x for x in pruned.x_members if x != dropped)
                partial = attach_color_providers(pruned.graph, rest, i - 1)
                assert rooted_grundy(partial, 0) < k


class TestT5EdgeTree:
    def test_structure(self):
        tree = t5_edge_tree()
        assert tree.n == 14
        beta = tree.vertices_with_role("beta")
        gamma = tree.vertices_with_role("gamma")
        assert len(beta) == 1 and len(gamma) == 1
        assert tree.degree(beta[0]) == 1
        assert tree.degree(gamma[0]) == 1

    def test_root_needs_external_help(self):
        tree = t5_edge_tree()
        assert rooted_grundy(tree, 0) < 5
        members = tree.vertices_with_role("beta") + tree.vertices_with_role("gamma")
        helped = attach_color_providers(tree, members, 1)
        assert helped.n == 16
        assert rooted_grundy(helped, 0) == 5


class TestHalfGraphs:
    def test_small_half_graphs(self):
        assert half_graph(1).num_edges == 0
        assert half_graph(1).n == 2
        assert half_graph(2).edges() == [(0, 3)]
        assert half_graph(4).num_edges == 6

    def test_adjacency_rule(self):
        t = 4
        g = half_graph(t)
        for i in range(t):
            for j in range(t):
                assert g.has_edge(i, t + j) == (i < j)

    @pytest.mark.parametrize("t", [2, 3, 4, 5])
    def test_no_cross_2k2(self, t):
        g = half_graph(t)
        assert not has_cross_2k2(g, tuple(range(t)), tuple(range(t, 2 * t)))

    def test_path_of_length_one_is_half_graph(self):
        assert half_graph_path(1, 3) == half_graph(3)

    def test_path_layers(self):
        g = half_graph_path(2, 3)
        layers = layers_of(g)
        assert sorted(layers) == [1, 2, 3]
        assert all(len(members) == 3 for members in layers.values())
        assert g.role(0) == "H1.1"

    @pytest.mark.parametrize("t", [2, 3, 4])
    def test_length_two_path_bound(self, t):
        assert grundy_number(half_graph_path(2, t)).value <= 5

    def test_length_one_path_bound(self):
        assert grundy_number(half_graph_path(1, 4)).value <= 4

    @pytest.mark.parametrize("length, t", [(1, 3), (2, 2), (2, 3), (3, 2)])
    def test_cycle_independent_sets_take_one_level(self, length, t):
        assert check_cycle_level_structure(half_graph_cycle(length, t))

    def test_cycle_closes_last_layer(self):
        g = half_graph_cycle(2, 2)
        layers = layers_of(g)
        assert g.has_edge(layers[3][0], layers[1][1])
        assert g.num_edges == half_graph_path(2, 2).num_edges + 1


class TestAntiMatchingAndStars:
    def test_anti_matching_t1(self):
        g = anti_matching(1)
        assert g.n == 2 and g.num_edges == 0

    def test_anti_matching_t2_is_c4(self):
        assert nx.is_isomorphic(to_nx(anti_matching(2)), to_nx(C4))

    @pytest.mark.parametrize("t", [3, 4])
    def test_anti_matching_is_complement_of_matching(self, t):
        g = anti_matching(t)
        matching = nx.Graph([(2 * i, 2 * i + 1) for i in range(t)])
        assert nx.is_isomorphic(to_nx(g), nx.complement(matching))
        assert g.num_edges == len(list(combinations(range(2 * t), 2))) - t

    def test_star_forest(self):
        g = star_forest(1, 1)
        assert g.edges() == [(0, 1)]
        forest = star_forest(3, 2)
        assert forest.vertices_with_role("center") == (0, 3, 6)
        assert len(forest.vertices_with_role("leaf")) == 6
        with pytest.raises(ValueError):
            star_forest(0, 2)


class TestRandomGraphs:
    def test_random_graph_is_seeded(self):
        assert random_graph(8, 0.5, seed=3) == random_graph(8, 0.5, seed=3)
        assert random_graph(6, 1.0, seed=0).num_edges == 15
        assert random_graph(6, 0.0, seed=0).num_edges == 0

    def test_almost_bounded_low_part(self):
        g = random_almost_bounded_graph(20, 2, 3, 0.5, seed=11)
        high = set(g.vertices_with_role("high"))
        assert high == {0, 1, 2}
        for v in range(g.n):
            if v in high:
                continue
            assert sum(1 for u in g.adjacency[v] if u not in high) <= 2


class TestGadgetSpec:
    def test_validate(self):
        assert GadgetSpec(GadgetFamily.HALF_GRAPH, {"t": 3}).validate() == (True, "")
        ok, message = GadgetSpec(GadgetFamily.HALF_GRAPH, {}).validate()
        assert not ok and "missing" in message
        ok, message = GadgetSpec(GadgetFamily.BINOMIAL_TREE, {"k": 3, "z": 1}).validate()
        assert not ok and "unknown" in message

    def test_build(self):
        g = GadgetSpec(GadgetFamily("star-forest"), {"count": 2, "leaves": 3}).build()
        assert g.n == 8
        assert GadgetSpec(GadgetFamily.T5_EDGE_TREE).build().n == 14

    def test_build_rejects_invalid(self):
        with pytest.raises(InvalidInstanceError):
            GadgetSpec(GadgetFamily.ANTI_MATCHING, {"t": -1}).build()

    def test_parse_params(self):
        assert parse_gadget_params("l=2, t=3") == {"l": 2, "t": 3}
        assert parse_gadget_params("") == {}
        with pytest.raises(ValueError):
            parse_gadget_params("k")
        with pytest.raises(ValueError):
            parse_gadget_params("k=x")
