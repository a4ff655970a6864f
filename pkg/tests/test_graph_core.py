"""graph_core のテスト（networkx をオラクルに使う）"""

from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coloring.errors import CapExceededError, InvalidInstanceError, PreconditionError
from coloring.graph_core import (
    Graph,
    GraphBuilder,
    LabeledComponent,
    connected_components,
    duplicate_vertices,
    false_twin_classes,
    find_biclique,
    find_labeled_isomorphism,
    has_biclique,
    induced_subgraph,
    is_clique,
    is_independent,
    iter_subsets_by_size,
    labeled_isomorphic,
    mask_members,
    mask_of,
    ramsey_bound,
    ramsey_clique_or_independent,
    ramsey_split,
)
from tests.strategies import C4, P4, graphs, to_nx


class TestGraph:
    def test_from_edges_is_symmetric_and_sorted(self):
        g = Graph.from_edges(3, [(2, 0), (1, 2), (0, 2)])
        assert g.edges() == [(0, 2), (1, 2)]
        assert g.has_edge(2, 0) and g.has_edge(0, 2)
        assert g.degree(2) == 2
        assert g.max_degree == 2

    def test_rejects_self_loop_and_out_of_range(self):
        with pytest.raises(InvalidInstanceError):
            Graph.from_edges(2, [(1, 1)])
        with pytest.raises(InvalidInstanceError):
            Graph.from_edges(2, [(0, 2)])

    def test_rejects_asymmetric_adjacency(self):
        with pytest.raises(InvalidInstanceError):
            Graph(2, (frozenset({1}), frozenset()))

    def test_roles(self):
        g = Graph.from_edges(3, [(0, 1)], {0: "root", 2: "leaf"})
        assert g.role(0) == "root"
        assert g.role(1) == ""
        assert g.vertices_with_role("leaf") == (2,)
        assert g.vertices_with_role(lambda r: r != "") == (0, 2)

    def test_masks(self):
        assert P4.masks == (0b0010, 0b0101, 0b1010, 0b0100)
        assert mask_members(mask_of([3, 0, 5])) == [0, 3, 5]

    def test_complete_and_empty(self):
        assert Graph.complete(4).num_edges == 6
        assert Graph.empty(4).num_edges == 0

    @given(graphs())
    def test_complement_matches_networkx(self, g):
        assert sorted(g.complement().edges()) == sorted(tuple(sorted(e)) for e in nx.complement(to_nx(g)).edges())

    @given(graphs())
    def test_networkx_conversion_keeps_edges(self, g):
        assert Graph.from_networkx(g.to_networkx()).edges() == g.edges()


class TestGraphBuilder:
    def test_add_graph_and_join(self):
        builder = GraphBuilder()
        left = builder.add_graph(P4)
        hub = builder.add_vertex("hub")
        builder.join([hub], left)
        g = builder.build()
        assert g.n == 5
        assert g.degree(hub) == 4
        assert g.role(hub) == "hub"

    def test_make_clique(self):
        builder = GraphBuilder()
        vs = builder.add_vertices([None] * 4)
        builder.make_clique(vs)
        assert builder.build().num_edges == 6


class TestSubgraphsAndComponents:
    @settings(max_examples=25, deadline=None)
    @given(graphs(max_n=6))
    def test_induced_subgraph_composes(self, g):
        for outer in iter_subsets_by_size(range(g.n), g.n):
            sub, mapping = induced_subgraph(g, outer)
            back = {new: old for old, new in mapping.items()}
            for inner in iter_subsets_by_size(range(sub.n), sub.n):
                nested, _ = induced_subgraph(sub, inner)
                direct, _ = induced_subgraph(g, sorted(back[v] for v in inner))
                assert nested.edges() == direct.edges()

    def test_induced_subgraph_mapping(self):
        sub, mapping = induced_subgraph(P4, [1, 2, 3])
        assert mapping == {1: 0, 2: 1, 3: 2}
        assert sub.edges() == [(0, 1), (1, 2)]

    def test_induced_subgraph_rejects_duplicates(self):
        with pytest.raises(ValueError):
            induced_subgraph(P4, [1, 1])

    @given(graphs(max_n=9))
    def test_components_match_networkx(self, g):
        expected = sorted(tuple(sorted(c)) for c in nx.connected_components(to_nx(g)))
        assert connected_components(g) == expected

    @given(graphs(min_n=2, max_n=8), st.data())
    def test_components_of_subset(self, g, data):
        subset = data.draw(st.lists(st.integers(0, g.n - 1), unique=True))
        h = to_nx(g).subgraph(subset)
        expected = sorted(tuple(sorted(c)) for c in nx.connected_components(h))
        assert connected_components(g, subset) == expected

    def test_independent_and_clique(self):
        assert is_independent(P4, [0, 2])
        assert not is_independent(P4, [0, 1])
        assert is_clique(Graph.complete(3), [0, 1, 2])
        assert is_clique(P4, [2])


class TestTwins:
    def test_false_twins_of_c4(self):
        reduction = false_twin_classes(C4)
        assert reduction.classes == ((0, 2), (1, 3))
        assert reduction.reduced.edges() == [(0, 1)]
        assert reduction.representative_of == {0: 0, 2: 0, 1: 1, 3: 1}

    @given(graphs(max_n=7))
    def test_reduced_graph_has_no_twins(self, g):
        reduced = false_twin_classes(g).reduced
        assert len(false_twin_classes(reduced).classes) == reduced.n

    @given(graphs(max_n=6), st.data())
    def test_duplicate_copies_neighborhood(self, g, data):
        v = data.draw(st.integers(0, g.n - 1))
        dup = duplicate_vertices(g, {v: 2})
        assert dup.n == g.n + 2
        for copy in (g.n, g.n + 1):
            assert dup.adjacency[copy] == g.adjacency[v]
        assert any(v in c and g.n in c for c in false_twin_classes(dup).classes)

    def test_duplicate_rejects_bad_vertex(self):
        with pytest.raises(ValueError):
            duplicate_vertices(P4, {7: 1})


class TestBiclique:
    def test_c4_contains_k22(self):
        found = has_biclique(C4, 2)
        assert found
        left, right = found.sides
        assert all(C4.has_edge(u, v) for u in left for v in right)

    def test_p4_has_no_k22(self):
        assert not has_biclique(P4, 2)

    @given(graphs(max_n=8))
    def test_k22_matches_brute_force(self, g):
        expected = any(len(g.adjacency[u] & g.adjacency[v]) >= 2 for u, v in combinations(range(g.n), 2))
        assert bool(has_biclique(g, 2)) == expected

    @settings(max_examples=60, deadline=None)
    @given(graphs(min_n=6, max_n=10))
    def test_k33_matches_brute_force(self, g):
        expected = any(
            len(g.adjacency[a] & g.adjacency[b] & g.adjacency[c]) >= 3 for a, b, c in combinations(range(g.n), 3)
        )
        found = has_biclique(g, 3)
        assert bool(found) == expected
        if found:
            left, right = found.sides
            assert len(left) == 3 and len(right) == 3
            assert all(g.has_edge(u, v) for u in left for v in right)

    def test_budget(self):
        with pytest.raises(CapExceededError):
            find_biclique(Graph.complete(8), 2, 2, budget=3)

    def test_restricted_sides(self):
        g = Graph.complete(5)
        found = find_biclique(g, 1, 3, left=[0], right=[2, 3, 4])
        assert found.sides == ((0,), (2, 3, 4))


class TestLabeledIsomorphism:
    def _graph(self):
        # アンカー 0 に 1, 3 がつながり、1-2 と 3-4 が辺、5-6 は 0 から離れた辺
        return Graph.from_edges(7, [(0, 1), (0, 3), (1, 2), (3, 4), (5, 6)])

    def test_isomorphic_components(self):
        g = self._graph()
        c1 = LabeledComponent.from_subset(g, [1, 2], [0])
        c2 = LabeledComponent.from_subset(g, [3, 4], [0])
        mapping = find_labeled_isomorphism(c1, c2)
        assert mapping == {0: 0, 1: 1}

    def test_labels_block_isomorphism(self):
        g = self._graph()
        c1 = LabeledComponent.from_subset(g, [1, 2], [0])
        c3 = LabeledComponent.from_subset(g, [5, 6], [0])
        assert find_labeled_isomorphism(c1, c3) is None
        assert not labeled_isomorphic(c1, c3)
        assert labeled_isomorphic(c1, LabeledComponent.from_subset(g, [3, 4], [0]))

    def test_component_must_be_connected(self):
        with pytest.raises(ValueError):
            LabeledComponent.from_subset(self._graph(), [1, 4], [0])

    def test_cap(self):
        g = Graph.complete(5)
        c = LabeledComponent.from_subset(g, range(5), [])
        with pytest.raises(CapExceededError):
            find_labeled_isomorphism(c, c, cap=4)

    @given(graphs(min_n=1, max_n=6), st.randoms(use_true_random=False))
    def test_permuted_copy_is_found(self, g, rnd):
        comps = connected_components(g)
        comp = comps[0]
        perm = list(range(g.n))
        rnd.shuffle(perm)
        h = Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
        c1 = LabeledComponent.from_subset(g, comp, [])
        c2 = LabeledComponent.from_subset(h, [perm[v] for v in comp], [])
        mapping = find_labeled_isomorphism(c1, c2)
        assert mapping is not None
        assert nx.is_isomorphic(c1.graph.to_networkx(), c2.graph.to_networkx())
        for u, v in c1.graph.edges():
            assert c2.graph.has_edge(mapping[u], mapping[v])


class TestRamsey:
    def test_bound(self):
        assert ramsey_bound(3, 3) == 6
        assert ramsey_bound(2, 5) == 5
        assert ramsey_bound(0, 3) == 0

    def test_clique_in_complete_graph(self):
        outcome = ramsey_split(Graph.complete(10), 3, 3)
        assert outcome.is_clique and len(outcome.members) == 3

    def test_independent_in_empty_graph(self):
        outcome = ramsey_clique_or_independent(Graph.empty(16), 3)
        assert not outcome.is_clique and len(outcome.members) == 3

    def test_strict_rejects_small_input(self):
        with pytest.raises(PreconditionError):
            ramsey_split(Graph.empty(4), 3, 3)

    @settings(max_examples=60)
    @given(graphs(min_n=6, max_n=9), st.integers(2, 3), st.integers(2, 3))
    def test_guarantee(self, g, a, b):
        if g.n < ramsey_bound(a, b):
            return
        outcome = ramsey_split(g, a, b)
        if outcome.is_clique:
            assert len(outcome.members) == a and is_clique(g, outcome.members)
        else:
            assert len(outcome.members) == b and is_independent(g, outcome.members)


def test_iter_subsets_by_size():
    subsets = list(iter_subsets_by_size([1, 2, 3], 2))
    assert subsets == [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
