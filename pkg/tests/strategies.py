"""テスト用の hypothesis 戦略と networkx 変換"""

from itertools import combinations

import networkx as nx
from hypothesis import strategies as st
from hypothesis.strategies import composite

from coloring.graph_core import Graph


@composite
def graphs(draw, min_n: int = 1, max_n: int = 7):
    """辺の有無を1本ずつ引いた小さいグラフ"""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, bits) if keep])


@composite
def graphs_with_vertex(draw, min_n: int = 1, max_n: int = 7):
    g = draw(graphs(min_n, max_n))
    v = draw(st.integers(min_value=0, max_value=g.n - 1))
    return g, v


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


P4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
C5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
