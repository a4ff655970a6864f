"""
ガジェット生成モジュール

二項木・刈り込み二項木・半グラフ（単体/パス/サイクル）・反マッチング・星森を
役割ラベル付きで構築する。帰着とテストが共通で使う。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from config import BINOMIAL_TREE_MAX_K
from coloring.colorings import Verdict, WitnessCertificate, WitnessKind
from coloring.errors import InvalidInstanceError
from coloring.graph_core import Graph, GraphBuilder, VertexSet, is_independent

logger = logging.getLogger(__name__)


class GadgetFamily(str, Enum):
    BINOMIAL_TREE = "binomial-tree"
    PRUNED_BINOMIAL_TREE = "pruned-binomial-tree"
    HALF_GRAPH = "half-graph"
    HALF_GRAPH_PATH = "half-graph-path"
    HALF_GRAPH_CYCLE = "half-graph-cycle"
    ANTI_MATCHING = "anti-matching"
    STAR_FOREST = "star-forest"
    T5_EDGE_TREE = "t5-edge-tree"


# =============================================================================
# 二項木
# =============================================================================


def _binomial_structure(k: int) -> Tuple[List[Optional[int]], List[int]]:
    """
    T_k の (親, 色) を深さ優先の前順で返す

    色 c の頂点は色 c-1, ..., 1 の子を持ち、根の色は k。
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > BINOMIAL_TREE_MAX_K:
        raise ValueError(f"Binomial tree T_{k} has 2^{k - 1} vertices; refusing k > {BINOMIAL_TREE_MAX_K}")
    parents: List[Optional[int]] = []
    colors: List[int] = []
    stack: List[Tuple[Optional[int], int]] = [(None, k)]
    while stack:
        parent, color = stack.pop()
        v = len(colors)
        parents.append(parent)
        colors.append(color)
        # 昇順に積むと色の大きい子から訪れる
        for child_color in range(1, color):
            stack.append((v, child_color))
    return parents, colors


def _role_for_color(color: int, is_root: bool) -> str:
    return "root" if is_root else f"t{color}"


def binomial_tree(k: int) -> Graph:
    """
    二項木 T_k を構築

    T_1 は1頂点。T_k は T_{k-1} を2つ用意し、一方の根を他方の根の子にしたもの。
    頂点は前順で番号付けし、根は 0。役割は "root" と "t{色}"。

    Args:
        k: 位数（1..25）

    Returns:
        2^{k-1} 頂点の木

    Example:
        >>> binomial_tree(3).n
        4
    """
    parents, colors = _binomial_structure(k)
    edges = [(p, v) for v, p in enumerate(parents) if p is not None]
    roles = {v: _role_for_color(c, v == 0) for v, c in enumerate(colors)}
    return Graph.from_edges(len(colors), edges, roles)


def binomial_tree_coloring(k: int) -> WitnessCertificate:
    """
    根が色 k を受ける T_k のGrundy彩色

    色 c (< k) の頂点数は 2^{k-1-c}。
    """
    _, colors = _binomial_structure(k)
    classes = tuple(tuple(v for v, c in enumerate(colors) if c == color) for color in range(1, k + 1))
    return WitnessCertificate(WitnessKind.GRUNDY, classes)


class PrunedTree(NamedTuple):
    """刈り込み二項木とその付帯情報"""

    graph: Graph
    x_members: VertexSet
    eligible_roots: int
    colors: Tuple[int, ...]  # 根が位数 k を受ける彩色（X の頂点は色 i のまま）


def pruned_binomial_tree(k: int, i: int, x_count: int) -> PrunedTree:
    """
    刈り込み二項木 T'_k を構築

    色 i+1 の頂点を親に持つ色 i の頂点（T_i の根）が候補で、その数は 2^{k-i-2}。
    前順で先頭の x_count 個を X とし、それぞれから色 i-1 の子の部分木 T_{i-1} を取り除く。

    Args:
        k: 元の二項木の位数
        i: 刈り込む T_i の位数（2..k-2）
        x_count: X の大きさ

    Returns:
        PrunedTree（X の役割は "x"、頂点は前順で詰め直す）

    Raises:
        ValueError: i や x_count が範囲外の場合
    """
    if not 2 <= i <= k - 2:
        raise ValueError(f"i must satisfy 2 <= i <= k-2 (got k={k}, i={i})")
    parents, colors = _binomial_structure(k)
    eligible = [
        v for v, c in enumerate(colors)
        if c == i and parents[v] is not None and colors[parents[v]] == i + 1
    ]
    if not 0 <= x_count <= len(eligible):
        raise ValueError(f"x_count must be in 0..{len(eligible)} (got {x_count})")
    chosen = set(eligible[:x_count])

    removed = set()
    for v, p in enumerate(parents):
        if p in removed or (p in chosen and colors[v] == i - 1):
            removed.add(v)

    kept = [v for v in range(len(colors)) if v not in removed]
    new_id = {old: new for new, old in enumerate(kept)}
    edges = [(new_id[parents[v]], new_id[v]) for v in kept if parents[v] is not None]
    roles = {
        new_id[v]: "x" if v in chosen else _role_for_color(colors[v], v == 0)
        for v in kept
    }
    graph = Graph.from_edges(len(kept), edges, roles)
    x_members = tuple(sorted(new_id[v] for v in chosen))
    logger.debug(f"pruned_binomial_tree: k={k}, i={i}, |X|={x_count}, eligible={len(eligible)}, n={graph.n}")
    return PrunedTree(graph, x_members, len(eligible), tuple(colors[v] for v in kept))


def t5_edge_tree() -> Graph:
    """
    辺ガジェット用の14頂点木

    T_5 から、色 3 の頂点を親に持つ色 2 の頂点2つ（beta, gamma）の葉を取り除いたもの。
    beta と gamma は木の中で次数 1。
    """
    pruned = pruned_binomial_tree(5, 2, 2)
    roles = dict(pruned.graph.role_labels)
    for v, name in zip(pruned.x_members, ("beta", "gamma")):
        roles[v] = name
    return pruned.graph.with_roles(roles)


def attach_color_providers(g: Graph, members: VertexSet, color: int) -> Graph:
    """
    各 members の頂点に、根が色 color を受けられる二項木 T_color を外付けする

    追加頂点の役割は "provider"、T_color の根は "provider-root"。
    """
    builder = GraphBuilder()
    builder.add_graph(g)
    provider = binomial_tree(color)
    for v in members:
        ids = builder.add_graph(provider, lambda u, role: "provider-root" if u == 0 else "provider")
        builder.add_edge(v, ids[0])
    return builder.build()


# =============================================================================
# 半グラフ
# =============================================================================


def level_role(layer: int, level: int) -> str:
    """層 layer（1始まり）の水準 level（1始まり）の役割ラベル"""
    return f"H{layer}.{level}"


def parse_level_role(role: str) -> Optional[Tuple[int, int]]:
    """level_role の逆変換。該当しなければ None"""
    if not role.startswith("H") or "." not in role:
        return None
    layer, level = role[1:].split(".", 1)
    if not (layer.isdigit() and level.isdigit()):
        return None
    return int(layer), int(level)


def _layered_half_graphs(layers: int, t: int, closed: bool) -> Graph:
    if layers < 2 or t < 1:
        raise ValueError("Half-graph paths need at least 2 layers and t >= 1")
    builder = GraphBuilder()
    ids = [
        builder.add_vertices(level_role(p, i) for i in range(1, t + 1))
        for p in range(1, layers + 1)
    ]
    pairs = list(zip(range(layers - 1), range(1, layers)))
    if closed:
        pairs.append((layers - 1, 0))
    for lower, upper in pairs:
        for i in range(t):
            for h in range(i + 1, t):
                builder.add_edge(ids[lower][i], ids[upper][h])
    return builder.build()


def half_graph(t: int) -> Graph:
    """
    正準半グラフ H_{t,t}

    a_i (ID i-1) と b_j (ID t+j-1) は i < j のとき、かつそのときに限り隣接する。

    Example:
        >>> half_graph(4).num_edges
        6
    """
    return _layered_half_graphs(2, t, closed=False)


def half_graph_path(length: int, t: int) -> Graph:
    """
    長さ length の半グラフのパス

    層 1..length+1 の各 t 頂点。隣接する層の間は (p, i) ~ (p+1, h) ⇔ i < h で、
    全層で同じ水準の向きを使う。

    Args:
        length: パスの長さ（1以上）
        t: 各層の頂点数

    Returns:
        Graph（役割 "H{層}.{水準}"）
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    return _layered_half_graphs(length + 1, t, closed=False)


def half_graph_cycle(length: int, t: int) -> Graph:
    """
    半グラフのサイクル

    half_graph_path に、最終層から層 1 への半グラフ (length+1, i) ~ (1, h) ⇔ i < h を加える。
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    return _layered_half_graphs(length + 1, t, closed=True)


def layers_of(g: Graph) -> Dict[int, List[int]]:
    """役割ラベルから 層 → 水準順の頂点 を復元"""
    layers: Dict[int, List[Tuple[int, int]]] = {}
    for v in range(g.n):
        parsed = parse_level_role(g.role(v))
        if parsed:
            layers.setdefault(parsed[0], []).append((parsed[1], v))
    return {p: [v for _, v in sorted(members)] for p, members in sorted(layers.items())}


def has_cross_2k2(g: Graph, left: VertexSet, right: VertexSet) -> bool:
    """
    left–right 間の辺だけで誘導 2K_2 ができるか

    辺 a1b1, a2b2 があり a1b2, a2b1 がともに非辺なら True。
    """
    cross = [(a, b) for a in left for b in right if g.has_edge(a, b)]
    for (a1, b1), (a2, b2) in combinations(cross, 2):
        if a1 != a2 and b1 != b2 and not g.has_edge(a1, b2) and not g.has_edge(a2, b1):
            return True
    return False


def iter_layer_transversal_sets(g: Graph) -> Iterator[Tuple[int, ...]]:
    """全ての層と交わる独立集合を列挙（全探索、小さいグラフ用）"""
    layers = layers_of(g)
    layer_of = {v: p for p, members in layers.items() for v in members}
    vertices = sorted(layer_of)
    for mask in range(1, 1 << len(vertices)):
        chosen = tuple(v for j, v in enumerate(vertices) if mask >> j & 1)
        if {layer_of[v] for v in chosen} != set(layers):
            continue
        if is_independent(g, chosen):
            yield chosen


def check_cycle_level_structure(g: Graph) -> Verdict:
    """
    半グラフのサイクルで、全層と交わる独立集合が
    各層からちょうど1頂点を共通の水準で取ることを確認
    """
    layers = layers_of(g)
    position = {v: (p, i + 1) for p, members in layers.items() for i, v in enumerate(members)}
    for chosen in iter_layer_transversal_sets(g):
        levels = {position[v][1] for v in chosen}
        if len(chosen) != len(layers) or len(levels) != 1:
            return Verdict(False, f"independent set {list(chosen)} does not take one common level")
    return Verdict(True, "")


# =============================================================================
# 反マッチング・星森
# =============================================================================


def anti_matching(t: int) -> Graph:
    """
    2t 頂点上の完全マッチングの補グラフ

    a_i (ID 2i-2) と b_i (ID 2i-1) が対になり、対以外はすべて隣接する。
    t=2 で C_4、t=3 で正八面体。
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    roles = {}
    for i in range(1, t + 1):
        roles[2 * i - 2] = f"a{i}"
        roles[2 * i - 1] = f"b{i}"
    edges = [(u, v) for u, v in combinations(range(2 * t), 2) if u // 2 != v // 2]
    return Graph.from_edges(2 * t, edges, roles)


def star_forest(count: int, leaves: int) -> Graph:
    """
    K_{1,leaves} を count 個並べた星森

    各星は中心（役割 "center"）の直後に葉（役割 "leaf"）が続く。
    """
    if count < 1 or leaves < 1:
        raise ValueError("count and leaves must be at least 1")
    builder = GraphBuilder()
    for _ in range(count):
        center = builder.add_vertex("center")
        for _ in range(leaves):
            builder.add_edge(center, builder.add_vertex("leaf"))
    return builder.build()


# =============================================================================
# 乱数グラフ
# =============================================================================


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p)（numpy の乱数生成器を使用）"""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("Need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_almost_bounded_graph(n: int, degree_bound: int, high_count: int, p: float, seed: int) -> Graph:
    """
    高次数頂点を high_count 個だけ持つ乱数グラフ

    先頭 high_count 頂点は確率 p で誰とでも結び、残りの頂点間は次数が
    degree_bound を超えない範囲で確率 p の辺を張る。
    高次数頂点の役割は "high"。
    """
    if not 0 <= high_count <= n:
        raise ValueError("high_count must be in 0..n")
    rng = np.random.default_rng(seed)
    builder = GraphBuilder()
    builder.add_vertices("high" if v < high_count else None for v in range(n))
    low_degree = [0] * n
    for u, v in combinations(range(n), 2):
        if rng.random() >= p:
            continue
        if u < high_count or v < high_count:
            builder.add_edge(u, v)
        elif low_degree[u] < degree_bound and low_degree[v] < degree_bound:
            builder.add_edge(u, v)
            low_degree[u] += 1
            low_degree[v] += 1
    return builder.build()


# =============================================================================
# ガジェット指定
# =============================================================================

_FAMILY_PARAMETERS = {
    GadgetFamily.BINOMIAL_TREE: ("k",),
    GadgetFamily.PRUNED_BINOMIAL_TREE: ("k", "i", "x"),
    GadgetFamily.HALF_GRAPH: ("t",),
    GadgetFamily.HALF_GRAPH_PATH: ("l", "t"),
    GadgetFamily.HALF_GRAPH_CYCLE: ("l", "t"),
    GadgetFamily.ANTI_MATCHING: ("t",),
    GadgetFamily.STAR_FOREST: ("count", "leaves"),
    GadgetFamily.T5_EDGE_TREE: (),
}


@dataclass(frozen=True)
class GadgetSpec:
    """ガジェット族とその整数パラメータ"""

    family: GadgetFamily
    parameters: Dict[str, int] = field(default_factory=dict)

    def validate(self) -> Tuple[bool, str]:
        """
        パラメータをバリデーション

        Returns:
            (is_valid, error_message) のタプル
        """
        family = GadgetFamily(self.family)
        expected = set(_FAMILY_PARAMETERS[family])
        given = set(self.parameters)
        if given - expected:
            return (False, f"unknown parameters for {family.value}: {sorted(given - expected)}")
        if expected - given:
            return (False, f"missing parameters for {family.value}: {sorted(expected - given)}")
        for key, value in self.parameters.items():
            if not isinstance(value, int) or value < 0:
                return (False, f"parameter {key} must be a non-negative integer")
        return (True, "")

    def build(self) -> Graph:
        """ガジェットを構築"""
        is_valid, message = self.validate()
        if not is_valid:
            raise InvalidInstanceError(message)
        family = GadgetFamily(self.family)
        p = self.parameters
        if family == GadgetFamily.BINOMIAL_TREE:
            return binomial_tree(p["k"])
        if family == GadgetFamily.PRUNED_BINOMIAL_TREE:
            return pruned_binomial_tree(p["k"], p["i"], p["x"]).graph
        if family == GadgetFamily.HALF_GRAPH:
            return half_graph(p["t"])
        if family == GadgetFamily.HALF_GRAPH_PATH:
            return half_graph_path(p["l"], p["t"])
        if family == GadgetFamily.HALF_GRAPH_CYCLE:
            return half_graph_cycle(p["l"], p["t"])
        if family == GadgetFamily.ANTI_MATCHING:
            return anti_matching(p["t"])
        if family == GadgetFamily.STAR_FOREST:
            return star_forest(p["count"], p["leaves"])
        return t5_edge_tree()


def parse_gadget_params(text: str) -> Dict[str, int]:
    """
    "k=4,t=3" 形式のパラメータ文字列をパース

    Example:
        >>> parse_gadget_params("l=2,t=3")
        {'l': 2, 't': 3}
    """
    params: Dict[str, int] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise ValueError(f"Parameter must look like key=value: {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if not value.lstrip("-").isdigit():
            raise ValueError(f"Parameter {key} must be an integer: {value!r}")
        params[key] = int(value)
    return params
