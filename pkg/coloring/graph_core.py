"""
グラフ基盤モジュール

不変なグラフ表現と、誘導部分グラフ・連結成分・偽双子・完全二部部分グラフ・
ラベル付き同型・Ramsey抽出といった全ソルバー共通のプリミティブを提供する。
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from config import BICLIQUE_BUDGET, LABELED_ISO_CAP
from coloring.errors import (
    CapExceededError,
    ExtractionFailure,
    InvalidInstanceError,
    PreconditionError,
)
from coloring.id_utils import validate_vertex_ids

logger = logging.getLogger(__name__)

# 頂点IDの順序付き集合（昇順・重複なし）
VertexSet = Tuple[int, ...]


# =============================================================================
# ビットマスク補助
# =============================================================================


def mask_of(vertices: Iterable[int]) -> int:
    """頂点集合をビットマスクに変換"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_members(mask: int) -> List[int]:
    """ビットマスクの要素を昇順で返す"""
    members = []
    while mask:
        low = mask & -mask
        members.append(low.bit_length() - 1)
        mask ^= low
    return members


# =============================================================================
# グラフ
# =============================================================================


@dataclass(frozen=True)
class Graph:
    """
    単純無向グラフ

    頂点IDは 0..n-1 の連続整数。隣接は頂点ごとの frozenset で保持し、
    部分集合メモ化用にビットマスク表現も遅延生成する。
    """

    n: int
    adjacency: Tuple[FrozenSet[int], ...]
    role_labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstanceError("Vertex count must be non-negative")
        if len(self.adjacency) != self.n:
            raise InvalidInstanceError(
                f"Adjacency has {len(self.adjacency)} entries for n={self.n}"
            )
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise InvalidInstanceError(f"Self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise InvalidInstanceError(f"Neighbor {u} of {v} out of range")
                if v not in self.adjacency[u]:
                    raise InvalidInstanceError(f"Asymmetric adjacency between {v} and {u}")
        for v in self.role_labels:
            if not 0 <= v < self.n:
                raise InvalidInstanceError(f"Role label on unknown vertex {v}")
        object.__setattr__(self, "role_labels", MappingProxyType(dict(self.role_labels)))

    # ----- 構築 -----

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        role_labels: Optional[Mapping[int, str]] = None,
    ) -> "Graph":
        """
        辺リストからグラフを構築

        Args:
            n: 頂点数
            edges: (u, v) の列（0始まり、重複辺は無視）
            role_labels: 頂点 → 役割ラベル

        Returns:
            Graph
        """
        adj: List[Set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInstanceError(f"Edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidInstanceError(f"Self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(s) for s in adj), dict(role_labels or {}))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        """辺のないグラフ"""
        return cls(n, tuple(frozenset() for _ in range(n)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        """完全グラフ K_n"""
        return cls(n, tuple(frozenset(u for u in range(n) if u != v) for v in range(n)))

    # ----- 参照 -----

    def neighbors(self, v: int) -> VertexSet:
        """隣接頂点を昇順で返す"""
        return tuple(sorted(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> List[Tuple[int, int]]:
        """辺を (u, v), u < v の昇順リストで返す"""
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    @property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        """頂点ごとの隣接ビットマスク"""
        return tuple(mask_of(nbrs) for nbrs in self.adjacency)

    def role(self, v: int) -> str:
        return self.role_labels.get(v, "")

    def vertices_with_role(self, predicate: Union[str, Callable[[str], bool]]) -> VertexSet:
        """
        役割ラベルで頂点を検索

        Args:
            predicate: 完全一致する文字列、またはラベルを受け取る判定関数

        Returns:
            該当頂点（昇順）
        """
        if isinstance(predicate, str):
            wanted = predicate
            predicate = lambda label: label == wanted  # noqa: E731
        return tuple(v for v in range(self.n) if predicate(self.role(v)))

    def neighborhood_in(self, v: int, subset: Iterable[int]) -> VertexSet:
        """N_Y(v): subset 内の隣接頂点"""
        nbrs = self.adjacency[v]
        return tuple(sorted(u for u in subset if u in nbrs))

    # ----- 変換 -----

    def complement(self) -> "Graph":
        """補グラフ（役割ラベルは引き継ぐ）"""
        adj = tuple(
            frozenset(u for u in range(self.n) if u != v and u not in self.adjacency[v])
            for v in range(self.n)
        )
        return Graph(self.n, adj, dict(self.role_labels))

    def with_roles(self, role_labels: Mapping[int, str]) -> "Graph":
        """役割ラベルを差し替えたコピー"""
        return Graph(self.n, self.adjacency, dict(role_labels))

    def to_networkx(self) -> nx.Graph:
        """networkx.Graph に変換（役割は node 属性 "role"）"""
        g = nx.Graph()
        for v in range(self.n):
            g.add_node(v, role=self.role(v))
        g.add_edges_from(self.edges())
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """
        networkx.Graph から変換

        ノードはソート順に 0..n-1 へ振り直す。"role" 属性があれば役割ラベルにする。
        """
        nodes = sorted(g.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        roles = {
            index[node]: str(data["role"])
            for node, data in g.nodes(data=True)
            if data.get("role")
        }
        edges = [(index[u], index[v]) for u, v in g.edges() if u != v]
        return cls.from_edges(len(nodes), edges, roles)

    def to_dict(self) -> Dict:
        """辞書に変換（内部0始まりID）"""
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges()],
            "roles": {v: label for v, label in sorted(self.role_labels.items())},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Graph":
        """辞書から作成（内部0始まりID）"""
        roles = {int(k): v for k, v in data.get("roles", {}).items()}
        return cls.from_edges(data["n"], [tuple(e) for e in data.get("edges", [])], roles)


class GraphBuilder:
    """ガジェット構築用の可変ビルダー"""

    def __init__(self):
        self._adj: List[Set[int]] = []
        self._roles: Dict[int, str] = {}

    @property
    def n(self) -> int:
        return len(self._adj)

    def add_vertex(self, role: Optional[str] = None) -> int:
        """頂点を追加してIDを返す"""
        v = len(self._adj)
        self._adj.append(set())
        if role:
            self._roles[v] = role
        return v

    def add_vertices(self, roles: Iterable[Optional[str]]) -> List[int]:
        """役割ラベルの列に従って頂点を追加"""
        return [self.add_vertex(role) for role in roles]

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"Self-loop at vertex {u}")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def add_edges(self, pairs: Iterable[Tuple[int, int]]) -> None:
        for u, v in pairs:
            self.add_edge(u, v)

    def join(self, left: Iterable[int], right: Iterable[int]) -> None:
        """left と right の間をすべて結ぶ（完全二部結合）"""
        right = list(right)
        for u in left:
            for v in right:
                if u != v:
                    self.add_edge(u, v)

    def make_clique(self, vertices: Sequence[int]) -> None:
        for i, u in enumerate(vertices):
            for v in vertices[i + 1:]:
                self.add_edge(u, v)

    def add_graph(self, g: Graph, role_fn: Optional[Callable[[int, str], str]] = None) -> List[int]:
        """
        グラフ g の複製を追加

        Args:
            g: 追加するグラフ
            role_fn: (元ID, 元ラベル) → 新ラベル

        Returns:
            元ID順の新ID
        """
        new_ids = [
            self.add_vertex(role_fn(v, g.role(v)) if role_fn else (g.role(v) or None))
            for v in range(g.n)
        ]
        for u, v in g.edges():
            self.add_edge(new_ids[u], new_ids[v])
        return new_ids

    def set_role(self, v: int, role: str) -> None:
        self._roles[v] = role

    def role(self, v: int) -> str:
        return self._roles.get(v, "")

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def build(self) -> Graph:
        return Graph(len(self._adj), tuple(frozenset(s) for s in self._adj), dict(self._roles))


# =============================================================================
# 誘導部分グラフ・成分
# =============================================================================


def as_vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """
    頂点集合を検証して昇順タプルにする

    Raises:
        ValueError: 範囲外・重複
    """
    members = list(members)
    ok, message = validate_vertex_ids(members, g.n)
    if not ok:
        raise ValueError(message)
    return tuple(sorted(members))


def induced_subgraph(g: Graph, s: Iterable[int]) -> Tuple[Graph, Dict[int, int]]:
    """
    誘導部分グラフを作成

    Args:
        g: 元グラフ
        s: 頂点集合

    Returns:
        (誘導部分グラフ, 旧ID → 新ID の対応表)。新IDは旧IDの昇順に振る。

    Example:
        >>> sub, mapping = induced_subgraph(Graph.from_edges(3, [(0, 1), (1, 2)]), [1, 2])
        >>> sub.edges(), mapping
        ([(0, 1)], {1: 0, 2: 1})
    """
    members = as_vertex_set(g, s)
    mapping = {old: new for new, old in enumerate(members)}
    adj = tuple(
        frozenset(mapping[u] for u in g.adjacency[old] if u in mapping) for old in members
    )
    roles = {mapping[v]: label for v, label in g.role_labels.items() if v in mapping}
    return Graph(len(members), adj, roles), mapping


def connected_components(g: Graph, subset: Optional[Iterable[int]] = None) -> List[VertexSet]:
    """
    連結成分を最小頂点の昇順で返す

    Args:
        g: グラフ
        subset: 指定時は g[subset] の成分

    Returns:
        成分（各成分は昇順タプル）のリスト
    """
    allowed = mask_of(range(g.n)) if subset is None else mask_of(subset)
    masks = g.masks
    components = []
    remaining = allowed
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            fresh = masks[low.bit_length() - 1] & allowed & ~comp
            comp |= fresh
            frontier |= fresh
        remaining &= ~comp
        components.append(tuple(mask_members(comp)))
    return components


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def is_independent(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(not g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


# =============================================================================
# 偽双子
# =============================================================================


@dataclass(frozen=True)
class TwinReduction:
    """偽双子クラスと代表元だけを残した縮約グラフ"""

    classes: Tuple[VertexSet, ...]
    reduced: Graph
    representative_of: Mapping[int, int]  # 元頂点 → 縮約グラフの頂点


def false_twin_classes(g: Graph) -> TwinReduction:
    """
    開近傍が等しい頂点のクラス分割

    Args:
        g: グラフ

    Returns:
        TwinReduction（クラスは最小頂点の昇順、代表元は各クラスの最小頂点）
    """
    by_neighborhood: Dict[FrozenSet[int], List[int]] = {}
    for v in range(g.n):
        by_neighborhood.setdefault(g.adjacency[v], []).append(v)
    classes = tuple(sorted((tuple(c) for c in by_neighborhood.values()), key=lambda c: c[0]))
    reps = [c[0] for c in classes]
    reduced, mapping = induced_subgraph(g, reps)
    representative_of = {v: mapping[c[0]] for c in classes for v in c}
    return TwinReduction(classes, reduced, representative_of)


def duplicate_vertices(g: Graph, multiplicities: Mapping[int, int]) -> Graph:
    """
    頂点を偽双子として複製

    Args:
        g: グラフ
        multiplicities: 頂点 → 追加する複製の数

    Returns:
        複製を末尾に追加したグラフ（複製の役割ラベルは元ラベル + "'"）
    """
    builder = GraphBuilder()
    builder.add_graph(g)
    for v, count in sorted(multiplicities.items()):
        if not 0 <= v < g.n:
            raise ValueError(f"Vertex {v} out of range")
        if count < 0:
            raise ValueError(f"Multiplicity of {v} must be non-negative")
        for _ in range(count):
            copy = builder.add_vertex(f"{g.role(v)}'" if g.role(v) else None)
            for u in g.adjacency[v]:
                builder.add_edge(copy, u)
    return builder.build()


# =============================================================================
# 完全二部部分グラフ
# =============================================================================


class BicliqueResult(NamedTuple):
    """has_biclique の結果。真偽値は found"""

    found: bool
    sides: Optional[Tuple[VertexSet, VertexSet]] = None

    def __bool__(self) -> bool:
        return self.found


def find_biclique(
    g: Graph,
    s: int,
    t: int,
    left: Optional[Iterable[int]] = None,
    right: Optional[Iterable[int]] = None,
    budget: Optional[int] = None,
) -> BicliqueResult:
    """
    K_{s,t}（誘導でなくてよい）を探索

    小さい側の部分集合を列挙し、共通近傍の大きさを調べる。

    Args:
        g: グラフ
        s, t: 両側の大きさ
        left: 小さい側の候補（Noneなら全頂点）
        right: 大きい側の候補（Noneなら全頂点）
        budget: 列挙する部分集合数の上限

    Returns:
        BicliqueResult（見つかれば (小さい側, 大きい側)）

    Raises:
        CapExceededError: 列挙数が予算を超える場合
    """
    if s < 1 or t < 1:
        raise ValueError("Biclique sides must be positive")
    budget = BICLIQUE_BUDGET if budget is None else budget
    small, large = min(s, t), max(s, t)
    right_mask = mask_of(range(g.n)) if right is None else mask_of(right)
    pool = sorted(range(g.n) if left is None else set(left))
    candidates = [v for v in pool if (g.masks[v] & right_mask).bit_count() >= large]
    if comb(len(candidates), small) > budget:
        raise CapExceededError(
            f"Biclique enumeration budget exceeded: C({len(candidates)}, {small}) > {budget}",
            cap_name="biclique_budget",
            limit=budget,
        )

    chosen: List[int] = []

    def extend(start: int, common: int) -> Optional[Tuple[VertexSet, VertexSet]]:
        if len(chosen) == small:
            other = mask_members(common & ~mask_of(chosen))[:large]
            return tuple(chosen), tuple(other)
        for idx in range(start, len(candidates)):
            v = candidates[idx]
            narrowed = common & g.masks[v]
            if narrowed.bit_count() < large:
                continue
            chosen.append(v)
            found = extend(idx + 1, narrowed)
            chosen.pop()
            if found:
                return found
        return None

    sides = extend(0, right_mask)
    if sides is None:
        return BicliqueResult(False)
    logger.debug(f"Found K_{{{s},{t}}}: {sides}")
    return BicliqueResult(True, sides)


def has_biclique(g: Graph, t: int, budget: Optional[int] = None) -> BicliqueResult:
    """
    K_{t,t} を部分グラフとして含むか

    Example:
        >>> bool(has_biclique(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), 2))
        True
    """
    return find_biclique(g, t, t, budget=budget)


# =============================================================================
# ラベル付き成分の同型
# =============================================================================


@dataclass(frozen=True)
class LabeledComponent:
    """
    外部アンカー集合 I へのラベル付き連結成分

    labels[v] は成分内頂点 v の N(v) ∩ I（元グラフのID）。
    vertices は元グラフでの頂点ID（成分内IDの順）。
    """

    graph: Graph
    labels: Tuple[FrozenSet[int], ...]
    vertices: VertexSet = ()

    def __post_init__(self):
        if len(self.labels) != self.graph.n:
            raise ValueError("Every component vertex needs a label")
        if self.vertices and len(self.vertices) != self.graph.n:
            raise ValueError("Vertex mapping must cover the component")
        if not is_connected(self.graph):
            raise ValueError("Labeled component must be connected")

    @classmethod
    def from_subset(cls, g: Graph, vertices: Iterable[int], anchor: Iterable[int]) -> "LabeledComponent":
        """g[vertices] を I = anchor でラベル付けした成分"""
        sub, mapping = induced_subgraph(g, vertices)
        anchor_set = frozenset(anchor)
        originals = tuple(sorted(mapping))
        labels = tuple(g.adjacency[v] & anchor_set for v in originals)
        return cls(sub, labels, originals)

    @property
    def signature(self) -> Tuple:
        """同型で不変な要約（前段フィルタ用）"""
        g = self.graph
        return (
            g.n,
            g.num_edges,
            tuple(sorted(
                (g.degree(v), tuple(sorted(self.labels[v])), tuple(sorted(g.degree(u) for u in g.adjacency[v])))
                for v in range(g.n)
            )),
        )


def find_labeled_isomorphism(
    c1: LabeledComponent, c2: LabeledComponent, cap: Optional[int] = None
) -> Optional[Dict[int, int]]:
    """
    ラベルを保つ同型写像を探索

    Args:
        c1, c2: ラベル付き成分
        cap: 頂点数の上限

    Returns:
        c1 の成分内ID → c2 の成分内ID、存在しなければ None

    Raises:
        CapExceededError: 頂点数が上限を超える場合
    """
    cap = LABELED_ISO_CAP if cap is None else cap
    if max(c1.graph.n, c2.graph.n) > cap:
        raise CapExceededError(
            f"Labeled component exceeds size cap {cap}", cap_name="labeled_iso", limit=cap
        )
    if c1.signature != c2.signature:
        return None
    g1, g2 = c1.graph, c2.graph
    if g1.n == 0:
        return {}

    # BFS順（次数の大きい頂点から）で割り当てると隣接制約が早く効く
    start = max(range(g1.n), key=lambda v: (g1.degree(v), -v))
    order = [start]
    seen = {start}
    for v in order:
        for u in g1.neighbors(v):
            if u not in seen:
                seen.add(u)
                order.append(u)

    mapping: Dict[int, int] = {}
    used: Set[int] = set()

    def feasible(v: int, w: int) -> bool:
        if g1.degree(v) != g2.degree(w) or c1.labels[v] != c2.labels[w]:
            return False
        return all(g1.has_edge(v, u) == g2.has_edge(w, mu) for u, mu in mapping.items())

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        for w in range(g2.n):
            if w in used or not feasible(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(pos + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if backtrack(0) else None


def labeled_isomorphic(c1: LabeledComponent, c2: LabeledComponent, cap: Optional[int] = None) -> bool:
    """ラベルを保つ同型が存在するか"""
    return find_labeled_isomorphism(c1, c2, cap) is not None


# =============================================================================
# Ramsey抽出
# =============================================================================


@dataclass(frozen=True)
class RamseyOutcome:
    """クリークまたは独立集合"""

    kind: str  # "clique" | "independent"
    members: VertexSet

    @property
    def is_clique(self) -> bool:
        return self.kind == "clique"


def ramsey_bound(clique_size: int, independent_size: int) -> int:
    """C(a+b-2, a-1): 貪欲ピボット手続きが成功を保証する頂点数"""
    if clique_size <= 0 or independent_size <= 0:
        return 0
    return comb(clique_size + independent_size - 2, clique_size - 1)


def ramsey_split(
    g: Graph,
    clique_size: int,
    independent_size: int,
    vertices: Optional[Iterable[int]] = None,
    strict: bool = True,
) -> RamseyOutcome:
    """
    大きさ clique_size のクリークか大きさ independent_size の独立集合を抽出

    最小IDの頂点をピボットにし、保証を保つ側（隣接側 / 非隣接側）へ進む。

    Args:
        g: グラフ
        clique_size: 目標クリークサイズ a
        independent_size: 目標独立集合サイズ b
        vertices: 探索範囲（Noneなら全頂点）
        strict: Trueなら保証条件を満たさない入力を拒否

    Returns:
        RamseyOutcome（構造検証済み）

    Raises:
        PreconditionError: strict で頂点数が保証に足りない場合
        ExtractionFailure: ベストエフォート実行が失敗した場合
    """
    if clique_size < 1 or independent_size < 1:
        raise ValueError("Target sizes must be positive")
    pool = sorted(range(g.n) if vertices is None else set(vertices))
    needed = ramsey_bound(clique_size, independent_size)
    if strict and len(pool) < needed:
        raise PreconditionError(
            f"graph too small for guarantee: {len(pool)} < {needed} vertices"
        )

    clique: List[int] = []
    independent: List[int] = []
    while True:
        a = clique_size - len(clique)
        b = independent_size - len(independent)
        if a <= 0:
            outcome = RamseyOutcome("clique", tuple(sorted(clique)))
            break
        if b <= 0:
            outcome = RamseyOutcome("independent", tuple(sorted(independent)))
            break
        if not pool:
            raise ExtractionFailure(
                f"Ramsey procedure ran out of vertices (clique {len(clique)}/{clique_size}, "
                f"independent {len(independent)}/{independent_size})",
                step="ramsey",
            )
        pivot, rest = pool[0], pool[1:]
        if a == 1:
            clique.append(pivot)
            continue
        if b == 1:
            independent.append(pivot)
            continue
        adjacent = [u for u in rest if g.has_edge(pivot, u)]
        non_adjacent = [u for u in rest if not g.has_edge(pivot, u)]
        need_adj = ramsey_bound(a - 1, b)
        need_non = ramsey_bound(a, b - 1)
        if len(adjacent) >= need_adj:
            go_adjacent = True
        elif len(non_adjacent) >= need_non:
            go_adjacent = False
        else:
            # 保証が崩れた後は目標に近い側へ
            go_adjacent = len(adjacent) * need_non >= len(non_adjacent) * need_adj
        if go_adjacent:
            clique.append(pivot)
            pool = adjacent
        else:
            independent.append(pivot)
            pool = non_adjacent

    valid = is_clique(g, outcome.members) if outcome.is_clique else is_independent(g, outcome.members)
    if not valid:
        raise ExtractionFailure("Ramsey output failed structural verification", step="ramsey")
    return outcome


def ramsey_clique_or_independent(
    g: Graph, s: int, vertices: Optional[Iterable[int]] = None, strict: bool = True
) -> RamseyOutcome:
    """
    大きさ s のクリークか独立集合を抽出

    保証条件は n ≥ 2^{2s-2}（C(2s-2, s-1) 以上）。

    Args:
        g: グラフ
        s: 目標サイズ
        vertices: 探索範囲
        strict: Trueなら n < 2^{2s-2} を拒否

    Returns:
        RamseyOutcome
    """
    if s < 1:
        raise ValueError("Target size must be positive")
    pool_size = g.n if vertices is None else len(set(vertices))
    if strict and pool_size < 2 ** (2 * s - 2):
        raise PreconditionError(
            f"graph too small for guarantee: {pool_size} < 2^{2 * s - 2}"
        )
    return ramsey_split(g, s, s, vertices, strict=False)


def iter_subsets_by_size(items: Sequence[int], max_size: int) -> Iterator[Tuple[int, ...]]:
    """大きさの昇順・辞書順で部分集合を列挙"""
    for size in range(0, min(max_size, len(items)) + 1):
        yield from combinations(items, size)
