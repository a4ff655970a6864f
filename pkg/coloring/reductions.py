"""
帰着モジュール

3つの帰着の構築器、元問題インスタンスのバリデーション、
元問題の解から証明書への変換を提供する。

- 多色独立集合 → 根付きGrundy数
- 多色部分グラフ同型（3正則パターン） → Grundy数
- トーラス型 Grid Tiling → b彩色コア
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config import (
    BUDGET_Q_MAX,
    GRIDTILING_D_SIZE,
    GRIDTILING_Q_FACTOR,
    GRIDTILING_SATURATION_SIZE,
    MCSI_Q_OFFSET,
    MCSI_TOP_COLOR,
    TOP_TREE_SIZE_GUARD,
)
from coloring.colorings import Verdict, WitnessCertificate, WitnessKind, verify_b_coloring, verify_grundy
from coloring.errors import CapExceededError, InvalidInstanceError, InvalidSolutionError
from coloring.exact import rooted_grundy
from coloring.generators import PrunedTree, binomial_tree, pruned_binomial_tree
from coloring.graph_core import Graph, GraphBuilder, VertexSet, induced_subgraph, is_independent

logger = logging.getLogger(__name__)

# 整数の2つ組（セルの添字または座標）
Pair = Tuple[int, int]


# =============================================================================
# 共通の出力型
# =============================================================================


@dataclass(frozen=True)
class ReductionOutput:
    """
    帰着の出力

    graph の全頂点に一意な役割ラベルが付く。provenance は役割 → 元インスタンスの要素、
    groups は名前付き頂点集合（層・セル・クリークの部分など）。
    """

    kind: str
    graph: Graph
    target: int
    provenance: Mapping[str, str]
    groups: Mapping[str, VertexSet]
    faithful: bool = True
    top_tree: Optional["LazyTopTree"] = None
    notes: Tuple[str, ...] = ()
    source: object = field(default=None, compare=False)

    @cached_property
    def vertex_of(self) -> Dict[str, int]:
        """役割ラベル → 頂点ID"""
        return {role: v for v, role in self.graph.role_labels.items()}

    def to_dict(self) -> Dict:
        """JSON用の要約（グラフ本体は formats 側で書き出す）"""
        data = {
            "kind": self.kind,
            "target": self.target,
            "faithful": self.faithful,
            "vertices": self.graph.n,
            "edges": self.graph.num_edges,
            "notes": list(self.notes),
        }
        if self.top_tree is not None:
            data["top_tree"] = self.top_tree.to_dict()
        return data


def _ordered_groups(groups: Dict[str, List[int]]) -> Dict[str, VertexSet]:
    return {name: tuple(sorted(members)) for name, members in groups.items()}


# =============================================================================
# 多色独立集合 → 根付きGrundy数
# =============================================================================


@dataclass(frozen=True)
class MisInstance:
    """頂点集合を k 個のパートに分けたグラフ"""

    graph: Graph
    parts: Tuple[VertexSet, ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def validate(self) -> Tuple[bool, str]:
        """
        パートが V の分割になっているか

        Returns:
            (is_valid, error_message) のタプル
        """
        return _validate_partition(self.graph, self.parts)


def _validate_partition(g: Graph, parts: Sequence[Sequence[int]]) -> Tuple[bool, str]:
    if not parts:
        return (False, "at least one part is required")
    seen = set()
    for i, part in enumerate(parts):
        if not part:
            return (False, f"part {i + 1} is empty")
        for v in part:
            if not 0 <= v < g.n:
                return (False, f"vertex {v + 1} of part {i + 1} is out of range")
            if v in seen:
                return (False, f"vertex {v + 1} appears in more than one part")
            seen.add(v)
    if len(seen) != g.n:
        missing = min(set(range(g.n)) - seen)
        return (False, f"vertex {missing + 1} is in no part")
    return (True, "")


class MisReduction(NamedTuple):
    graph: Graph
    root: int
    target: int


def reduce_mis_to_rooted_grundy(inst: MisInstance) -> MisReduction:
    """
    多色独立集合を根付きGrundy数へ帰着

    H の複製に大きさ k+1 のクリーク {v, v_1, ..., v_k} を加え、v にペンダント v' を付け、
    v_i を V_i の全頂点と結ぶ。H が多色独立集合を持つとき、かつそのときに限り
    v は色 k+2 を受けられる。

    Args:
        inst: MisInstance

    Returns:
        MisReduction(graph, root=v, target=k+2)

    Raises:
        InvalidInstanceError: パートが分割になっていない場合
    """
    is_valid, message = inst.validate()
    if not is_valid:
        raise InvalidInstanceError(message)
    builder = GraphBuilder()
    builder.add_graph(inst.graph, lambda v, role: role or f"h{v + 1}")
    root = builder.add_vertex("v")
    hubs = [builder.add_vertex(f"v{i + 1}") for i in range(inst.k)]
    builder.make_clique([root] + hubs)
    builder.add_edge(root, builder.add_vertex("v'"))
    for hub, part in zip(hubs, inst.parts):
        builder.join([hub], part)
    graph = builder.build()
    logger.debug(f"MIS reduction: k={inst.k}, n={graph.n}")
    return MisReduction(graph, root, inst.k + 2)


def find_multicolored_is(inst: MisInstance) -> Optional[Tuple[int, ...]]:
    """各パートから1頂点ずつ選んだ独立集合を全探索（パート順の頂点列、なければ None）"""
    g = inst.graph

    def extend(chosen: List[int], i: int) -> Optional[Tuple[int, ...]]:
        if i == inst.k:
            return tuple(chosen)
        for v in inst.parts[i]:
            if all(not g.has_edge(v, u) for u in chosen):
                chosen.append(v)
                found = extend(chosen, i + 1)
                chosen.pop()
                if found:
                    return found
        return None

    return extend([], 0)


def has_multicolored_is(inst: MisInstance) -> bool:
    return find_multicolored_is(inst) is not None


def mis_solution_certificate(inst: MisInstance, reduction: MisReduction, solution: Sequence[int]) -> WitnessCertificate:
    """
    多色独立集合から、根 v が色 k+2 を受けるGrundy証明書を作る

    独立集合とペンダント v' が色 1、v_i が色 i+1、v が色 k+2。

    Args:
        inst: 元インスタンス
        reduction: reduce_mis_to_rooted_grundy の出力
        solution: パート順の頂点（0始まり）

    Raises:
        InvalidSolutionError: パートの数・所属・独立性が合わない場合
    """
    if len(solution) != inst.k:
        raise InvalidSolutionError(f"Expected {inst.k} vertices, got {len(solution)}", offending=tuple(solution))
    for i, (v, part) in enumerate(zip(solution, inst.parts)):
        if v not in part:
            raise InvalidSolutionError(f"Vertex {v} is not in part {i + 1}", offending=v)
    if not is_independent(inst.graph, solution):
        raise InvalidSolutionError("Chosen vertices are not independent", offending=tuple(solution))

    g = reduction.graph
    vertex_of = {role: v for v, role in g.role_labels.items()}
    color_of = {v: 1 for v in solution}
    color_of[vertex_of["v'"]] = 1
    for i in range(inst.k):
        color_of[vertex_of[f"v{i + 1}"]] = i + 2
    color_of[reduction.root] = reduction.target
    cert = _certificate_from_colors(color_of)
    verdict = verify_grundy(g, cert)
    if not verdict:
        raise InvalidSolutionError(f"Certificate does not verify: {verdict.reason}", offending=tuple(solution))
    return cert


# =============================================================================
# 多色部分グラフ同型 → Grundy数
# =============================================================================


@dataclass(frozen=True)
class McsiInstance:
    """
    多色部分グラフ同型のインスタンス

    pattern は [k] 上の3正則グラフ、k は偶数。pattern の非辺に対応するパート間には辺がない。
    """

    graph: Graph
    parts: Tuple[VertexSet, ...]
    pattern: Graph

    @property
    def k(self) -> int:
        return len(self.parts)

    @cached_property
    def part_of(self) -> Dict[int, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    def validate(self) -> Tuple[bool, str]:
        """
        インスタンスの整合性をバリデーション

        Returns:
            (is_valid, error_message) のタプル
        """
        is_valid, message = _validate_partition(self.graph, self.parts)
        if not is_valid:
            return (is_valid, message)
        if self.k % 2:
            return (False, f"k must be even (got {self.k})")
        if self.pattern.n != self.k:
            return (False, f"pattern has {self.pattern.n} vertices but there are {self.k} parts")
        for i in range(self.k):
            if self.pattern.degree(i) != 3:
                return (False, f"pattern vertex {i + 1} has degree {self.pattern.degree(i)}, expected 3")
        part_of = self.part_of
        for u, v in self.graph.edges():
            i, j = part_of[u], part_of[v]
            if i != j and not self.pattern.has_edge(i, j):
                return (False, f"edge {u + 1}-{v + 1} joins parts {i + 1} and {j + 1}, which are not a pattern edge")
        return (True, "")

    def cross_edges(self) -> List[Tuple[int, int]]:
        """パート間の辺 (u, v)（u のパート番号 < v のパート番号）"""
        part_of = self.part_of
        result = []
        for u, v in self.graph.edges():
            if part_of[u] == part_of[v]:
                continue
            if part_of[u] > part_of[v]:
                u, v = v, u
            result.append((u, v))
        return sorted(result, key=lambda e: (part_of[e[0]], part_of[e[1]], e))

    def intra_part_edges(self) -> List[Tuple[int, int]]:
        part_of = self.part_of
        return [(u, v) for u, v in self.graph.edges() if part_of[u] == part_of[v]]


def mcsi_faithful_q(k: int) -> int:
    """q = ceil(log2 k) + 55"""
    if k < 1:
        raise ValueError("k must be positive")
    return (k - 1).bit_length() + MCSI_Q_OFFSET


def mcsi_budget_q(k: int) -> int:
    """2^{q'-8} ≥ 2.5k を満たす最小の q' ≥ 8"""
    surgery = k * 5 // 2
    q = 8
    while 2 ** (q - 8) < surgery:
        q += 1
    return q


@dataclass(frozen=True)
class LazyTopTree:
    """
    実体化しない最上位木 T_q の記録

    色 7 の頂点の子で色 6 を受ける頂点のうち surgery_count 個から T_5 を取り除いた木の個数情報。
    出力グラフには f 頂点ごとの手術部分（色 7 の親の切り株と残した子 T_1..T_4）だけを置く。
    """

    q: int
    surgery_count: int
    frontier: Tuple[str, ...] = ()

    @property
    def eligible_count(self) -> int:
        return 2 ** (self.q - 8)

    @property
    def vertex_count(self) -> int:
        return 2 ** (self.q - 1) - 16 * self.surgery_count

    @property
    def edge_count(self) -> int:
        return self.vertex_count - 1

    @staticmethod
    def kept_child_colors() -> range:
        """f 頂点に残る子の根の色（色 6 の子 T_1..T_5 から T_5 を除く）"""
        return range(1, MCSI_TOP_COLOR - 1)

    @classmethod
    def frontier_size(cls) -> Tuple[int, int]:
        """f 頂点1つあたりの実体化部分の (頂点数, 辺数)"""
        kept = sum(2 ** (c - 1) for c in cls.kept_child_colors())
        # f・親の切り株・残した子の木。辺は木の内部、子の根と f、親と f
        return kept + 2, kept + 1

    def to_dict(self) -> Dict:
        return {
            "q": self.q,
            "surgery_count": self.surgery_count,
            "eligible_count": str(self.eligible_count),
            "vertex_count": str(self.vertex_count),
            "edge_count": str(self.edge_count),
            "frontier": list(self.frontier),
        }


def mcsi_polynomial_counts(inst: McsiInstance) -> Dict[str, int]:
    """
    多項式部分（H_i・T_5 の木・接続辺・f 頂点とその手術部分）の頂点数と辺数を閉じた式で計算

    Returns:
        {"vertices", "edges", "half_graph_edges", "tree_count"}
    """
    part_of = inst.part_of
    cross = inst.cross_edges()
    n_vertices = inst.graph.n
    m = len(cross)
    f_count = inst.k + inst.pattern.num_edges

    half_edges = 0
    for i, part in enumerate(inst.parts):
        # 層ごとの 水準 → 頂点数
        layers: List[Dict[int, int]] = [{u: 1 for u in part}]
        for p in inst.pattern.neighbors(i):
            counts: Dict[int, int] = {}
            for u in part:
                counts[u] = sum(1 for v in inst.graph.adjacency[u] if part_of[v] == p)
            layers.append(counts)
        layers.append({u: 1 for u in part})
        for lower, upper in zip(layers, layers[1:]):
            half_edges += sum(lower[u] * upper[w] for u in part for w in part if u < w)

    tree_count = m + n_vertices
    frontier_vertices, frontier_edges = LazyTopTree.frontier_size()
    return {
        "vertices": 16 * n_vertices + 16 * m + f_count * frontier_vertices,
        "edges": half_edges + 13 * tree_count + 2 * tree_count + tree_count + f_count * frontier_edges,
        "half_graph_edges": half_edges,
        "tree_count": tree_count,
    }


class _TreeLayout(NamedTuple):
    tree: PrunedTree
    beta: int
    gamma: int


def _t5_layout() -> _TreeLayout:
    tree = pruned_binomial_tree(5, 2, 2)
    beta, gamma = tree.x_members
    return _TreeLayout(tree, beta, gamma)


def _tree_role(layout: _TreeLayout, x: int) -> str:
    if x == 0:
        return "root"
    if x == layout.beta:
        return "beta"
    if x == layout.gamma:
        return "gamma"
    return str(x)


def reduce_mcsi_to_grundy(
    inst: McsiInstance,
    mode: str = "faithful",
    budget_q: Optional[int] = None,
    materialize: bool = False,
) -> ReductionOutput:
    """
    多色部分グラフ同型をGrundy数へ帰着

    各 V_i を長さ4の半グラフのパス H_i（L_i, Z_{i,i(1)}, Z_{i,i(2)}, Z_{i,i(3)}, R_i）で符号化し、
    パート間の辺とパートの頂点ごとに14頂点木を付け、最上位木の色 6 の頂点 f(i), f(ij) を
    各木の根に結ぶ。

    Args:
        inst: McsiInstance
        mode: "faithful"（q = ceil(log k)+55、最上位木は遅延表現）/ "budget"（小さい q' で実体化）
        budget_q: 予算モードの q'（省略時は 2^{q'-8} ≥ 2.5k を満たす最小値）
        materialize: faithful モードで最上位木を実体化するか

    Returns:
        ReductionOutput

    Raises:
        InvalidInstanceError: インスタンスが不正な場合
        CapExceededError: 最上位木がサイズガードを超える場合
    """
    if mode not in ("faithful", "budget"):
        raise ValueError(f"Unknown mode: {mode}")
    is_valid, message = inst.validate()
    if not is_valid:
        raise InvalidInstanceError(message)
    intra = inst.intra_part_edges()
    if intra:
        logger.warning(f"Ignoring {len(intra)} edge(s) inside parts")

    k = inst.k
    pattern = inst.pattern
    g = inst.graph
    part_of = inst.part_of
    surgery = k + pattern.num_edges

    if mode == "budget":
        q = mcsi_budget_q(k) if budget_q is None else budget_q
        if q > BUDGET_Q_MAX:
            raise CapExceededError(f"Budget q' = {q} exceeds {BUDGET_Q_MAX}", cap_name="budget_q", limit=BUDGET_Q_MAX)
        if q < 8 or 2 ** (q - 8) < surgery:
            raise InvalidInstanceError(f"q' = {q} leaves fewer than {surgery} color-6 vertices to operate on")
        materialize = True
    else:
        q = mcsi_faithful_q(k)
    if materialize and 2 ** (q - 1) > TOP_TREE_SIZE_GUARD:
        raise CapExceededError(
            f"Top tree T_{q} has 2^{q - 1} vertices, above the guard {TOP_TREE_SIZE_GUARD}",
            cap_name="top_tree",
            limit=TOP_TREE_SIZE_GUARD,
        )

    builder = GraphBuilder()
    provenance: Dict[str, str] = {}
    groups: Dict[str, List[int]] = {}

    def add(role: str, source: str, group: Optional[str] = None) -> int:
        v = builder.add_vertex(role)
        provenance[role] = source
        if group:
            groups.setdefault(group, []).append(v)
        return v

    # --- H_i ---
    l_of: Dict[int, int] = {}
    r_of: Dict[int, int] = {}
    z_of: Dict[Tuple[int, int], int] = {}
    for i, part in enumerate(inst.parts):
        members = sorted(part)
        layers: List[List[Tuple[int, int]]] = []
        layer = []
        for u in members:
            l_of[u] = add(f"l({u + 1})", f"vertex {u + 1}", f"L{i + 1}")
            layer.append((u, l_of[u]))
        layers.append(layer)
        for p in pattern.neighbors(i):
            layer = []
            for u in members:
                for v in sorted(g.adjacency[u]):
                    if part_of[v] != p:
                        continue
                    z_of[(u, v)] = add(f"z({u + 1},{v + 1})", f"edge {u + 1}-{v + 1}", f"Z{i + 1},{p + 1}")
                    layer.append((u, z_of[(u, v)]))
            layers.append(layer)
        layer = []
        for u in members:
            r_of[u] = add(f"r({u + 1})", f"vertex {u + 1}", f"R{i + 1}")
            layer.append((u, r_of[u]))
        layers.append(layer)
        for lower, upper in zip(layers, layers[1:]):
            for level, a in lower:
                for other, b in upper:
                    if level < other:
                        builder.add_edge(a, b)

    # --- 14頂点木 ---
    layout = _t5_layout()

    def add_tree(label: str, source: str, root_group: str, beta_to: int, gamma_to: int) -> None:
        ids = []
        for x in range(layout.tree.graph.n):
            ids.append(add(f"{label}.{_tree_role(layout, x)}", source, label))
        for a, b in layout.tree.graph.edges():
            builder.add_edge(ids[a], ids[b])
        builder.add_edge(ids[layout.beta], beta_to)
        builder.add_edge(ids[layout.gamma], gamma_to)
        groups.setdefault(root_group, []).append(ids[0])

    for u, v in inst.cross_edges():
        i, j = part_of[u], part_of[v]
        add_tree(f"T5({u + 1},{v + 1})", f"edge {u + 1}-{v + 1}", f"RT{i + 1},{j + 1}", z_of[(u, v)], z_of[(v, u)])
    for u in range(g.n):
        add_tree(f"T5({u + 1})", f"vertex {u + 1}", f"RT{part_of[u] + 1}", l_of[u], r_of[u])

    # --- 最上位木 ---
    targets = [(f"f({i + 1})", f"RT{i + 1}", f"pattern vertex {i + 1}") for i in range(k)]
    targets += [
        (f"f({i + 1},{j + 1})", f"RT{i + 1},{j + 1}", f"pattern edge {i + 1}-{j + 1}")
        for i, j in pattern.edges()
    ]
    lazy: Optional[LazyTopTree] = None
    if materialize:
        top = pruned_binomial_tree(q, MCSI_TOP_COLOR, surgery)
        f_roles = {x: role for x, (role, _, _) in zip(top.x_members, targets)}
        top_ids = []
        for x in range(top.graph.n):
            role = f_roles.get(x) or ("top.root" if x == 0 else f"top.{x}")
            source = next((src for r, _, src in targets if r == role), "top tree")
            top_ids.append(add(role, source, "top"))
        for a, b in top.graph.edges():
            builder.add_edge(top_ids[a], top_ids[b])
        f_ids = {f_roles[x]: top_ids[x] for x in top.x_members}
    else:
        f_ids = {}
        for role, _, source in targets:
            f = add(role, source, "f")
            parent = add(f"{role}.parent", f"{source} (top tree, color {MCSI_TOP_COLOR + 1})", "top.frontier")
            builder.add_edge(parent, f)
            for color in LazyTopTree.kept_child_colors():
                child = binomial_tree(color)
                ids = [add(f"{role}.T{color}.{x}", f"{source} (top tree)", "top.frontier") for x in range(child.n)]
                for a, b in child.edges():
                    builder.add_edge(ids[a], ids[b])
                builder.add_edge(ids[0], f)
            f_ids[role] = f
        lazy = LazyTopTree(q, surgery, tuple(role for role, _, _ in targets))
    for role, root_group, _ in targets:
        builder.join([f_ids[role]], groups.get(root_group, []))

    graph = builder.build()
    notes = () if mode == "faithful" else (f"budget mode: top tree T_{q} is NOT equivalence-preserving",)
    logger.info(f"MCSI reduction ({mode}): k={k}, q={q}, n={graph.n}, m={graph.num_edges}")
    return ReductionOutput(
        kind="mcsi",
        graph=graph,
        target=q,
        provenance=provenance,
        groups=_ordered_groups(groups),
        faithful=mode == "faithful",
        top_tree=lazy,
        notes=notes,
        source=inst,
    )


def find_mcsi_solution(inst: McsiInstance) -> Optional[Dict[int, int]]:
    """パートごとに1頂点を選び、全パターン辺が実現される解を全探索"""
    g = inst.graph
    chosen: Dict[int, int] = {}

    def extend(i: int) -> bool:
        if i == inst.k:
            return True
        for v in inst.parts[i]:
            if all(g.has_edge(v, chosen[j]) for j in inst.pattern.adjacency[i] if j in chosen):
                chosen[i] = v
                if extend(i + 1):
                    return True
                del chosen[i]
        return False

    return dict(chosen) if extend(0) else None


def has_mcsi_solution(inst: McsiInstance) -> bool:
    return find_mcsi_solution(inst) is not None


def validate_mcsi_solution(inst: McsiInstance, solution: Mapping[int, int]) -> None:
    """
    MCSI の解を検証

    Raises:
        InvalidSolutionError: パートの欠落・範囲外・実現されないパターン辺がある場合
    """
    if not solution:
        raise InvalidSolutionError("Solution is empty", offending=None)
    for i in range(inst.k):
        if i not in solution:
            raise InvalidSolutionError(f"No vertex chosen for part {i + 1}", offending=i)
        if solution[i] not in inst.parts[i]:
            raise InvalidSolutionError(f"Vertex {solution[i] + 1} is not in part {i + 1}", offending=i)
    for i, j in inst.pattern.edges():
        if not inst.graph.has_edge(solution[i], solution[j]):
            raise InvalidSolutionError(
                f"Pattern edge {i + 1}-{j + 1} is not realized by {solution[i] + 1}-{solution[j] + 1}",
                offending=(i, j),
            )


@dataclass(frozen=True)
class McsiCertificate:
    """
    MCSI の解から作る検証済み部分証明書

    color_one: 色 1 を受ける l, z, r の頂点
    trees: 木ラベル → 木と接続頂点上のGrundy証明書（根が色 5）
    full: 予算モードでの位数 q' の完全な証明書
    """

    color_one: VertexSet
    trees: Mapping[str, WitnessCertificate]
    full: Optional[WitnessCertificate] = None

    def to_dict(self) -> Dict:
        return {
            "color_one": list(self.color_one),
            "trees": {label: cert.to_dict() for label, cert in sorted(self.trees.items())},
            "full": self.full.to_dict() if self.full else None,
        }


def mcsi_solution_certificate(
    inst: McsiInstance, output: ReductionOutput, solution: Mapping[int, int]
) -> McsiCertificate:
    """
    MCSI の解から部分証明書を合成

    選ばれた v_i の l, r, z を色 1 に、各木の beta, gamma を色 2 にして、
    選ばれた木の根が色 5 を受けることを rooted_grundy でも確認する。

    Args:
        inst: 元インスタンス
        output: reduce_mcsi_to_grundy の出力
        solution: パート番号 → 選んだ頂点

    Returns:
        McsiCertificate

    Raises:
        InvalidSolutionError: 解が不正な場合、または部分証明書が検証に失敗した場合
    """
    validate_mcsi_solution(inst, solution)
    g = output.graph
    vertex_of = output.vertex_of
    chosen = {solution[i] for i in range(inst.k)}

    color_one = []
    for i in range(inst.k):
        u = solution[i]
        color_one += [vertex_of[f"l({u + 1})"], vertex_of[f"r({u + 1})"]]
        for j in inst.pattern.neighbors(i):
            color_one.append(vertex_of[f"z({u + 1},{solution[j] + 1})"])
    color_one = sorted(color_one)
    if not is_independent(g, color_one):
        raise InvalidSolutionError("Color-1 set is not independent", offending=tuple(color_one))

    layout = _t5_layout()
    labels = [f"T5({solution[i] + 1},{solution[j] + 1})" for i, j in inst.pattern.edges()]
    labels += [f"T5({u + 1})" for u in sorted(chosen)]
    color_of: Dict[int, int] = {v: 1 for v in color_one}
    trees: Dict[str, WitnessCertificate] = {}
    for label in labels:
        ids = output.groups[label]
        tree_colors = {ids[x]: c for x, c in enumerate(layout.tree.colors)}
        attachments = [u for x in (layout.beta, layout.gamma) for u in g.adjacency[ids[x]] if u not in tree_colors]
        local = dict(tree_colors)
        local.update({u: 1 for u in attachments})
        cert = _certificate_from_colors(local)
        verdict = verify_grundy(g, cert)
        if not verdict:
            raise InvalidSolutionError(f"{label}: {verdict.reason}", offending=label)
        sub, mapping = induced_subgraph(g, local)
        if rooted_grundy(sub, mapping[ids[0]]) < 5:
            raise InvalidSolutionError(f"{label}: root cannot reach color 5", offending=label)
        trees[label] = cert
        color_of.update(tree_colors)

    full = None
    if not output.faithful:
        top_ids = output.groups["top"]
        top = pruned_binomial_tree(output.target, MCSI_TOP_COLOR, inst.k + inst.pattern.num_edges)
        color_of.update({top_ids[x]: c for x, c in enumerate(top.colors)})
        full = _certificate_from_colors(color_of)
        verdict = verify_grundy(g, full)
        if not verdict:
            raise InvalidSolutionError(f"Full certificate does not verify: {verdict.reason}", offending=None)
    logger.info(f"MCSI certificate: {len(trees)} tree certificates, full={'yes' if full else 'no'}")
    return McsiCertificate(tuple(color_one), trees, full)


def _certificate_from_colors(color_of: Mapping[int, int], kind: WitnessKind = WitnessKind.GRUNDY,
                             centers: Optional[Sequence[int]] = None) -> WitnessCertificate:
    top = max(color_of.values(), default=0)
    classes = [[] for _ in range(top)]
    for v, c in sorted(color_of.items()):
        classes[c - 1].append(v)
    return WitnessCertificate(kind, tuple(tuple(c) for c in classes), tuple(centers) if centers is not None else None)


def check_mcsi_gadget(inst: McsiInstance, output: ReductionOutput, i: int) -> Verdict:
    """
    H_i の整合性を全探索で確認

    l(u), r(u) と Z の3層から1頂点ずつ選んだ5頂点が独立なら、3つの z はすべて u 由来であること。

    Args:
        inst: 元インスタンス
        output: 帰着の出力
        i: パート番号（0始まり）

    Returns:
        Verdict
    """
    g = output.graph
    roles = g.role_labels
    z_layers = [output.groups.get(f"Z{i + 1},{p + 1}", ()) for p in inst.pattern.neighbors(i)]

    def source_of(z: int) -> int:
        return int(roles[z][2:-1].split(",")[0]) - 1

    for u in inst.parts[i]:
        ends = (output.vertex_of[f"l({u + 1})"], output.vertex_of[f"r({u + 1})"])
        for triple in product(*z_layers):
            if is_independent(g, ends + triple) and any(source_of(z) != u for z in triple):
                return Verdict(False, f"part {i + 1}: {[roles[z] for z in triple]} is compatible with l({u + 1}), r({u + 1})")
    return Verdict(True, "")


def random_mcsi_yes_instance(k: int, part_size: int, p: float, seed: int) -> Tuple[McsiInstance, Dict[int, int]]:
    """
    解を埋め込んだ乱数 MCSI インスタンス

    パターンは i ~ i±1, i ~ i+k/2 の3正則グラフ（k=4 で K_4）。

    Returns:
        (インスタンス, 埋め込んだ解)
    """
    if k < 4 or k % 2:
        raise ValueError("k must be an even integer >= 4")
    rng = np.random.default_rng(seed)
    pattern_edges = {tuple(sorted((i, (i + d) % k))) for i in range(k) for d in (1, k // 2)}
    pattern = Graph.from_edges(k, sorted(pattern_edges))
    parts = tuple(tuple(range(i * part_size, (i + 1) * part_size)) for i in range(k))
    solution = {i: parts[i][int(rng.integers(part_size))] for i in range(k)}
    edges = set()
    for i, j in pattern.edges():
        edges.add((solution[i], solution[j]))
        for u in parts[i]:
            for v in parts[j]:
                if rng.random() < p:
                    edges.add((u, v))
    graph = Graph.from_edges(k * part_size, sorted(edges))
    return McsiInstance(graph, parts, pattern), solution


# =============================================================================
# Grid Tiling → b彩色コア
# =============================================================================


@dataclass(frozen=True)
class GridTilingInstance:
    """
    k×k の Grid Tiling インスタンス

    cells[i][j] は P_{i+1,j+1} ⊆ [n]×[n] の対を昇順に並べたもの。
    """

    k: int
    n: int
    cells: Tuple[Tuple[Tuple[Pair, ...], ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(tuple(sorted(set(map(tuple, cell)))) for cell in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)

    @property
    def t(self) -> int:
        return max((len(cell) for row in self.cells for cell in row), default=0)

    @property
    def is_uniform(self) -> bool:
        return len({len(cell) for row in self.cells for cell in row}) == 1

    def validate(self) -> Tuple[bool, str]:
        """
        Returns:
            (is_valid, error_message) のタプル
        """
        if self.k < 2:
            return (False, f"k must be at least 2 (got {self.k})")
        if len(self.cells) != self.k or any(len(row) != self.k for row in self.cells):
            return (False, f"cells must form a {self.k}x{self.k} grid")
        for i, row in enumerate(self.cells):
            for j, cell in enumerate(row):
                if not cell:
                    return (False, f"cell ({i + 1},{j + 1}) is empty")
                for x, y in cell:
                    if not (1 <= x <= self.n and 1 <= y <= self.n):
                        return (False, f"pair ({x},{y}) in cell ({i + 1},{j + 1}) is outside [1,{self.n}]")
        if not self.is_uniform:
            return (False, "all cells must hold the same number of pairs")
        return (True, "")


def tiling_violation(
    inst: GridTilingInstance, solution: Mapping[Pair, Pair], cyclic: bool = True
) -> Optional[Tuple[Pair, Pair, str]]:
    """
    解が満たさない最初の制約

    Returns:
        ((i,j), (i',j'), 説明)（0始まりのセル）、満たしていれば None
    """
    k = inst.k
    for i in range(k):
        for j in range(k):
            if (i, j) not in solution:
                return ((i, j), (i, j), "no pair chosen")
            if solution[(i, j)] not in inst.cells[i][j]:
                return ((i, j), (i, j), f"pair {solution[(i, j)]} is not in the cell")
    for i in range(k):
        for j in range(k):
            x, y = solution[(i, j)]
            if cyclic or j + 1 < k:
                right = (i, (j + 1) % k)
                if solution[right][0] != x:
                    return ((i, j), right, "x coordinates differ")
            if cyclic or i + 1 < k:
                down = ((i + 1) % k, j)
                if solution[down][1] != y:
                    return ((i, j), down, "y coordinates differ")
    return None


def find_grid_tiling_solution(inst: GridTilingInstance, cyclic: bool = True) -> Optional[Dict[Pair, Pair]]:
    """行優先のバックトラックで解を全探索"""
    k = inst.k
    cells = [(i, j) for i in range(k) for j in range(k)]
    chosen: Dict[Pair, Pair] = {}

    def consistent(i: int, j: int, pair: Pair) -> bool:
        if j > 0 and chosen[(i, j - 1)][0] != pair[0]:
            return False
        if i > 0 and chosen[(i - 1, j)][1] != pair[1]:
            return False
        if cyclic and j == k - 1 and chosen[(i, 0)][0] != pair[0]:
            return False
        if cyclic and i == k - 1 and chosen[(0, j)][1] != pair[1]:
            return False
        return True

    def extend(pos: int) -> bool:
        if pos == len(cells):
            return True
        i, j = cells[pos]
        for pair in inst.cells[i][j]:
            if consistent(i, j, pair):
                chosen[(i, j)] = pair
                if extend(pos + 1):
                    return True
                del chosen[(i, j)]
        return False

    return dict(chosen) if extend(0) else None


def has_grid_tiling_solution(inst: GridTilingInstance, cyclic: bool = True) -> bool:
    return find_grid_tiling_solution(inst, cyclic) is not None


def random_gridtiling_yes_instance(k: int, n: int, t: int, seed: int) -> Tuple[GridTilingInstance, Dict[Pair, Pair]]:
    """
    行ごとの x_i と列ごとの y_j を埋め込んだ乱数インスタンス

    Returns:
        (インスタンス, 埋め込んだ解)
    """
    if t > n * n:
        raise ValueError(f"Cannot place {t} distinct pairs in [{n}]x[{n}]")
    rng = np.random.default_rng(seed)
    xs = [int(rng.integers(1, n + 1)) for _ in range(k)]
    ys = [int(rng.integers(1, n + 1)) for _ in range(k)]
    all_pairs = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
    cells = []
    solution = {}
    for i in range(k):
        row = []
        for j in range(k):
            planted = (xs[i], ys[j])
            others = [pair for pair in all_pairs if pair != planted]
            picks = rng.choice(len(others), size=t - 1, replace=False) if t > 1 else []
            row.append(tuple(sorted([planted] + [others[int(idx)] for idx in picks])))
            solution[(i, j)] = planted
        cells.append(tuple(row))
    return GridTilingInstance(k, n, tuple(cells)), solution


def pad_gridtiling_instance(inst: GridTilingInstance) -> GridTilingInstance:
    """
    対の数が揃っていないセルを新しい座標の対で埋める

    埋め草 (n+c, n+c) の c は全体で一意なので、どの解にも使われない。
    """
    t = inst.t
    fresh = inst.n
    cells = []
    for row in inst.cells:
        new_row = []
        for cell in row:
            padding = []
            for _ in range(t - len(cell)):
                fresh += 1
                padding.append((fresh, fresh))
            new_row.append(tuple(cell) + tuple(padding))
        cells.append(tuple(new_row))
    return GridTilingInstance(inst.k, fresh, tuple(cells))


def _mirror_index(i: int, k: int) -> int:
    return i if i < k else 2 * k - 1 - i


def embed_standard_instance(inst: GridTilingInstance) -> GridTilingInstance:
    """
    非巡回の Grid Tiling を 2k×2k の巡回インスタンスへ鏡映で埋め込む

    セル (i, j) には元のセル (m(i), m(j)) を置く（m は k 以上の添字を折り返す）。
    巡回の解を左上 k×k に制限すると元の解になり、元の解を鏡映すると巡回の解になる。
    """
    k2 = 2 * inst.k
    cells = tuple(
        tuple(inst.cells[_mirror_index(i, inst.k)][_mirror_index(j, inst.k)] for j in range(k2))
        for i in range(k2)
    )
    return GridTilingInstance(k2, inst.n, cells)


def mirror_solution(solution: Mapping[Pair, Pair], k: int) -> Dict[Pair, Pair]:
    """非巡回インスタンスの解を鏡映埋め込みの解へ写す"""
    return {
        (i, j): solution[(_mirror_index(i, k), _mirror_index(j, k))]
        for i in range(2 * k)
        for j in range(2 * k)
    }


def _cyclic_labels(k: int) -> List[int]:
    """
    長さ k の閉路を {1,2,3} で隣接が異なるように塗る

    3 の倍数なら 1,2,3 の繰り返し、偶数なら 1,2 の交互、それ以外は交互の末尾を 3 にする。
    """
    if k % 3 == 0:
        return [(i % 3) + 1 for i in range(k)]
    if k % 2 == 0:
        return [(i % 2) + 1 for i in range(k)]
    return [(i % 2) + 1 for i in range(k - 1)] + [3]


class CellWiring(NamedTuple):
    """セル (i, j) の B に結ぶ d_z の添字（上下左右の半グラフが供給する色）"""

    up: int
    down: int
    left: int
    right: int

    @property
    def all(self) -> Tuple[int, ...]:
        return tuple(sorted((self.up, self.down, self.left, self.right)))


def cell_wiring(k: int, i: int, j: int) -> CellWiring:
    """
    セル (i, j)（0始まり）の d_z の添字

    縦の半グラフは 1..9、横の半グラフは 10..18 を使い、隣り合うセルは共有する
    半グラフの添字を1つ共有する。

    行・列の番号 c[i] は _cyclic_labels で付ける。k が 3 の倍数なら c[i] = (i mod 3) + 1 で、
    添字は 3(j mod 3) + (i mod 3) + 1 とその succ 版に一致する。3 の倍数でない k では
    i mod 3 の循環がトーラスの境界（i = k-1 と 0）で崩れて上下（左右）の添字が一致しうるので、
    閉路を {1,2,3} で正しく塗った番号に置き換えている。
    """
    c = _cyclic_labels(k)
    up = 3 * (c[j] - 1) + c[i]
    down = 3 * (c[j] - 1) + c[(i + 1) % k]
    left = 9 + 3 * (c[i] - 1) + c[j]
    right = 9 + 3 * (c[i] - 1) + c[(j + 1) % k]
    return CellWiring(up, down, left, right)


def d_wiring_audit(k: int) -> List[Dict]:
    """
    d_z の結線表

    Returns:
        セルごとの {"cell", "d", "up", "down", "left", "right"}（1始まり）
    """
    rows = []
    for i in range(k):
        for j in range(k):
            w = cell_wiring(k, i, j)
            rows.append({
                "cell": [i + 1, j + 1],
                "d": list(w.all),
                "up": w.up,
                "down": w.down,
                "left": w.left,
                "right": w.right,
            })
    return rows


def gridtiling_q(k: int) -> int:
    return GRIDTILING_Q_FACTOR * k * k


def gridtiling_vertex_count(k: int, t: int) -> int:
    """(q-k^2)(1+k^2) + k^2 (t + q - 9) + 4 t k^2"""
    q = gridtiling_q(k)
    return (q - k * k) * (1 + k * k) + k * k * (t + q - 9) + 4 * t * k * k


def _cell_label(i: int, j: int) -> str:
    return f"({i + 1},{j + 1})"


def reduce_gridtiling_to_bcore(inst: GridTilingInstance, variant: str = "cyclic") -> ReductionOutput:
    """
    巡回 Grid Tiling をb彩色コアへ帰着（q = 14k^2）

    セルごとに完全二部グラフ K_{t,q-9}（A_{i,j}, B_{i,j}）、隣り合うセル間に縦横の半グラフ、
    大きさ q-k^2 のクリーク C（各頂点に k^2 個の私的な葉）を置き、C の中の D, C', C-, C+ で
    中心になれる頂点を制限する。

    Args:
        inst: GridTilingInstance
        variant: "cyclic" / "standard"（非巡回、鏡映で巡回インスタンスへ埋め込む）

    Returns:
        ReductionOutput（source は実際に帰着した巡回インスタンス）

    Raises:
        InvalidInstanceError: インスタンスが不正な場合
    """
    if variant not in ("cyclic", "standard"):
        raise ValueError(f"Unknown variant: {variant}")
    notes: List[str] = []
    if inst.k >= 1 and inst.cells and not inst.is_uniform:
        inst = pad_gridtiling_instance(inst)
        notes.append("padded: non-uniform cells filled with fresh coordinates")
    if variant == "standard":
        inst = embed_standard_instance(inst)
        notes.append(f"standard-embedding: mirrored into a cyclic {inst.k}x{inst.k} instance")
    is_valid, message = inst.validate()
    if not is_valid:
        raise InvalidInstanceError(message)

    k, t = inst.k, inst.t
    q = gridtiling_q(k)
    clique_size = q - k * k
    builder = GraphBuilder()
    provenance: Dict[str, str] = {}
    groups: Dict[str, List[int]] = {}

    def add(role: str, source: str, group: str) -> int:
        v = builder.add_vertex(role)
        provenance[role] = source
        groups.setdefault(group, []).append(v)
        return v

    # --- クリーク C ---
    sat = GRIDTILING_SATURATION_SIZE
    clique: List[int] = []
    for z in range(1, GRIDTILING_D_SIZE + 1):
        clique.append(add(f"d{z}", "clique", "D"))
    for name in ("C'", "C-", "C+"):
        for m in range(1, sat + 1):
            clique.append(add(f"{name}{m}", "clique", name))
    for m in range(1, clique_size - len(clique) + 1):
        clique.append(add(f"c{m}", "clique", "C-rest"))
    builder.make_clique(clique)
    groups["C"] = list(clique)
    for v in clique:
        for m in range(1, k * k + 1):
            builder.add_edge(v, add(f"p[{builder.role(v)}].{m}", "pendant", "pendants"))
    d_of = {z: groups["D"][z - 1] for z in range(1, GRIDTILING_D_SIZE + 1)}

    # --- セル ---
    a_of: Dict[Tuple[int, int, Pair], int] = {}
    for i in range(k):
        for j in range(k):
            cell = _cell_label(i, j)
            a_ids = [
                add(f"a{cell}({x},{y})", f"cell {cell} pair ({x},{y})", f"A{cell}")
                for x, y in inst.cells[i][j]
            ]
            for pair, v in zip(inst.cells[i][j], a_ids):
                a_of[(i, j, pair)] = v
            b_ids = [add(f"b{cell}.{m}", f"cell {cell}", f"B{cell}") for m in range(1, q - 9 + 1)]
            builder.join(a_ids, b_ids)
            builder.join(a_ids, groups["C'"])
            builder.join(b_ids, [d_of[z] for z in cell_wiring(k, i, j).all])

    # --- 半グラフ ---
    for i in range(k):
        for j in range(k):
            for direction, (ti, tj), axis in (("HV", ((i + 1) % k, j), 1), ("HH", (i, (j + 1) % k), 0)):
                name = f"{direction}{_cell_label(i, j)}"
                w = cell_wiring(k, i, j)
                z = w.down if direction == "HV" else w.right
                src, tgt = [], []
                for pair in inst.cells[i][j]:
                    h = add(f"{name}.src{pair}".replace(" ", ""), f"cell {_cell_label(i, j)} pair {pair}", f"{name}.src")
                    builder.add_edge(h, a_of[(i, j, pair)])
                    src.append((pair, h))
                for pair in inst.cells[ti][tj]:
                    h = add(f"{name}.tgt{pair}".replace(" ", ""), f"cell {_cell_label(ti, tj)} pair {pair}", f"{name}.tgt")
                    builder.add_edge(h, a_of[(ti, tj, pair)])
                    tgt.append((pair, h))
                for pair, h in src:
                    for other, h2 in tgt:
                        if pair[axis] < other[axis]:
                            builder.add_edge(h, h2)
                side_ids = [h for _, h in src] + [h for _, h in tgt]
                builder.join(side_ids, [d_of[d] for d in range(1, GRIDTILING_D_SIZE + 1) if d != z])
                builder.join([h for _, h in src], groups["C-"])
                builder.join([h for _, h in tgt], groups["C+"])

    graph = builder.build()
    logger.info(f"Grid Tiling reduction: k={k}, t={t}, q={q}, n={graph.n}, m={graph.num_edges}")
    return ReductionOutput(
        kind="gridtiling",
        graph=graph,
        target=q,
        provenance=provenance,
        groups=_ordered_groups(groups),
        notes=tuple(notes),
        source=inst,
    )


def gridtiling_certificate(
    inst: GridTilingInstance,
    output: ReductionOutput,
    solution: Mapping[Pair, Pair],
    strict: bool = True,
) -> WitnessCertificate:
    """
    Grid Tiling の解から位数 q のb彩色証明書を作る

    C を [q-k^2] で、各 C の頂点の葉を残りの色で塗る。選んだ a_{i,j}(x,y) が色 q-k^2+1.. の中心になり、
    B_{i,j} は C', D_{i,j}, 中心の色を除く q-10 色、半グラフの対応頂点は共有の色 z を受ける。

    Args:
        inst: 帰着に渡したインスタンス
        output: reduce_gridtiling_to_bcore の出力
        solution: 0始まりのセル (i, j) → 対 (x, y)
        strict: True なら制約違反で例外、False なら証明書をそのまま返す（検証が失敗する）

    Returns:
        WitnessCertificate（b彩色、位数 q）

    Raises:
        InvalidSolutionError: strict で解が制約を満たさない場合（違反したセル対を保持）
    """
    if not solution:
        raise InvalidSolutionError("Solution is empty", offending=None)
    source = output.source if isinstance(output.source, GridTilingInstance) else inst
    if any(note.startswith("standard-embedding") for note in output.notes) and len(solution) == inst.k * inst.k:
        solution = mirror_solution(solution, inst.k)
    violation = tiling_violation(source, solution, cyclic=True)
    if violation is not None:
        (i, j), (i2, j2), reason = violation
        message = f"Cells {_cell_label(i, j)} and {_cell_label(i2, j2)}: {reason}"
        if strict or i == i2 and j == j2:
            raise InvalidSolutionError(message, offending=((i, j), (i2, j2)))
        logger.warning(f"Building certificate for a broken solution: {message}")

    k = source.k
    q = output.target
    vertex_of = output.vertex_of
    groups = output.groups
    color_of: Dict[int, int] = {}
    centers: Dict[int, int] = {}

    for color, v in enumerate(groups["C"], start=1):
        color_of[v] = color
        centers[color] = v
    for v in groups["pendants"]:
        role = output.graph.role(v)
        m = int(role.rsplit(".", 1)[1])
        color_of[v] = q - k * k + m

    c_prime = {color_of[v] for v in groups["C'"]}
    for i in range(k):
        for j in range(k):
            cell = _cell_label(i, j)
            pair = solution[(i, j)]
            center_color = q - k * k + 1 + i * k + j
            a = vertex_of[f"a{cell}({pair[0]},{pair[1]})"]
            color_of[a] = center_color
            centers[center_color] = a
            wiring = cell_wiring(k, i, j)
            excluded = c_prime | set(wiring.all) | {center_color}
            palette = [c for c in range(1, q + 1) if c not in excluded]
            for idx, b in enumerate(groups[f"B{cell}"]):
                color_of[b] = palette[idx % len(palette)]
            for direction, (ti, tj) in (("HV", ((i + 1) % k, j)), ("HH", (i, (j + 1) % k))):
                name = f"{direction}{cell}"
                z = wiring.down if direction == "HV" else wiring.right
                target_pair = solution[(ti, tj)]
                color_of[vertex_of[f"{name}.src{pair}".replace(" ", "")]] = z
                color_of[vertex_of[f"{name}.tgt{target_pair}".replace(" ", "")]] = z

    cert = _certificate_from_colors(color_of, WitnessKind.B_COLORING, [centers[c] for c in range(1, q + 1)])
    logger.info(f"Grid Tiling certificate: order {cert.order}, support {len(cert.support)}")
    return cert


def almost_twin_center_bound(g: Graph, vertices: Sequence[int]) -> int:
    """
    共通近傍 Y の外に高々 p 個の隣接頂点しか持たない頂点集合の中心数の上界 p+1
    """
    if not vertices:
        return 0
    common = frozenset.intersection(*(g.adjacency[v] for v in vertices))
    p = max(len(g.adjacency[v] - common) for v in vertices)
    return p + 1


def center_capacity_audit(output: ReductionOutput, cert: WitnessCertificate) -> Dict:
    """
    証明書の中心が A_{i,j} ごとに 5 個以下、半グラフの各側に 2 個以下であるか

    Returns:
        {"max_per_cell", "max_per_side", "ok"}
    """
    centers = set(cert.centers or ())
    per_cell = [
        len(centers & set(members)) for name, members in output.groups.items() if name.startswith("A(")
    ]
    per_side = [
        len(centers & set(members))
        for name, members in output.groups.items()
        if name.startswith(("HV", "HH"))
    ]
    max_cell = max(per_cell, default=0)
    max_side = max(per_side, default=0)
    return {
        "max_per_cell": max_cell,
        "max_per_side": max_side,
        "ok": max_cell <= 5 and max_side <= 2,
    }


def verify_gridtiling_certificate(output: ReductionOutput, cert: WitnessCertificate) -> Verdict:
    """位数が q であることを含めてb彩色証明書を検証"""
    if cert.order != output.target:
        return Verdict(False, f"certificate has order {cert.order}, expected {output.target}")
    return verify_b_coloring(output.graph, cert)
