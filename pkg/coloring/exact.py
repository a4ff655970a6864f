"""
厳密ソルバーモジュール

Grundy数・根付きGrundy数・部分Grundy数・b彩色コアの位数を小規模グラフで厳密に求める。
いずれも他の実装の検証オラクルとして使う。

- Grundy数: 部分集合上のメモ化再帰。各色クラスは残りの誘導部分グラフの
  極大独立集合なので Γ(S) = 1 + max_M Γ(S \\ M)。
- 根付きGrundy数: v を含む頂点プール上の同様の再帰。各クラスは v に隣接する。
- 部分Grundy / b彩色: 中心を推測して支持頂点を割り当てる中心指向探索と、
  制限成長列による集合分割列挙（オラクル）。
"""

import logging
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from config import (
    BCORE_CAP,
    CENTER_SEARCH_CAP,
    GRUNDY_CAP,
    ORDERINGS_CAP,
    PARTITION_AUTO_LIMIT,
    PARTITION_ENUM_CAP,
    ROOTED_GRUNDY_CAP,
    WITNESS_SUBGRAPH_BUDGET,
)
from coloring.colorings import WitnessCertificate, WitnessKind, first_fit
from coloring.errors import CapExceededError
from coloring.graph_core import Graph, VertexSet, induced_subgraph, mask_members, mask_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveResult:
    """最適値と、それを達成する証明書"""

    value: int
    certificate: WitnessCertificate

    def to_dict(self) -> Dict:
        return {"value": self.value, "certificate": self.certificate.to_dict()}


def _check_cap(n: int, cap: int, name: str) -> None:
    if n > cap:
        raise CapExceededError(f"{name} is capped at n <= {cap} (got n = {n})", cap_name=name, limit=cap)


# =============================================================================
# 極大独立集合
# =============================================================================


def maximal_independent_sets(masks: Sequence[int], subset: int) -> Iterator[int]:
    """
    G[subset] の極大独立集合をビットマスクで列挙

    補グラフ上のピボット付き Bron–Kerbosch。

    Args:
        masks: 頂点ごとの隣接ビットマスク
        subset: 対象頂点集合のビットマスク

    Yields:
        極大独立集合のビットマスク
    """
    if not subset:
        yield 0
        return

    def non_neighbors(v: int) -> int:
        return subset & ~masks[v] & ~(1 << v)

    def expand(r: int, p: int, x: int) -> Iterator[int]:
        if not p and not x:
            yield r
            return
        pivot, best = -1, -1
        for u in mask_members(p | x):
            count = (p & non_neighbors(u)).bit_count()
            if count > best:
                pivot, best = u, count
        for v in mask_members(p & ~non_neighbors(pivot)):
            bit = 1 << v
            yield from expand(r | bit, p & non_neighbors(v), x & non_neighbors(v))
            p &= ~bit
            x |= bit

    yield from expand(0, subset, 0)


def _sorted_mis(masks: Sequence[int], subset: int) -> List[int]:
    """極大独立集合を要素列の辞書順で返す（最小IDで同順位を解消）"""
    return sorted(maximal_independent_sets(masks, subset), key=mask_members)


def _degree_bound(masks: Sequence[int], subset: int) -> int:
    """min(|S|, Δ(G[S]) + 1)"""
    if not subset:
        return 0
    top = max((masks[v] & subset).bit_count() for v in mask_members(subset))
    return min(subset.bit_count(), top + 1)


# =============================================================================
# Grundy数
# =============================================================================


def grundy_number(g: Graph, cap: Optional[int] = None) -> SolveResult:
    """
    Grundy数 Γ(G) を厳密に計算

    Args:
        g: グラフ
        cap: 頂点数の上限（既定 20）

    Returns:
        SolveResult（証明書は全頂点を覆うGrundy彩色）

    Raises:
        CapExceededError: n が上限を超える場合
    """
    _check_cap(g.n, GRUNDY_CAP if cap is None else cap, "grundy")
    masks = g.masks
    memo: Dict[int, Tuple[int, int]] = {0: (0, 0)}

    def solve(s: int) -> int:
        if s in memo:
            return memo[s][0]
        bound = _degree_bound(masks, s)
        best, best_class = 0, 0
        for m in _sorted_mis(masks, s):
            if best >= bound:
                break
            rest = s & ~m
            if 1 + _degree_bound(masks, rest) <= best:
                continue
            value = 1 + solve(rest)
            if value > best:
                best, best_class = value, m
        memo[s] = (best, best_class)
        return best

    full = mask_of(range(g.n))
    value = solve(full)
    classes = []
    s = full
    while s:
        m = memo[s][1]
        classes.append(tuple(mask_members(m)))
        s &= ~m
    logger.debug(f"grundy_number: n={g.n}, value={value}, memo entries={len(memo)}")
    return SolveResult(value, WitnessCertificate(WitnessKind.GRUNDY, tuple(classes)))


def grundy_number_by_orderings(g: Graph, cap: Optional[int] = None) -> int:
    """
    全 n! 順序の first-fit の最大色数（検証用オラクル）

    Raises:
        CapExceededError: n が上限（既定 9）を超える場合
    """
    _check_cap(g.n, ORDERINGS_CAP if cap is None else cap, "orderings")
    if g.n == 0:
        return 0
    ceiling = g.max_degree + 1
    best = 0
    for ordering in permutations(range(g.n)):
        best = max(best, first_fit(g, ordering).max_color)
        if best == ceiling:
            break
    return best


# =============================================================================
# 根付きGrundy数
# =============================================================================


def rooted_grundy(g: Graph, v: int, cap: Optional[int] = None) -> int:
    """
    頂点 v が first-fit で受け得る最大の色

    v を含む頂点プール A 上で、v に隣接する極大独立集合 I（A − v 内）を
    1クラスずつ取り除く再帰 F(A) = max(1, 1 + max_I F(A \\ I))。

    Args:
        g: グラフ
        v: 対象頂点
        cap: 頂点数の上限（既定 16）

    Returns:
        v の最大色

    Raises:
        CapExceededError: n が上限を超える場合
    """
    _check_cap(g.n, ROOTED_GRUNDY_CAP if cap is None else cap, "rooted_grundy")
    if not 0 <= v < g.n:
        raise ValueError(f"Vertex {v} out of range")
    masks = g.masks
    root_bit = 1 << v
    root_nbrs = masks[v]
    memo: Dict[int, int] = {}

    def solve(pool: int) -> int:
        if pool in memo:
            return memo[pool]
        bound = min((root_nbrs & pool).bit_count() + 1, pool.bit_count())
        best = 1
        for cls in _sorted_mis(masks, pool & ~root_bit):
            if best >= bound:
                break
            if not cls & root_nbrs:
                continue
            best = max(best, 1 + solve(pool & ~cls))
        memo[pool] = best
        return best

    return solve(mask_of(range(g.n)))


# =============================================================================
# 小さい色の上界（交差検証用のチェッカー）
# =============================================================================


def degree_bound_holds(g: Graph, v: int, s: int) -> bool:
    """
    次数が s を超える隣接頂点が t 個以下の頂点は色 s+t+1 を超えないか
    """
    t = sum(1 for u in g.adjacency[v] if g.degree(u) > s)
    return rooted_grundy(g, v) <= s + t + 1


def crown_bound_holds(g: Graph, h_vertices: Sequence[int]) -> bool:
    """
    N(V(H)) の最大次数が s のとき、H の頂点は色 Γ(H)+s を超えないか
    """
    inside = set(h_vertices)
    boundary = {u for h in inside for u in g.adjacency[h]} - inside
    s = max((g.degree(u) for u in boundary), default=0)
    sub, _ = induced_subgraph(g, inside)
    gamma_h = grundy_number(sub).value
    return all(rooted_grundy(g, h) <= gamma_h + s for h in inside)


# =============================================================================
# XP 証人探索
# =============================================================================


def connected_subsets(g: Graph, max_size: int) -> Iterator[VertexSet]:
    """
    大きさ max_size 以下の連結誘導部分グラフの頂点集合を重複なく列挙

    各集合はその最小頂点から拡張集合を育てて一度だけ生成する。
    """

    def extend(sub: List[int], sub_mask: int, frontier: List[int], root: int) -> Iterator[VertexSet]:
        yield tuple(sorted(sub))
        if len(sub) == max_size:
            return
        frontier = list(frontier)
        while frontier:
            w = frontier.pop(0)
            blocked = sub_mask
            for u in sub:
                blocked |= g.masks[u]
            fresh = [u for u in mask_members(g.masks[w] & ~blocked) if u > root and u not in frontier]
            sub.append(w)
            yield from extend(sub, sub_mask | (1 << w), frontier + fresh, root)
            sub.pop()

    for root in range(g.n):
        yield from extend([root], 1 << root, [u for u in g.neighbors(root) if u > root], root)


def grundy_witness_search(g: Graph, k: int, budget: Optional[int] = None) -> Optional[WitnessCertificate]:
    """
    大きさ 2^{k-1} 以下の連結誘導部分グラフから Grundy k-証人を探す

    小さい集合から順に調べるので、見つかる証人は極小。

    Args:
        g: グラフ
        k: 目標位数
        budget: 部分グラフの大きさの上限（既定 16）

    Returns:
        位数 k 以上のGrundy証明書（元グラフのID）、なければ None

    Raises:
        CapExceededError: 2^{k-1} が予算を超える場合
    """
    if k < 1:
        raise ValueError("k must be positive")
    budget = WITNESS_SUBGRAPH_BUDGET if budget is None else budget
    size_limit = 2 ** (k - 1)
    if size_limit > budget:
        raise CapExceededError(
            f"Witness search needs subgraphs of size {size_limit} > budget {budget}",
            cap_name="witness_budget",
            limit=budget,
        )
    candidates = sorted(connected_subsets(g, min(size_limit, g.n)), key=lambda s: (len(s), s))
    for subset in candidates:
        if len(subset) < k:
            continue
        sub, mapping = induced_subgraph(g, subset)
        if sub.max_degree + 1 < k:
            continue
        result = grundy_number(sub)
        if result.value >= k:
            inverse = {new: old for old, new in mapping.items()}
            logger.debug(f"Grundy {k}-witness found on {subset}")
            return result.certificate.relabel(inverse)
    return None


# =============================================================================
# 中心指向探索（部分Grundy / b彩色）
# =============================================================================


def _assign_supports(g: Graph, color_of: Dict[int, int], demands: List[Tuple[int, int]]) -> bool:
    """
    各要求 (中心, 色 j) に色 j の隣接頂点を用意する

    既に満たされた要求は飛ばし、候補の最も少ない要求から分岐する。color_of を更新する。
    """
    chosen: Optional[Tuple[int, int]] = None
    chosen_options: List[int] = []
    for center, color in demands:
        if any(color_of.get(u) == color for u in g.adjacency[center]):
            continue
        options = [
            w for w in g.neighbors(center)
            if w not in color_of and all(color_of.get(x) != color for x in g.adjacency[w])
        ]
        if not options:
            return False
        if chosen is None or len(options) < len(chosen_options):
            chosen, chosen_options = (center, color), options
            if len(options) == 1:
                break
    if chosen is None:
        return True
    color = chosen[1]
    for w in chosen_options:
        color_of[w] = color
        if _assign_supports(g, color_of, demands):
            return True
        del color_of[w]
    return False


def _certificate_from_assignment(
    kind: WitnessKind, k: int, color_of: Dict[int, int], centers: Dict[int, int]
) -> WitnessCertificate:
    classes = [sorted(v for v, c in color_of.items() if c == color) for color in range(1, k + 1)]
    center_list = tuple(centers.get(color, classes[color - 1][0]) for color in range(1, k + 1))
    return WitnessCertificate(kind, tuple(tuple(c) for c in classes), center_list)


def _single_vertex_certificate(kind: WitnessKind) -> WitnessCertificate:
    return WitnessCertificate(kind, ((0,),), (0,))


def find_partial_grundy_witness(g: Graph, k: int, cap: Optional[int] = None) -> Optional[WitnessCertificate]:
    """
    位数 k の部分Grundy証人を中心指向探索で探す

    色 k, k-1, ..., 2 の中心を順に推測し（色 1 のクラスは色 2 の中心の支持で空でなくなる）、
    各中心に下位の色の支持頂点を割り当てる。証人の大きさは k^2 以下。

    Args:
        g: グラフ
        k: 目標位数
        cap: 頂点数の上限

    Returns:
        証明書、なければ None
    """
    if k < 1:
        raise ValueError("k must be positive")
    _check_cap(g.n, CENTER_SEARCH_CAP if cap is None else cap, "center_search")
    if k > g.n or k > g.max_degree + 1:
        return None
    if k == 1:
        return _single_vertex_certificate(WitnessKind.PARTIAL_GRUNDY)

    centers: Dict[int, int] = {}

    def place(color: int) -> Optional[WitnessCertificate]:
        if color == 1:
            color_of = {v: c for c, v in centers.items()}
            demands = [(v, j) for c, v in sorted(centers.items(), reverse=True) for j in range(1, c)]
            if _assign_supports(g, color_of, demands):
                return _certificate_from_assignment(WitnessKind.PARTIAL_GRUNDY, k, color_of, centers)
            return None
        used = set(centers.values())
        for v in range(g.n):
            if v in used or g.degree(v) < color - 1:
                continue
            centers[color] = v
            found = place(color - 1)
            del centers[color]
            if found:
                return found
        return None

    return place(k)


def find_b_core_witness(g: Graph, k: int, cap: Optional[int] = None) -> Optional[WitnessCertificate]:
    """
    位数 k のb彩色コア証人を中心指向探索で探す

    色は入れ替え可能なので中心は昇順の k 部分集合として推測し、i 番目に色 i を与える。

    Args:
        g: グラフ
        k: 目標位数
        cap: 頂点数の上限

    Returns:
        証明書、なければ None
    """
    if k < 1:
        raise ValueError("k must be positive")
    _check_cap(g.n, CENTER_SEARCH_CAP if cap is None else cap, "center_search")
    if k > g.n:
        return None
    if k == 1:
        return _single_vertex_certificate(WitnessKind.B_COLORING)
    eligible = [v for v in range(g.n) if g.degree(v) >= k - 1]
    for chosen in combinations(eligible, k):
        centers = {i + 1: v for i, v in enumerate(chosen)}
        color_of = {v: c for c, v in centers.items()}
        demands = [(v, j) for c, v in centers.items() for j in range(1, k + 1) if j != c]
        if _assign_supports(g, color_of, demands):
            return _certificate_from_assignment(WitnessKind.B_COLORING, k, color_of, centers)
    return None


def _b_core_upper_bound(g: Graph) -> int:
    """k 個以上の頂点が次数 k-1 以上となる最大の k"""
    degrees = sorted((g.degree(v) for v in range(g.n)), reverse=True)
    best = 0
    for i, d in enumerate(degrees, start=1):
        if d >= i - 1:
            best = i
    return best


def _optimum_by_decision(
    g: Graph, kind: WitnessKind, decide: Callable[[Graph, int], Optional[WitnessCertificate]], upper: int
) -> SolveResult:
    if g.n == 0:
        return SolveResult(0, WitnessCertificate(kind, (), ()))
    best = _single_vertex_certificate(kind)
    for k in range(2, upper + 1):
        cert = decide(g, k)
        if cert is None:
            break
        best = cert
    return SolveResult(best.order, best)


# =============================================================================
# 集合分割列挙（オラクル）
# =============================================================================


def _order_blocks_partial_grundy(g: Graph, blocks: List[List[int]]) -> Optional[WitnessCertificate]:
    """
    ブロックを部分Grundy彩色として並べられるか

    残りの全ブロックを見る頂点を持つブロックを最上位から順に剥がす。
    """
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    seen = {v: {block_of[u] for u in g.adjacency[v] if u in block_of} for v in block_of}
    remaining = list(range(len(blocks)))
    top_down: List[Tuple[int, int]] = []
    while remaining:
        chosen = None
        for i in remaining:
            others = set(remaining) - {i}
            for v in blocks[i]:
                if others <= seen[v]:
                    chosen = (i, v)
                    break
            if chosen:
                break
        if chosen is None:
            return None
        top_down.append(chosen)
        remaining.remove(chosen[0])
    bottom_up = top_down[::-1]
    return WitnessCertificate(
        WitnessKind.PARTIAL_GRUNDY,
        tuple(tuple(sorted(blocks[i])) for i, _ in bottom_up),
        tuple(v for _, v in bottom_up),
    )


def _blocks_as_b_coloring(g: Graph, blocks: List[List[int]]) -> Optional[WitnessCertificate]:
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    centers = []
    for i, block in enumerate(blocks):
        others = set(range(len(blocks))) - {i}
        center = next(
            (v for v in sorted(block) if others <= {block_of[u] for u in g.adjacency[v] if u in block_of}),
            None,
        )
        if center is None:
            return None
        centers.append(center)
    return WitnessCertificate(WitnessKind.B_COLORING, tuple(tuple(sorted(b)) for b in blocks), tuple(centers))


def _enumerate_partitions(g: Graph, kind: WitnessKind, upper: int) -> SolveResult:
    """
    部分集合の独立ブロックへの分割を制限成長列の順で列挙し、最良の証人を返す
    """
    evaluate = _order_blocks_partial_grundy if kind == WitnessKind.PARTIAL_GRUNDY else _blocks_as_b_coloring
    blocks: List[List[int]] = []
    best: List = [0, WitnessCertificate(kind, (), ())]

    def recurse(v: int) -> None:
        if len(blocks) + (g.n - v) <= best[0] or best[0] >= upper:
            return
        if v == g.n:
            cert = evaluate(g, blocks)
            if cert is not None:
                best[0], best[1] = cert.order, cert
            return
        for block in blocks:
            if not any(g.has_edge(v, u) for u in block):
                block.append(v)
                recurse(v + 1)
                block.pop()
        if len(blocks) < upper:
            blocks.append([v])
            recurse(v + 1)
            blocks.pop()
        recurse(v + 1)

    recurse(0)
    return SolveResult(best[0], best[1])


# =============================================================================
# 最適値ソルバー
# =============================================================================


def partial_grundy_number(g: Graph, method: str = "auto", cap: Optional[int] = None) -> SolveResult:
    """
    部分Grundy数 Γ'(G)

    Args:
        g: グラフ
        method: "partition"（集合分割列挙）/ "center"（中心指向探索）/
            "auto"（小さいグラフは分割列挙、それ以外は中心指向）
        cap: 頂点数の上限（分割列挙の既定 12）

    Returns:
        SolveResult

    Raises:
        CapExceededError: n が上限を超える場合
    """
    if method == "auto":
        method = "partition" if g.n <= PARTITION_AUTO_LIMIT else "center"
    upper = g.max_degree + 1 if g.n else 0
    if method == "partition":
        _check_cap(g.n, PARTITION_ENUM_CAP if cap is None else cap, "partition")
        result = _enumerate_partitions(g, WitnessKind.PARTIAL_GRUNDY, upper)
    elif method == "center":
        _check_cap(g.n, CENTER_SEARCH_CAP if cap is None else cap, "center_search")
        result = _optimum_by_decision(g, WitnessKind.PARTIAL_GRUNDY, find_partial_grundy_witness, upper)
    else:
        raise ValueError(f"Unknown method: {method}")
    logger.debug(f"partial_grundy_number ({method}): n={g.n}, value={result.value}")
    return result


def b_chromatic_core_order(g: Graph, method: str = "center", cap: Optional[int] = None) -> SolveResult:
    """
    b彩色コアの最大位数

    Args:
        g: グラフ
        method: "center"（中心指向探索）/ "partition"（部分集合+分割列挙、検証用）
        cap: 頂点数の上限（既定 10）

    Returns:
        SolveResult

    Raises:
        CapExceededError: n が上限を超える場合
    """
    _check_cap(g.n, BCORE_CAP if cap is None else cap, "bcore")
    upper = _b_core_upper_bound(g)
    if method in ("center", "auto"):
        result = _optimum_by_decision(g, WitnessKind.B_COLORING, find_b_core_witness, upper)
    elif method == "partition":
        result = _enumerate_partitions(g, WitnessKind.B_COLORING, upper)
    else:
        raise ValueError(f"Unknown method: {method}")
    logger.debug(f"b_chromatic_core_order ({method}): n={g.n}, value={result.value}")
    return result


WITNESS_FINDERS = {
    WitnessKind.PARTIAL_GRUNDY: find_partial_grundy_witness,
    WitnessKind.B_COLORING: find_b_core_witness,
}
