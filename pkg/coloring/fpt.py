"""
FPTアルゴリズムモジュール

K_{t,t} を部分グラフに含まないグラフ上で、部分Grundy彩色とb彩色コアの
位数 k の判定を行う。

- separating_family: (A, B) 分離族（自明族 / ハッシュ族×バケット選択）
- solve_almost_bounded_degree: 高次数頂点が s 個以下のグラフでの判定
- anti_biclique_extract / clique_or_multipartite_is / star_forest_extract:
  構成的な抽出補題
- solve_ktt_free: 上記を組み合わせた判定

faithful モードは閾値の式をそのまま強制し、practical モードは小さな閾値で
ベストエフォート実行する。どちらのモードでも出力は構造的に検証される。
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import ceil, comb, log2
from typing import Any, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from config import (
    FPT_MODES,
    SEPARATING_FAMILY_MAX_SETS,
    TOWER_BASE,
    TOWER_EXACT_BITS,
    get_default_caps,
)
from coloring.colorings import (
    Verdict,
    WitnessCertificate,
    WitnessKind,
    verify_certificate,
)
from coloring.errors import (
    CapExceededError,
    ContractBreachError,
    ExtractionFailure,
    MalformedCertificateError,
    PreconditionError,
)
from coloring.exact import WITNESS_FINDERS
from coloring.graph_core import (
    Graph,
    LabeledComponent,
    VertexSet,
    connected_components,
    find_biclique,
    find_labeled_isomorphism,
    has_biclique,
    induced_subgraph,
    is_clique,
    is_independent,
    iter_subsets_by_size,
    mask_of,
    mask_members,
    ramsey_bound,
    ramsey_split,
)

logger = logging.getLogger(__name__)

PROBLEM_KINDS = {
    "partial-grundy": WitnessKind.PARTIAL_GRUNDY,
    "partial_grundy": WitnessKind.PARTIAL_GRUNDY,
    "bcore": WitnessKind.B_COLORING,
    "b_coloring": WitnessKind.B_COLORING,
}


def problem_kind(problem: Union[str, WitnessKind]) -> WitnessKind:
    """
    問題名を証人の種類に変換

    Args:
        problem: "partial-grundy" / "bcore" または WitnessKind

    Returns:
        WitnessKind（GRUNDY は対象外）
    """
    if isinstance(problem, WitnessKind):
        kind = problem
    elif problem in PROBLEM_KINDS:
        kind = PROBLEM_KINDS[problem]
    else:
        raise ValueError(f"Unknown problem: {problem!r}")
    if kind not in WITNESS_FINDERS:
        raise ValueError(f"FPT algorithms do not support {kind.value}")
    return kind


def _check_mode(mode: str) -> None:
    if mode not in FPT_MODES:
        raise ValueError(f"Unknown mode: {mode!r} (expected one of {FPT_MODES})")


# =============================================================================
# 分離族
# =============================================================================


@dataclass(frozen=True)
class SeparatingFamily:
    """
    (A, B) 分離族

    大きさ a 以下の A と大きさ b 以下の B（互いに素）の任意の組に対し、
    A ⊆ S かつ B ∩ S = ∅ となる S を含む。台集合は 0..universe_size-1。
    """

    universe_size: int
    a: int
    b: int
    sets: Tuple[VertexSet, ...]
    construction: str = "trivial"

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.sets)

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        return tuple(mask_of(s) for s in self.sets)

    def separator_for(self, a_side: Iterable[int], b_side: Iterable[int]) -> Optional[VertexSet]:
        """A を含み B と交わらない最初の集合"""
        a_mask, b_mask = mask_of(a_side), mask_of(b_side)
        for s, mask in zip(self.sets, self.masks):
            if mask & a_mask == a_mask and not mask & b_mask:
                return s
        return None

    def verify_exhaustive(self) -> Verdict:
        """
        分離性を全列挙で検証（小さな n, a, b 向け）

        A ごとに B は取り得る最大の大きさだけを調べれば十分。
        """
        n = self.universe_size
        universe = list(range(n))
        for a_side in iter_subsets_by_size(universe, self.a):
            a_mask = mask_of(a_side)
            rest = [v for v in universe if not a_mask >> v & 1]
            for b_side in combinations(rest, min(self.b, len(rest))):
                b_mask = mask_of(b_side)
                if not any(m & a_mask == a_mask and not m & b_mask for m in self.masks):
                    return Verdict(False, f"No separator for A={list(a_side)}, B={list(b_side)}")
        return Verdict(True)

    def to_dict(self) -> Dict:
        return {
            "universe_size": self.universe_size,
            "a": self.a,
            "b": self.b,
            "construction": self.construction,
            "size": len(self.sets),
        }


def _primes_above(lower: int, count: int) -> List[int]:
    """lower より大きい素数を小さい順に count 個"""
    limit = max(32, 4 * (lower + 1))
    while True:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(limit ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        primes = np.flatnonzero(sieve)
        primes = primes[primes > lower]
        if len(primes) >= count:
            return [int(p) for p in primes[:count]]
        limit *= 2


def _ball_size(n: int, radius: int) -> int:
    """大きさ radius 以下の部分集合の数"""
    return sum(comb(n, j) for j in range(min(radius, n) + 1))


def _hash_parameters(n: int, m: int) -> List[Tuple[int, int]]:
    """
    (p, p2) の組

    第1段 x mod p は m 点集合の任意の差を割り切らない素数 p で単射になる。
    差は n 未満なので m より大きい素因数は log2 n 個未満であり、
    C(m,2)·⌈log2 n⌉ + 1 個の素数のどれかが単射を与える。
    第2段 ((r·y) mod p2) mod m^2 は衝突確率 2/m^2 以下なので、ある r で単射。
    """
    count = comb(m, 2) * max(1, ceil(log2(max(n, 2)))) + 1
    primes = _primes_above(m, count + 1)
    return list(zip(primes[:-1], primes[1:]))


def _hash_family_size(n: int, a: int, b: int) -> int:
    m = a + b
    per_hash = _ball_size(m * m, min(a, b))
    return sum(p2 - 1 for _, p2 in _hash_parameters(n, m)) * per_hash


def _hash_family(n: int, a: int, b: int) -> List[int]:
    """ハッシュ族とバケット部分集合の積で分離族のマスクを作る"""
    m = a + b
    buckets = m * m
    small = min(a, b)
    full = (1 << n) - 1
    bucket_choices = list(iter_subsets_by_size(range(buckets), small))
    seen_hashes = set()
    masks = set()
    for p, p2 in _hash_parameters(n, m):
        for r in range(1, p2):
            h = tuple(((r * (x % p)) % p2) % buckets for x in range(n))
            if h in seen_hashes:
                continue
            seen_hashes.add(h)
            bucket_masks = [0] * buckets
            for x, bucket in enumerate(h):
                bucket_masks[bucket] |= 1 << x
            for chosen in bucket_choices:
                mask = 0
                for bucket in chosen:
                    mask |= bucket_masks[bucket]
                # a ≤ b なら A のバケットを選び、そうでなければ B のバケットを除く
                masks.add(mask if a <= b else full ^ mask)
    logger.debug(f"Hash family: {len(seen_hashes)} distinct hashes, {len(masks)} sets")
    return list(masks)


def separating_family(n: int, a: int, b: int, construction: str = "auto") -> SeparatingFamily:
    """
    (A, B) 分離族を構成

    自明族（大きさ a 以下の全部分集合、または大きさ b 以下の部分集合の補集合）と
    ハッシュ族×バケット選択の積のうち小さい方を使う。

    Args:
        n: 台集合の大きさ
        a: A の大きさの上限
        b: B の大きさの上限
        construction: "auto" | "trivial" | "hash"

    Returns:
        SeparatingFamily

    Raises:
        CapExceededError: 族の大きさが生成上限を超える場合

    Example:
        >>> separating_family(8, 1, 1).verify_exhaustive().ok
        True
    """
    if min(n, a, b) < 0:
        raise ValueError("n, a and b must be non-negative")
    if construction not in ("auto", "trivial", "hash"):
        raise ValueError(f"Unknown construction: {construction!r}")
    a, b = min(a, n), min(b, n)
    universe = tuple(range(n))

    def build(sets: Iterable[VertexSet], kind: str) -> SeparatingFamily:
        ordered = tuple(sorted(set(sets), key=lambda s: (len(s), s)))
        return SeparatingFamily(n, a, b, ordered, kind)

    if a == 0:
        return build([()], "trivial")
    if b == 0:
        return build([universe], "trivial")

    trivial_size = min(_ball_size(n, a), _ball_size(n, b))
    use_hash = construction == "hash"
    if construction == "auto":
        use_hash = _hash_family_size(n, a, b) < trivial_size
    size = _hash_family_size(n, a, b) if use_hash else trivial_size
    if size > SEPARATING_FAMILY_MAX_SETS:
        raise CapExceededError(
            f"Separating family too large: {size} > {SEPARATING_FAMILY_MAX_SETS}",
            cap_name="separating_family",
            limit=SEPARATING_FAMILY_MAX_SETS,
        )

    if use_hash:
        family = build((tuple(mask_members(m)) for m in _hash_family(n, a, b)), "hash")
    elif _ball_size(n, a) <= _ball_size(n, b):
        family = build(iter_subsets_by_size(universe, a), "trivial")
    else:
        full = mask_of(universe)
        family = build(
            (tuple(mask_members(full ^ mask_of(c))) for c in iter_subsets_by_size(universe, b)),
            "trivial",
        )
    logger.debug(f"separating_family(n={n}, a={a}, b={b}): {family.construction}, {len(family)} sets")
    return family


# =============================================================================
# 閾値
# =============================================================================


@dataclass(frozen=True)
class TowerNumber:
    """
    指数の塔 base^base^...^top（base が height 個）に 2^scale_log2 を掛けた数

    整数として計算できないほど大きい場合にだけ作られるので、
    どの int よりも大きいものとして比較する。
    """

    height: int
    top: int
    scale_log2: int = 0
    base: int = TOWER_BASE

    def _compare(self, other: Any) -> int:
        if isinstance(other, TowerNumber):
            mine = (self.height, self.top, self.scale_log2)
            theirs = (other.height, other.top, other.scale_log2)
            return (mine > theirs) - (mine < theirs)
        if isinstance(other, int):
            return 1
        return NotImplemented

    def __lt__(self, other: Any) -> bool:
        result = self._compare(other)
        return result if result is NotImplemented else result < 0

    def __le__(self, other: Any) -> bool:
        result = self._compare(other)
        return result if result is NotImplemented else result <= 0

    def __gt__(self, other: Any) -> bool:
        result = self._compare(other)
        return result if result is NotImplemented else result > 0

    def __ge__(self, other: Any) -> bool:
        result = self._compare(other)
        return result if result is NotImplemented else result >= 0

    def scaled(self, log2_factor: int) -> "TowerNumber":
        return TowerNumber(self.height, self.top, self.scale_log2 + log2_factor, self.base)

    def __str__(self) -> str:
        tower = f"{self.base}^^{self.height}(top={self.top})"
        return f"2^{self.scale_log2}*{tower}" if self.scale_log2 else tower


Magnitude = Union[int, TowerNumber]


def tower(height: int, top: int, base: int = TOWER_BASE) -> Magnitude:
    """
    base を height 個積んだ指数の塔（最上段の指数 top）

    Example:
        >>> tower(1, 1)
        8
        >>> tower(2, 1)
        16777216
    """
    if height < 0 or top < 0:
        raise ValueError("Tower height and top must be non-negative")
    value = top
    for _ in range(height):
        if value * (base.bit_length() - 1) > TOWER_EXACT_BITS:
            return TowerNumber(height, top, 0, base)
        value = base ** value
    return value


def _magnitude_to_json(value: Optional[Magnitude]) -> Any:
    if value is None or isinstance(value, TowerNumber):
        return None if value is None else str(value)
    return value if value.bit_length() <= 63 else str(value)


@dataclass(frozen=True)
class Thresholds:
    """
    抽出に使う閾値

    faithful モードでは f = 2^{2t+k(tk^t+t)}、M = 8 を k 個積んだ塔（最上段 t）、
    M' = max(M, N(t,1/k))、g = 2^{k(tk^t+t)}·M'。N(t,1/k) が未指定なら M' と g は None。
    """

    t: int
    k: int
    mode: str
    f_tk: Magnitude
    g_tk: Optional[Magnitude]
    m: Magnitude
    m_prime: Optional[Magnitude]
    n_t_eps: Optional[int] = None

    @property
    def degree_threshold(self) -> Optional[Magnitude]:
        """g + f（高次数頂点の判定に使う）"""
        if self.g_tk is None:
            return None
        if isinstance(self.g_tk, TowerNumber):
            return self.g_tk
        return self.g_tk + self.f_tk

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.degree_threshold, TowerNumber)

    def to_dict(self) -> Dict:
        return {
            "t": self.t,
            "k": self.k,
            "mode": self.mode,
            "f": _magnitude_to_json(self.f_tk),
            "g": _magnitude_to_json(self.g_tk),
            "M": _magnitude_to_json(self.m),
            "M_prime": _magnitude_to_json(self.m_prime),
            "N_t_eps": self.n_t_eps,
        }


def thresholds(
    t: int,
    k: int,
    mode: str = "faithful",
    n_t_eps: Optional[int] = None,
    overrides: Optional[Mapping[str, int]] = None,
) -> Thresholds:
    """
    閾値を計算

    Args:
        t: 禁止する K_{t,t} の大きさ
        k: 目標位数
        mode: "faithful" | "practical"
        n_t_eps: N(t,1/k)（式が与えられていない定数。faithful では g の計算に必須）
        overrides: practical モードの上書き（キー f, g, m_prime）

    Returns:
        Thresholds

    Example:
        >>> thresholds(1, 1).f_tk
        16
        >>> thresholds(2, 2).f_tk == 2 ** 24
        True
    """
    if t < 1 or k < 1:
        raise ValueError("t and k must be positive")
    _check_mode(mode)
    if n_t_eps is not None and n_t_eps < 1:
        raise ValueError("N(t,1/k) must be positive")

    if mode == "practical":
        values = {"f": k, "g": 0, "m_prime": k}
        for key, value in (overrides or {}).items():
            if key not in values:
                raise ValueError(f"Unknown threshold override: {key!r}")
            if value < 0:
                raise ValueError(f"Threshold {key} must be non-negative")
            values[key] = value
        return Thresholds(t, k, mode, values["f"], values["g"], values["m_prime"], values["m_prime"], n_t_eps)

    if overrides:
        raise ValueError("Threshold overrides are only allowed in practical mode")
    exponent = k * (t * k ** t + t)
    f_tk = 2 ** (2 * t + exponent)
    m = tower(k, t)
    m_prime: Optional[Magnitude] = None
    g_tk: Optional[Magnitude] = None
    if n_t_eps is not None:
        m_prime = m if isinstance(m, TowerNumber) else max(m, n_t_eps)
        g_tk = m_prime.scaled(exponent) if isinstance(m_prime, TowerNumber) else (2 ** exponent) * m_prime
    return Thresholds(t, k, mode, f_tk, g_tk, m, m_prime, n_t_eps)


# =============================================================================
# 星森・クリーク証人
# =============================================================================


@dataclass(frozen=True)
class StarOrCliqueWitness:
    """
    k 頂点クリーク、または誘導 kK_{1,k}（中心 centers と葉集合 leaf_sets）
    """

    clique: Optional[VertexSet] = None
    centers: VertexSet = ()
    leaf_sets: Tuple[VertexSet, ...] = ()

    def __post_init__(self):
        if (self.clique is None) == (not self.centers):
            raise MalformedCertificateError("Witness must be either a clique or a set of stars")
        if len(self.centers) != len(self.leaf_sets):
            raise MalformedCertificateError("Every center needs a leaf set")

    @property
    def variant(self) -> str:
        return "clique" if self.clique is not None else "stars"

    @property
    def k(self) -> int:
        return len(self.clique) if self.clique is not None else len(self.centers)

    def verify(self, g: Graph, k: Optional[int] = None) -> Verdict:
        """クリーク、または誘導 kK_{1,k} であることを検証"""
        k = self.k if k is None else k
        if self.clique is not None:
            if len(set(self.clique)) != k:
                return Verdict(False, f"Clique has {len(set(self.clique))} vertices, expected {k}")
            if not is_clique(g, self.clique):
                return Verdict(False, "Clique vertices are not pairwise adjacent")
            return Verdict(True)

        if len(self.centers) != k:
            return Verdict(False, f"Expected {k} stars, got {len(self.centers)}")
        if not is_independent(g, self.centers):
            return Verdict(False, "Centers are not pairwise non-adjacent")
        seen = set(self.centers)
        for center, leaves in zip(self.centers, self.leaf_sets):
            if len(leaves) != k:
                return Verdict(False, f"Star at {center} has {len(leaves)} leaves, expected {k}")
            for leaf in leaves:
                if leaf in seen:
                    return Verdict(False, f"Vertex {leaf} is used twice")
                seen.add(leaf)
                adjacent_centers = [c for c in self.centers if g.has_edge(leaf, c)]
                if adjacent_centers != [center]:
                    return Verdict(False, f"Leaf {leaf} is not private to center {center}")
        all_leaves = [v for leaves in self.leaf_sets for v in leaves]
        if not is_independent(g, all_leaves):
            return Verdict(False, "Leaves are not pairwise non-adjacent")
        return Verdict(True)

    def to_certificate(self, problem: Union[str, WitnessKind]) -> WitnessCertificate:
        """
        位数 k の証明書に変換

        クリークは1頂点ずつのクラス。星は中心 i に色 i、その葉に [k] \\ {i} を割り当てる
        （葉は k-1 本で足りるので残りは無彩色）。b彩色の中心は全ての他色を見るので、
        同じクラスがそのまま部分Grundy証人になる。
        """
        kind = problem_kind(problem)
        if self.clique is not None:
            members = tuple(sorted(self.clique))
            return WitnessCertificate(kind, tuple((v,) for v in members), members)
        k = self.k
        classes: List[List[int]] = [[c] for c in self.centers]
        for i, leaves in enumerate(self.leaf_sets):
            others = [j for j in range(k) if j != i]
            for leaf, j in zip(sorted(leaves), others):
                classes[j].append(leaf)
        return WitnessCertificate(kind, tuple(tuple(c) for c in classes), tuple(self.centers))

    def to_dict(self) -> Dict:
        if self.clique is not None:
            return {"variant": "clique", "clique": list(self.clique)}
        return {
            "variant": "stars",
            "centers": list(self.centers),
            "leaf_sets": [list(leaves) for leaves in self.leaf_sets],
        }


# =============================================================================
# 抽出補題
# =============================================================================



class AntiBicliqueResult(NamedTuple):
    """辺で結ばれない2集合 (A', B')"""

    a_side: VertexSet
    b_side: VertexSet


def _sorted_unique(vertices: Iterable[int]) -> List[int]:
    return sorted(set(vertices))


def anti_biclique_extract(
    g: Graph,
    a_side: Iterable[int],
    b_side: Iterable[int],
    n_target: int,
    t: int,
    mode: str = "practical",
) -> AntiBicliqueResult:
    """
    A と B から、間に辺のない大きさ N 以上の部分集合を取り出す

    B の先頭 N+t 頂点 b_1, b_2, ... について A_{i+1} を N(b_i) ∩ A_i
    （半分以上のとき）または A_i \\ N(b_i) とする半減列を作り、
    A' を最後の集合、B' を A' と反完全な B の頂点全体とする。

    Args:
        g: グラフ
        a_side, b_side: 互いに素な頂点集合
        n_target: 目標の大きさ N
        t: 禁止する K_{t,t} の大きさ
        mode: faithful なら前提 |A| ≥ N·2^{N+t}, |B| ≥ N+t, N ≥ t を強制

    Returns:
        AntiBicliqueResult（構造検証済み）

    Raises:
        PreconditionError: faithful モードで前提が満たされない場合
        ContractBreachError: 半減列の途中で K_{t,t} が見つかった場合
        ExtractionFailure: practical モードで大きさが足りなかった場合
    """
    _check_mode(mode)
    a_list, b_list = _sorted_unique(a_side), _sorted_unique(b_side)
    if set(a_list) & set(b_list):
        raise ValueError("A and B must be disjoint")
    if n_target < 1 or t < 1:
        raise ValueError("N and t must be positive")
    steps = n_target + t
    if mode == "faithful":
        if n_target < t:
            raise PreconditionError(f"N must be at least t: {n_target} < {t}")
        if len(a_list) < n_target * 2 ** steps:
            raise PreconditionError(f"|A| = {len(a_list)} < N*2^(N+t) = {n_target * 2 ** steps}")
        if len(b_list) < steps:
            raise PreconditionError(f"|B| = {len(b_list)} < N+t = {steps}")

    current = mask_of(a_list)
    complete_with: List[int] = []
    for b in b_list[:steps]:
        adjacent = current & g.masks[b]
        if 2 * adjacent.bit_count() >= current.bit_count():
            current = adjacent
            complete_with.append(b)
        else:
            current &= ~adjacent

    a_prime = tuple(mask_members(current))
    if len(complete_with) >= t and len(a_prime) >= t:
        witness = (tuple(complete_with[:t]), a_prime[:t])
        raise ContractBreachError(
            f"K_{{{t},{t}}} found while halving: {witness}", witness=witness
        )
    b_prime = tuple(b for b in b_list if not g.masks[b] & current)
    if len(a_prime) < n_target or len(b_prime) < n_target:
        raise ExtractionFailure(
            f"anti-biclique extraction too small: |A'|={len(a_prime)}, |B'|={len(b_prime)}, N={n_target}",
            step="anti_biclique",
        )
    if any(g.masks[b] & current for b in b_prime):
        raise ExtractionFailure("Cross edge left between A' and B'", step="anti_biclique")
    logger.debug(f"anti_biclique_extract: |A'|={len(a_prime)}, |B'|={len(b_prime)}")
    return AntiBicliqueResult(a_prime, b_prime)


@dataclass(frozen=True)
class LeafMaterial:
    """clique_or_multipartite_is の結果: クリーク、または各部分の独立集合"""

    clique: Optional[VertexSet] = None
    independent_sets: Tuple[VertexSet, ...] = ()

    @property
    def is_clique(self) -> bool:
        return self.clique is not None


def clique_or_multipartite_is(
    g: Graph,
    parts: Sequence[Iterable[int]],
    t: int,
    mode: str = "practical",
    target: Optional[int] = None,
) -> LeafMaterial:
    """
    k 頂点クリーク、または各部分から k 頂点ずつ取った独立集合を抽出

    A_1 と A_i (i = 2..k) の間で anti_biclique_extract を順に適用し、
    残りの部分に対して同じ手続きを繰り返す。最後に各部分で Ramsey 抽出を行う。

    Args:
        g: グラフ
        parts: 互いに素な部分 A_1..A_k
        t: 禁止する K_{t,t} の大きさ
        mode: faithful なら各部分の大きさ ≥ M（塔）を強制
        target: 各部分から取る独立集合の大きさ（既定は k）

    Returns:
        LeafMaterial（構造検証済み）
    """
    _check_mode(mode)
    current = [_sorted_unique(p) for p in parts]
    k = len(current)
    if k == 0:
        raise ValueError("At least one part is required")
    seen: set = set()
    for part in current:
        if seen & set(part):
            raise ValueError("Parts must be pairwise disjoint")
        seen |= set(part)
    size = k if target is None else target

    if mode == "faithful":
        m = tower(k, t)
        for i, part in enumerate(current):
            if not len(part) >= m:
                raise PreconditionError(f"Part {i + 1} has {len(part)} vertices, needs at least M = {m}")

    # practical では ramsey_split が非厳密に試すので target 個あれば足りる
    n_target = max(t, ramsey_bound(size, size) if mode == "faithful" else size)
    for i in range(k):
        for j in range(i + 1, k):
            result = anti_biclique_extract(g, current[i], current[j], n_target, t, mode)
            current[i], current[j] = list(result.a_side), list(result.b_side)

    independent_sets = []
    for part in current:
        outcome = ramsey_split(g, size, size, part, strict=mode == "faithful")
        if outcome.is_clique:
            logger.debug(f"clique_or_multipartite_is: clique {outcome.members}")
            return LeafMaterial(clique=outcome.members)
        independent_sets.append(outcome.members)

    union = [v for s in independent_sets for v in s]
    if not is_independent(g, union):
        raise ExtractionFailure("Independent sets are not pairwise anti-complete", step="multipartite")
    return LeafMaterial(independent_sets=tuple(independent_sets))


def hyperedge_bound_holds(g: Graph, x_side: Iterable[int], y_side: Iterable[int], x: int, k: int, t: int) -> Verdict:
    """
    {v ∈ X : |N_Y(v) ∩ N_Y(x)| ≥ |N_Y(x)|/k} の大きさが t·k^t 以下か

    N_Y(x) 上の超グラフで、どの t 本の超辺も共通部分が t 未満なら成り立つ。

    Returns:
        Verdict（超えた場合は個数を reason に記録）
    """
    y_mask = mask_of(y_side)
    base = g.masks[x] & y_mask
    base_size = base.bit_count()
    heavy = [v for v in x_side if k * (g.masks[v] & base).bit_count() >= base_size]
    bound = t * k ** t
    if len(heavy) > bound:
        return Verdict(False, f"{len(heavy)} vertices see a 1/{k} fraction of N_Y({x}), bound is {bound}")
    return Verdict(True)


def _greedy_independent_set(g: Graph, vertices: Sequence[int]) -> List[int]:
    """G[vertices] で次数の小さい頂点から取る極大独立集合"""
    pool_mask = mask_of(vertices)
    chosen: List[int] = []
    blocked = 0
    for v in sorted(vertices, key=lambda u: ((g.masks[u] & pool_mask).bit_count(), u)):
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= g.masks[v] | (1 << v)
    return sorted(chosen)


def _independent_centers(g: Graph, x_side: List[int], k: int, t: int, mode: str) -> List[int]:
    """G[X] の独立集合（2t クリークなら K_{t,t} として報告）"""
    wanted = k * (t * k ** t + t)
    try:
        outcome = ramsey_split(g, 2 * t, wanted, x_side, strict=mode == "faithful")
    except ExtractionFailure:
        if mode == "faithful":
            raise
        return _greedy_independent_set(g, x_side)
    if outcome.is_clique:
        members = outcome.members
        witness = (members[:t], members[t:2 * t])
        raise ContractBreachError(f"Clique on {2 * t} vertices contains K_{{{t},{t}}}", witness=witness)
    if mode == "practical":
        greedy = _greedy_independent_set(g, x_side)
        if len(greedy) > len(outcome.members):
            return greedy
    return list(outcome.members)


def star_forest_extract(
    g: Graph,
    x_side: Iterable[int],
    y_side: Iterable[int],
    k: int,
    t: int,
    limits: Thresholds,
) -> StarOrCliqueWitness:
    """
    誘導 kK_{1,k} または k 頂点クリークを抽出

    G[X] の独立集合から中心を1つずつ選ぶ。各段で |N_Y(x)| 最小の x を取り、
    N_Y(x) を X での近傍が一致する類 N_I に分け、x を含む最大の類 N_{I*}
    （大きさ ≥ M'）を x の私有葉候補とする。N_Y(x) の 1/k 以上を見る頂点 X_x と
    I* を X から、N_Y(x) を Y から除いて次の段へ進む。最後に葉候補の上で
    clique_or_multipartite_is を行う。

    Args:
        g: グラフ
        x_side, y_side: 互いに素な頂点集合
        k: 目標位数
        t: 禁止する K_{t,t} の大きさ
        limits: thresholds() の結果

    Returns:
        StarOrCliqueWitness（構造検証済み）

    Raises:
        PreconditionError: faithful モードで |X| ≥ f または |N_Y(x)| ≥ g が満たされない場合
        ContractBreachError: K_{t,t} が見つかった場合
        ExtractionFailure: practical モードでどこかの段が枯渇した場合
    """
    mode = limits.mode
    x_list, y_list = _sorted_unique(x_side), _sorted_unique(y_side)
    if set(x_list) & set(y_list):
        raise ValueError("X and Y must be disjoint")
    y_mask = mask_of(y_list)
    if mode == "faithful":
        if limits.g_tk is None:
            raise PreconditionError("faithful mode needs N(t,1/k) to compute g(t,k)")
        if not len(x_list) >= limits.f_tk:
            raise PreconditionError(f"|X| = {len(x_list)} < f(t,k) = {limits.f_tk}")
        starved = [x for x in x_list if not (g.masks[x] & y_mask).bit_count() >= limits.g_tk]
        if starved:
            raise PreconditionError(f"Vertex {starved[0]} has fewer than g(t,k) neighbors in Y")

    remaining_x = _independent_centers(g, x_list, k, t, mode)
    remaining_y = y_mask
    centers: List[int] = []
    private_sets: List[VertexSet] = []
    for step in range(1, k + 1):
        if not remaining_x:
            raise ExtractionFailure(f"No center candidates left at step {step}", step=f"star {step}")
        x_mask = mask_of(remaining_x)
        nbr = {v: g.masks[v] & remaining_y for v in remaining_x}
        x = min(remaining_x, key=lambda v: (nbr[v].bit_count(), v))
        base = nbr[x]
        base_size = base.bit_count()
        if not base:
            raise ExtractionFailure(f"Center {x} has no neighbors left in Y at step {step}", step=f"star {step}")

        classes: Dict[Tuple[int, ...], List[int]] = {}
        for y in mask_members(base):
            classes.setdefault(tuple(mask_members(g.masks[y] & x_mask)), []).append(y)
        anchor, private = min(classes.items(), key=lambda item: (-len(item[1]), item[0]))
        if len(anchor) >= t and len(private) >= t:
            witness = (anchor[:t], tuple(private[:t]))
            raise ContractBreachError(f"K_{{{t},{t}}} between {anchor} and its common class", witness=witness)
        if not len(private) >= limits.m_prime:
            raise ExtractionFailure(
                f"Step {step}: largest class has {len(private)} vertices, needs {limits.m_prime}",
                step=f"star {step}",
            )

        heavy = [v for v in remaining_x if k * (nbr[v] & base).bit_count() >= base_size]
        if limits.n_t_eps is not None and base_size >= limits.n_t_eps and len(heavy) > t * k ** t:
            found = find_biclique(g, t, t, left=heavy, right=mask_members(base))
            if found:
                raise ContractBreachError(
                    f"{len(heavy)} vertices share a 1/{k} fraction of N_Y({x})", witness=found.sides
                )
            raise PreconditionError(
                f"N(t,1/k) = {limits.n_t_eps} is too small: {len(heavy)} > {t * k ** t} without K_{{{t},{t}}}"
            )

        centers.append(x)
        private_sets.append(tuple(private))
        removed = set(anchor) | set(heavy)
        remaining_x = [v for v in remaining_x if v not in removed]
        remaining_y &= ~base
        logger.debug(f"star step {step}: center {x}, |N_I*|={len(private)}, |X_x|={len(heavy)}")

    material = clique_or_multipartite_is(g, private_sets, t, mode)
    if material.is_clique:
        witness = StarOrCliqueWitness(clique=material.clique)
    else:
        witness = StarOrCliqueWitness(centers=tuple(centers), leaf_sets=material.independent_sets)
    verdict = witness.verify(g, k)
    if not verdict:
        raise ExtractionFailure(f"Extracted witness failed verification: {verdict.reason}", step="verify")
    logger.info(f"star_forest_extract: {witness.variant} witness of order {k}")
    return witness


# =============================================================================
# 高次数頂点の少ないグラフ
# =============================================================================


@dataclass(frozen=True)
class FptResult:
    """判定結果。真偽値は decision"""

    decision: bool
    certificate: Optional[WitnessCertificate] = None
    audit: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[StarOrCliqueWitness] = None

    def __bool__(self) -> bool:
        return self.decision

    def to_dict(self) -> Dict:
        return {
            "decision": self.decision,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "witness": self.witness.to_dict() if self.witness else None,
            "audit": self.audit,
        }


def _classify_components(
    g: Graph, components: List[VertexSet], anchor: VertexSet, iso_cap: int
) -> List[List[LabeledComponent]]:
    """アンカーへのラベルを保つ同型で成分を類別（類は最小頂点の順）"""
    classes: List[List[LabeledComponent]] = []
    for comp in components:
        labeled = LabeledComponent.from_subset(g, comp, anchor)
        for members in classes:
            rep = members[0]
            if rep.signature == labeled.signature and find_labeled_isomorphism(rep, labeled, iso_cap) is not None:
                members.append(labeled)
                break
        else:
            classes.append([labeled])
    return classes


def _multiplicity_vectors(sizes: Sequence[int], counts: Sequence[int], budget: int) -> Iterator[Tuple[int, ...]]:
    """Σ x_i·sizes[i] ≤ budget を満たす 0 ≤ x_i ≤ counts[i] を辞書順に列挙"""
    vector: List[int] = []

    def extend(i: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if i == len(sizes):
            yield tuple(vector)
            return
        for x in range(min(counts[i], remaining // sizes[i]) + 1):
            vector.append(x)
            yield from extend(i + 1, remaining - x * sizes[i])
            vector.pop()

    return extend(0, budget)


def solve_almost_bounded_degree(
    g: Graph,
    k: int,
    d: int,
    s: int,
    problem: Union[str, WitnessKind],
    caps: Optional[Mapping[str, int]] = None,
) -> FptResult:
    """
    次数 d を超える頂点が s 個以下のグラフで位数 k の証人を探す

    証人は k^2 頂点以下なので、高次数頂点集合 X との交わり I と、
    残りの部分を含みその近傍（d·k^2 頂点以下）を避ける分離集合 S を総当たりする。
    G[S] の小さい成分を I へのラベル付き同型で類別し、各類から何個使うかの
    多重度ベクトルごとに W を組み立て、G[W ∪ I] を厳密ソルバーで判定する。

    Args:
        g: グラフ
        k: 目標位数
        d: 次数の閾値
        s: 高次数頂点の数の上限
        problem: "partial-grundy" | "bcore"
        caps: ソルバー上限（center_search, labeled_iso）

    Returns:
        FptResult（証明書は元グラフのIDで検証済み）

    Raises:
        PreconditionError: 次数 d を超える頂点が s 個より多い場合
    """
    kind = problem_kind(problem)
    if k < 1 or d < 0 or s < 0:
        raise ValueError("k must be positive and d, s non-negative")
    limits = dict(get_default_caps())
    limits.update(caps or {})
    high = [v for v in range(g.n) if g.degree(v) > d]
    if len(high) > s:
        raise PreconditionError(f"{len(high)} vertices have degree > {d}, allowed at most {s}")

    audit: Dict[str, Any] = {
        "branch": "bounded-degree",
        "k": k,
        "d": d,
        "s": s,
        "high_degree": len(high),
        "anchors": 0,
        "separators": 0,
        "subgraphs_checked": 0,
    }
    if g.n == 0:
        return FptResult(False, None, audit)

    high_set = set(high)
    rest = [v for v in range(g.n) if v not in high_set]
    budget = k * k
    family = separating_family(len(rest), budget, min(d * budget, len(rest)))
    audit["family"] = family.to_dict()
    finder = WITNESS_FINDERS[kind]
    checked: set = set()

    for anchor in iter_subsets_by_size(high, budget):
        audit["anchors"] += 1
        room = budget - len(anchor)
        for sep_index, local in enumerate(family.sets):
            audit["separators"] += 1
            separator = [rest[i] for i in local]
            components = [c for c in connected_components(g, separator) if len(c) <= room]
            classes = _classify_components(g, components, anchor, limits["labeled_iso"])
            sizes = [members[0].graph.n for members in classes]
            counts = [len(members) for members in classes]
            for vector in _multiplicity_vectors(sizes, counts, room):
                chosen = list(anchor)
                for members, count in zip(classes, vector):
                    for comp in members[:count]:
                        chosen.extend(comp.vertices)
                if len(chosen) < k:
                    continue
                key = mask_of(chosen)
                if key in checked:
                    continue
                checked.add(key)
                audit["subgraphs_checked"] += 1
                sub, mapping = induced_subgraph(g, chosen)
                cert = finder(sub, k, limits["center_search"])
                if cert is None:
                    continue
                inverse = {new: old for old, new in mapping.items()}
                cert = cert.relabel(inverse)
                verdict = verify_certificate(g, cert)
                if not verdict:
                    raise MalformedCertificateError(f"Subgraph witness failed on the full graph: {verdict.reason}")
                audit.update(
                    {"anchor": list(anchor), "separator_index": sep_index, "multiplicities": list(vector)}
                )
                logger.info(
                    f"solve_almost_bounded_degree: order-{k} witness on {len(chosen)} vertices "
                    f"(anchor {list(anchor)}, separator #{sep_index})"
                )
                return FptResult(True, cert, audit)

    logger.info(f"solve_almost_bounded_degree: no order-{k} witness ({audit['subgraphs_checked']} subgraphs)")
    return FptResult(False, None, audit)


def exchange_component(
    cert: WitnessCertificate,
    source: LabeledComponent,
    target: LabeledComponent,
    cap: Optional[int] = None,
) -> WitnessCertificate:
    """
    証明書中の成分 source をラベル付き同型な成分 target に置き換える

    Raises:
        ValueError: 2つの成分がラベル付き同型でない場合
    """
    iso = find_labeled_isomorphism(source, target, cap)
    if iso is None:
        raise ValueError("Components are not isomorphic with respect to their labels")
    mapping = {v: v for v in cert.support}
    for local, image in iso.items():
        mapping[source.vertices[local]] = target.vertices[image]
    return cert.relabel(mapping)


# =============================================================================
# K_{t,t} を含まないグラフ
# =============================================================================


def solve_ktt_free(
    g: Graph,
    k: int,
    t: int,
    problem: Union[str, WitnessKind],
    mode: str = "practical",
    n_t_eps: Optional[int] = None,
    overrides: Optional[Mapping[str, int]] = None,
    caps: Optional[Mapping[str, int]] = None,
) -> FptResult:
    """
    K_{t,t} を含まないグラフで位数 k の証人の有無を判定

    次数 g+f 以上の頂点集合 X が f 個以上なら星森抽出で YES、そうでなければ
    次数の分かれ方 (d = X の外の最大次数, s = |X|) で solve_almost_bounded_degree を使う。
    practical モードで抽出に失敗した場合も後者に切り替える。

    Args:
        g: グラフ
        k: 目標位数
        t: 禁止する K_{t,t} の大きさ
        problem: "partial-grundy" | "bcore"
        mode: "faithful" | "practical"
        n_t_eps: N(t,1/k)（faithful モードでは必須）
        overrides: practical モードの閾値上書き
        caps: ソルバー上限

    Returns:
        FptResult（audit に使った分岐と閾値を記録）

    Raises:
        ContractBreachError: K_{t,t} が見つかった場合
        PreconditionError: faithful モードで N(t,1/k) がない場合
    """
    kind = problem_kind(problem)
    limits = thresholds(t, k, mode, n_t_eps, overrides)
    if mode == "faithful" and limits.g_tk is None:
        raise PreconditionError("faithful mode requires N(t,1/k); pass it explicitly")
    solver_caps = dict(get_default_caps())
    solver_caps.update(caps or {})

    audit: Dict[str, Any] = {"thresholds": limits.to_dict(), "ktt_check": "passed"}
    try:
        found = has_biclique(g, t, solver_caps["biclique_budget"])
    except CapExceededError as e:
        logger.warning(f"K_{{{t},{t}}} check skipped, input is assumed K_{{{t},{t}}}-free: {e}")
        audit["ktt_check"] = "skipped"
    else:
        if found:
            raise ContractBreachError(f"Input graph contains K_{{{t},{t}}}", witness=found.sides)

    threshold = limits.degree_threshold
    high = [] if limits.is_symbolic else [v for v in range(g.n) if g.degree(v) >= threshold]
    audit["high_degree"] = len(high)

    if high and len(high) >= limits.f_tk:
        x_side = high if mode == "practical" else high[: limits.f_tk]
        x_set = set(x_side)
        y_side = [v for v in range(g.n) if v not in x_set]
        try:
            witness = star_forest_extract(g, x_side, y_side, k, t, limits)
        except ExtractionFailure as e:
            if mode == "faithful":
                raise
            logger.info(f"Star-forest extraction failed ({e.step}), falling back to bounded degree")
            audit["extraction_failure"] = {"step": e.step, "message": str(e)}
        else:
            cert = witness.to_certificate(kind)
            verdict = verify_certificate(g, cert)
            if not verdict:
                raise MalformedCertificateError(f"Star witness certificate failed: {verdict.reason}")
            audit["branch"] = "star-forest"
            return FptResult(True, cert, audit, witness)

    high_set = set(high)
    d = max((g.degree(v) for v in range(g.n) if v not in high_set), default=0)
    result = solve_almost_bounded_degree(g, k, d, len(high), kind, solver_caps)
    merged = {**result.audit, **audit, "branch": "bounded-degree"}
    return FptResult(result.decision, result.certificate, merged)
