"""
彩色モジュール

first-fit（貪欲）彩色エンジンと、Grundy / 部分Grundy / b彩色の3種の証人の検証器、
証明書データモデルを提供する。
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from coloring.errors import MalformedCertificateError
from coloring.graph_core import Graph, VertexSet
from coloring.id_utils import validate_vertex_ids

logger = logging.getLogger(__name__)


class WitnessKind(str, Enum):
    """証人の種類"""

    GRUNDY = "grundy"
    PARTIAL_GRUNDY = "partial_grundy"
    B_COLORING = "b_coloring"


class Verdict(NamedTuple):
    """
    検証結果 (is_valid, error_message)

    真偽値は ok。reason は最初に破れた制約の説明（参考情報）。
    """

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


# =============================================================================
# データモデル
# =============================================================================


@dataclass(frozen=True)
class Coloring:
    """頂点ごとの色（0 = 未彩色）"""

    colors: Tuple[int, ...]

    @property
    def order(self) -> int:
        """使われている色の数"""
        return len({c for c in self.colors if c > 0})

    @property
    def max_color(self) -> int:
        return max(self.colors, default=0)

    def classes(self) -> Tuple[VertexSet, ...]:
        """色 1..max_color のクラス"""
        buckets: List[List[int]] = [[] for _ in range(self.max_color)]
        for v, c in enumerate(self.colors):
            if c > 0:
                buckets[c - 1].append(v)
        return tuple(tuple(b) for b in buckets)


@dataclass(frozen=True)
class WitnessCertificate:
    """
    証人の証明書

    classes[i] が色 i+1 のクラス。support は全クラスの和集合で、
    指定された場合は一致しなければならない。centers[i] は classes[i] の中心。
    """

    kind: WitnessKind
    classes: Tuple[VertexSet, ...]
    centers: Optional[Tuple[int, ...]] = None
    support: VertexSet = field(default=())

    def __post_init__(self):
        kind = WitnessKind(self.kind)
        classes = tuple(tuple(sorted(c)) for c in self.classes)
        seen = set()
        for i, cls in enumerate(classes):
            for v in cls:
                if v in seen:
                    raise MalformedCertificateError(f"Vertex {v} appears in more than one class (class {i + 1})")
                seen.add(v)
        support = tuple(sorted(seen))
        if self.support and tuple(sorted(self.support)) != support:
            raise MalformedCertificateError("Support does not match the union of the classes")
        centers = None
        if self.centers is not None:
            centers = tuple(self.centers)
            if len(centers) != len(classes):
                raise MalformedCertificateError(
                    f"Expected {len(classes)} centers, got {len(centers)}"
                )
            for i, (center, cls) in enumerate(zip(centers, classes)):
                if center not in cls:
                    raise MalformedCertificateError(f"Center {center} is not in class {i + 1}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "support", support)

    @property
    def order(self) -> int:
        return len(self.classes)

    def color_of(self) -> Dict[int, int]:
        """頂点 → 色"""
        return {v: i + 1 for i, cls in enumerate(self.classes) for v in cls}

    def truncated(self, k: int) -> "WitnessCertificate":
        """先頭 k クラスだけを残す"""
        if not 0 <= k <= self.order:
            raise ValueError(f"Cannot truncate order-{self.order} certificate to {k}")
        centers = self.centers[:k] if self.centers is not None else None
        return WitnessCertificate(self.kind, self.classes[:k], centers)

    def reinterpret(self, kind: WitnessKind, centers: Optional[Sequence[int]] = None) -> "WitnessCertificate":
        """
        種類を付け替える

        centers を省略した場合は既存の中心、なければ各クラスの最小頂点を使う。
        """
        if centers is None:
            centers = self.centers if self.centers is not None else tuple(c[0] for c in self.classes if c)
        return WitnessCertificate(kind, self.classes, tuple(centers))

    def relabel(self, mapping: Mapping[int, int]) -> "WitnessCertificate":
        """頂点IDを付け替える（部分グラフ → 元グラフ など）"""
        classes = tuple(tuple(mapping[v] for v in cls) for cls in self.classes)
        centers = tuple(mapping[c] for c in self.centers) if self.centers is not None else None
        return WitnessCertificate(self.kind, classes, centers)

    def ordering(self) -> List[int]:
        """クラスを色順に連結した頂点順序"""
        return [v for cls in self.classes for v in cls]

    def to_dict(self) -> Dict:
        """辞書に変換（内部0始まりID）"""
        return {
            "kind": self.kind.value,
            "classes": [list(c) for c in self.classes],
            "centers": list(self.centers) if self.centers is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "WitnessCertificate":
        """辞書から作成（内部0始まりID）"""
        centers = data.get("centers")
        return cls(
            WitnessKind(data["kind"]),
            tuple(tuple(c) for c in data["classes"]),
            tuple(centers) if centers is not None else None,
        )


@dataclass(frozen=True)
class GreedyTrace:
    """頂点順序と、その first-fit 結果"""

    ordering: Tuple[int, ...]
    resulting: Coloring

    @classmethod
    def record(cls, g: Graph, ordering: Sequence[int]) -> "GreedyTrace":
        return cls(tuple(ordering), first_fit(g, ordering))

    def replays_on(self, g: Graph) -> bool:
        """resulting = first_fit(g, ordering) が成り立つか"""
        return first_fit(g, self.ordering) == self.resulting


# =============================================================================
# first-fit
# =============================================================================


def first_fit(g: Graph, ordering: Sequence[int]) -> Coloring:
    """
    順序どおりに各頂点へ「既彩色の隣接頂点にない最小の正整数」を割り当てる

    Args:
        g: グラフ
        ordering: 重複のない頂点列（含まれない頂点は未彩色のまま）

    Returns:
        Coloring

    Example:
        >>> p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        >>> first_fit(p4, [0, 2, 1, 3]).colors
        (1, 2, 1, 2)
    """
    ok, message = validate_vertex_ids(ordering, g.n)
    if not ok:
        raise ValueError(message)
    colors = [0] * g.n
    for v in ordering:
        used = {colors[u] for u in g.adjacency[v]}
        c = 1
        while c in used:
            c += 1
        colors[v] = c
    return Coloring(tuple(colors))


def certificate_from_coloring(
    coloring: Coloring, kind: WitnessKind = WitnessKind.GRUNDY
) -> WitnessCertificate:
    """
    彩色から証明書を作る（部分Grundy / b彩色の場合は各クラスの最小頂点を中心にする）
    """
    classes = coloring.classes()
    centers = None if kind == WitnessKind.GRUNDY else tuple(c[0] for c in classes if c)
    return WitnessCertificate(kind, classes, centers)


# =============================================================================
# 検証器
# =============================================================================


def _check_structure(g: Graph, cert: WitnessCertificate, kind: WitnessKind) -> Verdict:
    if cert.kind != kind:
        return Verdict(False, f"expected a {kind.value} certificate, got {cert.kind.value}")
    ok, message = validate_vertex_ids(cert.support, g.n)
    if not ok:
        return Verdict(False, message)
    for i, cls in enumerate(cert.classes):
        if not cls:
            return Verdict(False, f"class {i + 1} is empty")
        for idx, u in enumerate(cls):
            for v in cls[idx + 1:]:
                if g.has_edge(u, v):
                    return Verdict(False, f"not proper: {u} and {v} share color {i + 1}")
    return Verdict(True)


def _seen_colors(g: Graph, v: int, color_of: Mapping[int, int]) -> set:
    return {color_of[u] for u in g.adjacency[v] if u in color_of}


def _require_centers(cert: WitnessCertificate) -> Tuple[int, ...]:
    if cert.centers is None:
        raise MalformedCertificateError(f"{cert.kind.value} certificate needs centers")
    return cert.centers


def verify_grundy(g: Graph, cert: WitnessCertificate) -> Verdict:
    """
    Grundy証人の検証

    クラスが g[support] の真彩色で、色 i (i ≥ 2) の全頂点が色 j < i の隣接頂点を持つか。

    Returns:
        Verdict
    """
    verdict = _check_structure(g, cert, WitnessKind.GRUNDY)
    if not verdict:
        return verdict
    color_of = cert.color_of()
    for i, cls in enumerate(cert.classes):
        needed = set(range(1, i + 1))
        for v in cls:
            missing = needed - _seen_colors(g, v, color_of)
            if missing:
                return Verdict(False, f"vertex {v} (color {i + 1}) has no neighbor colored {min(missing)}")
    return Verdict(True)


def verify_partial_grundy(g: Graph, cert: WitnessCertificate) -> Verdict:
    """
    部分Grundy証人の検証

    真彩色で、各中心 v_i が色 j < i の隣接頂点を持つか。

    Raises:
        MalformedCertificateError: 中心がない場合
    """
    centers = _require_centers(cert)
    verdict = _check_structure(g, cert, WitnessKind.PARTIAL_GRUNDY)
    if not verdict:
        return verdict
    color_of = cert.color_of()
    for i, center in enumerate(centers):
        missing = set(range(1, i + 1)) - _seen_colors(g, center, color_of)
        if missing:
            return Verdict(False, f"center {center} (color {i + 1}) has no neighbor colored {min(missing)}")
    return Verdict(True)


def verify_b_coloring(g: Graph, cert: WitnessCertificate) -> Verdict:
    """
    b彩色証人の検証

    真彩色で、各中心 v_i が色 j ≠ i の隣接頂点をすべて持つか。

    Raises:
        MalformedCertificateError: 中心がない場合
    """
    centers = _require_centers(cert)
    verdict = _check_structure(g, cert, WitnessKind.B_COLORING)
    if not verdict:
        return verdict
    color_of = cert.color_of()
    all_colors = set(range(1, cert.order + 1))
    for i, center in enumerate(centers):
        missing = all_colors - {i + 1} - _seen_colors(g, center, color_of)
        if missing:
            return Verdict(False, f"center {center} (color {i + 1}) has no neighbor colored {min(missing)}")
    return Verdict(True)


VERIFIERS = {
    WitnessKind.GRUNDY: verify_grundy,
    WitnessKind.PARTIAL_GRUNDY: verify_partial_grundy,
    WitnessKind.B_COLORING: verify_b_coloring,
}


def verify_certificate(g: Graph, cert: WitnessCertificate) -> Verdict:
    """種類に応じた検証器へ振り分ける"""
    return VERIFIERS[cert.kind](g, cert)


# =============================================================================
# 部分Grundy彩色の拡張
# =============================================================================


def extend_partial_grundy(g: Graph, cert: WitnessCertificate) -> WitnessCertificate:
    """
    部分Grundy彩色を全頂点へ拡張

    未彩色の頂点をID順に処理し、色 1..c がすべて隣接頂点に現れる最大の c に対して
    色 c+1 を与える。新しく現れた色は、その色を最初に受けた頂点を中心とする。

    Args:
        g: グラフ
        cert: g[S] 上で検証済みの部分Grundy証明書

    Returns:
        V 全体の部分Grundy証明書（位数は元以上）

    Raises:
        MalformedCertificateError: 証明書が検証に失敗する場合
    """
    verdict = verify_partial_grundy(g, cert)
    if not verdict:
        raise MalformedCertificateError(f"Certificate does not verify: {verdict.reason}")
    color_of = cert.color_of()
    classes = [list(c) for c in cert.classes]
    centers = list(cert.centers)
    for v in range(g.n):
        if v in color_of:
            continue
        seen = _seen_colors(g, v, color_of)
        c = 0
        while c + 1 in seen:
            c += 1
        color_of[v] = c + 1
        if c + 1 > len(classes):
            classes.append([])
            centers.append(v)
        classes[c].append(v)
    extended = WitnessCertificate(WitnessKind.PARTIAL_GRUNDY, tuple(tuple(c) for c in classes), tuple(centers))
    logger.debug(f"Extended partial Grundy certificate from order {cert.order} to {extended.order}")
    return extended


# =============================================================================
# 順序サンプリング
# =============================================================================


@dataclass(frozen=True)
class SamplerReport:
    """ランダム順序による first-fit の観測結果"""

    samples: int
    seed: int
    max_color: int
    histogram: Mapping[int, int]
    best_ordering: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "max_color": self.max_color,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def sample_first_fit_orders(g: Graph, samples: int, seed: int) -> SamplerReport:
    """
    ランダムな頂点順序で first-fit を繰り返し、使われた色数の最大値を記録

    Γ(G) の下界の観測であり、上界の証明ではない。

    Args:
        g: グラフ
        samples: 順序の数
        seed: 乱数シード

    Returns:
        SamplerReport
    """
    rng = np.random.default_rng(seed)
    neighbors = [tuple(g.adjacency[v]) for v in range(g.n)]
    histogram: Counter = Counter()
    best, best_ordering = 0, tuple(range(g.n))
    for _ in range(samples):
        ordering = rng.permutation(g.n).tolist()
        colors = [0] * g.n
        top = 0
        for v in ordering:
            used = {colors[u] for u in neighbors[v]}
            c = 1
            while c in used:
                c += 1
            colors[v] = c
            if c > top:
                top = c
        histogram[top] += 1
        if top > best:
            best, best_ordering = top, tuple(ordering)
    logger.debug(f"Sampled {samples} orderings (seed={seed}): observed max color {best}")
    return SamplerReport(samples, seed, best, dict(histogram), best_ordering)
