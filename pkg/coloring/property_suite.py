"""
不変条件スイートモジュール

`props` サブコマンドで実行する検査群。各スイートは full（受け入れ規模）と
quick（単体テスト規模）の2つの規模を持ち、シードが同じなら結果は同一になる。
"""

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, Iterator, List, Tuple

import numpy as np

from config import BENCH_EXACT_LIMIT, DEFAULT_SEED
from coloring.colorings import sample_first_fit_orders, verify_certificate, verify_grundy
from coloring.errors import ExtractionFailure, GreedyColoringError
from coloring.exact import (
    crown_bound_holds,
    degree_bound_holds,
    find_b_core_witness,
    find_partial_grundy_witness,
    grundy_number,
    grundy_number_by_orderings,
    rooted_grundy,
)
from coloring.fpt import (
    StarOrCliqueWitness,
    separating_family,
    solve_almost_bounded_degree,
    solve_ktt_free,
    star_forest_extract,
    thresholds,
    tower,
)
from coloring.generators import (
    GadgetFamily,
    GadgetSpec,
    anti_matching,
    binomial_tree,
    binomial_tree_coloring,
    check_cycle_level_structure,
    half_graph,
    half_graph_cycle,
    half_graph_path,
    random_almost_bounded_graph,
    random_graph,
    star_forest,
)
from coloring.graph_core import Graph, GraphBuilder, duplicate_vertices, false_twin_classes, has_biclique
from coloring.reductions import (
    MisInstance,
    check_mcsi_gadget,
    gridtiling_certificate,
    gridtiling_q,
    has_multicolored_is,
    mcsi_faithful_q,
    mcsi_solution_certificate,
    random_gridtiling_yes_instance,
    random_mcsi_yes_instance,
    reduce_gridtiling_to_bcore,
    reduce_mcsi_to_grundy,
    reduce_mis_to_rooted_grundy,
    verify_gridtiling_certificate,
)

logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 20


@dataclass
class SuiteResult:
    """1スイートの実行結果"""

    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> bool:
        """検査を1件記録（失敗時は message を残す）"""
        self.checks += 1
        if not ok:
            self.failures.append(message)
        return ok

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures[:MAX_REPORTED_FAILURES],
            "failure_count": len(self.failures),
            "details": self.details,
        }
        if include_timing:
            data["seconds"] = round(self.seconds, 3)
        return data


def _random_graphs(rng: np.random.Generator, count: int, n_min: int, n_max: int) -> Iterator[Graph]:
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.uniform(0.2, 0.7))
        yield random_graph(n, p, int(rng.integers(2 ** 31)))


# =============================================================================
# 生成器・厳密ソルバー
# =============================================================================


def _binomial_trees(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    for k in range(1, 5 if quick else 6):
        g = binomial_tree(k)
        result.check(g.n == 2 ** (k - 1), f"|V(T_{k})| = {g.n}, expected {2 ** (k - 1)}")
        value = grundy_number(g).value
        result.check(value == k, f"Grundy number of T_{k} is {value}")
        verdict = verify_grundy(g, binomial_tree_coloring(k))
        result.check(verdict.ok, f"T_{k} coloring: {verdict.reason}")


def _half_graph_bounds(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    for t in range(1, 5 if quick else 7):
        value = grundy_number(half_graph(t)).value
        result.check(value <= 3, f"Grundy number of H_{t},{t} is {value} > 3")
    for t in range(1, 4 if quick else 5):
        value = grundy_number(half_graph_path(2, t)).value
        result.check(value <= 5, f"Grundy number of path(2,{t}) is {value} > 5")


def _half_graph_sampling(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    samples = 200 if quick else 100_000
    sizes = (4, 8) if quick else (5, 10, 20, 30)
    observed = {}
    for length, bound in ((3, 64), (4, 53)):
        for t in sizes:
            report = sample_first_fit_orders(half_graph_path(length, t), samples, int(rng.integers(2 ** 31)))
            observed[f"path({length},{t})"] = report.max_color
            result.check(report.max_color <= bound, f"path({length},{t}) reached {report.max_color} > {bound}")
    result.details["samples"] = samples
    result.details["observed_max"] = observed


def _anti_matching(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    for t in range(1, 5 if quick else 6):
        value = grundy_number(anti_matching(t)).value
        result.check(value >= t, f"Grundy number of the anti-matching on {2 * t} vertices is {value} < {t}")


def _oracle_agreement(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count, n_max = (25, 6) if quick else (1000, 9)
    for g in _random_graphs(rng, count, 1, n_max):
        solved = grundy_number(g)
        fast, slow = solved.value, grundy_number_by_orderings(g)
        result.check(fast == slow, f"n={g.n}, edges={g.edges()}: memo {fast} != orderings {slow}")
        # 上位のクラスを落としても証明書のまま
        for order in range(1, solved.certificate.order + 1):
            verdict = verify_grundy(g, solved.certificate.truncated(order))
            result.check(bool(verdict), f"prefix of order {order} rejected (edges={g.edges()}): {verdict.reason}")


def _twin_invariance(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count, n_max = (25, 6) if quick else (500, 8)
    for g in _random_graphs(rng, count, 1, n_max):
        v = int(rng.integers(g.n))
        twinned = duplicate_vertices(g, {v: 1})
        reduced = false_twin_classes(twinned).reduced
        base = grundy_number(g).value
        result.check(grundy_number(twinned).value == base, f"planting a twin of {v} changed Γ (edges={g.edges()})")
        result.check(grundy_number(reduced).value == base, f"twin reduction changed Γ (edges={g.edges()})")


def _cycle_levels(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    limit = 12 if quick else 16
    for length in range(2, 5):
        for t in range(2, 5):
            if (length + 1) * t > limit:
                continue
            verdict = check_cycle_level_structure(half_graph_cycle(length, t))
            result.check(verdict.ok, f"cycle({length},{t}): {verdict.reason}")


def _degree_bounds(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count = 10 if quick else 200
    for g in _random_graphs(rng, count, 2, 7 if quick else 10):
        for v in range(g.n):
            s = int(rng.integers(0, 4))
            result.check(degree_bound_holds(g, v, s), f"degree bound failed at v={v}, s={s} (edges={g.edges()})")
        size = int(rng.integers(1, g.n + 1))
        h = sorted(rng.choice(g.n, size=size, replace=False).tolist())
        result.check(crown_bound_holds(g, h), f"crown bound failed for H={h} (edges={g.edges()})")


# =============================================================================
# 帰着
# =============================================================================


def _partitions_into(items: List[int], k: int) -> Iterator[List[List[int]]]:
    """items をちょうど k 個の空でないブロックに分ける（制限成長列の順）"""
    blocks: List[List[int]] = []

    def place(i: int) -> Iterator[List[List[int]]]:
        if i == len(items):
            if len(blocks) == k:
                yield [list(b) for b in blocks]
            return
        if len(blocks) + len(items) - i < k:
            return
        for b in blocks:
            b.append(items[i])
            yield from place(i + 1)
            b.pop()
        if len(blocks) < k:
            blocks.append([items[i]])
            yield from place(i + 1)
            blocks.pop()

    return place(0)


def _check_mis_instance(result: SuiteResult, inst: MisInstance) -> None:
    reduction = reduce_mis_to_rooted_grundy(inst)
    reached = rooted_grundy(reduction.graph, reduction.root) >= reduction.target
    expected = has_multicolored_is(inst)
    result.check(
        reached == expected,
        f"edges={inst.graph.edges()}, parts={inst.parts}: rooted {reached}, multicolored IS {expected}",
    )


def _mis_rooted_grundy(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    # 帰着後のグラフ（n + k + 2 頂点）がこの大きさ以下の入力を全列挙
    order_limit = 6 if quick else 8
    exhaustive = 0
    for n in range(1, order_limit - 2):
        pairs = list(combinations(range(n), 2))
        for bits in range(2 ** len(pairs)):
            g = Graph.from_edges(n, [e for i, e in enumerate(pairs) if bits >> i & 1])
            for k in range(1, min(3, n, order_limit - 2 - n) + 1):
                for parts in _partitions_into(list(range(n)), k):
                    _check_mis_instance(result, MisInstance(g, tuple(tuple(p) for p in parts)))
                    exhaustive += 1
    sampled = 10 if quick else 300
    for g in _random_graphs(rng, sampled, 2, 6 if quick else 8):
        k = int(rng.integers(1, min(3, g.n) + 1))
        labels = rng.permutation(np.arange(g.n) % k)
        parts = tuple(tuple(int(v) for v in np.flatnonzero(labels == i)) for i in range(k))
        _check_mis_instance(result, MisInstance(g, parts))
    result.details["exhaustive_instances"] = exhaustive
    result.details["random_instances"] = sampled


def _mcsi_gadgets(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count = 1 if quick else 5
    for _ in range(count):
        inst, solution = random_mcsi_yes_instance(4, 2 if quick else 3, 0.5, int(rng.integers(2 ** 31)))
        faithful = reduce_mcsi_to_grundy(inst)
        result.check(faithful.target == mcsi_faithful_q(inst.k), f"faithful target {faithful.target}")
        output = reduce_mcsi_to_grundy(inst, mode="budget")
        for i in range(inst.k):
            verdict = check_mcsi_gadget(inst, output, i)
            result.check(verdict.ok, f"gadget {i + 1}: {verdict.reason}")
        cert = mcsi_solution_certificate(inst, output, solution)
        result.check(cert.full is not None and cert.full.order == output.target,
                     f"budget certificate order {cert.full.order if cert.full else None} != {output.target}")


def _gridtiling_forward(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count = 2 if quick else 50
    q = gridtiling_q(2)
    for _ in range(count):
        n = int(rng.integers(2, 4))
        t = int(rng.integers(1, min(2 if quick else 6, n * n) + 1))
        inst, solution = random_gridtiling_yes_instance(2, n, t, int(rng.integers(2 ** 31)))
        output = reduce_gridtiling_to_bcore(inst)
        cert = gridtiling_certificate(inst, output, solution)
        verdict = verify_gridtiling_certificate(output, cert)
        result.check(verdict.ok, f"n={n}, t={t}: {verdict.reason}")
        result.check(cert.order == q, f"certificate order {cert.order} != {q}")


# =============================================================================
# FPT
# =============================================================================


def _separating_family(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    n_max, ab_max = (6, 2) if quick else (12, 3)
    for n in range(0, n_max + 1):
        for a in range(ab_max + 1):
            for b in range(ab_max + 1):
                verdict = separating_family(n, a, b).verify_exhaustive()
                result.check(verdict.ok, f"n={n}, a={a}, b={b}: {verdict.reason}")
    verdict = separating_family(8, 1, 1, construction="hash").verify_exhaustive()
    result.check(verdict.ok, f"hash family n=8, a=b=1: {verdict.reason}")


def _exact_decision(g: Graph, k: int, problem: str) -> bool:
    finder = find_partial_grundy_witness if problem == "partial-grundy" else find_b_core_witness
    return finder(g, k) is not None


def _fpt_bounded_degree(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count, n_range, k_max = (8, (5, 8), 2) if quick else (200, (6, 10), 3)
    for index in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        k = int(rng.integers(1, k_max + 1))
        problem = ("partial-grundy", "bcore")[index % 2]
        g = random_almost_bounded_graph(n, 3, int(rng.integers(0, 3)), float(rng.uniform(0.2, 0.5)), int(rng.integers(2 ** 31)))
        # 高次数頂点から低次数頂点への辺で次数 3 を超える頂点もあるので実測する
        s = sum(1 for v in range(g.n) if g.degree(v) > 3)
        found = solve_almost_bounded_degree(g, k, 3, s, problem)
        expected = _exact_decision(g, k, problem)
        result.check(found.decision == expected, f"{problem} k={k}, edges={g.edges()}: fpt {found.decision}, exact {expected}")
        if found.certificate is not None:
            result.check(verify_certificate(g, found.certificate).ok, f"{problem} k={k}: certificate does not verify")


def _ktt_free_graphs(rng: np.random.Generator, count: int, n_range: Tuple[int, int], t: int) -> Iterator[Graph]:
    produced = 0
    while produced < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_graph(n, float(rng.uniform(0.1, 0.35)), int(rng.integers(2 ** 31)))
        if has_biclique(g, t):
            continue
        produced += 1
        yield g


def _fpt_ktt_free(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    count, n_range, k_max = (8, (5, 9), 2) if quick else (200, (6, 10), 3)
    branches: Dict[str, int] = {}
    for index, g in enumerate(_ktt_free_graphs(rng, count, n_range, 2)):
        k = int(rng.integers(1, k_max + 1))
        problem = ("partial-grundy", "bcore")[index % 2]
        found = solve_ktt_free(g, k, 2, problem)
        branch = found.audit.get("branch", "")
        branches[branch] = branches.get(branch, 0) + 1
        expected = _exact_decision(g, k, problem)
        result.check(found.decision == expected, f"{problem} k={k}, edges={g.edges()}: fpt {found.decision}, exact {expected}")
        if found.certificate is not None:
            result.check(verify_certificate(g, found.certificate).ok, f"{problem} k={k}: certificate does not verify")
    result.details["branches"] = dict(sorted(branches.items()))


def _star_extraction(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    extracted = failed = 0
    for k in (2, 3):
        g = star_forest(k, k)
        centers = g.vertices_with_role("center")
        leaves = [v for v in range(g.n) if v not in set(centers)]
        witness = star_forest_extract(g, centers, leaves, k, 2, thresholds(2, k, "practical"))
        result.check(witness.verify(g, k).ok, f"star forest k={k}: {witness.verify(g, k).reason}")
        extracted += 1

    count = 5 if quick else 100
    for _ in range(count):
        builder = GraphBuilder()
        builder.add_graph(star_forest(2, 2))
        builder.add_graph(random_graph(int(rng.integers(3, 8)), 0.3, int(rng.integers(2 ** 31))))
        g = builder.build()
        if has_biclique(g, 2):
            continue
        x_side = [v for v in range(g.n) if g.degree(v) >= 2]
        y_side = [v for v in range(g.n) if g.degree(v) < 2]
        try:
            witness = star_forest_extract(g, x_side, y_side, 2, 2, thresholds(2, 2, "practical"))
        except ExtractionFailure:
            failed += 1
            continue
        extracted += 1
        result.check(isinstance(witness, StarOrCliqueWitness) and witness.verify(g, 2).ok,
                     f"edges={g.edges()}: {witness.verify(g, 2).reason}")
    result.details["extracted"] = extracted
    result.details["best_effort_failures"] = failed


def _thresholds(result: SuiteResult, quick: bool, rng: np.random.Generator) -> None:
    result.check(thresholds(1, 1).f_tk == 16, "f(1,1) != 16")
    result.check(thresholds(2, 2).f_tk == 2 ** 24, "f(2,2) != 2^24")
    result.check(tower(1, 1) == 8, "M(k=1, t=1) != 8")
    result.check(tower(2, 2) == 8 ** 64, "M(k=2, t=2) != 8^64")
    with_n = thresholds(1, 1, n_t_eps=100)
    result.check(with_n.g_tk == 2 ** 2 * 100, f"g(1,1) with N=100 is {with_n.g_tk}")


# =============================================================================
# レジストリ
# =============================================================================

SUITES: Dict[str, Tuple[str, Callable[[SuiteResult, bool, np.random.Generator], None]]] = {
    "binomial-trees": ("二項木の頂点数とGrundy数", _binomial_trees),
    "half-graph-bounds": ("半グラフと長さ2のパスの厳密な上界", _half_graph_bounds),
    "half-graph-sampling": ("長さ3・4の半グラフのパスでの順序サンプリング", _half_graph_sampling),
    "anti-matching": ("反マッチングの下界", _anti_matching),
    "oracle-agreement": ("メモ化ソルバーと全順序オラクルの一致・証明書の接頭辞", _oracle_agreement),
    "twin-invariance": ("偽双子の追加・縮約でGrundy数が不変", _twin_invariance),
    "cycle-levels": ("半グラフのサイクルの独立集合の水準構造", _cycle_levels),
    "degree-bounds": ("次数上界とクラウン上界", _degree_bounds),
    "mis-rooted-grundy": ("多色独立集合 ⇔ 根付きGrundy数 ≥ k+2", _mis_rooted_grundy),
    "mcsi-gadgets": ("MCSI 帰着のガジェットと予算モード証明書", _mcsi_gadgets),
    "gridtiling-forward": ("Grid Tiling 帰着の順方向証明書（位数 14k^2）", _gridtiling_forward),
    "separating-family": ("分離族の全列挙検証", _separating_family),
    "fpt-bounded-degree": ("高次数頂点の少ないグラフでの判定と厳密解の一致", _fpt_bounded_degree),
    "fpt-ktt-free": ("K_{2,2} を含まないグラフでの判定と厳密解の一致", _fpt_ktt_free),
    "star-extraction": ("星森抽出の出力の構造検証", _star_extraction),
    "thresholds": ("閾値の多倍長計算", _thresholds),
}


def run_suite(name: str, quick: bool = False, seed: int = DEFAULT_SEED) -> SuiteResult:
    """
    スイートを1つ実行

    Args:
        name: スイート名
        quick: 縮小規模で実行
        seed: 乱数シード

    Returns:
        SuiteResult（ライブラリ例外は失敗として記録）
    """
    if name not in SUITES:
        raise ValueError(f"Unknown suite: {name!r} (expected one of {sorted(SUITES)})")
    _, suite = SUITES[name]
    result = SuiteResult(name)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    try:
        suite(result, quick, rng)
    except GreedyColoringError as e:
        result.failures.append(f"{type(e).__name__}: {e}")
    result.seconds = time.perf_counter() - start
    level = logging.INFO if result.passed else logging.WARNING
    logger.log(level, f"suite {name}: {'pass' if result.passed else 'FAIL'} ({result.checks} checks)")
    return result


def run_suites(names: List[str], quick: bool = False, seed: int = DEFAULT_SEED) -> List[SuiteResult]:
    """複数スイートを順に実行（"all" は全スイート）"""
    if names == ["all"]:
        names = list(SUITES)
    return [run_suite(name, quick, seed) for name in names]


# =============================================================================
# ベンチマーク
# =============================================================================

BENCH_SWEEP: List[Tuple[str, Dict[str, int]]] = (
    [("binomial-tree", {"k": k}) for k in range(1, 7)]
    + [("half-graph", {"t": t}) for t in range(2, 9)]
    + [("half-graph-path", {"l": l, "t": t}) for l in (2, 3, 4) for t in (2, 3, 4, 6, 10)]
    + [("half-graph-cycle", {"l": l, "t": t}) for l in (2, 3) for t in (2, 3, 4)]
    + [("anti-matching", {"t": t}) for t in range(2, 7)]
    + [("star-forest", {"count": c, "leaves": c}) for c in (2, 3)]
)


def run_bench(samples: int, seed: int = DEFAULT_SEED, quick: bool = False) -> List[Dict[str, Any]]:
    """
    ガジェット族を掃引し、サンプリングした最大色と（小さければ）厳密なGrundy数を記録

    Args:
        samples: 各ガジェットでの順序の数
        seed: 乱数シード（各ガジェットで同じシードを使う）
        quick: 頂点数 BENCH_EXACT_LIMIT 以下のガジェットだけを回す

    Returns:
        [{"family", "params", "n", "edges", "sampled_max", "exact", "seconds"}, ...]
    """
    entries = []
    for family, params in BENCH_SWEEP:
        g = GadgetSpec(GadgetFamily(family), dict(params)).build()
        if quick and g.n > BENCH_EXACT_LIMIT:
            continue
        start = time.perf_counter()
        report = sample_first_fit_orders(g, samples, seed)
        exact = grundy_number(g).value if g.n <= BENCH_EXACT_LIMIT else None
        entries.append(
            {
                "family": family,
                "params": dict(params),
                "n": g.n,
                "edges": g.num_edges,
                "sampled_max": report.max_color,
                "exact": exact,
                "seconds": time.perf_counter() - start,
            }
        )
        logger.debug(f"bench {family} {params}: n={g.n}, sampled {report.max_color}, exact {exact}")
    return entries
