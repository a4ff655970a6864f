"""
貪欲彩色ツールキット - コマンドラインアプリケーション

グラフ読み込み、厳密ソルバー、ガジェット生成、帰着、FPTアルゴリズム、
不変条件スイートを1つのエントリポイントから呼び出す。
結果は標準出力のJSON（schema_version・seed・metadata 付き）、ログは標準エラー出力。

使い方:
    python app.py gen --family binomial-tree --params k=4 | python app.py grundy -
    python app.py firstfit graph.json --order 1,3,2,4
    python app.py props --suite half-graph-bounds --quick
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from config import (
    APP_DESCRIPTION,
    APP_NAME,
    APP_VERSION,
    DEFAULT_FPT_MODE,
    DEFAULT_GRAPH_FORMAT,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EXIT_CODES,
    FPT_MODES,
    FPT_PROBLEMS,
    GADGET_FAMILIES,
    GRAPH_FORMATS,
    OUTPUT_DOCX_EXTENSION,
    PARTITION_AUTO_LIMIT,
    get_solver_caps,
    parse_caps_text,
)

from coloring import (
    CapExceededError,
    ContractBreachError,
    ExtractionFailure,
    GadgetFamily,
    GadgetSpec,
    GreedyColoringError,
    GreedyTrace,
    GridTilingInstance,
    InvalidSolutionError,
    McsiInstance,
    MisInstance,
    b_chromatic_core_order,
    certificate_from_coloring,
    grundy_number,
    gridtiling_certificate,
    load_certificate,
    load_graph,
    load_instance,
    load_solution,
    make_envelope,
    dump_json,
    mcsi_solution_certificate,
    mis_solution_certificate,
    parse_gadget_params,
    partial_grundy_number,
    reduce_gridtiling_to_bcore,
    reduce_mcsi_to_grundy,
    reduce_mis_to_rooted_grundy,
    rooted_grundy,
    sample_first_fit_orders,
    solve_almost_bounded_degree,
    solve_ktt_free,
    verify_certificate,
    verify_gridtiling_certificate,
    write_graph,
)
from coloring.formats import certificate_to_json, graph_to_json
from coloring.id_utils import groups_to_external, to_external, to_internal
from coloring.property_suite import SUITES, run_bench, run_suites
from coloring.report_generator import create_bench_report, create_props_report

logger = logging.getLogger(__name__)

REDUCTION_SOURCES = {"mis": MisInstance, "mcsi": McsiInstance, "gridtiling": GridTilingInstance}


class UsageError(Exception):
    """引数・入力ファイルの誤り（終了コード usage）"""


# =============================================================================
# 入出力ヘルパー
# =============================================================================


def _read_text(path: str) -> str:
    """パスまたは "-"（標準入力）からテキストを読む"""
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"Cannot read {path}: {e}") from e


def _write_text(text: str, output: Optional[str]) -> None:
    """標準出力、または --output のファイルへ書く"""
    if not output:
        sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path.absolute()}")


def _emit(args: argparse.Namespace, result: Mapping[str, Any]) -> None:
    _write_text(dump_json(make_envelope(args.command, result, args.seed)), args.output)


def _load_graph_arg(args: argparse.Namespace):
    return load_graph(_read_text(args.graph))


def _solver_caps(args: argparse.Namespace) -> Dict[str, int]:
    """既定値 < 環境変数 < --caps の順で上限を決める"""
    overrides = parse_caps_text(args.caps) if args.caps else None
    return get_solver_caps(overrides=overrides)


def _parse_id_list(text: str) -> List[int]:
    """ "1,3,2" → [1, 3, 2] """
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise UsageError(f"Expected a comma-separated list of integers: {text!r}") from e


def _docx_path(path: str) -> str:
    return path if path.endswith(OUTPUT_DOCX_EXTENSION) else path + OUTPUT_DOCX_EXTENSION


def _at_least_exit(value: int, at_least: Optional[int]) -> int:
    """--at-least 指定時は判定問題として終了コードを返す"""
    if at_least is None or value >= at_least:
        return EXIT_CODES["yes"]
    return EXIT_CODES["no"]


def _external_witness(witness, n: int) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    if witness.variant == "clique":
        return {"variant": "clique", "clique": [to_external(v, n) for v in witness.clique]}
    return {
        "variant": "stars",
        "centers": [to_external(v, n) for v in witness.centers],
        "leaf_sets": groups_to_external(witness.leaf_sets, n),
    }


# =============================================================================
# 厳密ソルバー
# =============================================================================


def cmd_grundy(args: argparse.Namespace) -> int:
    """Γ(G) と、それを達成するGrundy彩色"""
    g = _load_graph_arg(args)
    result = grundy_number(g, _solver_caps(args)["grundy"])
    _emit(args, {"n": g.n, "value": result.value, "certificate": certificate_to_json(result.certificate, g.n)})
    return _at_least_exit(result.value, args.at_least)


def cmd_rooted_grundy(args: argparse.Namespace) -> int:
    """指定頂点が first-fit で受け得る最大の色"""
    g = _load_graph_arg(args)
    v = to_internal(args.vertex, g.n)
    value = rooted_grundy(g, v, _solver_caps(args)["rooted_grundy"])
    _emit(args, {"n": g.n, "vertex": args.vertex, "value": value})
    return _at_least_exit(value, args.at_least)


def cmd_partial_grundy(args: argparse.Namespace) -> int:
    """部分Grundy数 Γ'(G)"""
    g = _load_graph_arg(args)
    caps = _solver_caps(args)
    method = args.method
    if method == "auto":
        method = "partition" if g.n <= PARTITION_AUTO_LIMIT else "center"
    cap = caps["partition"] if method == "partition" else caps["center_search"]
    result = partial_grundy_number(g, method, cap)
    _emit(
        args,
        {"n": g.n, "method": method, "value": result.value, "certificate": certificate_to_json(result.certificate, g.n)},
    )
    return _at_least_exit(result.value, args.at_least)


def cmd_bcore(args: argparse.Namespace) -> int:
    """b彩色コアの最大位数"""
    g = _load_graph_arg(args)
    result = b_chromatic_core_order(g, args.method, _solver_caps(args)["bcore"])
    _emit(
        args,
        {"n": g.n, "method": args.method, "value": result.value, "certificate": certificate_to_json(result.certificate, g.n)},
    )
    return _at_least_exit(result.value, args.at_least)


def cmd_firstfit(args: argparse.Namespace) -> int:
    """
    first-fit のシミュレーション

    --order があればその順序で1回、なければ --samples 個のランダム順序を試す。
    """
    g = _load_graph_arg(args)
    if args.order is None:
        report = sample_first_fit_orders(g, args.samples, args.seed)
        data = report.to_dict()
        data["best_ordering"] = [to_external(v, g.n) for v in report.best_ordering]
        _emit(args, {"n": g.n, "sampling": data})
        return EXIT_CODES["yes"]

    ids = _parse_id_list(args.order)
    ordering = ids if args.zero_based else [to_internal(v, g.n) for v in ids]
    trace = GreedyTrace.record(g, ordering)
    coloring = trace.resulting
    cert = certificate_from_coloring(coloring)
    _emit(
        args,
        {
            "n": g.n,
            "ordering": ids,
            "colors": list(coloring.colors),
            "sequence": [coloring.colors[v] for v in ordering],
            "max_color": coloring.max_color,
            "certificate": certificate_to_json(cert, g.n),
        },
    )
    return EXIT_CODES["yes"]


def cmd_verify(args: argparse.Namespace) -> int:
    """証明書の検証（成立で 0、不成立で 1）"""
    g = _load_graph_arg(args)
    cert = load_certificate(_read_text(args.certificate), g.n)
    verdict = verify_certificate(g, cert)
    _emit(args, {"kind": cert.kind.value, "order": cert.order, "ok": verdict.ok, "reason": verdict.reason})
    return EXIT_CODES["yes"] if verdict else EXIT_CODES["no"]


# =============================================================================
# 生成・帰着
# =============================================================================


def cmd_gen(args: argparse.Namespace) -> int:
    """ガジェットの生成"""
    params = parse_gadget_params(args.params or "")
    gadget = GadgetSpec(GadgetFamily(args.family), params)
    is_valid, message = gadget.validate()
    if not is_valid:
        raise UsageError(message)
    g = gadget.build()
    if args.format == "json":
        _emit(args, {"family": args.family, "params": params, "graph": graph_to_json(g)})
    else:
        _write_text(write_graph(g, args.format), args.output)
    return EXIT_CODES["yes"]


def _load_source(args: argparse.Namespace):
    inst = load_instance(_read_text(args.instance))
    expected = REDUCTION_SOURCES[args.source]
    if not isinstance(inst, expected):
        raise UsageError(f"--from {args.source} does not match the instance type")
    return inst


def _reduce(args: argparse.Namespace, inst):
    """--from に応じた帰着を実行"""
    if isinstance(inst, MisInstance):
        return reduce_mis_to_rooted_grundy(inst)
    if isinstance(inst, McsiInstance):
        return reduce_mcsi_to_grundy(inst, args.mode, args.budget_q, args.materialize)
    return reduce_gridtiling_to_bcore(inst, args.variant)


def _reduction_summary(inst, output) -> Dict[str, Any]:
    g = output.graph
    if isinstance(inst, MisInstance):
        return {"kind": "mis-rooted-grundy", "root": to_external(output.root, g.n), "target": output.target,
                "vertices": g.n, "edges": g.num_edges}
    summary = output.to_dict()
    summary["provenance"] = dict(sorted(output.provenance.items()))
    return summary


def cmd_reduce(args: argparse.Namespace) -> int:
    """元問題インスタンスを帰着し、出力グラフを書き出す"""
    inst = _load_source(args)
    output = _reduce(args, inst)
    if args.format != "json":
        _write_text(write_graph(output.graph, args.format), args.output)
        return EXIT_CODES["yes"]
    result = {"reduction": _reduction_summary(inst, output), "graph": graph_to_json(output.graph)}
    _emit(args, result)
    return EXIT_CODES["yes"]


def cmd_certify(args: argparse.Namespace) -> int:
    """
    元問題の解から帰着先の証明書を合成

    出力は graph と certificate を持つので、そのまま verify に渡せる。
    """
    inst = _load_source(args)
    solution = load_solution(_read_text(args.solution), inst)
    output = _reduce(args, inst)
    g = output.graph
    result: Dict[str, Any] = {"reduction": _reduction_summary(inst, output), "graph": graph_to_json(g)}
    ok = True
    if isinstance(inst, MisInstance):
        cert = mis_solution_certificate(inst, output, solution)
        result["certificate"] = certificate_to_json(cert, g.n)
    elif isinstance(inst, McsiInstance):
        mcsi = mcsi_solution_certificate(inst, output, solution)
        result["color_one"] = [to_external(v, g.n) for v in mcsi.color_one]
        result["trees"] = {label: certificate_to_json(c, g.n) for label, c in sorted(mcsi.trees.items())}
        result["certificate"] = certificate_to_json(mcsi.full, g.n) if mcsi.full else None
    else:
        cert = gridtiling_certificate(inst, output, solution)
        verdict = verify_gridtiling_certificate(output, cert)
        ok = verdict.ok
        result["certificate"] = certificate_to_json(cert, g.n)
        result["verdict"] = {"ok": verdict.ok, "reason": verdict.reason}
    _emit(args, result)
    return EXIT_CODES["yes"] if ok else EXIT_CODES["no"]


# =============================================================================
# FPT
# =============================================================================


def cmd_fpt(args: argparse.Namespace) -> int:
    """K_{t,t} を含まないグラフ（または高次数頂点の少ないグラフ）での判定"""
    g = _load_graph_arg(args)
    caps = _solver_caps(args)
    if args.algorithm == "bounded-degree":
        if args.d is None or args.s is None:
            raise UsageError("--algorithm bounded-degree needs --d and --s")
        result = solve_almost_bounded_degree(g, args.k, args.d, args.s, args.problem, caps)
    else:
        overrides = {key: value for key, value in (("f", args.f), ("g", args.g), ("m_prime", args.m_prime))
                     if value is not None}
        result = solve_ktt_free(g, args.k, args.t, args.problem, args.mode, args.n_t_eps, overrides or None, caps)
    data = result.to_dict()
    data["certificate"] = certificate_to_json(result.certificate, g.n) if result.certificate else None
    data["witness"] = _external_witness(result.witness, g.n)
    _emit(args, {"problem": args.problem, "k": args.k, **data})
    return EXIT_CODES["yes"] if result.decision else EXIT_CODES["no"]


# =============================================================================
# スイート・ベンチ
# =============================================================================


def cmd_props(args: argparse.Namespace) -> int:
    """不変条件スイートの実行（全件成功で 0）"""
    names = [name.strip() for name in args.suite.split(",") if name.strip()]
    unknown = [name for name in names if name != "all" and name not in SUITES]
    if unknown:
        raise UsageError(f"Unknown suite(s): {unknown}; available: {sorted(SUITES)}")
    results = run_suites(names, quick=args.quick, seed=args.seed)
    passed = all(r.passed for r in results)
    _emit(
        args,
        {"quick": args.quick, "passed": passed, "suites": [r.to_dict(include_timing=args.timings) for r in results]},
    )
    if args.report:
        create_props_report([r.to_dict(include_timing=True) for r in results], _docx_path(args.report))
    return EXIT_CODES["yes"] if passed else EXIT_CODES["no"]


def cmd_bench(args: argparse.Namespace) -> int:
    """ガジェット族の掃引（サンプリング最大色・厳密値）"""
    entries = run_bench(args.samples, seed=args.seed, quick=args.quick)
    rows = [entry if args.timings else {k: v for k, v in entry.items() if k != "seconds"} for entry in entries]
    _emit(args, {"samples": args.samples, "entries": rows})
    if args.report:
        create_bench_report(entries, _docx_path(args.report))
    return EXIT_CODES["yes"]


# =============================================================================
# 引数パーサ
# =============================================================================


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="乱数シード（全出力に記録）")
    common.add_argument("--caps", help='ソルバー上限の上書き（例: "grundy=18,rooted=14"）')
    common.add_argument("-o", "--output", help="出力ファイル（省略時は標準出力）")
    common.add_argument("-v", "--verbose", action="store_true", help="DEBUGログを出力")

    graph_input = argparse.ArgumentParser(add_help=False)
    graph_input.add_argument("graph", help="グラフファイル（JSON / DIMACS）。- で標準入力")

    decision = argparse.ArgumentParser(add_help=False)
    decision.add_argument("--at-least", type=_positive_int, help="値がこれ未満なら終了コード 1")

    reduction = argparse.ArgumentParser(add_help=False)
    reduction.add_argument("instance", help="元問題インスタンスJSON。- で標準入力")
    reduction.add_argument("--from", dest="source", required=True, choices=sorted(REDUCTION_SOURCES))
    reduction.add_argument("--mode", choices=["faithful", "budget"], default="faithful", help="MCSI の構成")
    reduction.add_argument("--budget-q", type=_positive_int, help="予算モードの q'")
    reduction.add_argument("--materialize", action="store_true", help="faithful モードで最上位木を実体化")
    reduction.add_argument("--variant", choices=["cyclic", "standard"], default="cyclic", help="Grid Tiling の種類")

    parser = argparse.ArgumentParser(prog=APP_NAME, description=APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grundy", parents=[common, graph_input, decision], help="Grundy数")
    p.set_defaults(handler=cmd_grundy)

    p = sub.add_parser("rooted-grundy", parents=[common, graph_input, decision], help="頂点の最大色")
    p.add_argument("--vertex", type=int, required=True, help="頂点ID（1始まり）")
    p.set_defaults(handler=cmd_rooted_grundy)

    p = sub.add_parser("partial-grundy", parents=[common, graph_input, decision], help="部分Grundy数")
    p.add_argument("--method", choices=["auto", "partition", "center"], default="auto")
    p.set_defaults(handler=cmd_partial_grundy)

    p = sub.add_parser("bcore", parents=[common, graph_input, decision], help="b彩色コアの最大位数")
    p.add_argument("--method", choices=["center", "partition"], default="center")
    p.set_defaults(handler=cmd_bcore)

    p = sub.add_parser("firstfit", parents=[common, graph_input], help="first-fit シミュレーション")
    p.add_argument("--order", help="頂点順序（カンマ区切り、既定は1始まり）")
    p.add_argument("--zero-based", action="store_true", help="--order を0始まりIDとして読む")
    p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES, help="--order 省略時の順序数")
    p.set_defaults(handler=cmd_firstfit)

    p = sub.add_parser("verify", parents=[common, graph_input], help="証明書の検証")
    p.add_argument("--certificate", required=True, help="証明書JSON")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="ガジェット生成")
    p.add_argument("--family", required=True, choices=GADGET_FAMILIES)
    p.add_argument("--params", help='パラメータ（例: "l=2,t=3"）')
    p.add_argument("--format", choices=GRAPH_FORMATS, default=DEFAULT_GRAPH_FORMAT)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("reduce", parents=[common, reduction], help="帰着の構築")
    p.add_argument("--format", choices=GRAPH_FORMATS, default=DEFAULT_GRAPH_FORMAT)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("certify", parents=[common, reduction], help="元問題の解から証明書を合成")
    p.add_argument("--solution", required=True, help="解JSON")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("fpt", parents=[common, graph_input], help="FPTアルゴリズム")
    p.add_argument("--problem", required=True, choices=FPT_PROBLEMS)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--t", type=_positive_int, default=2)
    p.add_argument("--mode", choices=FPT_MODES, default=DEFAULT_FPT_MODE)
    p.add_argument("--n-t-eps", type=_positive_int, help="N(t,1/k)（faithful モードで必須）")
    p.add_argument("--algorithm", choices=["ktt-free", "bounded-degree"], default="ktt-free")
    p.add_argument("--d", type=int, help="bounded-degree: 次数の閾値")
    p.add_argument("--s", type=int, help="bounded-degree: 高次数頂点の数の上限")
    p.add_argument("--f", type=int, help="practical: f(t,k) の上書き")
    p.add_argument("--g", type=int, help="practical: g(t,k) の上書き")
    p.add_argument("--m-prime", type=int, help="practical: M' の上書き")
    p.set_defaults(handler=cmd_fpt)

    p = sub.add_parser("props", parents=[common], help="不変条件スイート")
    p.add_argument("--suite", default="all", help=f"スイート名（カンマ区切り / all）: {', '.join(SUITES)}")
    p.add_argument("--quick", action="store_true", help="縮小規模で実行")
    p.add_argument("--timings", action="store_true", help="JSONに計測時間を含める（出力は非決定的になる）")
    p.add_argument("--report", help="Wordレポートの出力先")
    p.set_defaults(handler=cmd_props)

    p = sub.add_parser("bench", parents=[common], help="ガジェット族のベンチマーク")
    p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    p.add_argument("--quick", action="store_true", help="小さいガジェットだけ")
    p.add_argument("--timings", action="store_true", help="JSONに計測時間を含める（出力は非決定的になる）")
    p.add_argument("--report", help="Wordレポートの出力先")
    p.set_defaults(handler=cmd_bench)

    return parser


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


# =============================================================================
# メインアプリケーション
# =============================================================================


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    エントリポイント

    Args:
        argv: 引数（Noneの場合は sys.argv[1:]）

    Returns:
        終了コード（config.EXIT_CODES）
    """
    try:
        args = _parse_args(argv)
    except SystemExit as e:
        # argparse は --help / --version で 0、誤りで 2 を返す
        return EXIT_CODES["usage"] if e.code else EXIT_CODES["yes"]

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except CapExceededError as e:
        logger.error(f"Cap exceeded ({e.cap_name}): {e}")
        return EXIT_CODES["cap_exceeded"]
    except ContractBreachError as e:
        logger.error(f"Input contract violated: {e}")
        return EXIT_CODES["contract_breach"]
    except InvalidSolutionError as e:
        logger.error(f"Invalid solution: {e}")
        return EXIT_CODES["no"]
    except ExtractionFailure as e:
        logger.error(f"Extraction failed at {e.step}: {e}")
        return EXIT_CODES["no"]
    except (UsageError, GreedyColoringError, ValueError) as e:
        logger.error(str(e))
        return EXIT_CODES["usage"]


if __name__ == "__main__":
    sys.exit(main())
