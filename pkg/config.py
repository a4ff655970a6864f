"""
アプリケーション設定モジュール

ソルバー上限値、終了コード、入出力形式、ガジェット生成のデフォルト値を管理する。
"""

import os
from typing import Dict, Any, Mapping, Optional

# =============================================================================
# アプリケーション情報
# =============================================================================

APP_NAME = "greedy-coloring"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Grundy彩色・部分Grundy彩色・b彩色コアの厳密ソルバー、ガジェット生成、帰着、FPTアルゴリズム"

# 出力JSONのスキーマバージョン
SCHEMA_VERSION = "1.0"

# =============================================================================
# 終了コード
# =============================================================================

EXIT_CODES = {
    "yes": 0,  # 成功 / YES
    "no": 1,  # NO / 検証失敗
    "usage": 2,  # 引数・入力ファイルの誤り
    "cap_exceeded": 3,  # ソルバー上限超過
    "contract_breach": 4,  # 入力契約違反（K_{t,t} 検出など）
}

# =============================================================================
# ソルバー上限
# =============================================================================

GRUNDY_CAP = 20  # 部分集合メモ化（約10^6部分集合）
ROOTED_GRUNDY_CAP = 16
ORDERINGS_CAP = 9  # n! 順序列挙オラクル
PARTITION_ENUM_CAP = 12  # 集合分割列挙（部分Grundy）
PARTITION_AUTO_LIMIT = 8  # method="auto" で分割列挙を使う頂点数
BCORE_CAP = 10  # b彩色コアの全探索
CENTER_SEARCH_CAP = 24  # 中心指向探索
WITNESS_SUBGRAPH_BUDGET = 16  # grundy_witness_search の 2^{k-1} 上限
LABELED_ISO_CAP = 16  # ラベル付き成分の頂点数上限（k^2）
BICLIQUE_BUDGET = 200_000  # has_biclique で列挙する t 部分集合の最大数

# 環境変数による上限の既定値上書き（例: "grundy=18,rooted=14"）
CAPS_ENV_VAR = "GREEDY_COLORING_CAPS"

# 環境変数のキー → 上限名
CAP_KEYS = {
    "grundy": "grundy",
    "rooted": "rooted_grundy",
    "orderings": "orderings",
    "partition": "partition",
    "bcore": "bcore",
    "center": "center_search",
    "witness": "witness_budget",
    "iso": "labeled_iso",
    "biclique": "biclique_budget",
}

# =============================================================================
# ガジェット生成設定
# =============================================================================

BINOMIAL_TREE_MAX_K = 25  # |T_k| = 2^{k-1} のサイズガード
TOP_TREE_SIZE_GUARD = 2 ** 16  # T_q を実体化する上限頂点数
BUDGET_Q_MAX = 16  # 予算モードの q' 上限
GADGET_FAMILIES = [
    "binomial-tree",
    "pruned-binomial-tree",
    "half-graph",
    "half-graph-path",
    "half-graph-cycle",
    "anti-matching",
    "star-forest",
    "t5-edge-tree",
]

# =============================================================================
# 帰着設定
# =============================================================================

MCSI_Q_OFFSET = 55  # q = ceil(log k) + 55
MCSI_TOP_COLOR = 6  # 手術対象の色（親の色は 7）
GRIDTILING_Q_FACTOR = 14  # q = 14 k^2
GRIDTILING_D_SIZE = 18
GRIDTILING_SATURATION_SIZE = 5  # C', C-, C+ それぞれ

# =============================================================================
# FPT設定
# =============================================================================

FPT_MODES = ["faithful", "practical"]
DEFAULT_FPT_MODE = "practical"
FPT_PROBLEMS = ["partial-grundy", "bcore"]
TOWER_BASE = 8
TOWER_EXACT_BITS = 1 << 16  # これを超える塔は記号表現のまま扱う
SEPARATING_FAMILY_MAX_SETS = 500_000  # 分離族の生成上限

# =============================================================================
# サンプリング・ベンチ設定
# =============================================================================

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 1000
BENCH_EXACT_LIMIT = 14  # これ以下の頂点数なら bench で厳密解を計算

# =============================================================================
# ファイル設定
# =============================================================================

GRAPH_FORMATS = ["json", "dimacs", "dot"]
DEFAULT_GRAPH_FORMAT = "json"
OUTPUT_DOCX_EXTENSION = ".docx"
OUTPUT_JSON_EXTENSION = ".json"

# =============================================================================
# レポート設定
# =============================================================================

REPORT_FONT_NAME = "MS Mincho"
REPORT_FONT_SIZE_BODY = 10.5
DEFAULT_REPORT_TITLE = "Grundy彩色 検証レポート"

# =============================================================================
# ヘルパー関数
# =============================================================================


def get_default_caps() -> Dict[str, int]:
    """
    既定のソルバー上限を取得

    Returns:
        上限名 → 値 の辞書
    """
    return {
        "grundy": GRUNDY_CAP,
        "rooted_grundy": ROOTED_GRUNDY_CAP,
        "orderings": ORDERINGS_CAP,
        "partition": PARTITION_ENUM_CAP,
        "bcore": BCORE_CAP,
        "center_search": CENTER_SEARCH_CAP,
        "witness_budget": WITNESS_SUBGRAPH_BUDGET,
        "labeled_iso": LABELED_ISO_CAP,
        "biclique_budget": BICLIQUE_BUDGET,
    }


def parse_caps_text(text: str) -> Dict[str, int]:
    """
    "grundy=18,rooted=14" 形式の上限指定をパース

    Args:
        text: カンマ区切りの key=value 文字列

    Returns:
        上限名 → 値 の辞書
    """
    caps: Dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"Cap entry must look like key=value: {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in CAP_KEYS:
            raise ValueError(f"Unknown cap key: {key!r}")
        if not value.isdigit() or int(value) <= 0:
            raise ValueError(f"Cap value must be a positive integer: {item!r}")
        caps[CAP_KEYS[key]] = int(value)
    return caps


def get_solver_caps(
    environ: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, int]] = None,
) -> Dict[str, int]:
    """
    環境変数とフラグを反映したソルバー上限を取得

    優先順位: overrides（CLIフラグ） > 環境変数 > 既定値

    Args:
        environ: 環境変数（Noneの場合は os.environ）
        overrides: 明示指定された上限

    Returns:
        上限名 → 値 の辞書
    """
    env = os.environ if environ is None else environ
    caps = get_default_caps()
    if env.get(CAPS_ENV_VAR):
        caps.update(parse_caps_text(env[CAPS_ENV_VAR]))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if value <= 0:
            raise ValueError(f"Cap {key} must be positive")
        caps[key] = value
    return caps


def get_default_metadata() -> Dict[str, Any]:
    """
    出力JSONに埋め込むmetadataを取得

    同一入力・同一シードで出力がバイト単位で一致するよう、時刻は含めない。

    Returns:
        metadata辞書
    """
    return {
        "app": APP_NAME,
        "app_version": APP_VERSION,
        "schema_version": SCHEMA_VERSION,
    }
