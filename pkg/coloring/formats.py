"""
ファイル形式・JSONバリデーションモジュール

グラフ・証明書・ソースインスタンス・解の読み書きを行う。
ディスク上の頂点IDは1始まりで、読み込み時に内部の0始まりIDへ変換する。
"""

import json
import logging
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config import SCHEMA_VERSION, get_default_metadata
from coloring.colorings import WitnessCertificate, WitnessKind
from coloring.errors import InvalidInstanceError, MalformedCertificateError
from coloring.graph_core import Graph
from coloring.id_utils import (
    edges_to_external,
    edges_to_internal,
    groups_to_external,
    groups_to_internal,
    roles_to_external,
    roles_to_internal,
    to_external,
    to_internal,
)
from coloring.reductions import GridTilingInstance, McsiInstance, MisInstance, Pair

logger = logging.getLogger(__name__)

SourceInstance = Union[MisInstance, McsiInstance, GridTilingInstance]


# バリデーション結果の型定義
class ValidationResult:
    """バリデーション結果を保持するクラス"""

    def __init__(self):
        self.errors: List[str] = []
        self.warnings: List[str] = []
        self.data: Any = None

    @property
    def is_valid(self) -> bool:
        """エラーがない場合True"""
        return len(self.errors) == 0

    def add_error(self, message: str) -> None:
        """エラーを追加"""
        self.errors.append(message)

    def add_warning(self, message: str) -> None:
        """警告を追加"""
        self.warnings.append(message)

    def add_validation_error(self, error: ValidationError) -> None:
        """pydantic の ValidationError をエラー一覧に展開"""
        for item in error.errors():
            location = ".".join(str(part) for part in item["loc"]) or "<root>"
            self.add_error(f"{location}: {item['msg']}")

    def raise_if_invalid(self, error_cls: type = InvalidInstanceError) -> Any:
        """エラーがあれば例外を送出し、なければ data を返す"""
        for warning in self.warnings:
            logger.warning(warning)
        if not self.is_valid:
            raise error_cls("; ".join(self.errors))
        return self.data


# =============================================================================
# ファイルモデル（1始まりID）
# =============================================================================


class GraphFile(BaseModel):
    """グラフJSON: {"n": 4, "edges": [[1, 2], ...], "roles": {"1": "root"}}"""

    model_config = ConfigDict(extra="ignore")

    n: int = Field(ge=0)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    roles: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_ids(self) -> "GraphFile":
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge [{u}, {v}] has an endpoint outside 1..{self.n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        for key in self.roles:
            if not key.isdigit() or not 1 <= int(key) <= self.n:
                raise ValueError(f"role key {key!r} is not a vertex id in 1..{self.n}")
        return self

    def to_graph(self) -> Graph:
        return Graph.from_edges(
            self.n, edges_to_internal(self.edges, self.n), roles_to_internal(self.roles, self.n)
        )

    @classmethod
    def from_graph(cls, g: Graph) -> "GraphFile":
        return cls(
            n=g.n,
            edges=[tuple(e) for e in edges_to_external(g.edges(), g.n)],
            roles=roles_to_external(dict(g.role_labels), g.n),
        )


class CertificateFile(BaseModel):
    """証明書JSON: {"kind": "grundy", "classes": [[1], [2, 3]], "centers": [1, 2]}"""

    model_config = ConfigDict(extra="ignore")

    kind: WitnessKind
    classes: List[List[int]]
    centers: Optional[List[int]] = None

    def to_certificate(self, n: int) -> WitnessCertificate:
        classes = groups_to_internal(self.classes, n)
        centers = [to_internal(c, n) for c in self.centers] if self.centers is not None else None
        return WitnessCertificate(self.kind, tuple(tuple(c) for c in classes), centers)

    @classmethod
    def from_certificate(cls, cert: WitnessCertificate, n: int) -> "CertificateFile":
        return cls(
            kind=cert.kind,
            classes=groups_to_external(cert.classes, n),
            centers=[to_external(c, n) for c in cert.centers] if cert.centers is not None else None,
        )


class MisInstanceFile(BaseModel):
    """多色独立集合インスタンス"""

    model_config = ConfigDict(extra="ignore")

    type: Literal["mis"] = "mis"
    graph: GraphFile
    parts: List[List[int]]

    def to_instance(self) -> MisInstance:
        n = self.graph.n
        return MisInstance(self.graph.to_graph(), tuple(tuple(p) for p in groups_to_internal(self.parts, n)))


class McsiInstanceFile(BaseModel):
    """多色部分グラフ同型インスタンス（pattern の頂点 i がパート i）"""

    model_config = ConfigDict(extra="ignore")

    type: Literal["mcsi"] = "mcsi"
    graph: GraphFile
    parts: List[List[int]]
    pattern: GraphFile

    def to_instance(self) -> McsiInstance:
        n = self.graph.n
        parts = tuple(tuple(p) for p in groups_to_internal(self.parts, n))
        return McsiInstance(self.graph.to_graph(), parts, self.pattern.to_graph())


class GridTilingInstanceFile(BaseModel):
    """Grid Tiling インスタンス（cells[i][j] は対 [x, y] のリスト、値は 1..n）"""

    model_config = ConfigDict(extra="ignore")

    type: Literal["gridtiling"] = "gridtiling"
    k: int = Field(ge=1)
    n: int = Field(ge=1)
    cells: List[List[List[Tuple[int, int]]]]

    def to_instance(self) -> GridTilingInstance:
        return GridTilingInstance(self.k, self.n, tuple(tuple(tuple(cell) for cell in row) for row in self.cells))


class SolutionFile(BaseModel):
    """
    ソース問題の解

    mis / mcsi: vertices[i] はパート i+1 で選んだ頂点（1始まり）
    gridtiling: pairs は [i, j, x, y] の列（セル添字も1始まり）
    """

    model_config = ConfigDict(extra="ignore")

    kind: Literal["mis", "mcsi", "gridtiling"]
    vertices: List[int] = Field(default_factory=list)
    pairs: List[Tuple[int, int, int, int]] = Field(default_factory=list)


INSTANCE_MODELS = {
    "mis": MisInstanceFile,
    "mcsi": McsiInstanceFile,
    "gridtiling": GridTilingInstanceFile,
}


# =============================================================================
# パース
# =============================================================================


def parse_json(json_text: str) -> ValidationResult:
    """
    JSON文字列をパースし、基本的な構文チェックを行う

    Args:
        json_text: JSON形式の文字列

    Returns:
        ValidationResult: パース結果
    """
    result = ValidationResult()
    try:
        result.data = json.loads(json_text)
    except json.JSONDecodeError as e:
        result.add_error(f"JSON syntax error: {e}")
    return result


def validate_graph_json(data: Any) -> ValidationResult:
    """
    パース済みグラフJSONのバリデーション

    Returns:
        ValidationResult（成功時の data は Graph）
    """
    result = ValidationResult()
    # CLI のエンベロープ {"result": {"graph": ...}} もそのまま受け付ける
    if isinstance(data, dict) and "result" in data and "n" not in data:
        data = data["result"]
    if isinstance(data, dict) and "graph" in data and "n" not in data:
        data = data["graph"]
    try:
        model = GraphFile.model_validate(data)
    except ValidationError as e:
        result.add_validation_error(e)
        return result
    if len(set(map(frozenset, model.edges))) != len(model.edges):
        result.add_warning("duplicate edges were merged")
    result.data = model.to_graph()
    return result


def parse_dimacs(text: str) -> ValidationResult:
    """
    DIMACS形式（"p edge n m" ヘッダ、"e u v" 行、"c" コメント）をパース

    "c role <v> <label>" の行は役割ラベルとして読む。

    Returns:
        ValidationResult（成功時の data は Graph）
    """
    result = ValidationResult()
    n: Optional[int] = None
    declared_edges = 0
    edges: List[List[int]] = []
    roles: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            fields = line.split(maxsplit=3)
            if fields[0] == "c" and len(fields) == 4 and fields[1] == "role":
                if not fields[2].isdigit():
                    result.add_error(f"line {lineno}: expected 'c role <v> <label>'")
                    continue
                roles[fields[2]] = fields[3]
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                result.add_error(f"line {lineno}: duplicate problem line")
                continue
            if len(fields) != 4 or not fields[2].isdigit() or not fields[3].isdigit():
                result.add_error(f"line {lineno}: expected 'p edge <n> <m>'")
                continue
            n, declared_edges = int(fields[2]), int(fields[3])
        elif fields[0] == "e":
            if n is None:
                result.add_error(f"line {lineno}: edge before problem line")
                continue
            if len(fields) != 3 or not fields[1].isdigit() or not fields[2].isdigit():
                result.add_error(f"line {lineno}: expected 'e <u> <v>'")
                continue
            edges.append([int(fields[1]), int(fields[2])])
        else:
            result.add_error(f"line {lineno}: unknown line type {fields[0]!r}")
    if n is None:
        result.add_error("missing problem line 'p edge <n> <m>'")
    if not result.is_valid:
        return result
    if declared_edges != len(edges):
        result.add_warning(f"header declares {declared_edges} edges, found {len(edges)}")
    payload: Dict[str, Any] = {"n": n, "edges": edges}
    if roles:
        payload["roles"] = roles
    graph_result = validate_graph_json(payload)
    result.errors.extend(graph_result.errors)
    result.warnings.extend(graph_result.warnings)
    result.data = graph_result.data
    return result


def parse_graph(text: str) -> ValidationResult:
    """JSON と DIMACS を先頭文字で判別してパース"""
    if text.lstrip().startswith("{"):
        parsed = parse_json(text)
        if not parsed.is_valid:
            return parsed
        return validate_graph_json(parsed.data)
    return parse_dimacs(text)


def load_graph(text: str) -> Graph:
    """
    グラフを読み込む

    Raises:
        InvalidInstanceError: 構文・IDの誤り
    """
    return parse_graph(text).raise_if_invalid()


def load_certificate(text: str, n: int) -> WitnessCertificate:
    """
    証明書JSONを読み込む

    Raises:
        MalformedCertificateError: 構文・IDの誤り、クラスの重複
    """
    parsed = parse_json(text)
    data = parsed.raise_if_invalid(MalformedCertificateError)
    if isinstance(data, dict) and "result" in data and "classes" not in data:
        data = data["result"]
    if isinstance(data, dict) and "certificate" in data and "classes" not in data:
        data = data["certificate"]
    if data is None:
        raise MalformedCertificateError("No certificate in the given JSON")
    try:
        model = CertificateFile.model_validate(data)
        return model.to_certificate(n)
    except ValidationError as e:
        result = ValidationResult()
        result.add_validation_error(e)
        raise MalformedCertificateError("; ".join(result.errors)) from e
    except ValueError as e:
        if isinstance(e, MalformedCertificateError):
            raise
        raise MalformedCertificateError(str(e)) from e


def load_instance(text: str) -> SourceInstance:
    """
    ソースインスタンスJSONを "type" で判別して読み込む

    Raises:
        InvalidInstanceError: 構文エラー・未知の type・整合性違反
    """
    data = parse_json(text).raise_if_invalid()
    if not isinstance(data, dict) or data.get("type") not in INSTANCE_MODELS:
        raise InvalidInstanceError(f"instance type must be one of {sorted(INSTANCE_MODELS)}")
    try:
        inst = INSTANCE_MODELS[data["type"]].model_validate(data).to_instance()
    except ValidationError as e:
        result = ValidationResult()
        result.add_validation_error(e)
        raise InvalidInstanceError("; ".join(result.errors)) from e
    except ValueError as e:
        raise InvalidInstanceError(str(e)) from e
    is_valid, message = inst.validate()
    if not is_valid:
        raise InvalidInstanceError(message)
    return inst


def load_solution(text: str, inst: SourceInstance) -> Union[Tuple[int, ...], Dict[int, int], Dict[Pair, Pair]]:
    """
    解JSONを読み込み、内部表現に変換

    Returns:
        mis: パート順の頂点タプル / mcsi: パート → 頂点 / gridtiling: セル → 対（いずれも0始まり、対の値はそのまま）
    """
    data = parse_json(text).raise_if_invalid()
    try:
        model = SolutionFile.model_validate(data)
    except ValidationError as e:
        result = ValidationResult()
        result.add_validation_error(e)
        raise InvalidInstanceError("; ".join(result.errors)) from e
    if model.kind == "gridtiling":
        if not isinstance(inst, GridTilingInstance):
            raise InvalidInstanceError("gridtiling solution given for a different instance type")
        solution: Dict[Pair, Pair] = {}
        for i, j, x, y in model.pairs:
            if not (1 <= i <= inst.k and 1 <= j <= inst.k):
                raise InvalidInstanceError(f"cell ({i},{j}) outside 1..{inst.k}")
            solution[(i - 1, j - 1)] = (x, y)
        return solution
    expected = MisInstance if model.kind == "mis" else McsiInstance
    if not isinstance(inst, expected):
        raise InvalidInstanceError(f"{model.kind} solution given for a different instance type")
    vertices = [to_internal(v, inst.graph.n) for v in model.vertices]
    if model.kind == "mis":
        return tuple(vertices)
    return {i: v for i, v in enumerate(vertices)}


# =============================================================================
# 書き出し
# =============================================================================


def graph_to_json(g: Graph) -> Dict[str, Any]:
    """グラフのJSON表現（1始まり）"""
    return GraphFile.from_graph(g).model_dump(mode="json")


def certificate_to_json(cert: WitnessCertificate, n: int) -> Dict[str, Any]:
    """証明書のJSON表現（1始まり）"""
    return CertificateFile.from_certificate(cert, n).model_dump(mode="json")


def instance_to_json(inst: SourceInstance) -> Dict[str, Any]:
    """ソースインスタンスのJSON表現（1始まり）"""
    if isinstance(inst, GridTilingInstance):
        cells = [[[list(p) for p in cell] for cell in row] for row in inst.cells]
        return {"type": "gridtiling", "k": inst.k, "n": inst.n, "cells": cells}
    data = {
        "type": "mis" if isinstance(inst, MisInstance) else "mcsi",
        "graph": graph_to_json(inst.graph),
        "parts": groups_to_external(inst.parts, inst.graph.n),
    }
    if isinstance(inst, McsiInstance):
        data["pattern"] = graph_to_json(inst.pattern)
    return data


def solution_to_json(solution: Any, inst: SourceInstance) -> Dict[str, Any]:
    """load_solution の逆変換"""
    if isinstance(inst, GridTilingInstance):
        pairs = [[i + 1, j + 1, x, y] for (i, j), (x, y) in sorted(solution.items())]
        return {"kind": "gridtiling", "pairs": pairs}
    n = inst.graph.n
    if isinstance(inst, MisInstance):
        return {"kind": "mis", "vertices": [to_external(v, n) for v in solution]}
    return {"kind": "mcsi", "vertices": [to_external(solution[i], n) for i in range(inst.k)]}


def graph_to_dimacs(g: Graph) -> str:
    """DIMACS形式（スキーマ版と役割ラベルは c 行に書く）"""
    lines = [f"c schema_version {SCHEMA_VERSION}", f"p edge {g.n} {g.num_edges}"]
    for v, role in sorted(g.role_labels.items()):
        lines.append(f"c role {to_external(v, g.n)} {role}")
    lines.extend(f"e {u} {v}" for u, v in edges_to_external(g.edges(), g.n))
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: Graph, name: str = "G") -> str:
    """DOT形式（役割ラベルをノード属性 label / role に書く）"""
    lines = [f"graph {name} {{", f"  schema_version={_dot_quote(SCHEMA_VERSION)};"]
    for v in range(g.n):
        vid = to_external(v, g.n)
        role = g.role(v)
        if role:
            lines.append(f"  {vid} [label={_dot_quote(role)}, role={_dot_quote(role)}];")
        else:
            lines.append(f"  {vid};")
    lines.extend(f"  {u} -- {v};" for u, v in edges_to_external(g.edges(), g.n))
    lines.append("}")
    return "\n".join(lines) + "\n"


GRAPH_WRITERS = {
    "json": lambda g: dump_json(graph_to_json(g)),
    "dimacs": graph_to_dimacs,
    "dot": graph_to_dot,
}


def write_graph(g: Graph, fmt: str = "json") -> str:
    """指定形式の文字列に変換"""
    if fmt not in GRAPH_WRITERS:
        raise ValueError(f"Unknown graph format: {fmt!r}")
    return GRAPH_WRITERS[fmt](g)


def make_envelope(command: str, result: Mapping[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    """
    CLI出力の共通エンベロープ

    Returns:
        schema_version, command, seed, metadata, result を持つ辞書
    """
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "metadata": get_default_metadata(),
        "result": dict(result),
    }


def dump_json(data: Any) -> str:
    """決定的なJSON文字列（キー順固定）"""
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
