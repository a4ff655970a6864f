"""
頂点ID変換ユーティリティモジュール

ファイル形式の1始まりIDと内部の0始まり連続IDの変換を行う。
バリデーション機能も提供する。
"""

from typing import Dict, Iterable, List, Sequence, Tuple


def to_internal(vertex_id: int, n: int) -> int:
    """
    1始まりIDを0始まりIDへ変換

    Args:
        vertex_id: ファイル上の頂点ID（1..n）
        n: 頂点数

    Returns:
        内部頂点ID（0..n-1）

    Example:
        >>> to_internal(1, 4)
        0
    """
    if not isinstance(vertex_id, int) or isinstance(vertex_id, bool):
        raise ValueError(f"Vertex id must be an integer, got {vertex_id!r}")
    if not 1 <= vertex_id <= n:
        raise ValueError(f"Vertex id {vertex_id} out of range 1..{n}")
    return vertex_id - 1


def to_external(vertex_id: int, n: int) -> int:
    """
    0始まりIDを1始まりIDへ変換

    Args:
        vertex_id: 内部頂点ID（0..n-1）
        n: 頂点数

    Returns:
        ファイル上の頂点ID（1..n）

    Example:
        >>> to_external(0, 4)
        1
    """
    if not 0 <= vertex_id < n:
        raise ValueError(f"Vertex id {vertex_id} out of range 0..{n - 1}")
    return vertex_id + 1


def edges_to_internal(edges: Iterable[Sequence[int]], n: int) -> List[Tuple[int, int]]:
    """
    1始まりの辺リストを内部IDへ変換

    Args:
        edges: [[u, v], ...]（1始まり）
        n: 頂点数

    Returns:
        [(u, v), ...]（0始まり）

    Example:
        >>> edges_to_internal([[1, 2], [2, 3]], 3)
        [(0, 1), (1, 2)]
    """
    result = []
    for edge in edges:
        if len(edge) != 2:
            raise ValueError(f"Edge must have exactly 2 endpoints: {list(edge)}")
        u, v = edge
        result.append((to_internal(u, n), to_internal(v, n)))
    return result


def edges_to_external(edges: Iterable[Tuple[int, int]], n: int) -> List[List[int]]:
    """
    内部IDの辺リストを1始まりへ変換

    Args:
        edges: [(u, v), ...]（0始まり）
        n: 頂点数

    Returns:
        [[u, v], ...]（1始まり）
    """
    return [[to_external(u, n), to_external(v, n)] for u, v in edges]


def groups_to_internal(groups: Iterable[Sequence[int]], n: int) -> List[List[int]]:
    """
    色クラス・パートなど頂点IDのグループを内部IDへ変換

    Args:
        groups: 1始まりIDのリストのリスト
        n: 頂点数

    Returns:
        0始まりIDのリストのリスト
    """
    return [[to_internal(v, n) for v in group] for group in groups]


def groups_to_external(groups: Iterable[Sequence[int]], n: int) -> List[List[int]]:
    """内部IDのグループを1始まりへ変換"""
    return [[to_external(v, n) for v in group] for group in groups]


def roles_to_external(roles: Dict[int, str], n: int) -> Dict[str, str]:
    """
    役割ラベル辞書を1始まりIDのJSONキーへ変換

    Args:
        roles: 内部ID → ラベル
        n: 頂点数

    Returns:
        "1始まりID" → ラベル
    """
    return {str(to_external(v, n)): label for v, label in sorted(roles.items())}


def roles_to_internal(roles: Dict[str, str], n: int) -> Dict[int, str]:
    """JSONの役割ラベル辞書を内部IDへ変換"""
    result = {}
    for key, label in roles.items():
        if not str(key).isdigit():
            raise ValueError(f"Role key must be a vertex id, got {key!r}")
        result[to_internal(int(key), n)] = label
    return result


def validate_vertex_ids(ids: Sequence[int], n: int, allow_duplicates: bool = False) -> Tuple[bool, str]:
    """
    内部頂点IDの列をバリデーション

    Args:
        ids: 内部頂点IDの列
        n: 頂点数
        allow_duplicates: 重複を許すか

    Returns:
        (is_valid, error_message) のタプル

    Example:
        >>> validate_vertex_ids([0, 2, 1], 3)
        (True, '')
        >>> validate_vertex_ids([0, 0], 3)
        (False, 'duplicate vertex id 0')
    """
    seen = set()
    for v in ids:
        if not isinstance(v, int) or isinstance(v, bool):
            return (False, f"vertex id must be an integer, got {v!r}")
        if not 0 <= v < n:
            return (False, f"vertex id {v} out of range 0..{n - 1}")
        if v in seen and not allow_duplicates:
            return (False, f"duplicate vertex id {v}")
        seen.add(v)
    return (True, "")
