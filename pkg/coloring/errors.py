"""
例外定義モジュール

CLIの終了コードに対応づけられる例外階層を定義する。
"""

from typing import Any, Optional, Sequence, Tuple


class GreedyColoringError(Exception):
    """ツールキット共通の基底例外"""


class CapExceededError(GreedyColoringError):
    """ソルバーの上限・列挙予算を超えた（終了コード 3）"""

    def __init__(self, message: str, cap_name: str = "", limit: Optional[int] = None):
        super().__init__(message)
        self.cap_name = cap_name
        self.limit = limit


class ContractBreachError(GreedyColoringError):
    """入力契約違反（終了コード 4）。K_{t,t} の両側を保持する"""

    def __init__(self, message: str, witness: Optional[Tuple[Sequence[int], Sequence[int]]] = None):
        super().__init__(message)
        self.witness = witness


class InvalidInstanceError(GreedyColoringError, ValueError):
    """不正なグラフ・ソースインスタンス"""


class MalformedCertificateError(GreedyColoringError, ValueError):
    """クラスの重複・中心の欠落など、構造的に壊れた証明書"""


class InvalidSolutionError(GreedyColoringError, ValueError):
    """ソース問題の解として不正（違反箇所を保持）"""

    def __init__(self, message: str, offending: Any = None):
        super().__init__(message)
        self.offending = offending


class PreconditionError(GreedyColoringError, ValueError):
    """保証に必要な前提条件が満たされていない"""


class ExtractionFailure(GreedyColoringError):
    """ベストエフォート抽出の失敗（どの段階で枯渇したかを保持）"""

    def __init__(self, message: str, step: str = ""):
        super().__init__(message)
        self.step = step
