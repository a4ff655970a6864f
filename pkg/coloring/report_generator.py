"""
Wordレポート生成モジュール

python-docxを使用して props / bench の結果をWordファイルにまとめる。
標準出力のJSONが正式な結果で、レポートは閲覧用。
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from docx import Document
from docx.enum.text import WD_ALIGN_PARAGRAPH
from docx.oxml import OxmlElement
from docx.oxml.ns import qn
from docx.shared import Cm, Pt, RGBColor

from config import APP_NAME, DEFAULT_REPORT_TITLE, REPORT_FONT_NAME, REPORT_FONT_SIZE_BODY

logger = logging.getLogger(__name__)


class ReportGenerator:
    """検証レポート生成クラス"""

    def __init__(self, title: str = DEFAULT_REPORT_TITLE):
        """初期化

        Args:
            title: ドキュメントのタイトル
        """
        self.doc = Document()
        self.title = title
        self._setup_styles()
        self._setup_page()

    def _setup_styles(self):
        """ドキュメントのスタイル設定"""
        normal = self.doc.styles['Normal']
        normal.font.name = REPORT_FONT_NAME
        normal._element.rPr.rFonts.set(qn('w:eastAsia'), REPORT_FONT_NAME)
        normal.font.size = Pt(REPORT_FONT_SIZE_BODY)
        normal.paragraph_format.space_after = Pt(4)

        # Heading 2 スタイル（スイート見出し用）
        h2 = self.doc.styles['Heading 2']
        h2.font.name = REPORT_FONT_NAME
        h2._element.rPr.rFonts.set(qn('w:eastAsia'), REPORT_FONT_NAME)
        h2.font.size = Pt(13)
        h2.font.bold = True
        h2.font.color.rgb = RGBColor(0, 0, 0)
        h2.paragraph_format.space_before = Pt(12)
        h2.paragraph_format.space_after = Pt(6)

    def _setup_page(self):
        """ページ設定（余白、ヘッダー、フッター）"""
        section = self.doc.sections[0]
        section.top_margin = Cm(2)
        section.bottom_margin = Cm(2)
        section.left_margin = Cm(2.5)
        section.right_margin = Cm(2)

        header_para = section.header.paragraphs[0]
        header_para.alignment = WD_ALIGN_PARAGRAPH.RIGHT
        run = header_para.add_run(APP_NAME)
        run.font.size = Pt(9)
        run.font.color.rgb = RGBColor(128, 128, 128)

        # フッター（ページ番号・中央揃え）
        footer_para = section.footer.paragraphs[0]
        footer_para.alignment = WD_ALIGN_PARAGRAPH.CENTER
        self._add_field(footer_para, ' PAGE ')

    def _add_field(self, paragraph, field_code):
        """Wordフィールドコードを段落に追加

        Args:
            paragraph: 対象段落
            field_code: フィールドコード（例: ' PAGE '）
        """
        run = paragraph.add_run()
        run.font.size = Pt(9)
        run.font.color.rgb = RGBColor(128, 128, 128)
        for char_type, text in (('begin', None), (None, field_code), ('separate', None), ('end', None)):
            if char_type is None:
                instr = OxmlElement('w:instrText')
                instr.set(qn('xml:space'), 'preserve')
                instr.text = text
                run._element.append(instr)
            else:
                fld_char = OxmlElement('w:fldChar')
                fld_char.set(qn('w:fldCharType'), char_type)
                run._element.append(fld_char)
        return run

    def add_title(self, title: Optional[str] = None):
        """ドキュメントのタイトルを追加"""
        title_para = self.doc.add_paragraph()
        title_para.alignment = WD_ALIGN_PARAGRAPH.CENTER
        title_run = title_para.add_run(title or self.title)
        title_run.font.size = Pt(18)
        title_run.font.bold = True
        title_para.paragraph_format.space_after = Pt(20)

    def add_summary_table(self, headers: Sequence[str], rows: Sequence[Sequence[Any]]):
        """
        要約表を追加

        Args:
            headers: 見出し行
            rows: データ行（各セルは str() で表示）
        """
        table = self.doc.add_table(rows=1, cols=len(headers))
        table.style = 'Table Grid'
        for cell, text in zip(table.rows[0].cells, headers):
            cell.text = str(text)
            for run in cell.paragraphs[0].runs:
                run.font.bold = True
        for row in rows:
            cells = table.add_row().cells
            for cell, value in zip(cells, row):
                cell.text = str(value)

    def add_entry_header(self, entry_num: int, title: str):
        """項目の見出しを追加（Heading 2）"""
        self.doc.add_heading(f"{entry_num}. {title}", level=2)

    def add_entry_description(self, description: str, failed: bool = False):
        """項目の説明文を追加（失敗は赤字）"""
        para = self.doc.add_paragraph()
        run = para.add_run(description)
        if failed:
            run.font.color.rgb = RGBColor(200, 50, 50)

    def add_entry(self, entry_num: int, title: str, lines: Sequence[str], failed: bool = False):
        """1項目分のコンテンツを追加"""
        self.add_entry_header(entry_num, title)
        for line in lines:
            self.add_entry_description(line, failed)

    def save(self, output_path: str) -> str:
        """ドキュメントを保存

        Args:
            output_path: 出力ファイルパス

        Returns:
            保存したファイルの絶対パス
        """
        output = Path(output_path)
        output.parent.mkdir(parents=True, exist_ok=True)
        self.doc.save(str(output.absolute()))
        logger.info(f"Report saved to: {output.absolute()}")
        return str(output.absolute())


def _seconds(entry: Mapping[str, Any], digits: int = 2) -> str:
    """計測時間の表示（記録がなければ "-"）"""
    seconds = entry.get("seconds")
    return "-" if seconds is None else f"{seconds:.{digits}f}"


def create_props_report(
    suites: List[Mapping[str, Any]], output_path: str, title: str = DEFAULT_REPORT_TITLE
) -> str:
    """props の結果をWordファイルにする

    Args:
        suites: SuiteResult.to_dict() のリスト
            [{"name": "half-graph-bounds", "passed": True, "checks": 12,
              "failures": [], "seconds": 0.4, "details": {...}}, ...]
        output_path: 出力ファイルパス
        title: タイトル

    Returns:
        出力ファイルの絶対パス
    """
    gen = ReportGenerator(title)
    gen.add_title()
    gen.add_summary_table(
        ["スイート", "結果", "検査数", "秒"],
        [[s["name"], "PASS" if s["passed"] else "FAIL", s["checks"], _seconds(s)] for s in suites],
    )
    for num, suite in enumerate(suites, start=1):
        lines = [f"{key}: {value}" for key, value in sorted(suite.get("details", {}).items())]
        lines.extend(f"違反: {failure}" for failure in suite.get("failures", []))
        gen.add_entry(num, suite["name"], lines or ["違反なし"], failed=not suite["passed"])
    return gen.save(output_path)


def create_bench_report(
    entries: List[Dict[str, Any]], output_path: str, title: str = "ガジェット ベンチマーク"
) -> str:
    """bench の結果をWordファイルにする

    Args:
        entries: [{"family": ..., "params": {...}, "n": ..., "edges": ...,
                   "sampled_max": ..., "exact": ..., "seconds": ...}, ...]
        output_path: 出力ファイルパス
        title: タイトル

    Returns:
        出力ファイルの絶対パス
    """
    gen = ReportGenerator(title)
    gen.add_title()
    gen.add_summary_table(
        ["ファミリー", "パラメータ", "n", "辺数", "サンプル最大", "厳密値", "秒"],
        [
            [
                e["family"],
                ",".join(f"{k}={v}" for k, v in sorted(e["params"].items())),
                e["n"],
                e["edges"],
                e["sampled_max"],
                "-" if e.get("exact") is None else e["exact"],
                _seconds(e, 3),
            ]
            for e in entries
        ],
    )
    return gen.save(output_path)
