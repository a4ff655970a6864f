"""Wordレポート生成のテスト"""

from docx import Document

from coloring.report_generator import create_bench_report, create_props_report


def _table_text(path):
    doc = Document(path)
    return [[cell.text for cell in row.cells] for row in doc.tables[0].rows]


def test_props_report(tmp_path):
    suites = [
        {"name": "thresholds", "passed": True, "checks": 5, "failures": [], "details": {}, "seconds": 0.01},
        {"name": "cycle-levels", "passed": False, "checks": 3, "failures": ["cycle(2,2): bad"], "details": {}},
    ]
    path = create_props_report(suites, str(tmp_path / "out" / "props.docx"))
    rows = _table_text(path)
    assert rows[0] == ["スイート", "結果", "検査数", "秒"]
    assert rows[1] == ["thresholds", "PASS", "5", "0.01"]
    assert rows[2] == ["cycle-levels", "FAIL", "3", "-"]
    paragraphs = [p.text for p in Document(path).paragraphs]
    assert "違反: cycle(2,2): bad" in paragraphs
    assert "違反なし" in paragraphs


def test_bench_report(tmp_path):
    entries = [
        {"family": "half-graph", "params": {"t": 3}, "n": 6, "edges": 3, "sampled_max": 3, "exact": 3, "seconds": 0.5},
        {"family": "half-graph-path", "params": {"t": 10, "l": 4}, "n": 50, "edges": 180, "sampled_max": 5, "exact": None},
    ]
    rows = _table_text(create_bench_report(entries, str(tmp_path / "bench.docx")))
    assert rows[1][:6] == ["half-graph", "t=3", "6", "3", "3", "3"]
    assert rows[1][6] == "0.500"
    assert rows[2][1] == "l=4,t=10"
    assert rows[2][5] == "-"
