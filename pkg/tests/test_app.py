"""CLI（app.main）のテスト"""

import json

import pytest

from app import main
from coloring.formats import dump_json, graph_to_json, instance_to_json
from coloring.reductions import MisInstance
from tests.strategies import C4, P4


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out) if out else None


@pytest.fixture
def p4_file(tmp_path):
    path = tmp_path / "p4.json"
    path.write_text(dump_json(graph_to_json(P4)), encoding="utf-8")
    return str(path)


class TestExactCommands:
    def test_gen_then_grundy(self, capsys, tmp_path):
        out_file = tmp_path / "t4.json"
        code, _ = run(capsys, "gen", "--family", "binomial-tree", "--params", "k=4", "-o", str(out_file))
        assert code == 0
        code, data = run_json(capsys, "grundy", str(out_file))
        assert code == 0
        assert data["command"] == "grundy"
        assert data["result"]["value"] == 4
        assert data["result"]["certificate"]["kind"] == "grundy"

    def test_at_least(self, capsys, p4_file):
        assert run(capsys, "grundy", p4_file, "--at-least", "3")[0] == 0
        assert run(capsys, "grundy", p4_file, "--at-least", "4")[0] == 1

    def test_rooted_grundy_uses_one_based_ids(self, capsys, p4_file):
        code, data = run_json(capsys, "rooted-grundy", p4_file, "--vertex", "2")
        assert code == 0
        assert data["result"]["value"] == 3
        assert run(capsys, "rooted-grundy", p4_file, "--vertex", "0")[0] == 2

    def test_partial_grundy_and_bcore(self, capsys, p4_file):
        code, data = run_json(capsys, "partial-grundy", p4_file)
        assert data["result"]["method"] == "partition"
        assert data["result"]["value"] == 3
        code, data = run_json(capsys, "bcore", p4_file, "--at-least", "3")
        assert code == 1
        assert data["result"]["value"] == 2

    def test_cap_exceeded(self, capsys, p4_file):
        assert run(capsys, "grundy", p4_file, "--caps", "grundy=3")[0] == 3

    def test_caps_from_environment(self, capsys, p4_file, monkeypatch):
        monkeypatch.setenv("GREEDY_COLORING_CAPS", "grundy=2")
        assert run(capsys, "grundy", p4_file)[0] == 3


class TestFirstFit:
    def test_one_based_order(self, capsys, p4_file):
        code, data = run_json(capsys, "firstfit", p4_file, "--order", "1,3,2,4")
        assert code == 0
        assert data["result"]["colors"] == [1, 2, 1, 2]
        assert data["result"]["max_color"] == 2

    def test_zero_based_order(self, capsys, p4_file):
        code, data = run_json(capsys, "firstfit", p4_file, "--order", "0,3,1,2", "--zero-based")
        assert data["result"]["colors"] == [1, 2, 3, 1]
        assert data["result"]["sequence"] == [1, 1, 2, 3]

    def test_bad_order(self, capsys, p4_file):
        assert run(capsys, "firstfit", p4_file, "--order", "1,1")[0] == 2
        assert run(capsys, "firstfit", p4_file, "--order", "a,b")[0] == 2

    def test_sampling_is_reproducible(self, capsys, p4_file):
        first = run(capsys, "firstfit", p4_file, "--samples", "30", "--seed", "9")
        second = run(capsys, "firstfit", p4_file, "--samples", "30", "--seed", "9")
        assert first == second
        data = json.loads(first[1])
        assert data["seed"] == 9
        assert data["result"]["sampling"]["max_color"] <= 3


class TestVerify:
    def _cert(self, tmp_path, body):
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(body), encoding="utf-8")
        return str(path)

    def test_valid_and_invalid(self, capsys, tmp_path, p4_file):
        good = self._cert(tmp_path, {"kind": "grundy", "classes": [[1, 4], [3], [2]]})
        code, data = run_json(capsys, "verify", p4_file, "--certificate", good)
        assert code == 0 and data["result"]["ok"]
        bad = self._cert(tmp_path, {"kind": "grundy", "classes": [[1], [3]]})
        code, data = run_json(capsys, "verify", p4_file, "--certificate", bad)
        assert code == 1
        assert "vertex" in data["result"]["reason"]

    def test_malformed_certificate_is_usage_error(self, capsys, tmp_path, p4_file):
        broken = self._cert(tmp_path, {"kind": "grundy", "classes": [[1], [1]]})
        assert run(capsys, "verify", p4_file, "--certificate", broken)[0] == 2


class TestUsageErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "grundy", str(tmp_path / "missing.json"))[0] == 2

    def test_bad_arguments(self, capsys):
        assert main(["grundy"]) == 2
        assert main(["no-such-command"]) == 2
        assert main(["gen", "--family", "half-graph"]) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0


class TestGenAndReduce:
    def test_gen_dimacs(self, capsys):
        code, out = run(capsys, "gen", "--family", "half-graph", "--params", "t=3", "--format", "dimacs")
        assert code == 0
        assert out.splitlines()[1] == "p edge 6 3"

    def test_mis_reduce_certify_verify(self, capsys, tmp_path):
        inst_file = tmp_path / "mis.json"
        inst_file.write_text(dump_json(instance_to_json(MisInstance(P4, ((0, 1), (2, 3))))), encoding="utf-8")
        sol_file = tmp_path / "sol.json"
        sol_file.write_text(json.dumps({"kind": "mis", "vertices": [1, 4]}), encoding="utf-8")

        code, data = run_json(capsys, "reduce", str(inst_file), "--from", "mis")
        assert code == 0
        assert data["result"]["reduction"]["target"] == 4
        assert data["result"]["graph"]["n"] == 4 + 1 + 2 + 1

        certified = tmp_path / "certified.json"
        code, _ = run(capsys, "certify", str(inst_file), "--from", "mis", "--solution", str(sol_file), "-o", str(certified))
        assert code == 0
        code, data = run_json(capsys, "verify", str(certified), "--certificate", str(certified))
        assert code == 0
        assert data["result"]["order"] == 4

    def test_invalid_solution_exits_no(self, capsys, tmp_path):
        inst_file = tmp_path / "mis.json"
        inst_file.write_text(dump_json(instance_to_json(MisInstance(P4, ((0, 1), (2, 3))))), encoding="utf-8")
        sol_file = tmp_path / "sol.json"
        sol_file.write_text(json.dumps({"kind": "mis", "vertices": [2, 3]}), encoding="utf-8")
        assert run(capsys, "certify", str(inst_file), "--from", "mis", "--solution", str(sol_file))[0] == 1

    def test_source_type_mismatch(self, capsys, tmp_path):
        inst_file = tmp_path / "mis.json"
        inst_file.write_text(dump_json(instance_to_json(MisInstance(P4, ((0, 1), (2, 3))))), encoding="utf-8")
        assert run(capsys, "reduce", str(inst_file), "--from", "mcsi")[0] == 2


class TestFpt:
    def test_biclique_is_contract_breach(self, capsys, tmp_path):
        path = tmp_path / "c4.json"
        path.write_text(dump_json(graph_to_json(C4)), encoding="utf-8")
        assert run(capsys, "fpt", str(path), "--problem", "bcore", "--k", "2")[0] == 4

    def test_star_forest_witness(self, capsys, tmp_path):
        forest = tmp_path / "forest.json"
        run(capsys, "gen", "--family", "star-forest", "--params", "count=3,leaves=3", "-o", str(forest))
        code, data = run_json(capsys, "fpt", str(forest), "--problem", "bcore", "--k", "3")
        assert code == 0
        result = data["result"]
        assert result["decision"] is True
        assert result["audit"]["branch"] == "star-forest"
        assert result["witness"]["centers"] == [1, 5, 9]

    def test_bounded_degree_needs_d_and_s(self, capsys, p4_file):
        assert run(capsys, "fpt", p4_file, "--problem", "bcore", "--k", "2", "--algorithm", "bounded-degree")[0] == 2
        code, data = run_json(
            capsys, "fpt", p4_file, "--problem", "bcore", "--k", "3", "--algorithm", "bounded-degree", "--d", "2", "--s", "0"
        )
        assert code == 1
        assert data["result"]["decision"] is False

    def test_faithful_without_n_is_usage_error(self, capsys, p4_file):
        assert run(capsys, "fpt", p4_file, "--problem", "bcore", "--k", "2", "--mode", "faithful")[0] == 2


class TestSuites:
    def test_props_quick(self, capsys):
        code, data = run_json(capsys, "props", "--suite", "thresholds,binomial-trees", "--quick")
        assert code == 0
        assert data["result"]["passed"]
        assert all("seconds" not in suite for suite in data["result"]["suites"])

    def test_props_output_is_deterministic(self, capsys):
        first = run(capsys, "props", "--suite", "oracle-agreement", "--quick", "--seed", "3")
        second = run(capsys, "props", "--suite", "oracle-agreement", "--quick", "--seed", "3")
        assert first == second

    def test_props_unknown_suite(self, capsys):
        assert run(capsys, "props", "--suite", "nope")[0] == 2

    def test_props_report(self, capsys, tmp_path):
        report = tmp_path / "props"
        code, _ = run(capsys, "props", "--suite", "thresholds", "--quick", "--report", str(report))
        assert code == 0
        assert (tmp_path / "props.docx").exists()

    def test_bench_quick(self, capsys):
        code, data = run_json(capsys, "bench", "--quick", "--samples", "10")
        assert code == 0
        entries = data["result"]["entries"]
        assert entries and all("seconds" not in e for e in entries)
        code, data = run_json(capsys, "bench", "--quick", "--samples", "10", "--timings")
        assert all("seconds" in e for e in data["result"]["entries"])


def test_dimacs_input(capsys, tmp_path):
    path = tmp_path / "k3.col"
    path.write_text("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n", encoding="utf-8")
    code, data = run_json(capsys, "grundy", str(path))
    assert code == 0
    assert data["result"]["value"] == 3
    assert data["result"]["n"] == 3
