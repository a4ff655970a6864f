"""不変条件スイートとベンチのテスト（quick 規模）"""

import pytest

from coloring.property_suite import SUITES, SuiteResult, run_bench, run_suite, run_suites


@pytest.mark.parametrize("name", sorted(SUITES))
def test_quick_suite_passes(name):
    result = run_suite(name, quick=True, seed=0)
    assert result.passed, result.failures
    assert result.checks > 0


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("no-such-suite")


def test_run_suites_keeps_order():
    results = run_suites(["thresholds", "binomial-trees"], quick=True)
    assert [r.name for r in results] == ["thresholds", "binomial-trees"]


def test_same_seed_same_details():
    first = run_suite("half-graph-sampling", quick=True, seed=5).to_dict()
    second = run_suite("half-graph-sampling", quick=True, seed=5).to_dict()
    assert first == second


def test_to_dict_timing_is_opt_in():
    result = SuiteResult("demo", seconds=1.23456)
    result.check(True, "unused")
    result.check(False, "broken")
    data = result.to_dict()
    assert "seconds" not in data
    assert data["passed"] is False
    assert data["failures"] == ["broken"]
    assert data["failure_count"] == 1
    assert result.to_dict(include_timing=True)["seconds"] == 1.235


def test_quick_bench():
    entries = run_bench(20, seed=0, quick=True)
    assert entries
    for entry in entries:
        assert entry["exact"] is not None
        assert entry["sampled_max"] <= entry["exact"]
    binomial = {e["params"]["k"]: e["exact"] for e in entries if e["family"] == "binomial-tree"}
    assert binomial == {k: k for k in range(1, 5)}
