"""設定モジュールのテスト"""

import pytest

from config import CAPS_ENV_VAR, EXIT_CODES, get_default_caps, get_default_metadata, get_solver_caps, parse_caps_text


def test_default_caps():
    caps = get_default_caps()
    assert caps["grundy"] == 20
    assert caps["rooted_grundy"] == 16
    assert caps["orderings"] == 9
    assert caps["bcore"] == 10


def test_exit_codes():
    assert EXIT_CODES == {"yes": 0, "no": 1, "usage": 2, "cap_exceeded": 3, "contract_breach": 4}


class TestParseCapsText:
    def test_parses_short_keys(self):
        assert parse_caps_text("grundy=18, rooted=14") == {"grundy": 18, "rooted_grundy": 14}
        assert parse_caps_text("") == {}

    @pytest.mark.parametrize("text", ["grundy", "speed=3", "grundy=0", "grundy=-1", "grundy=x"])
    def test_rejects_bad_entries(self, text):
        with pytest.raises(ValueError):
            parse_caps_text(text)


class TestSolverCaps:
    def test_environment_override(self):
        caps = get_solver_caps({CAPS_ENV_VAR: "bcore=12"})
        assert caps["bcore"] == 12
        assert caps["grundy"] == 20

    def test_flags_win_over_environment(self):
        caps = get_solver_caps({CAPS_ENV_VAR: "grundy=18"}, {"grundy": 15, "bcore": None})
        assert caps["grundy"] == 15
        assert caps["bcore"] == 10

    def test_rejects_non_positive_flag(self):
        with pytest.raises(ValueError):
            get_solver_caps({}, {"grundy": 0})

    def test_reads_os_environ(self, monkeypatch):
        monkeypatch.setenv(CAPS_ENV_VAR, "orderings=7")
        assert get_solver_caps()["orderings"] == 7


def test_metadata_has_no_timestamp():
    metadata = get_default_metadata()
    assert metadata["app"] == "greedy-coloring"
    assert set(metadata) == {"app", "app_version", "schema_version"}
