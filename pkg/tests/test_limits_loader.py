import pytest

from core.config import is_file_logging_disabled
from core.limits_loader import LimitsLoader, get_default, get_limit


def test_packaged_limits():
    assert get_limit("tiling.max_period") == 12
    assert get_limit("conn.max_vertices") == 3
    assert get_default("bounds") == [4, 4]


def test_custom_file(write_file):
    path = write_file("limits.yaml", "guards:\n  tiling.max_period: 5\ndefaults:\n  max_internal: 2\n")
    loader = LimitsLoader(path)
    assert loader.get_limit("tiling.max_period") == 5
    assert loader.get_default("max_internal") == 2
    with pytest.raises(KeyError):
        loader.get_limit("determinize.max_states")
    with pytest.raises(KeyError):
        loader.get_default("bounds")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        LimitsLoader(str(tmp_path / "absent.yaml")).get_limit("tiling.max_period")


@pytest.mark.parametrize("text", ["guards: [unclosed\n", "- just\n- a list\n"])
def test_bad_yaml(write_file, text):
    with pytest.raises(ValueError):
        LimitsLoader(write_file("limits.yaml", text)).get_limit("tiling.max_period")


def test_empty_file_has_no_guards(write_file):
    with pytest.raises(KeyError):
        LimitsLoader(write_file("limits.yaml", "")).get_limit("tiling.max_period")


def test_file_logging_switch(monkeypatch):
    monkeypatch.setenv("PATHOGRAPH_NO_FILE_LOG", "TRUE")
    assert is_file_logging_disabled()
    monkeypatch.setenv("PATHOGRAPH_NO_FILE_LOG", "no")
    assert not is_file_logging_disabled()
