import pytest

from utils.file_utils import fixture_path, read_fixture, write_output


def test_write_and_read_back(tmp_path):
    path = write_output("a\nb\n", str(tmp_path / "nested" / "out.txt"))
    assert read_fixture("out.txt", fixtures_dir=tmp_path / "nested") == "a\nb\n"
    assert path.endswith("out.txt")


def test_missing_fixture(tmp_path):
    assert fixture_path("none.json", tmp_path) == tmp_path / "none.json"
    with pytest.raises(FileNotFoundError):
        read_fixture("none.json", fixtures_dir=tmp_path)
