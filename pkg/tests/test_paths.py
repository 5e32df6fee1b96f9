"""Unit tests for the malg.paths module."""

import json

import pytest

from malg.paths import FIXTURES, _bundled_data_dir, get_fixture, get_schema_file
from malg.structfile import load


class TestBundledDataDir:
    """Tests for bundled data directory resolution."""

    def test_bundled_dir_exists(self):
        d = _bundled_data_dir()
        assert d.is_dir()

    def test_bundled_dir_has_fixtures(self):
        d = _bundled_data_dir()
        for filename in FIXTURES.values():
            assert (d / filename).exists(), f"Missing bundled file: {filename}"


class TestGetFixture:
    """Tests for get_fixture resolution."""

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_every_fixture_loads(self, name):
        """Each bundled fixture parses."""
        assert load(get_fixture(name)) is not None

    def test_base_path_override(self, tmp_path):
        (tmp_path / "counterexample_a.malg").write_text("x", encoding="utf-8")
        assert get_fixture("counterexample-a", base_path=tmp_path) == (tmp_path / "counterexample_a.malg").resolve()

    def test_invalid_name(self):
        with pytest.raises(ValueError, match="Invalid fixture"):
            get_fixture("klein-four")

    def test_missing_file_with_base_path(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="Fixture file not found"):
            get_fixture("antichain", base_path=tmp_path)


class TestSchemaFile:
    """Tests for get_schema_file."""

    def test_schema_is_json(self):
        schema = json.loads(get_schema_file().read_text(encoding="utf-8"))
        assert schema["properties"]["schema"] == {"const": 1}
