"""Unit tests for the malg.config module."""

import json
import os
from unittest.mock import patch

import pytest

from malg.config import (
    DEFAULT_CAPS,
    ENV_OVERRIDES,
    VALID_KEYS,
    Caps,
    MalgConfig,
    _validate_key,
    _validate_value,
    load_caps,
)


@pytest.fixture
def config_path(tmp_path):
    """Temporary config file path."""
    return tmp_path / "malg" / "config.json"


@pytest.fixture
def config(config_path):
    """MalgConfig instance using a temporary path."""
    return MalgConfig(config_path=config_path)


class TestCaps:
    """Tests for the Caps dataclass."""

    def test_defaults(self):
        assert DEFAULT_CAPS == Caps()
        assert DEFAULT_CAPS.subset_cap == 20
        assert DEFAULT_CAPS.cabl_cap == 4095
        assert DEFAULT_CAPS.tilde_carrier_cap == 127
        assert DEFAULT_CAPS.seed == 0

    def test_with_map_cap(self):
        """None keeps the caps; a number replaces map_cap only."""
        assert DEFAULT_CAPS.with_map_cap(None) is DEFAULT_CAPS
        capped = DEFAULT_CAPS.with_map_cap(10)
        assert capped.map_cap == 10
        assert capped.tuple_cap == DEFAULT_CAPS.tuple_cap


class TestValidateKey:
    """Tests for _validate_key."""

    def test_valid_keys(self):
        """All valid keys pass validation."""
        for key in VALID_KEYS:
            _validate_key(key)

    def test_invalid_key(self):
        with pytest.raises(ValueError, match="Invalid config key"):
            _validate_key("not_a_real_key")

    def test_env_overrides_name_valid_keys(self):
        assert set(ENV_OVERRIDES.values()) <= set(VALID_KEYS)


class TestValidateValue:
    """Tests for _validate_value."""

    def test_valid_integers(self):
        _validate_value("map_cap", "500")
        _validate_value("seed", "0")

    @pytest.mark.parametrize("key,value,message", [
        ("map_cap", "many", "Must be an integer"),
        ("map_cap", "0", "Must be positive"),
        ("sample_size", "-3", "Must be positive"),
        ("seed", "-1", "Must be positive"),
    ])
    def test_invalid_integers(self, key, value, message):
        with pytest.raises(ValueError, match=message):
            _validate_value(key, value)

    def test_valid_format(self):
        for v in ("text", "json"):
            _validate_value("output_format", v)

    def test_invalid_format(self):
        with pytest.raises(ValueError, match="Invalid format"):
            _validate_value("output_format", "xml")


class TestMalgConfig:
    """Tests for MalgConfig class."""

    def test_set_and_get(self, config):
        config.set("map_cap", "1000")
        assert config.get("map_cap") == "1000"

    def test_get_unset_key(self, config):
        assert config.get("seed") is None

    def test_set_creates_file(self, config, config_path):
        """Setting a value creates the config file on disk."""
        assert not config_path.exists()
        config.set("seed", "7")
        assert json.loads(config_path.read_text())["seed"] == "7"

    def test_set_invalid_value(self, config):
        with pytest.raises(ValueError, match="Must be positive"):
            config.set("powerset_cap", "0")

    def test_persistence(self, config_path):
        MalgConfig(config_path=config_path).set("sample_size", "50")
        assert MalgConfig(config_path=config_path).get("sample_size") == "50"

    def test_get_effective_env_override(self, config):
        config.set("map_cap", "100")
        with patch.dict(os.environ, {"MALG_CAP": "200"}):
            assert config.get_effective("map_cap") == "200"
        assert config.get_effective("map_cap") == "100"

    def test_list_all(self, config):
        config.set("output_format", "json")
        with patch.dict(os.environ, {"MALG_SEED": "3"}):
            entries = config.list_all()
        assert set(entries) == set(VALID_KEYS)
        assert entries["output_format"]["source"] == "config file"
        assert entries["seed"]["source"] == "env (MALG_SEED)"
        assert entries["map_cap"]["display"] is None

    def test_reset(self, config, config_path):
        config.set("seed", "1")
        config.reset()
        assert not config_path.exists()
        assert config.get("seed") is None

    def test_corrupt_config_file(self, config_path):
        """Corrupt config file does not crash; starts with empty config."""
        config_path.parent.mkdir(parents=True, exist_ok=True)
        config_path.write_text("not valid json {", encoding="utf-8")
        assert MalgConfig(config_path=config_path).get("seed") is None


class TestResolveCaps:
    """Explicit cap > environment > config file > default."""

    def test_defaults(self, config):
        assert config.caps() == DEFAULT_CAPS

    def test_config_file(self, config):
        config.set("tilde_carrier_cap", "7")
        config.set("seed", "11")
        caps = config.caps()
        assert caps.tilde_carrier_cap == 7
        assert caps.seed == 11

    def test_precedence(self, config):
        config.set("map_cap", "100")
        with patch.dict(os.environ, {"MALG_CAP": "200"}):
            assert config.caps().map_cap == 200
            assert config.caps(300).map_cap == 300

    def test_malformed_env_ignored(self, config):
        """A bad environment value falls back to the default."""
        with patch.dict(os.environ, {"MALG_SEED": "abc"}):
            assert config.caps().seed == DEFAULT_CAPS.seed

    def test_load_caps(self, config_path):
        MalgConfig(config_path=config_path).set("subset_cap", "10")
        caps = load_caps(5, config_path=config_path)
        assert caps.subset_cap == 10
        assert caps.map_cap == 5
