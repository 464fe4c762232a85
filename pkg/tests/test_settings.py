import logging

import pytest

from src.core.config import Config, get_default_config_path, load_config
from src.core.errors import ConfigError
from src.core.settings import SettingsManager


def make(tmp_path, toml=None, env=None, environ=None):
    config_file = None
    if toml is not None:
        config_file = tmp_path / "staba2.toml"
        config_file.write_text(toml)
    env_file = None
    if env is not None:
        env_file = tmp_path / ".env"
        env_file.write_text(env)
    return SettingsManager(config_file=config_file, env_file=env_file, environ=environ or {})


def test_defaults(tmp_path):
    settings = make(tmp_path)
    assert settings.get("numerics.quadrature_nodes") == 256
    assert settings.get("stability.tie_tolerance") == 1e-9
    assert settings.get("missing.key", "fallback") == "fallback"
    assert Config.from_settings(settings) == Config()


def test_layers_override_in_order(tmp_path):
    settings = make(
        tmp_path,
        toml="[numerics]\nquadrature_nodes = 128\nworkers = 3\n",
        env="STABA2_NUMERICS__WORKERS=5\nSTABA2_STABILITY__TIE_TOLERANCE=1e-8\n",
        environ={"STABA2_NUMERICS__WORKERS": "7", "UNRELATED": "x"},
    )
    assert settings.get("numerics.quadrature_nodes") == 128
    assert settings.get("numerics.workers") == 7
    assert settings.get("stability.tie_tolerance") == 1e-8
    assert settings.get("numerics.clearance") == 0.02


def test_string_values_survive_environment(tmp_path):
    settings = make(tmp_path, environ={"STABA2_OUTPUT__DIRECTORY": "runs/a"})
    assert settings.get("output.directory") == "runs/a"


def test_malformed_environment_name_is_ignored(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        settings = make(tmp_path, environ={"STABA2_WORKERS": "9"})
    assert settings.get("numerics.workers") == 4
    assert "expected STABA2_SECTION__KEY" in caplog.text


def test_unknown_settings_are_reported(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        settings = make(tmp_path, toml="[numerics]\nspeed = 11\n")
    assert settings.get("numerics.speed") == 11
    assert "Unknown setting numerics.speed" in caplog.text


def test_missing_and_invalid_files(tmp_path):
    with pytest.raises(ConfigError):
        SettingsManager(config_file=tmp_path / "absent.toml", environ={})
    with pytest.raises(ConfigError):
        make(tmp_path, toml="[numerics\n")


def test_set_and_reset(tmp_path):
    settings = make(tmp_path)
    settings.set("graph.radius_guard", 6)
    settings.set("new.section.value", 1)
    assert settings.get("graph.radius_guard") == 6
    assert settings.get("new.section.value") == 1
    settings.reset_to_defaults()
    assert settings.get("graph.radius_guard") == 12
    assert settings.as_dict()["output"]["directory"] == "output"


@pytest.mark.parametrize(
    "toml",
    [
        "[numerics]\nquadrature_nodes = 8\n",
        "[numerics]\nclearance = 0.7\n",
        "[stability]\ntie_tolerance = 0\n",
        "[numerics]\nworkers = 0\n",
        "[numerics]\nworkers = \"many\"\n",
    ],
)
def test_invalid_values(tmp_path, toml):
    with pytest.raises(ConfigError):
        Config.from_settings(make(tmp_path, toml=toml))


def test_load_config(tmp_path, monkeypatch):
    monkeypatch.delenv("STABA2_NUMERICS__WORKERS", raising=False)
    path = tmp_path / "run.toml"
    path.write_text("[output]\ndirectory = \"elsewhere\"\n")
    config = load_config(path, env_file=None)
    assert config.output_dir == "elsewhere"
    assert config.to_dict()["quadrature_nodes"] == 256


def test_bundled_config_matches_defaults():
    assert get_default_config_path().exists()
    settings = SettingsManager(config_file=get_default_config_path(), environ={})
    assert Config.from_settings(settings) == Config()
