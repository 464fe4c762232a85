"""
Settings manager for staba2.
Layers defaults, a TOML config file, a .env file and STABA2_* environment variables.
"""
import copy
import json
import logging
import os
import tomllib
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values

from .errors import ConfigError

# Set up logging
logger = logging.getLogger(__name__)

ENV_PREFIX = "STABA2_"
ENV_SECTION_SEPARATOR = "__"


class SettingsManager:
    """Manages layered settings with dot-notation access."""

    # Default settings
    DEFAULT_SETTINGS = {
        "numerics": {
            "quadrature_nodes": 256,
            "continuation_step": 0.05,
            "clearance": 0.02,  # distance kept from u = 0 and u = 1
            "integer_tolerance": 1e-6,
            "workers": 4,
        },
        "stability": {
            "tie_tolerance": 1e-9,  # in half turns
            "descent_cap": 64,
            "near_wall_tolerance": 1e-3,
        },
        "graph": {
            "radius_guard": 12,
        },
        "output": {
            "directory": "output",
        },
        "logging": {
            "level": "INFO",
            "file": None,
            "json": False,
        },
    }

    def __init__(
        self,
        config_file: Optional[Union[str, Path]] = None,
        env_file: Optional[Union[str, Path]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ):
        """Initialize the settings manager.

        Args:
            config_file: Optional TOML file with ``[section]`` tables
            env_file: Optional .env file; values use the same names as environment variables
            environ: Environment mapping, defaults to ``os.environ``
        """
        self.config_file = Path(config_file) if config_file else None
        self.env_file = Path(env_file) if env_file else None
        self.settings: Dict[str, Any] = copy.deepcopy(self.DEFAULT_SETTINGS)
        self.load(os.environ if environ is None else environ)

    def load(self, environ: Mapping[str, str]) -> None:
        """Merge the config file, the .env file and the environment over the defaults."""
        if self.config_file is not None:
            if not self.config_file.exists():
                raise ConfigError(f"config file not found: {self.config_file}")
            try:
                with open(self.config_file, "rb") as f:
                    loaded = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"invalid config file {self.config_file}: {e}") from e
            self._warn_unknown(loaded)
            self._merge_settings(loaded)
            logger.info("Settings loaded from %s", self.config_file)

        if self.env_file is not None and self.env_file.exists():
            self._merge_environment(dotenv_values(self.env_file))
            logger.debug("Settings overridden from %s", self.env_file)

        self._merge_environment(environ)

    def _merge_environment(self, environ: Mapping[str, Optional[str]]) -> None:
        for name, raw in environ.items():
            if not name.startswith(ENV_PREFIX) or raw is None:
                continue
            path = name[len(ENV_PREFIX):].lower().split(ENV_SECTION_SEPARATOR)
            if len(path) < 2:
                logger.warning("Ignoring %s: expected %sSECTION__KEY", name, ENV_PREFIX)
                continue
            self.set(".".join(path), _parse_value(raw))

    def _warn_unknown(self, loaded: Dict[str, Any], prefix: str = "") -> None:
        for key, value in loaded.items():
            dotted = f"{prefix}{key}"
            if self.get(dotted, _MISSING) is _MISSING:
                logger.warning("Unknown setting %s kept as is", dotted)
            elif isinstance(value, dict):
                self._warn_unknown(value, f"{dotted}.")

    def _merge_settings(self, new_settings: Dict[str, Any]) -> None:
        """Recursively merge settings from a dictionary into the current settings."""
        _merge_recursive(self.settings, new_settings)

    def get(self, key: str, default: Any = None) -> Any:
        """Get a setting value by dot notation key (e.g., 'numerics.quadrature_nodes')."""
        try:
            value = self.settings
            for k in key.split("."):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """Set a setting value by dot notation key."""
        keys = key.split(".")
        current = self.settings
        for k in keys[:-1]:
            if k not in current or not isinstance(current[k], dict):
                current[k] = {}
            current = current[k]
        current[keys[-1]] = value

    def reset_to_defaults(self) -> None:
        """Reset all settings to their default values."""
        self.settings = copy.deepcopy(self.DEFAULT_SETTINGS)

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.settings)


_MISSING = object()


def _merge_recursive(target: Dict[str, Any], source: Dict[str, Any]) -> None:
    for key, value in source.items():
        if key in target and isinstance(target[key], dict) and isinstance(value, dict):
            _merge_recursive(target[key], value)
        else:
            target[key] = value


def _parse_value(raw: str) -> Any:
    """Interpret an environment string as JSON where possible (numbers, booleans)."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw
