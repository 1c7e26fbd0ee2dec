import copy
import json
import os
from pathlib import Path
from typing import Dict, Any, Optional
import logging

from ..models.branch import ContinuationConfig
from ..models.solver import LMOptions
from ..numerics.errors import ConfigError

logger = logging.getLogger(__name__)

APP_NAME = "VortexSheet"
SECTIONS = ("discretization", "solver", "continuation", "verify", "output", "logging")


def default_config_dir() -> Path:
    """%APPDATA%\\VortexSheet when APPDATA is set, else ~/.config/vortexsheet."""
    appdata = os.getenv("APPDATA")
    if appdata:
        return Path(appdata) / APP_NAME
    return Path.home() / ".config" / APP_NAME.lower()


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    def __init__(self, config_file: Optional[Path] = None, config_dir: Optional[Path] = None):
        self.config_dir = Path(config_dir) if config_dir else default_config_dir()
        self.explicit_file = Path(config_file) if config_file else None
        self.config_file = self.explicit_file or self.config_dir / "config.json"
        self.default_config_file = Path(__file__).parent / "default_config.json"

        self.config = self._load_config()

    def _load_defaults(self) -> Dict[str, Any]:
        with open(self.default_config_file, "r") as f:
            return json.load(f)

    def _load_config(self) -> Dict[str, Any]:
        """Defaults deep-merged with the user file, if there is one."""
        config = self._load_defaults()
        if not self.config_file.exists():
            if self.explicit_file is not None:
                raise ConfigError(f"Config file not found: {self.config_file}")
            return config

        try:
            with open(self.config_file, "r") as f:
                user_config = json.load(f)
        except json.JSONDecodeError as e:
            if self.explicit_file is not None:
                raise ConfigError(f"Config file {self.config_file} is not valid JSON: {e}")
            logger.warning(f"Ignoring corrupted config {self.config_file}: {e}")
            return config

        unknown = set(user_config) - set(SECTIONS)
        if unknown:
            logger.warning(f"Ignoring unknown config sections: {sorted(unknown)}")
        config = _deep_merge(config, {k: v for k, v in user_config.items() if k in SECTIONS})
        logger.info(f"Loaded configuration from {self.config_file}")
        return config

    def validate(self) -> None:
        """Raise ConfigError on inconsistent settings."""
        try:
            opts = self.lm_options()
            continuation = self.continuation_config()
        except TypeError as e:
            raise ConfigError(f"Invalid configuration value: {e}")
        if not opts.validate():
            raise ConfigError(f"Invalid solver settings: {self.get_section('solver')}")
        if not continuation.validate():
            raise ConfigError(f"Invalid continuation settings: {continuation}")
        verify = self.get_section("verify")
        if int(verify.get("n_theta", 0)) < 4 * int(verify.get("n_modes", 1)):
            raise ConfigError(f"verify.n_theta must be at least 4 * verify.n_modes: {verify}")
        if self.get_section("output").get("format") not in ("csv", "json"):
            raise ConfigError(f"Unknown output format: {self.get_section('output').get('format')}")

    def get_section(self, name: str) -> Dict[str, Any]:
        if name not in SECTIONS:
            raise ValueError(f"Unknown config section: {name}")
        return self.config.get(name, {})

    def lm_options(self) -> LMOptions:
        return LMOptions.from_dict(self.get_section("solver"))

    def continuation_config(self) -> ContinuationConfig:
        data = dict(self.get_section("continuation"))
        data.update(self.get_section("discretization"))
        return ContinuationConfig.from_dict(data)

    def update_setting(self, section: str, key: str, value: Any, persist: bool = False):
        """Update a setting value; written to the user file only when persist is set."""
        self.get_section(section)
        self.config.setdefault(section, {})[key] = value
        if persist:
            self.save_config()

    def save_config(self, config: Dict[str, Any] = None):
        if config is None:
            config = self.config
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, "w") as f:
            json.dump(config, f, indent=2)

    def reload_config(self):
        self.config = self._load_config()
