"""TOML user settings: read, write, and reset ~/.fxtsmc/config.toml."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import toml

from fxtsmc.core.errors import ConfigError
from fxtsmc.core.themes import theme_names

FXTSMC_DIR = Path.home() / ".fxtsmc"
CONFIG_PATH = FXTSMC_DIR / "config.toml"

_DEFAULTS: dict = {
    "sim": {
        "step": 1e-4,
        "method": "euler",
        "threshold": 1e-2,
        "t_end": 5.0,
        "log_every": 1,
    },
    "gp": {
        "kernel": "exponential",
        "length_scale": 1.0,
        "chi": 2.0,
    },
    "output": {
        "dir": "fxtsmc-out",
    },
    "logging": {
        "level": "WARNING",
    },
    "display": {
        "theme": "lab",
    },
}


@dataclass
class SimSettings:
    step: float = 1e-4
    method: str = "euler"
    threshold: float = 1e-2
    t_end: float = 5.0
    log_every: int = 1


@dataclass
class GPSettings:
    kernel: str = "exponential"
    length_scale: float = 1.0
    chi: float = 2.0


@dataclass
class OutputSettings:
    dir: str = "fxtsmc-out"


@dataclass
class LoggingSettings:
    level: str = "WARNING"


@dataclass
class DisplaySettings:
    theme: str = "lab"


@dataclass
class Config:
    sim: SimSettings = field(default_factory=SimSettings)
    gp: GPSettings = field(default_factory=GPSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)
    display: DisplaySettings = field(default_factory=DisplaySettings)


_SECTIONS = {
    "sim": SimSettings,
    "gp": GPSettings,
    "output": OutputSettings,
    "logging": LoggingSettings,
    "display": DisplaySettings,
}


def _deep_merge(base: dict, override: dict) -> dict:
    """Merge override into base, keeping base keys for any missing in override."""
    result = base.copy()
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(result.get(k), dict):
            result[k] = _deep_merge(result[k], v)
        else:
            result[k] = v
    return result


def load_config() -> Config:
    """Load settings from disk, filling in any missing keys with defaults."""
    FXTSMC_DIR.mkdir(parents=True, exist_ok=True)
    if not CONFIG_PATH.exists():
        save_raw(_DEFAULTS)

    try:
        raw = toml.load(str(CONFIG_PATH))
    except (OSError, toml.TomlDecodeError) as e:
        raise ConfigError(f"cannot read settings file {CONFIG_PATH}: {e}") from e

    merged = _deep_merge(_DEFAULTS, raw)
    try:
        return Config(**{name: cls(**merged[name]) for name, cls in _SECTIONS.items()})
    except TypeError as e:
        raise ConfigError(f"unknown key in {CONFIG_PATH}: {e}") from e


def save_raw(data: dict) -> None:
    """Write a raw dict as the settings file."""
    FXTSMC_DIR.mkdir(parents=True, exist_ok=True)
    with open(CONFIG_PATH, "w") as f:
        toml.dump(data, f)


def save_config(cfg: Config) -> None:
    save_raw(dataclasses.asdict(cfg))


def reset_config() -> None:
    """Reset settings to factory defaults."""
    save_raw(_DEFAULTS)


def get_config_path() -> Path:
    return CONFIG_PATH


def set_value(cfg: Config, key: str, value: str) -> Config:
    """Set `section.name` from a string, coerced to the default's type."""
    section_name, _, name = key.partition(".")
    section = getattr(cfg, section_name, None) if section_name in _SECTIONS else None
    if section is None or not name or not hasattr(section, name):
        raise ConfigError(f"unknown setting '{key}'")
    current: Any = getattr(section, name)
    try:
        if isinstance(current, bool):
            coerced: Any = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int):
            coerced = int(value)
        elif isinstance(current, float):
            coerced = float(value)
        else:
            coerced = value
    except ValueError as e:
        raise ConfigError(f"setting '{key}' expects {type(current).__name__}, got '{value}'") from e
    if key == "display.theme" and coerced not in theme_names():
        raise ConfigError(f"unknown theme '{value}'; choose from {', '.join(theme_names())}")
    setattr(section, name, coerced)
    return cfg
