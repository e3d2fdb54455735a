"""Diagnostics logging, routed through Rich on stderr."""

from __future__ import annotations

import logging

from rich.console import Console
from rich.logging import RichHandler

from fxtsmc.core.errors import ConfigError

ROOT_LOGGER = "fxtsmc"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_configured = False


def setup_logging(level: str = "WARNING") -> None:
    """Attach a single RichHandler to the package logger. Safe to call repeatedly."""
    global _configured
    name = level.upper()
    if name not in LEVELS:
        raise ConfigError(f"log level must be one of {', '.join(LEVELS)}, got '{level}'")
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(name)
    if _configured:
        return
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    _configured = True


def get_logger(name: str) -> logging.Logger:
    if name.startswith(ROOT_LOGGER):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
