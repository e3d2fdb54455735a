"""Shared helpers for the command modules."""

from __future__ import annotations

from typing import NoReturn, Optional, Sequence

import typer
from rich.console import Console
from rich.markup import escape

from fxtsmc.core.config import load_config
from fxtsmc.core.errors import FxtError
from fxtsmc.core.themes import get_theme_data

err_console = Console(stderr=True)


def theme_color(key: str = "primary") -> str:
    return get_theme_data(load_config().display.theme)[key]


def fail(error: FxtError) -> NoReturn:
    """Report a domain error on stderr and exit with its code."""
    err_console.print(f"[bold red]{error.error_type} error:[/bold red] {escape(str(error))}",
                      markup=True, highlight=False)
    raise typer.Exit(error.exit_code)


def format_seconds(value: Optional[float], digits: int = 5) -> str:
    if value is None:
        return "not settled"
    return f"{value:.{digits}f}"


def format_vector(values: Sequence[float], digits: int = 4) -> str:
    return "(" + ", ".join(f"{v:.{digits}g}" for v in values) + ")"
