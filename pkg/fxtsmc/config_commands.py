"""Settings management and scenario validation commands."""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import List, Optional

import toml
import typer
from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax

from fxtsmc.core.config import get_config_path, load_config, reset_config, save_config, set_value
from fxtsmc.core.errors import FxtError
from fxtsmc.core.scenario_file import build_parts, build_scenario, load_resolved
from fxtsmc.core.utils import fail, theme_color

app = typer.Typer(name="config", help="Settings stored in ~/.fxtsmc/config.toml.")

console = Console()


@app.command("show")
def config_show():
    """Print the current settings."""
    try:
        cfg = load_config()
    except FxtError as e:
        fail(e)
    text = toml.dumps(dataclasses.asdict(cfg))
    console.print(Panel(Syntax(text, "toml", theme="ansi_dark", background_color="default"),
                        title=f"[bold {theme_color()}]{get_config_path()}[/bold {theme_color()}]",
                        border_style=theme_color(), expand=False))


@app.command("path")
def config_path():
    """Print where the settings file lives."""
    console.print(str(get_config_path()), highlight=False, soft_wrap=True)


@app.command("set")
def config_set(
    key: str = typer.Argument(..., help="Setting as section.name, e.g. sim.step"),
    value: str = typer.Argument(..., help="New value"),
):
    """Change one setting."""
    try:
        cfg = set_value(load_config(), key, value)
    except FxtError as e:
        fail(e)
    save_config(cfg)
    color = theme_color()
    console.print(f"  [bold {color}]✓[/bold {color}]  {key} = {value}")


@app.command("reset")
def config_reset(
    yes: bool = typer.Option(False, "--yes", "-y", help="Skip the confirmation prompt"),
):
    """Reset settings to factory defaults."""
    if not yes and not typer.confirm("Reset all settings to defaults?"):
        return
    reset_config()
    console.print("  [dim]Settings reset to defaults.[/dim]")


def cmd_validate(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    overrides: Optional[List[str]] = typer.Option(None, "--set", "-s",
                                                  help="Override: section.key=value"),
    x0: Optional[str] = typer.Option(None, "--x0", help="Initial state, e.g. 1,1,1"),
):
    """Check a scenario file against the schema and parameter domains; run nothing."""
    try:
        resolved = load_resolved(config, load_config(), overrides or (), x0)
        parts = build_parts(resolved)
        if parts.mode != "gp" and resolved["sim"]["x0"] is not None:
            build_scenario(parts)
    except FxtError as e:
        fail(e)
    color = theme_color()
    console.print(f"  [bold {color}]✓[/bold {color}]  {config} is valid "
                  f"[dim]({parts.system.name}, {parts.mode}, n = {parts.system.n})[/dim]")
