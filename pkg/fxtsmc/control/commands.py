"""Controller: `bounds` command."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import typer
from rich.console import Console

from fxtsmc.control.bounds import BOUND_MODES, BoundReport, bound_report
from fxtsmc.control.display import print_bound_modes
from fxtsmc.control.laws import ControllerParams
from fxtsmc.core.config import load_config
from fxtsmc.core.errors import ConfigError, FxtError, ParameterError
from fxtsmc.core.scenario_file import build_parts, load_resolved
from fxtsmc.core.utils import fail, theme_color

console = Console()


def compute_all_modes(
    params: ControllerParams,
    delta_f_bars: Optional[Sequence[float] | float],
) -> Tuple[Dict[str, BoundReport], Dict[str, ParameterError]]:
    """Bound report per mode; modes whose gain condition fails land in the error dict."""
    reports: Dict[str, BoundReport] = {}
    errors: Dict[str, ParameterError] = {}
    for mode in BOUND_MODES:
        try:
            reports[mode] = bound_report(params, delta_f_bars, mode)
        except ParameterError as e:
            errors[mode] = e
    return reports, errors


def cmd_bounds(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    overrides: Optional[List[str]] = typer.Option(None, "--set", "-s",
                                                  help="Override: section.key=value"),
    delta_f_bar: Optional[float] = typer.Option(None, "--delta-f-bar",
                                                help="Model-error bound for the GP modes"),
):
    """Tabulate per-channel settling-time bounds in every bound mode."""
    try:
        resolved = load_resolved(config, load_config(), overrides or ())
        parts = build_parts(resolved)
        if parts.params is None:
            raise ConfigError("bounds needs controller gains")
        dfb = delta_f_bar if delta_f_bar is not None else resolved["gp"]["delta_f_bar"]
        reports, errors = compute_all_modes(parts.params, dfb)
        if not reports:
            raise next(iter(errors.values()))
    except FxtError as e:
        fail(e)

    console.print()
    print_bound_modes(reports, errors, console, theme_color())
