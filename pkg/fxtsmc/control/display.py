"""Controller: Rich display helpers for settling-time bounds."""

from __future__ import annotations

from typing import Dict, Optional

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from fxtsmc.control.bounds import BoundReport
from fxtsmc.core.utils import format_seconds

# Reaching-time figures printed alongside the published gains that none of the
# formulas reproduce.
KNOWN_DISCREPANCIES = {"T_i(s_i)": 2.8284, "T(s)": 0.57364}

MODE_LABELS = {
    "known": "exp-reaching",
    "lyapunov-sum": "lyapunov-sum",
    "sqrt2": "sqrt2",
}


def print_bound_report(report: BoundReport, console: Console, theme_color: str,
                       title: str = "Settling-time bounds") -> None:
    table = Table(header_style=f"bold {theme_color}", border_style="dim", expand=False,
                  title=f"{title} [dim]({MODE_LABELS[report.mode]})[/dim]")
    table.add_column("Channel", justify="right", style="bold")
    table.add_column("T_z", justify="right")
    table.add_column("T_s", justify="right")
    table.add_column("T_z + T_s", justify="right")
    for i, (tz, ts) in enumerate(zip(report.T_z_i, report.T_s_i)):
        table.add_row(str(i + 1), format_seconds(tz), format_seconds(ts), format_seconds(tz + ts))
    table.add_section()
    table.add_row("max", format_seconds(report.T_z), format_seconds(report.T_s),
                  f"[bold {theme_color}]{format_seconds(report.T_max)}[/bold {theme_color}]")
    console.print(table)


def print_bound_modes(reports: Dict[str, BoundReport], errors: Dict[str, Exception],
                      console: Console, theme_color: str) -> None:
    """Every bound mode side by side, one row per channel plus the aggregate."""
    modes = list(reports)
    table = Table(header_style=f"bold {theme_color}", border_style="dim", expand=False,
                  title="Settling-time bounds by mode")
    table.add_column("Channel", justify="right", style="bold")
    table.add_column("T_z", justify="right")
    for mode in modes:
        table.add_column(f"T_s {MODE_LABELS[mode]}", justify="right")
    first: Optional[BoundReport] = reports[modes[0]] if modes else None
    if first is not None:
        for i, tz in enumerate(first.T_z_i):
            table.add_row(str(i + 1), format_seconds(tz),
                          *[format_seconds(reports[m].T_s_i[i]) for m in modes])
        table.add_section()
        table.add_row("T_z / T_s", format_seconds(first.T_z),
                      *[format_seconds(reports[m].T_s) for m in modes])
        table.add_row("T_max", "", *[
            f"[bold {theme_color}]{format_seconds(reports[m].T_max)}[/bold {theme_color}]"
            for m in modes
        ])
        console.print(table)
    for mode, message in errors.items():
        console.print(f"  [bold red]✗[/bold red]  {MODE_LABELS[mode]}: {escape(str(message))}")
    notes = ", ".join(f"{k} = {v}" for k, v in KNOWN_DISCREPANCIES.items())
    console.print(Panel(
        f"[dim]Published reaching-time figures {notes} match none of the formulas above; "
        f"they are listed for reference only.[/dim]",
        border_style="dim",
        expand=False,
    ))
