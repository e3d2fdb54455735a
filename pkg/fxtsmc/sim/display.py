"""Simulation: Rich display helpers for run and batch results."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from fxtsmc.core.utils import format_seconds, format_vector
from fxtsmc.sim.montecarlo import Aggregate
from fxtsmc.sim.settling import RunSummary


def print_run_summary(summary: RunSummary, console: Console, theme_color: str,
                      oracle: Optional[Sequence[float]] = None) -> None:
    table = Table(header_style=f"bold {theme_color}", border_style="dim", expand=False,
                  title=f"Measured settling (threshold {summary.threshold:g})")
    table.add_column("Channel", justify="right", style="bold")
    table.add_column("error z", justify="right")
    table.add_column("sliding s", justify="right")
    table.add_column("chatter |s|", justify="right")
    if oracle is not None:
        table.add_column("exact", justify="right")
    table.add_column("Within bound", justify="center")
    for i, (tz, ts) in enumerate(zip(summary.settle_error, summary.settle_sliding)):
        ok = summary.bound_satisfied[i]
        mark = "[green]✓[/green]" if ok else "[bold red]✗[/bold red]"
        row = [str(i + 1), format_seconds(tz), format_seconds(ts), f"{summary.chatter[i]:.2e}"]
        if oracle is not None:
            row.append(format_seconds(oracle[i]))
        table.add_row(*row, mark)
    console.print(table)
    bound = format_seconds(summary.bound) if summary.bound is not None else "[dim]none[/dim]"
    console.print(f"  x0 = {format_vector(summary.x0)}   max|u| = {summary.max_u:.4g}   "
                  f"bound = {bound}")


def print_artifacts(paths: Sequence[Path], console: Console, theme_color: str) -> None:
    for p in paths:
        console.print(f"  [bold {theme_color}]✓[/bold {theme_color}]  wrote {p}")


def print_aggregate(agg: Aggregate, console: Console, theme_color: str) -> None:
    frac = agg.satisfied_fraction
    frac_style = "green" if frac == 1.0 else "bold red"
    bound = format_seconds(agg.bound) if agg.bound is not None else "none"
    chatter = f"{agg.max_chatter:.3e}" if agg.max_chatter is not None else "n/a"
    max_u = f"{agg.max_u:.4g}" if agg.max_u is not None else "n/a"
    console.print(Panel(
        f"Runs              {agg.runs}  ([red]{agg.failures} failed[/red])\n"
        f"Settled           {agg.settled}\n"
        f"Max settling      [bold]{format_seconds(agg.max_settling)}[/bold]\n"
        f"Bound             {bound}\n"
        f"Within bound      [{frac_style}]{agg.satisfied}/{agg.runs} "
        f"({100 * frac:.1f}%)[/{frac_style}]\n"
        f"Max chatter |s|   {chatter}\n"
        f"Max |u|           {max_u}\n"
        f"V increases       {agg.lyapunov_violations}",
        title=f"[bold {theme_color}]Monte-Carlo batch[/bold {theme_color}]",
        border_style=theme_color,
        expand=False,
    ))
