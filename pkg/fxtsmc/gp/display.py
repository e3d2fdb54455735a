"""GP: Rich display helpers for training reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from fxtsmc.gp.regression import GPModel


def print_fit_table(models: Sequence[GPModel], residuals: Sequence[float], console: Console,
                    theme_color: str) -> None:
    table = Table(header_style=f"bold {theme_color}", border_style="dim", expand=False,
                  title="Per-channel GP fits")
    table.add_column("Channel", justify="right", style="bold")
    table.add_column("N", justify="right")
    table.add_column("sigma_F", justify="right")
    table.add_column("Jitter", justify="right")
    table.add_column("Max residual", justify="right")
    for i, (m, r) in enumerate(zip(models, residuals)):
        jitter = f"{m.jitter:.0e}" if m.jitter else "[dim]none[/dim]"
        table.add_row(str(i + 1), str(m.dataset.size), f"{m.dataset.noise_std:g}", jitter,
                      f"{r:.3e}")
    console.print(table)


def print_training_summary(path: Path, kernel: str, rms: float, held_out: str,
                           console: Console, theme_color: str) -> None:
    console.print(Panel(
        f"Dataset   [bold]{path}[/bold]\n"
        f"Kernel    {kernel}\n"
        f"Held-out  {held_out}\n"
        f"RMS drift error  [bold {theme_color}]{rms:.6g}[/bold {theme_color}]",
        title=f"[bold {theme_color}]GP training[/bold {theme_color}]",
        border_style=theme_color,
        expand=False,
    ))
