"""fxtsmc: root CLI entry point."""

from __future__ import annotations

from typing import Optional

import typer
from rich.console import Console

from fxtsmc import __version__
from fxtsmc.config_commands import app as config_app
from fxtsmc.config_commands import cmd_validate
from fxtsmc.control.commands import cmd_bounds
from fxtsmc.core.config import load_config
from fxtsmc.core.errors import FxtError
from fxtsmc.core.log import setup_logging
from fxtsmc.core.utils import fail
from fxtsmc.gp.commands import cmd_gp_train
from fxtsmc.sim.commands import cmd_montecarlo, cmd_run

app = typer.Typer(
    name="fxtsmc",
    help="Fixed-time integral sliding-mode control: simulation, bounds and GP drift learning.",
    pretty_exceptions_enable=False,
)

app.command("run")(cmd_run)
app.command("bounds")(cmd_bounds)
app.command("gp-train")(cmd_gp_train)
app.command("montecarlo")(cmd_montecarlo)
app.command("validate")(cmd_validate)
app.add_typer(config_app, name="config")

console = Console()


@app.callback(invoke_without_command=True)
def main_callback(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", "-v", help="Show version and exit."),
    log_level: Optional[str] = typer.Option(None, "--log-level",
                                            help="DEBUG, INFO, WARNING or ERROR"),
):
    """Simulate, bound and batch-test fixed-time sliding-mode controllers."""
    if version:
        console.print(f"fxtsmc v{__version__}")
        raise typer.Exit()
    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())
        raise typer.Exit()
    try:
        setup_logging(log_level or load_config().logging.level)
    except FxtError as e:
        fail(e)


def main():
    app()
