"""Simulation: `run` and `montecarlo` commands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import typer
from numpy.typing import NDArray
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from fxtsmc.control.bounds import BoundReport, bound_report, exp_reaching_bound
from fxtsmc.control.display import print_bound_report
from fxtsmc.control.laws import check_gp_gains, per_channel
from fxtsmc.core.config import load_config
from fxtsmc.core.errors import AcceptanceError, ConfigError, FxtError, GainTooSmallError
from fxtsmc.core.log import get_logger
from fxtsmc.core.scenario_file import (
    ScenarioParts,
    box,
    build_datasets,
    build_parts,
    build_scenario,
    error_bound_config,
    kernel_config,
    load_resolved,
    output_path,
)
from fxtsmc.core.utils import fail, format_vector, theme_color
from fxtsmc.gp.regression import GPModel, fit_channels, max_error_bound
from fxtsmc.sim.checks import trajectory_error_bound
from fxtsmc.sim.display import print_aggregate, print_artifacts, print_run_summary
from fxtsmc.sim.engine import Trajectory, simulate
from fxtsmc.sim.export import write_run_lines, write_summary, write_trajectory
from fxtsmc.sim.montecarlo import RunRecord, run_monte_carlo, sample_initial_states
from fxtsmc.sim.settling import exp_reaching_oracle, summarize

console = Console()
log = get_logger(__name__)

# sample points for the delta_f_bar estimate over an initial-condition box
_BOX_SAMPLES = 256


@dataclass
class BoundContext:
    bounds: Optional[BoundReport] = None
    bound: Optional[float] = None
    delta_f_bar: Optional[List[float]] = None
    gain_condition: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"delta_f_bar": self.delta_f_bar, "gain_condition": self.gain_condition}


def _fit_models(parts: ScenarioParts) -> Optional[List[GPModel]]:
    if parts.mode != "gp":
        return None
    datasets = build_datasets(parts.resolved, parts.system)
    return fit_channels(datasets, kernel_config(parts.resolved))


def _gp_bounds(parts: ScenarioParts, delta_f_bar: Sequence[float] | float) -> BoundContext:
    dfb = [float(v) for v in per_channel(parts.system.n, delta_f_bar, "delta_f_bar")]
    ctx = BoundContext(delta_f_bar=dfb)
    try:
        check_gp_gains(parts.params, dfb)
    except GainTooSmallError as e:
        log.warning("learned-law gain condition fails: %s", e)
        ctx.gain_condition = False
        return ctx
    ctx.gain_condition = True
    mode = parts.resolved["controller"]["bound_mode"] or "lyapunov-sum"
    ctx.bounds = bound_report(parts.params, dfb, mode)
    ctx.bound = ctx.bounds.T_max
    return ctx


def bound_context(parts: ScenarioParts, models: Optional[Sequence[GPModel]],
                  traj: Optional[Trajectory] = None,
                  samples: Optional[NDArray[np.float64]] = None) -> BoundContext:
    """Theoretical bound for a scenario.

    In GP mode delta_f_bar comes from the config, or else from chi * sigma maximised
    over the trajectory (single runs) or over sampled box states (batches).
    """
    resolved = parts.resolved
    if parts.mode == "known":
        bounds = bound_report(parts.params, mode=resolved["controller"]["bound_mode"])
        return BoundContext(bounds=bounds, bound=bounds.T_max)
    if parts.mode == "gp":
        given = resolved["gp"]["delta_f_bar"]
        if given is not None:
            return _gp_bounds(parts, given)
        cfg = error_bound_config(resolved)
        if traj is not None:
            return _gp_bounds(parts, trajectory_error_bound(models, traj, cfg))
        return _gp_bounds(parts, max_error_bound(models, samples, cfg))
    if resolved["system"]["builtin"] == "exp-reaching":
        alpha = float(resolved["system"]["kwargs"]["alpha"])
        return BoundContext(bound=exp_reaching_bound(alpha, 0.0))
    return BoundContext()


def _oracle(parts: ScenarioParts, x0: NDArray[np.float64]) -> Optional[List[float]]:
    if parts.mode != "open-loop" or parts.resolved["system"]["builtin"] != "exp-reaching":
        return None
    alpha = float(parts.resolved["system"]["kwargs"]["alpha"])
    return [exp_reaching_oracle(float(v), alpha) for v in x0]


def cmd_run(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    overrides: Optional[List[str]] = typer.Option(None, "--set", "-s",
                                                  help="Override: section.key=value"),
    x0: Optional[str] = typer.Option(None, "--x0", help="Initial state, e.g. 1,1,1"),
):
    """Simulate one closed-loop run, write the trajectory CSV and summary JSON."""
    try:
        resolved = load_resolved(config, load_config(), overrides or (), x0)
        parts = build_parts(resolved)
        models = _fit_models(parts)
        scenario = build_scenario(parts, gp_models=models)
        traj = simulate(scenario)
        ctx = bound_context(parts, models, traj=traj)
        summary = summarize(traj, scenario.threshold, ctx.bounds, ctx.bound)
        oracle = _oracle(parts, scenario.x0)
        traj_path = output_path(resolved, "trajectory")
        summary_path = output_path(resolved, "summary")
        side = write_trajectory(traj, traj_path, resolved)
        write_summary({"summary": summary.to_dict(), "oracle": oracle,
                       "step": traj.step, "method": traj.method, **ctx.to_dict()},
                      summary_path, resolved)
    except FxtError as e:
        fail(e)

    color = theme_color()
    console.print()
    if ctx.bounds is not None:
        print_bound_report(ctx.bounds, console, color)
    elif ctx.gain_condition is False:
        console.print(f"  [bold yellow]![/bold yellow]  alpha2 > d_bar + delta_f_bar fails for "
                      f"delta_f_bar = {format_vector(ctx.delta_f_bar)}; no bound applies")
    print_run_summary(summary, console, color, oracle)
    print_artifacts([traj_path, side, summary_path], console, color)


def _ic_box(option: Optional[str], resolved: Dict[str, Any], n: int) -> List[Tuple[float, float]]:
    if option is not None:
        try:
            low, high = (float(v) for v in option.split(","))
        except ValueError as e:
            raise ConfigError(f"--ic-box expects 'low,high', got '{option}'") from e
        return box([[low, high]] * n, n, "--ic-box")
    if resolved["montecarlo"]["ic_box"] is None:
        raise ConfigError("montecarlo.ic_box is required (or pass --ic-box)")
    return box(resolved["montecarlo"]["ic_box"], n, "montecarlo.ic_box")


def cmd_montecarlo(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    runs: Optional[int] = typer.Option(None, "--runs", "-r", min=1, help="Number of runs"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Batch seed"),
    ic_box: Optional[str] = typer.Option(None, "--ic-box",
                                         help="Same interval for every state, e.g. -5,5"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", min=1,
                                          help="Parallel worker threads"),
    bound: Optional[float] = typer.Option(None, "--bound",
                                          help="Settling-time limit checked per run"),
    overrides: Optional[List[str]] = typer.Option(None, "--set", "-s",
                                                  help="Override: section.key=value"),
):
    """Simulate a batch from random initial states and check every run against the bound."""
    try:
        sets = list(overrides or ())
        for key, value in (("runs", runs), ("seed", seed), ("workers", workers),
                           ("bound", bound)):
            if value is not None:
                sets.append(f"montecarlo.{key}={value}")
        resolved = load_resolved(config, load_config(), sets)
        parts = build_parts(resolved)
        mc = resolved["montecarlo"]
        n = parts.system.n
        ic = _ic_box(ic_box, resolved, n)
        if ic_box is not None:
            mc["ic_box"] = [list(pair) for pair in ic]
        models = _fit_models(parts)
        template = build_scenario(parts, x0=np.zeros(n), gp_models=models)
        samples = None
        if models is not None:
            samples = np.vstack([sample_initial_states(ic, _BOX_SAMPLES, int(mc["seed"])),
                                models[0].inputs])
        ctx = bound_context(parts, models, samples=samples)
        limit = float(mc["bound"]) if mc["bound"] is not None else ctx.bound

        with Progress(TextColumn("[dim]simulating[/dim]"), BarColumn(), MofNCompleteColumn(),
                      console=console, transient=True) as progress:
            task = progress.add_task("runs", total=int(mc["runs"]))

            def tick(_: RunRecord) -> None:
                progress.advance(task)

            result = run_monte_carlo(template, ic, int(mc["runs"]), int(mc["seed"]),
                                     workers=int(mc["workers"]), bounds=ctx.bounds,
                                     bound=limit, on_done=tick)
        agg = result.aggregate
        runs_path = output_path(resolved, "runs")
        lines = [r.to_dict() for r in result.records]
        lines.append({"aggregate": agg.to_dict(), **ctx.to_dict()})
        write_run_lines(lines, runs_path, resolved)
    except FxtError as e:
        fail(e)

    color = theme_color()
    console.print()
    if ctx.bounds is not None:
        print_bound_report(ctx.bounds, console, color)
    print_aggregate(agg, console, color)
    print_artifacts([runs_path], console, color)

    min_fraction = float(mc["min_fraction"])
    if agg.satisfied_fraction < min_fraction:
        fail(AcceptanceError(
            f"{agg.satisfied}/{agg.runs} runs settled within the bound "
            f"(required fraction {min_fraction:g})"
        ))
