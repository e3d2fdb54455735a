"""GP: `gp-train` command."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import typer
from numpy.typing import NDArray
from rich.console import Console

from fxtsmc.core.config import load_config
from fxtsmc.core.errors import FxtError
from fxtsmc.core.log import get_logger
from fxtsmc.core.scenario_file import (
    ScenarioParts,
    box,
    build_datasets,
    build_parts,
    initial_state,
    kernel_config,
    load_resolved,
    output_path,
)
from fxtsmc.core.utils import fail, theme_color
from fxtsmc.gp.dataset import save_datasets
from fxtsmc.gp.display import print_fit_table, print_training_summary
from fxtsmc.gp.regression import drift_rms, fit_channels, training_residuals
from fxtsmc.sim.engine import Scenario, simulate

console = Console()
log = get_logger(__name__)

HELD_OUT_POINTS = 200
HELD_OUT_STRIDE = 100


def held_out_states(parts: ScenarioParts) -> Tuple[NDArray[np.float64], str]:
    """States to score drift estimates on, and a label saying where they came from.

    With controller gains and an initial state this is the known-model closed-loop
    trajectory (every HELD_OUT_STRIDE-th sample); otherwise seeded-uniform points over
    the training region drawn from a stream separate from the training inputs.
    """
    resolved = parts.resolved
    if parts.params is not None and resolved["sim"]["x0"] is not None:
        scenario = Scenario(
            system=parts.system,
            x0=initial_state(resolved, parts.system.n),
            step=parts.step,
            mode="known",
            params=parts.params.with_law("known"),
            reference=parts.reference,
            threshold=float(resolved["sim"]["threshold"]),
        )
        traj = simulate(scenario)
        return traj.x[::HELD_OUT_STRIDE], f"known-model trajectory ({len(traj)} samples)"
    region = np.asarray(box(resolved["gp"]["region"], parts.system.n, "gp.region"))
    rng = np.random.default_rng(np.random.SeedSequence(int(resolved["gp"]["seed"])).spawn(1)[0])
    points = region[:, 0] + (region[:, 1] - region[:, 0]) * rng.random(
        (HELD_OUT_POINTS, parts.system.n))
    return points, f"{HELD_OUT_POINTS} uniform points in the region"


def cmd_gp_train(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    n_points: Optional[int] = typer.Option(None, "--N", "-n", help="Samples per GP"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Training-data seed"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Dataset CSV path"),
    overrides: Optional[List[str]] = typer.Option(None, "--set", "-s",
                                                  help="Override: section.key=value"),
):
    """Generate (or load) GP training data, fit one GP per channel, report accuracy."""
    try:
        sets = list(overrides or ())
        if n_points is not None:
            sets.append(f"gp.N={n_points}")
        if seed is not None:
            sets.append(f"gp.seed={seed}")
        resolved = load_resolved(config, load_config(), sets)
        parts = build_parts(resolved)
        regenerate = n_points is not None or seed is not None
        datasets = build_datasets(resolved, parts.system,
                                  N=resolved["gp"]["N"] if regenerate else None,
                                  seed=resolved["gp"]["seed"] if regenerate else None)
        kernel = kernel_config(resolved)
        models = fit_channels(datasets, kernel)
        residuals = training_residuals(models)
        states, label = held_out_states(parts)
        rms = drift_rms(models, parts.system.drift_at, states)
        path = output_path(resolved, "dataset", out)
        meta: Dict[str, Any] = {
            "region": resolved["gp"]["region"],
            "kernel": kernel.to_dict(),
            "config": resolved,
        }
        save_datasets(datasets, path, meta)
    except FxtError as e:
        fail(e)

    log.info("held-out RMS %.6g over %s", rms, label)
    color = theme_color()
    console.print()
    print_fit_table(models, list(residuals), console, color)
    print_training_summary(path, f"{kernel.family} (l = {kernel.length_scale:g})", rms, label,
                           console, color)
