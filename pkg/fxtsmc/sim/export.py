"""CSV/JSON artifacts: trajectories, run summaries and Monte-Carlo run lines.

Outputs carry no timestamps and use sorted keys, so a repeated run rewrites
identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from fxtsmc.core.errors import ArtifactIOError
from fxtsmc.sim.engine import Trajectory


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars/arrays become Python values, NaN/inf become null."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(_clean(data), indent=2, sort_keys=True) + "\n"


def trajectory_header(traj: Trajectory) -> List[str]:
    n = traj.n
    groups = ["x", "xd", "z", "s", "u", "d"] + (["fhat"] if traj.fhat is not None else [])
    return ["t"] + [f"{g}{i + 1}" for g in groups for i in range(n)]


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e


def write_trajectory(traj: Trajectory, path: Path,
                     resolved: Optional[Dict[str, Any]] = None) -> Path:
    """Write the trajectory CSV (17 significant digits) and its `.meta.json` sidecar."""
    blocks = [traj.t.reshape(-1, 1), traj.x, traj.xd, traj.z, traj.s, traj.u, traj.d]
    if traj.fhat is not None:
        blocks.append(traj.fhat)
    table = np.hstack(blocks)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(trajectory_header(traj))
            for row in table:
                w.writerow([format(float(v), ".17g") for v in row])
    except OSError as e:
        raise ArtifactIOError(f"cannot write trajectory to {path}: {e}") from e
    side = path.with_suffix(".meta.json")
    _write(side, dumps({
        "config": resolved or {},
        "step": traj.step,
        "method": traj.method,
        "mode": traj.mode,
        "samples": len(traj),
    }))
    return side


def write_summary(summary: Dict[str, Any], path: Path,
                  resolved: Optional[Dict[str, Any]] = None) -> None:
    _write(path, dumps({**summary, "config": resolved or {}}))


def write_run_lines(records: Iterable[Dict[str, Any]], path: Path,
                    resolved: Optional[Dict[str, Any]] = None) -> None:
    """JSON lines: a header line with the resolved config, then one line per run."""
    lines = [json.dumps(_clean({"config": resolved or {}}), sort_keys=True)]
    lines += [json.dumps(_clean(r), sort_keys=True) for r in records]
    _write(path, "\n".join(lines) + "\n")
