"""Training data for the drift GPs: generation from a plant and CSV/JSON persistence."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from fxtsmc.core.errors import ArtifactIOError, ConfigError, ParameterError
from fxtsmc.system.models import SystemModel

Region = Sequence[Tuple[float, float]]


@dataclass(frozen=True)
class GPDataset:
    """N noisy drift samples y = f_i(x) + w, w ~ N(0, noise_std^2), for one channel."""

    inputs: NDArray[np.float64]
    targets: NDArray[np.float64]
    noise_std: float = 0.0
    seed: Optional[int] = None
    channel: int = 0

    def __post_init__(self) -> None:
        inputs = np.asarray(self.inputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs.reshape(-1, 1)
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if len(inputs) < 1:
            raise ParameterError("dataset needs at least one sample")
        if len(targets) != len(inputs):
            raise ParameterError(f"{len(inputs)} inputs but {len(targets)} targets")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(targets))):
            raise ParameterError("dataset entries must be finite")
        if not self.noise_std >= 0:
            raise ParameterError(f"noise_std must be >= 0, got {self.noise_std}")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @property
    def size(self) -> int:
        return len(self.inputs)

    def appended(self, x: NDArray[np.float64], y: float) -> "GPDataset":
        return GPDataset(
            inputs=np.vstack([self.inputs, np.asarray(x, dtype=float).reshape(1, -1)]),
            targets=np.append(self.targets, float(y)),
            noise_std=self.noise_std,
            seed=self.seed,
            channel=self.channel,
        )

    def permuted(self, order: Sequence[int]) -> "GPDataset":
        idx = np.asarray(order)
        return GPDataset(self.inputs[idx], self.targets[idx], self.noise_std, self.seed,
                         self.channel)


def _check_region(region: Region, n: int) -> NDArray[np.float64]:
    box = np.asarray(region, dtype=float)
    if box.shape != (n, 2):
        raise ParameterError(f"region needs {n} [low, high] pairs, got shape {box.shape}")
    if np.any(box[:, 1] <= box[:, 0]):
        raise ParameterError("every region interval needs low < high")
    return box


def generate_training_data(
    model: SystemModel,
    N: int,
    region: Region,
    sigma_F: float,
    seed: int,
) -> List[GPDataset]:
    """Seeded-uniform inputs over `region`, one dataset per drift channel, shared inputs."""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    if not sigma_F >= 0:
        raise ParameterError(f"sigma_F must be >= 0, got {sigma_F}")
    box = _check_region(region, model.n)
    rng = np.random.default_rng(seed)
    inputs = box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((N, model.n))
    clean = np.array([model.drift_at(x) for x in inputs])
    noise = sigma_F * rng.standard_normal(clean.shape) if sigma_F > 0 else np.zeros(clean.shape)
    targets = clean + noise
    # the channels share one inputs array so predictions can reuse kernel rows
    return [
        GPDataset(inputs=inputs, targets=targets[:, i], noise_std=sigma_F, seed=seed, channel=i)
        for i in range(model.n)
    ]


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def save_datasets(
    datasets: Sequence[GPDataset],
    path: Path,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write `x1..xn,y1..yn` CSV plus a JSON sidecar; returns the sidecar path."""
    inputs = datasets[0].inputs
    n_in = inputs.shape[1]
    header = [f"x{j + 1}" for j in range(n_in)] + [f"y{i + 1}" for i in range(len(datasets))]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(header)
            for r in range(len(inputs)):
                row = [float(v) for v in inputs[r]] + [float(ds.targets[r]) for ds in datasets]
                w.writerow([format(v, ".17g") for v in row])
        meta = {
            "seed": datasets[0].seed,
            "noise_std": datasets[0].noise_std,
            "rows": len(inputs),
            "channels": len(datasets),
            **(metadata or {}),
        }
        side = sidecar_path(path)
        side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write dataset to {path}: {e}") from e
    return side


def load_datasets(path: Path, n: Optional[int] = None) -> Tuple[List[GPDataset], Dict[str, Any]]:
    """Read a dataset CSV (and its sidecar if present)."""
    if not path.exists():
        raise ArtifactIOError(f"dataset file not found: {path}")
    side = sidecar_path(path)
    meta: Dict[str, Any] = {}
    try:
        if side.exists():
            meta = json.loads(side.read_text(encoding="utf-8"))
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
    except (OSError, json.JSONDecodeError) as e:
        raise ArtifactIOError(f"cannot read dataset {path}: {e}") from e
    if not rows:
        raise ConfigError(f"dataset {path} is empty")
    header, body = rows[0], [r for r in rows[1:] if r]
    xs = [j for j, h in enumerate(header) if h.startswith("x")]
    ys = [j for j, h in enumerate(header) if h.startswith("y")]
    if not xs or not ys or (n is not None and (len(xs) != n or len(ys) != n)):
        raise ConfigError(f"dataset {path} header {header} does not match {n} channels")
    if not body:
        raise ConfigError(f"dataset {path} has a header but no samples")
    for k, r in enumerate(body, start=1):
        if len(r) != len(header):
            raise ConfigError(f"dataset {path} sample {k} has {len(r)} fields, "
                              f"header has {len(header)}")
    try:
        data = np.array([[float(v) for v in r] for r in body], dtype=float)
    except ValueError as e:
        raise ConfigError(f"dataset {path} has a non-numeric entry: {e}") from e
    inputs = data[:, xs]
    noise = float(meta.get("noise_std", 0.0))
    seed = meta.get("seed")
    datasets = [
        GPDataset(inputs=inputs, targets=data[:, j], noise_std=noise, seed=seed, channel=i)
        for i, j in enumerate(ys)
    ]
    return datasets, meta
