"""Scenario files: JSON parsing, override grammar, schema checks and object builders.

A scenario file has the sections `system`, `reference`, `controller`, `gp`, `sim`,
`output` and `montecarlo`. Missing sim/gp/output values come from the user
settings; the fully resolved dictionary is what every artifact embeds.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fxtsmc.control.laws import ControllerParams
from fxtsmc.control.sliding import SlidingParams
from fxtsmc.core.config import Config
from fxtsmc.core.errors import ArtifactIOError, ConfigError
from fxtsmc.core.numerics import StepConfig
from fxtsmc.gp.dataset import GPDataset, generate_training_data, load_datasets
from fxtsmc.gp.kernels import KernelConfig
from fxtsmc.gp.regression import ErrorBoundConfig, GPModel
from fxtsmc.sim.engine import Scenario
from fxtsmc.system.benchmarks import load_plugin, make_builtin
from fxtsmc.system.models import SystemModel
from fxtsmc.system.reference import ReferenceSignal, constant_reference, sinusoidal_reference

_SCHEMA: Dict[str, Dict[str, Any]] = {
    "system": {"builtin": None, "plugin": None, "kwargs": {}},
    "reference": {"kind": "constant", "value": 0.0, "amplitude": 0.0, "omega": 0.0,
                  "phase": 0.0, "offset": 0.0},
    "controller": {"mode": "known", "alpha1": None, "alpha2": None, "p": None, "q": None,
                   "d_bar": 0.0, "include_sqrt_pi_factor": None, "sign_boundary_layer": 0.0,
                   "discretization": "implicit", "bound_mode": None},
    "gp": {"kernel": None, "length_scale": None, "chi": None, "dataset": None,
           "N": 50, "region": None, "sigma_F": 0.0, "seed": 0, "delta_f_bar": None},
    "sim": {"step": None, "t_end": None, "method": None, "threshold": None,
            "log_every": None, "x0": None},
    "output": {"dir": None, "trajectory": "trajectory.csv", "summary": "summary.json",
               "runs": "runs.jsonl", "dataset": "dataset.csv"},
    "montecarlo": {"runs": 30, "seed": 0, "ic_box": None, "workers": 1, "bound": None,
                   "min_fraction": 1.0},
}

MODES = ("known", "gp", "open-loop")


def load_scenario_file(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ArtifactIOError(f"config file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot read config file {path}: {e}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return raw


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(raw: Dict[str, Any], sets: Sequence[str] = (),
                    x0: Optional[str] = None) -> Dict[str, Any]:
    """Apply `section.key=value` overrides (value read as JSON, else a string) and `--x0`."""
    out = copy.deepcopy(raw)
    for item in sets:
        path, sep, value = item.partition("=")
        keys = [k for k in path.strip().split(".") if k]
        if not sep or not keys:
            raise ConfigError(f"override must look like 'section.key=value', got '{item}'")
        node = out
        for k in keys[:-1]:
            child = node.setdefault(k, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override '{item}': '{k}' is not a section")
            node = child
        node[keys[-1]] = _parse_value(value.strip())
    if x0 is not None:
        try:
            values = [float(v) for v in x0.split(",") if v.strip()]
        except ValueError as e:
            raise ConfigError(f"--x0 expects comma-separated numbers, got '{x0}'") from e
        out.setdefault("sim", {})["x0"] = values
    return out


def resolve(raw: Dict[str, Any], settings: Config) -> Dict[str, Any]:
    """Reject unknown keys, fill every default and return the resolved config."""
    unknown = sorted(set(raw) - set(_SCHEMA))
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    resolved: Dict[str, Any] = {}
    for section, defaults in _SCHEMA.items():
        given = raw.get(section, {})
        if given is None:
            given = {}
        if not isinstance(given, dict):
            raise ConfigError(f"section '{section}' must be an object")
        bad = sorted(set(given) - set(defaults))
        if bad:
            raise ConfigError(f"unknown key(s) in '{section}': {', '.join(bad)}")
        resolved[section] = {**copy.deepcopy(defaults), **copy.deepcopy(given)}

    sim = resolved["sim"]
    for key, value in (("step", settings.sim.step), ("t_end", settings.sim.t_end),
                       ("method", settings.sim.method), ("threshold", settings.sim.threshold),
                       ("log_every", settings.sim.log_every)):
        if sim[key] is None:
            sim[key] = value
    gp = resolved["gp"]
    for key, value in (("kernel", settings.gp.kernel), ("length_scale", settings.gp.length_scale),
                       ("chi", settings.gp.chi)):
        if gp[key] is None:
            gp[key] = value
    if resolved["output"]["dir"] is None:
        resolved["output"]["dir"] = settings.output.dir

    system = resolved["system"]
    if system["builtin"] is None and system["plugin"] is None:
        raise ConfigError("system needs a 'builtin' name or a 'plugin' path")
    if system["builtin"] is not None and system["plugin"] is not None:
        raise ConfigError("system takes either 'builtin' or 'plugin', not both")
    if not isinstance(system["kwargs"], dict):
        raise ConfigError("system.kwargs must be an object")
    if resolved["controller"]["mode"] not in MODES:
        raise ConfigError(f"controller.mode must be one of {MODES}, "
                          f"got {resolved['controller']['mode']!r}")
    if resolved["reference"]["kind"] not in ("constant", "sine"):
        raise ConfigError(f"reference.kind must be 'constant' or 'sine', "
                          f"got {resolved['reference']['kind']!r}")
    return resolved


def load_resolved(path: Path, settings: Config, sets: Sequence[str] = (),
                  x0: Optional[str] = None) -> Dict[str, Any]:
    return resolve(apply_overrides(load_scenario_file(path), sets, x0), settings)


# ── Builders ───────────────────────────────────────────────────────────────────

def _number(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{what} must be a number, got {value!r}")
    return float(value)


def _channels(value: Any, n: int, what: str, integer: bool = False) -> Any:
    """A scalar or a list with one entry per channel."""
    if value is None:
        raise ConfigError(f"{what} is required")
    items = value if isinstance(value, list) else [value]
    if isinstance(value, list) and len(items) not in (1, n):
        raise ConfigError(f"{what} needs 1 or {n} entries, got {len(items)}")
    if integer:
        for v in items:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{what} must be integers (exponents are p, q pairs), got {v!r}")
        arr = np.array(items, dtype=np.int64)
        return int(arr[0]) if arr.size == 1 else arr
    arr = np.array([_number(v, what) for v in items], dtype=float)
    return float(arr[0]) if arr.size == 1 else arr


def build_system(resolved: Dict[str, Any]) -> SystemModel:
    section = resolved["system"]
    if section["plugin"] is not None:
        return load_plugin(str(section["plugin"]), **section["kwargs"])
    return make_builtin(str(section["builtin"]), **section["kwargs"])


def build_reference(resolved: Dict[str, Any], n: int) -> ReferenceSignal:
    ref = resolved["reference"]
    try:
        if ref["kind"] == "constant":
            return constant_reference(ref["value"], n)
        return sinusoidal_reference(n, ref["amplitude"], ref["omega"], ref["phase"],
                                    ref["offset"])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad reference section: {e}") from e


def build_params(resolved: Dict[str, Any], n: int) -> Optional[ControllerParams]:
    """Controller gains, or None for an open-loop scenario without gains."""
    c = resolved["controller"]
    if c["mode"] == "open-loop" and c["alpha1"] is None:
        return None
    law = "gp" if c["mode"] == "gp" else "known"
    flag = c["include_sqrt_pi_factor"]
    if flag is not None and not isinstance(flag, bool):
        raise ConfigError("controller.include_sqrt_pi_factor must be true, false or null")
    sliding = SlidingParams(
        alpha1=_channels(c["alpha1"], n, "controller.alpha1"),
        p=_channels(c["p"], n, "controller.p", integer=True),
        q=_channels(c["q"], n, "controller.q", integer=True),
    )
    return ControllerParams(
        sliding=sliding,
        alpha2=_channels(c["alpha2"], n, "controller.alpha2"),
        d_bar=_channels(c["d_bar"], n, "controller.d_bar"),
        include_sqrt_pi_factor=flag,
        sign_boundary_layer=_channels(c["sign_boundary_layer"], n,
                                      "controller.sign_boundary_layer"),
        law=law,
        discretization=c["discretization"],
    )


def build_step(resolved: Dict[str, Any]) -> StepConfig:
    sim = resolved["sim"]
    return StepConfig(
        step_size=_number(sim["step"], "sim.step"),
        method=sim["method"],
        t_end=_number(sim["t_end"], "sim.t_end"),
    )


def initial_state(resolved: Dict[str, Any], n: int) -> np.ndarray:
    x0 = resolved["sim"]["x0"]
    if x0 is None:
        raise ConfigError("sim.x0 is required (or pass --x0)")
    values = x0 if isinstance(x0, list) else [x0]
    if len(values) != n:
        raise ConfigError(f"sim.x0 needs {n} entries, got {len(values)}")
    return np.array([_number(v, "sim.x0") for v in values], dtype=float)


def box(value: Any, n: int, what: str) -> List[Tuple[float, float]]:
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"{what} needs {n} [low, high] pairs")
    out = []
    for pair in value:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"{what} entries must be [low, high] pairs, got {pair!r}")
        low, high = _number(pair[0], what), _number(pair[1], what)
        if high < low:
            raise ConfigError(f"{what} interval [{low}, {high}] has low > high")
        out.append((low, high))
    return out


def output_path(resolved: Dict[str, Any], key: str, override: Optional[Path] = None) -> Path:
    if override is not None:
        return override
    return Path(resolved["output"]["dir"]) / resolved["output"][key]


@dataclass
class ScenarioParts:
    """Everything the commands build from one resolved config, short of GP fitting."""

    resolved: Dict[str, Any]
    system: SystemModel
    reference: ReferenceSignal
    params: Optional[ControllerParams]
    step: StepConfig

    @property
    def mode(self) -> str:
        return self.resolved["controller"]["mode"]


def build_parts(resolved: Dict[str, Any]) -> ScenarioParts:
    system = build_system(resolved)
    return ScenarioParts(
        resolved=resolved,
        system=system,
        reference=build_reference(resolved, system.n),
        params=build_params(resolved, system.n),
        step=build_step(resolved),
    )


def kernel_config(resolved: Dict[str, Any]) -> KernelConfig:
    gp = resolved["gp"]
    return KernelConfig(family=gp["kernel"], length_scale=_number(gp["length_scale"],
                                                                  "gp.length_scale"))


def error_bound_config(resolved: Dict[str, Any]) -> ErrorBoundConfig:
    chi = resolved["gp"]["chi"]
    if isinstance(chi, list):
        return ErrorBoundConfig(chi=tuple(_number(v, "gp.chi") for v in chi))
    return ErrorBoundConfig(chi=_number(chi, "gp.chi"))


def build_datasets(resolved: Dict[str, Any], system: SystemModel,
                   N: Optional[int] = None, seed: Optional[int] = None) -> List[GPDataset]:
    """Load `gp.dataset` when set (and no N/seed override), else generate from the plant."""
    gp = resolved["gp"]
    if gp["dataset"] is not None and N is None and seed is None:
        datasets, _ = load_datasets(Path(gp["dataset"]), system.n)
        return datasets
    if gp["region"] is None:
        raise ConfigError("gp.region is required to generate training data")
    count = N if N is not None else gp["N"]
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError(f"gp.N must be an integer, got {count!r}")
    return generate_training_data(
        system,
        count,
        box(gp["region"], system.n, "gp.region"),
        _number(gp["sigma_F"], "gp.sigma_F"),
        int(seed if seed is not None else gp["seed"]),
    )


def build_scenario(parts: ScenarioParts, x0: Optional[np.ndarray] = None,
                   gp_models: Optional[Sequence[GPModel]] = None) -> Scenario:
    sim = parts.resolved["sim"]
    log_every = sim["log_every"]
    if isinstance(log_every, bool) or not isinstance(log_every, int):
        raise ConfigError(f"sim.log_every must be an integer, got {log_every!r}")
    return Scenario(
        system=parts.system,
        x0=initial_state(parts.resolved, parts.system.n) if x0 is None else x0,
        step=parts.step,
        mode=parts.mode,
        params=parts.params,
        reference=parts.reference,
        gp_models=gp_models,
        threshold=_number(sim["threshold"], "sim.threshold"),
        log_every=log_every,
    )
