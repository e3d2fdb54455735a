"""Built-in plants: the PMSM chaotic benchmark and the scalar exp-reaching validation plant."""

from __future__ import annotations

import importlib
import math
from typing import Any, Callable, Dict

import numpy as np

from fxtsmc.core.errors import ConfigError, ParameterError
from fxtsmc.core.numerics import safe_exp, sign
from fxtsmc.system.models import SystemModel, unit_gain, zero_perturbation

SQRT_PI_2 = math.sqrt(math.pi) / 2


def _pmsm_drift(x: np.ndarray) -> np.ndarray:
    x1, x2, x3 = x
    return np.array([
        2.5 * (x2 - x1),
        -x2 - x3 * x1 + 25.0 * x1,
        -x3 + x1 * x2,
    ])


def _pmsm_perturbation(t: float) -> np.ndarray:
    return np.array([
        math.sin(10.0 * t),
        math.cos(10.0 * t),
        math.cos(10.0 * t) * math.sin(4.0 * t),
    ])


def make_pmsm() -> SystemModel:
    """Three-state permanent magnet synchronous motor with unit input gains.

    d = (sin 10t, cos 10t, cos 10t sin 4t), declared bound 1 per channel.
    """
    return SystemModel(
        n=3,
        drift=_pmsm_drift,
        gain=unit_gain(3),
        perturbation=_pmsm_perturbation,
        perturbation_bounds=np.ones(3),
        name="pmsm",
    )


def make_exp_reaching_plant(alpha: float) -> SystemModel:
    """Scalar x' = -alpha (sqrt(pi)/2) exp(x^2) sign(x) + d(t), run open-loop.

    With d = 0 the settling time from x0 is erf(|x0|) / alpha.
    """
    if not alpha > 0:
        raise ParameterError(f"alpha must be > 0, got {alpha}")

    def drift(x: np.ndarray) -> np.ndarray:
        return -alpha * SQRT_PI_2 * safe_exp(x * x) * sign(x)

    return SystemModel(
        n=1,
        drift=drift,
        gain=unit_gain(1),
        perturbation=zero_perturbation(1),
        name="exp-reaching",
    )


BUILTINS: Dict[str, Callable[..., SystemModel]] = {
    "pmsm": make_pmsm,
    "exp-reaching": make_exp_reaching_plant,
}


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


def make_builtin(name: str, **kwargs: Any) -> SystemModel:
    factory = BUILTINS.get(name)
    if factory is None:
        raise ConfigError(
            f"unknown builtin system '{name}'. Available: {', '.join(builtin_names())}"
        )
    try:
        return factory(**kwargs)
    except TypeError as e:
        raise ConfigError(f"bad arguments for builtin system '{name}': {e}") from e


def load_plugin(spec: str, **kwargs: Any) -> SystemModel:
    """Resolve 'package.module:factory' and call it with kwargs."""
    module_name, _, attr = spec.partition(":")
    if not module_name or not attr:
        raise ConfigError(f"plugin must look like 'package.module:factory', got '{spec}'")
    try:
        module = importlib.import_module(module_name)
        factory = getattr(module, attr)
    except (ImportError, AttributeError) as e:
        raise ConfigError(f"cannot load plugin '{spec}': {e}") from e
    model = factory(**kwargs)
    if not isinstance(model, SystemModel):
        raise ConfigError(f"plugin '{spec}' did not return a SystemModel")
    return model
