"""Scalar primitives shared by every module: signed power, clamped exponential, steppers.

All functions accept Python floats or NumPy arrays and broadcast channel-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Union

import numpy as np
from numpy.typing import NDArray

from fxtsmc.core.errors import ParameterError, SimulationDivergedError

ArrayLike = Union[float, NDArray[np.float64]]
Derivative = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]

# exp(50) ~ 5.18e21, far from the float64 ceiling
E_MAX = 50.0
DEFAULT_STEP = 1e-4

Method = Literal["euler", "rk4"]
METHODS = ("euler", "rk4")


def sign(x: ArrayLike) -> ArrayLike:
    """Single-valued sign with sign(0) = 0."""
    return np.sign(x)


def signed_power(x: ArrayLike, alpha: ArrayLike) -> ArrayLike:
    """|x|^alpha * sign(x); alpha = 0 gives sign(x)."""
    if np.any(np.asarray(alpha) < 0):
        raise ParameterError(f"signed_power needs alpha >= 0, got {alpha}")
    result = np.abs(x) ** alpha * np.sign(x)
    if np.ndim(result) == 0:
        return float(result)
    return result


def safe_exp(x: ArrayLike) -> ArrayLike:
    result = np.exp(np.minimum(x, E_MAX))
    if np.ndim(result) == 0:
        return float(result)
    return result


def sign_or_layer(s: ArrayLike, epsilon: ArrayLike = 0.0) -> ArrayLike:
    """sign(s) where epsilon == 0, tanh(s / epsilon) where epsilon > 0."""
    eps = np.asarray(epsilon, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    if np.any(eps < 0):
        raise ParameterError(f"boundary layer must be >= 0, got {epsilon}")
    safe_eps = np.where(eps > 0, eps, 1.0)
    result = np.where(eps > 0, np.tanh(s_arr / safe_eps), np.sign(s_arr))
    if np.ndim(result) == 0:
        return float(result)
    return result


@dataclass(frozen=True)
class StepConfig:
    """Fixed-step integration settings.

    The grid is t_k = k * step_size for k = 0..n_steps with
    n_steps = round(t_end / step_size); t_end must sit on that grid to within
    1e-9 * max(1, t_end).
    """

    step_size: float = DEFAULT_STEP
    method: Method = "euler"
    t_end: float = 5.0

    def __post_init__(self) -> None:
        if not self.step_size > 0:
            raise ParameterError(f"step_size must be > 0, got {self.step_size}")
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if not self.t_end >= 0:
            raise ParameterError(f"t_end must be >= 0, got {self.t_end}")
        drift = abs(self.n_steps * self.step_size - self.t_end)
        if drift > 1e-9 * max(1.0, self.t_end):
            raise ParameterError(
                f"t_end={self.t_end} is not a multiple of step_size={self.step_size}"
            )

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step_size))

    def time(self, k: int) -> float:
        return k * self.step_size


def _checked(dx: NDArray[np.float64], t: float) -> NDArray[np.float64]:
    bad = np.flatnonzero(~np.isfinite(dx))
    if bad.size:
        raise SimulationDivergedError(t, int(bad[0]))
    return dx


def integrate_step(
    state: NDArray[np.float64],
    derivative: Derivative,
    t: float,
    cfg: StepConfig,
) -> NDArray[np.float64]:
    """Advance `state` by one step of cfg.method; derivative is called as f(t, x)."""
    h = cfg.step_size
    x = np.asarray(state, dtype=float)
    if cfg.method == "euler":
        return x + h * _checked(np.asarray(derivative(t, x), dtype=float), t)

    k1 = _checked(np.asarray(derivative(t, x), dtype=float), t)
    k2 = _checked(np.asarray(derivative(t + h / 2, x + h / 2 * k1), dtype=float), t + h / 2)
    k3 = _checked(np.asarray(derivative(t + h / 2, x + h / 2 * k2), dtype=float), t + h / 2)
    k4 = _checked(np.asarray(derivative(t + h, x + h * k3), dtype=float), t + h)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
