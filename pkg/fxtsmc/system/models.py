"""Perturbed control-affine plant: x_i' = f_i(x) + g_i(x) u_i + d_i(t)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from fxtsmc.core.errors import (
    ChannelMismatchError,
    EvaluationError,
    ParameterError,
    PerturbationBoundError,
    SingularGainError,
)

Vector = NDArray[np.float64]
StateFn = Callable[[Vector], Vector]
TimeFn = Callable[[float], Vector]

# slack for float round-off in |d(t)| <= d_bar
_BOUND_TOL = 1e-12


def zero_perturbation(n: int) -> TimeFn:
    zeros = np.zeros(n)
    return lambda t: zeros


def unit_gain(n: int) -> StateFn:
    ones = np.ones(n)
    return lambda x: ones


@dataclass(frozen=True)
class SystemModel:
    """Channel-wise plant. g is diagonal: u_i only enters x_i'.

    `perturbation_bounds`, when declared, is checked on every sampled d(t).
    """

    n: int
    drift: StateFn
    gain: StateFn
    perturbation: TimeFn
    perturbation_bounds: Optional[Vector] = None
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"system dimension must be >= 1, got {self.n}")
        if self.perturbation_bounds is not None:
            bounds = np.asarray(self.perturbation_bounds, dtype=float)
            if bounds.shape != (self.n,) or np.any(bounds < 0):
                raise ParameterError("perturbation_bounds must be n non-negative reals")
            object.__setattr__(self, "perturbation_bounds", bounds)

    def drift_at(self, x: Vector) -> Vector:
        return _finite(np.asarray(self.drift(x), dtype=float), "drift f(x)", self.n)

    def gain_at(self, x: Vector, t: Optional[float] = None) -> Vector:
        g = _finite(np.asarray(self.gain(x), dtype=float), "gain g(x)", self.n)
        zero = np.flatnonzero(g == 0.0)
        if zero.size:
            raise SingularGainError(int(zero[0]), t)
        return g

    def perturbation_at(self, t: float) -> Vector:
        d = _finite(np.asarray(self.perturbation(t), dtype=float), "perturbation d(t)", self.n)
        if self.perturbation_bounds is not None:
            over = np.flatnonzero(np.abs(d) > self.perturbation_bounds + _BOUND_TOL)
            if over.size:
                i = int(over[0])
                raise PerturbationBoundError(t, i, float(d[i]), float(self.perturbation_bounds[i]))
        return d


def _finite(v: Vector, what: str, n: int) -> Vector:
    v = np.broadcast_to(v, (n,)) if v.ndim == 0 else v
    if v.shape != (n,):
        raise ChannelMismatchError(n, int(v.size))
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise EvaluationError(what, int(bad[0]))
    return v


def eval_dynamics(model: SystemModel, x: Vector, u: Vector, t: float) -> Vector:
    """Return [f_i(x) + g_i(x) u_i + d_i(t)] for i = 1..n."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != (model.n,):
        raise ChannelMismatchError(model.n, int(x.size))
    if u.shape != (model.n,):
        raise ChannelMismatchError(model.n, int(u.size))
    dx = model.drift_at(x) + model.gain_at(x, t) * u + model.perturbation_at(t)
    bad = np.flatnonzero(~np.isfinite(dx))
    if bad.size:
        raise EvaluationError("state derivative", int(bad[0]))
    return dx


def with_gain_scale(model: SystemModel, c: float) -> SystemModel:
    """Copy of `model` with g replaced by c * g."""
    if c == 0:
        raise ParameterError("gain scale must be non-zero")
    base = model.gain
    return SystemModel(
        n=model.n,
        drift=model.drift,
        gain=lambda x: c * np.asarray(base(x), dtype=float),
        perturbation=model.perturbation,
        perturbation_bounds=model.perturbation_bounds,
        name=model.name,
    )


def without_perturbation(model: SystemModel) -> SystemModel:
    return SystemModel(
        n=model.n,
        drift=model.drift,
        gain=model.gain,
        perturbation=zero_perturbation(model.n),
        perturbation_bounds=None,
        name=model.name,
    )


def as_vector(values: float | Sequence[float], n: int, what: str) -> Vector:
    """Broadcast a scalar or length-n sequence to a float vector."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if arr.shape != (n,):
        raise ParameterError(f"{what} needs {n} entries, got {arr.size}")
    return arr
