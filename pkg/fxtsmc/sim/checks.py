"""Closed-loop diagnostics computed from logged trajectories."""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import cumulative_trapezoid

from fxtsmc.control.laws import ControllerParams, reaching_term
from fxtsmc.control.sliding import integrand
from fxtsmc.core.errors import ParameterError
from fxtsmc.gp.regression import ErrorBoundConfig, GPModel, max_error_bound
from fxtsmc.sim.engine import Trajectory
from fxtsmc.system.models import SystemModel


def _require_full_log(traj: Trajectory) -> None:
    if len(traj) < 2:
        raise ParameterError("trajectory needs at least two samples")
    if not np.allclose(np.diff(traj.t), traj.step, rtol=1e-9, atol=0.0):
        raise ParameterError("diagnostic needs every step logged (log_every = 1)")


def chatter_floor(traj: Trajectory, max_gain: float = 1.0) -> float:
    """10 h max|u| max|g|: the band where sign switching dominates V."""
    return 10.0 * traj.step * float(np.max(np.abs(traj.u))) * abs(max_gain)


def max_gain_along(system: SystemModel, traj: Trajectory) -> float:
    """max |g(x_k)| over every logged state."""
    return max(float(np.max(np.abs(system.gain_at(x, float(t))))) for t, x in zip(traj.t, traj.x))


def lyapunov_violations(traj: Trajectory, max_gain: float = 1.0,
                        floor: Optional[float] = None) -> NDArray[np.int64]:
    """Per channel, count the sample pairs where V = s^2/2 grows while |s| is above the floor."""
    _require_full_log(traj)
    if floor is None:
        floor = chatter_floor(traj, max_gain)
    V = traj.V
    grew = V[1:] > V[:-1]
    outside = np.abs(traj.s[:-1]) > floor
    return np.sum(grew & outside, axis=0).astype(np.int64)


def reaching_residual(traj: Trajectory, params: ControllerParams,
                      floor: float = 0.0) -> float:
    """Max relative gap between the finite-difference s' and -reach(s) + d.

    Only samples whose one-step reaching move h K e^{s^2} stays inside |s| are
    compared, so the projected steps near s = 0 are skipped.
    """
    _require_full_log(traj)
    h = traj.step
    s = traj.s[:-1]
    ds = np.diff(traj.s, axis=0) / h
    reach = reaching_term(s, params)
    ideal = traj.d[:-1] - reach
    gain = np.abs(reach)
    mask = (np.abs(s) > np.maximum(floor, h * gain)) & (np.abs(ideal) > 0)
    if not np.any(mask):
        return 0.0
    rel = np.abs(ds[mask] - ideal[mask]) / np.abs(ideal[mask])
    return float(rel.max())


class QuadratureCheck(NamedTuple):
    logged: NDArray[np.float64]
    recomputed: NDArray[np.float64]
    deviation: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tolerance


def sliding_quadrature(traj: Trajectory, params: ControllerParams) -> QuadratureCheck:
    """Recompute the sliding integral by trapezoidal quadrature of the logged z.

    The tolerance is 10 h t_end max|integrand|.
    """
    alpha1 = np.asarray(params.sliding.alpha1, dtype=float)
    logged = (traj.s - traj.z) / alpha1
    rates = np.asarray(integrand(traj.z, params.sliding), dtype=float)
    recomputed = cumulative_trapezoid(rates, traj.t, axis=0, initial=0.0)
    deviation = float(np.max(np.abs(logged - recomputed)))
    span = float(traj.t[-1] - traj.t[0])
    tolerance = 10.0 * traj.step * span * float(np.max(np.abs(rates)))
    return QuadratureCheck(logged, recomputed, deviation, tolerance)


def trajectory_error_bound(models: Sequence[GPModel], traj: Trajectory,
                           cfg: ErrorBoundConfig) -> NDArray[np.float64]:
    """Per-channel max of chi * sigma(x) over the logged states: the delta_f_bar estimate."""
    return max_error_bound(models, traj.x, cfg)
