"""Settling-time measurement and per-run summaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Literal, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.special import erf

from fxtsmc.control.bounds import BoundReport
from fxtsmc.core.errors import ParameterError
from fxtsmc.sim.engine import Trajectory

Signal = Literal["error", "sliding"]


def settling_times(t: NDArray[np.float64], signal: NDArray[np.float64],
                   threshold: float) -> List[Optional[float]]:
    """Earliest grid time after which |signal| stays below threshold, per column.

    None marks a channel that is still above the threshold at the last sample.
    """
    if not threshold > 0:
        raise ParameterError(f"threshold must be > 0, got {threshold}")
    sig = np.asarray(signal, dtype=float)
    if sig.ndim == 1:
        sig = sig.reshape(-1, 1)
    out: List[Optional[float]] = []
    for col in np.abs(sig).T:
        above = np.flatnonzero(col >= threshold)
        if above.size == 0:
            out.append(float(t[0]))
        elif above[-1] == len(col) - 1:
            out.append(None)
        else:
            out.append(float(t[above[-1] + 1]))
    return out


def measure_settling(traj: Trajectory, which: Signal = "error",
                     threshold: float = 1e-2) -> List[Optional[float]]:
    if which not in ("error", "sliding"):
        raise ParameterError(f"which must be 'error' or 'sliding', got {which!r}")
    signal = traj.z if which == "error" else traj.s
    return settling_times(traj.t, signal, threshold)


@dataclass
class RunSummary:
    settle_error: List[Optional[float]]
    settle_sliding: List[Optional[float]]
    threshold: float
    max_u: float
    chatter: List[float]
    bounds: Optional[BoundReport] = None
    bound: Optional[float] = None
    x0: List[float] = field(default_factory=list)

    @property
    def settled(self) -> bool:
        return all(v is not None for v in self.settle_error)

    @property
    def settling_time(self) -> Optional[float]:
        """Slowest channel's error settling time, None if any channel never settled."""
        if not self.settled:
            return None
        return max(v for v in self.settle_error if v is not None)

    @property
    def bound_satisfied(self) -> List[bool]:
        if self.bound is None:
            return [v is not None for v in self.settle_error]
        return [v is not None and v <= self.bound for v in self.settle_error]

    def to_dict(self) -> dict:
        return {
            "x0": list(self.x0),
            "threshold": self.threshold,
            "settle_error": list(self.settle_error),
            "settle_sliding": list(self.settle_sliding),
            "settling_time": self.settling_time,
            "bound": self.bound,
            "bound_satisfied": self.bound_satisfied,
            "bounds": self.bounds.to_dict() if self.bounds is not None else None,
            "max_u": self.max_u,
            "chatter": list(self.chatter),
        }


def summarize(
    traj: Trajectory,
    threshold: float,
    bounds: Optional[BoundReport] = None,
    bound: Optional[float] = None,
) -> RunSummary:
    """Measure a finished run. `bound` defaults to bounds.T_max when a report is given."""
    settle_z = measure_settling(traj, "error", threshold)
    settle_s = measure_settling(traj, "sliding", threshold)
    chatter = []
    for i, ts in enumerate(settle_z):
        if ts is None:
            chatter.append(float("nan"))
            continue
        tail = traj.s[traj.t >= ts, i]
        chatter.append(float(np.max(np.abs(tail))) if tail.size else 0.0)
    if bound is None and bounds is not None:
        bound = bounds.T_max
    return RunSummary(
        settle_error=settle_z,
        settle_sliding=settle_s,
        threshold=threshold,
        max_u=float(np.max(np.abs(traj.u))) if traj.u.size else 0.0,
        chatter=chatter,
        bounds=bounds,
        bound=bound,
        x0=[float(v) for v in traj.x[0]],
    )


def exp_reaching_oracle(x0: float, alpha: float) -> float:
    """Exact settling time erf(|x0|)/alpha of x' = -alpha (sqrt(pi)/2) e^{x^2} sign(x).

    y = erf(x) turns the plant into y' = -alpha sign(y).
    """
    if not alpha > 0:
        raise ParameterError(f"alpha must be > 0, got {alpha}")
    return float(erf(abs(x0))) / alpha
