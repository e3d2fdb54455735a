"""Settling-time bounds for the closed loop and its building blocks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence

import numpy as np

from fxtsmc.core.errors import GainTooSmallError, ParameterError
from fxtsmc.control.laws import TWO_OVER_SQRT_PI, ControllerParams, per_channel

BoundMode = Literal["known", "lyapunov-sum", "sqrt2"]
BOUND_MODES = ("known", "lyapunov-sum", "sqrt2")
GP_MODES = ("lyapunov-sum", "sqrt2")


def two_power_lyapunov_bound(c1: float, c2: float, h1: float, h2: float) -> float:
    """T <= 1/(c1(1-h1)) + 1/(c2(h2-1)) for V' <= -c1 V^h1 - c2 V^h2."""
    if not (c1 > 0 and c2 > 0):
        raise ParameterError(f"need c1 > 0 and c2 > 0, got c1={c1}, c2={c2}")
    if not (0 < h1 < 1 < h2):
        raise ParameterError(f"need 0 < h1 < 1 < h2, got h1={h1}, h2={h2}")
    return 1.0 / (c1 * (1.0 - h1)) + 1.0 / (c2 * (h2 - 1.0))


def exp_reaching_bound(alpha: float, d_bar: float, channel: Optional[int] = None) -> float:
    """T <= 1/(alpha - (2/sqrt(pi)) d_bar) for x' = -alpha (sqrt(pi)/2) e^{x^2} sign(x) + d."""
    if d_bar < 0:
        raise ParameterError(f"d_bar must be >= 0, got {d_bar}", channel)
    margin = alpha - TWO_OVER_SQRT_PI * d_bar
    if not margin > 0:
        raise GainTooSmallError(
            f"alpha2={alpha:g} > (2/sqrt(pi))*d_bar={TWO_OVER_SQRT_PI * d_bar:.6g}", channel
        )
    return 1.0 / margin


def tracking_error_bound(alpha1: float, p: int, q: int, channel: Optional[int] = None) -> float:
    """T_z <= (2/alpha1) / (1 - (p/q)^2), the sum of the |z| >= 1 and |z| < 1 phases."""
    if not alpha1 > 0:
        raise ParameterError(f"alpha1 must be > 0, got {alpha1}", channel)
    if q < 1 or p < 0:
        raise ParameterError(f"need p >= 0 and q >= 1, got p={p}, q={q}", channel)
    ratio = p / q
    if ratio >= 1:
        raise ParameterError(f"p/q must be < 1, got {p}/{q}", channel)
    return (2.0 / alpha1) / (1.0 - ratio * ratio)


def exp_lyapunov_bound(A: float) -> float:
    """T <= -(2 sqrt 2 + 1)/(2A) for V = z^2/2 with V' <= |z| A e^{z^2}, A < 0."""
    if not A < 0:
        raise ParameterError(f"A must be < 0, got {A}")
    return -(2.0 * math.sqrt(2.0) + 1.0) / (2.0 * A)


def gp_reaching_bound(
    alpha2: float,
    d_bar: float,
    delta_f_bar: float = 0.0,
    mode: BoundMode = "lyapunov-sum",
    channel: Optional[int] = None,
) -> float:
    """Reaching-time bound for the learned law, margin m = alpha2 - d_bar - delta_f_bar.

    'lyapunov-sum' gives (2 sqrt 2 + 1)/(2m); 'sqrt2' gives 2 sqrt 2 / (2m).
    """
    if mode not in GP_MODES:
        raise ParameterError(f"GP bound mode must be one of {GP_MODES}, got {mode!r}", channel)
    if d_bar < 0 or delta_f_bar < 0:
        raise ParameterError(
            f"d_bar and delta_f_bar must be >= 0, got {d_bar}, {delta_f_bar}", channel
        )
    margin = alpha2 - d_bar - delta_f_bar
    if not margin > 0:
        raise GainTooSmallError(
            f"alpha2={alpha2:g} > d_bar + delta_f_bar={d_bar + delta_f_bar:.6g}", channel
        )
    if mode == "sqrt2":
        return 2.0 * math.sqrt(2.0) / (2.0 * margin)
    return exp_lyapunov_bound(-margin)


@dataclass(frozen=True)
class BoundReport:
    mode: BoundMode
    T_z_i: List[float] = field(default_factory=list)
    T_s_i: List[float] = field(default_factory=list)

    @property
    def T_z(self) -> float:
        return max(self.T_z_i)

    @property
    def T_s(self) -> float:
        return max(self.T_s_i)

    @property
    def T_max(self) -> float:
        return self.T_s + self.T_z

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "T_z_i": list(self.T_z_i),
            "T_s_i": list(self.T_s_i),
            "T_z": self.T_z,
            "T_s": self.T_s,
            "T_max": self.T_max,
        }


def bound_report(
    params: ControllerParams,
    delta_f_bars: Optional[Sequence[float] | float] = None,
    mode: Optional[BoundMode] = None,
) -> BoundReport:
    """Per-channel and aggregate settling-time bounds.

    Mode defaults to 'known' for the known-model law and 'lyapunov-sum' for the GP law.
    """
    if mode is None:
        mode = "known" if params.law == "known" else "lyapunov-sum"
    if mode not in BOUND_MODES:
        raise ParameterError(f"bound mode must be one of {BOUND_MODES}, got {mode!r}")
    raw = 0.0 if delta_f_bars is None else delta_f_bars
    n = max(params.n, int(np.size(raw)))
    dfb = per_channel(n, raw, "delta_f_bar")
    t_z: List[float] = []
    t_s: List[float] = []
    for i in range(n):
        ch = params.channel(i)
        tag = i if n > 1 else None
        t_z.append(tracking_error_bound(float(ch.sliding.alpha1), int(ch.sliding.p),
                                        int(ch.sliding.q), tag))
        if mode == "known":
            t_s.append(exp_reaching_bound(float(ch.alpha2), float(ch.d_bar), tag))
        else:
            t_s.append(gp_reaching_bound(float(ch.alpha2), float(ch.d_bar), float(dfb[i]),
                                         mode, tag))
    return BoundReport(mode=mode, T_z_i=t_z, T_s_i=t_s)
