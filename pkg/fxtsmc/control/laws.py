"""Fixed-time integral sliding-mode control laws.

    u_i = -g_i(x)^-1 ( F_i(x) + alpha1 exp(z_i^2)|z_i|^(p/q)sign(z_i) - xd_i'(t)
                       + kappa alpha2 exp(s_i^2) sign(s_i) )

F is the true drift for the known-model law and the GP posterior mean for the
learned law. kappa is sqrt(pi)/2 or 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable, Literal, NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from fxtsmc.core.errors import GainTooSmallError, ParameterError, SingularGainError
from fxtsmc.core.numerics import ArrayLike, safe_exp, sign_or_layer
from fxtsmc.control.sliding import (
    SlidingParams,
    SlidingState,
    integrand,
    limited_integrand,
    sliding_value,
)
from fxtsmc.system.models import SystemModel
from fxtsmc.system.reference import ReferenceSignal

if TYPE_CHECKING:
    from fxtsmc.gp.regression import GPModel

Vector = NDArray[np.float64]
Law = Literal["known", "gp"]
Discretization = Literal["implicit", "explicit"]

SQRT_PI_2 = math.sqrt(math.pi) / 2
TWO_OVER_SQRT_PI = 2 / math.sqrt(math.pi)


@dataclass(frozen=True)
class ControllerParams:
    """Gains for every channel; array fields carry one entry per channel.

    `include_sqrt_pi_factor=None` resolves to True for the known-model law and
    False for the GP law.
    """

    sliding: SlidingParams
    alpha2: ArrayLike
    d_bar: ArrayLike = 0.0
    include_sqrt_pi_factor: Optional[bool] = None
    sign_boundary_layer: ArrayLike = 0.0
    law: Law = "known"
    discretization: Discretization = "implicit"

    def __post_init__(self) -> None:
        if self.law not in ("known", "gp"):
            raise ParameterError(f"law must be 'known' or 'gp', got {self.law!r}")
        if self.discretization not in ("implicit", "explicit"):
            raise ParameterError(f"discretization must be 'implicit' or 'explicit', "
                                 f"got {self.discretization!r}")
        if self.include_sqrt_pi_factor is None:
            object.__setattr__(self, "include_sqrt_pi_factor", self.law == "known")
        try:
            alpha2, d_bar = np.broadcast_arrays(
                np.atleast_1d(np.asarray(self.alpha2, dtype=float)),
                np.asarray(self.d_bar, dtype=float),
            )
        except ValueError as e:
            raise ParameterError(
                f"alpha2 and d_bar lengths differ: {self.alpha2}, {self.d_bar}"
            ) from e
        eps = np.asarray(self.sign_boundary_layer, dtype=float)
        if np.any(eps < 0):
            raise ParameterError(f"boundary layer must be >= 0, got {self.sign_boundary_layer}")
        for i, (a2, db) in enumerate(zip(alpha2, d_bar)):
            ch = i if alpha2.size > 1 else None
            if not a2 > 0:
                raise ParameterError(f"alpha2 must be > 0, got {a2}", ch)
            if db < 0:
                raise ParameterError(f"d_bar must be >= 0, got {db}", ch)
            if self.law == "known" and not a2 > TWO_OVER_SQRT_PI * db:
                raise GainTooSmallError(
                    f"alpha2={a2:g} > (2/sqrt(pi))*d_bar={TWO_OVER_SQRT_PI * db:.6g}", ch
                )

    @property
    def kappa(self) -> float:
        return SQRT_PI_2 if self.include_sqrt_pi_factor else 1.0

    @property
    def n(self) -> int:
        sizes = [np.size(self.alpha2), np.size(self.d_bar), np.size(self.sliding.alpha1),
                 np.size(self.sliding.p), np.size(self.sliding.q),
                 np.size(self.sign_boundary_layer)]
        return max(sizes)

    def channel(self, i: int) -> "ControllerParams":
        def pick(values: ArrayLike) -> float:
            flat = np.ravel(np.asarray(values, dtype=float))
            return float(flat[i if flat.size > 1 else 0])

        return replace(
            self,
            sliding=self.sliding.channel(i),
            alpha2=pick(self.alpha2),
            d_bar=pick(self.d_bar),
            sign_boundary_layer=pick(self.sign_boundary_layer),
        )

    def with_law(self, law: Law) -> "ControllerParams":
        return replace(self, law=law, include_sqrt_pi_factor=None)

    @classmethod
    def from_channels(cls, channels: Sequence["ControllerParams"]) -> "ControllerParams":
        head = channels[0]
        return cls(
            sliding=SlidingParams.stack([c.sliding for c in channels]),
            alpha2=np.array([float(c.alpha2) for c in channels]),
            d_bar=np.array([float(c.d_bar) for c in channels]),
            include_sqrt_pi_factor=head.include_sqrt_pi_factor,
            sign_boundary_layer=np.array([float(c.sign_boundary_layer) for c in channels]),
            law=head.law,
            discretization=head.discretization,
        )


class LawOutput(NamedTuple):
    u: Vector
    z: Vector
    s: Vector
    rate: Vector
    reach: Vector
    drift: Vector


def per_channel(n: int, values: ArrayLike, name: str) -> Vector:
    """Broadcast a scalar or per-channel setting to n channels."""
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{name} must be a number or list of numbers, "
                             f"got {values!r}") from e
    try:
        return np.broadcast_to(arr, (n,)).astype(float)
    except ValueError as e:
        raise ParameterError(f"{name} has {arr.size} entries for {n} channels") from e


def check_gp_gains(params: ControllerParams, delta_f_bar: ArrayLike) -> None:
    """Raise unless alpha2 > d_bar + delta_f_bar on every channel.

    Scalar gains apply to every channel of delta_f_bar.
    """
    n = max(params.n, int(np.size(delta_f_bar)))
    alpha2 = per_channel(n, params.alpha2, "alpha2")
    d_bar = per_channel(n, params.d_bar, "d_bar")
    dfb = per_channel(n, delta_f_bar, "delta_f_bar")
    for i in range(n):
        if not alpha2[i] > d_bar[i] + dfb[i]:
            raise GainTooSmallError(
                f"alpha2={alpha2[i]:g} > d_bar + delta_f_bar={d_bar[i] + dfb[i]:.6g}",
                i if n > 1 else None,
            )


def reaching_term(
    s: ArrayLike,
    params: ControllerParams,
    step: Optional[float] = None,
) -> Vector:
    """kappa * alpha2 * exp(s^2) * sigma(s).

    sigma is sign(s) or tanh(s/eps). Under implicit discretisation with a step and
    no boundary layer, sigma = clip(s / (h K), -1, 1) so one step lands on s = 0
    instead of crossing it.
    """
    s = np.asarray(s, dtype=float)
    gain = params.kappa * np.asarray(params.alpha2, dtype=float) * safe_exp(np.square(s))
    eps = np.asarray(params.sign_boundary_layer, dtype=float)
    if step is not None and params.discretization == "implicit":
        projected = np.clip(s / (step * gain), -1.0, 1.0)
        sigma = np.where(eps > 0, sign_or_layer(s, np.where(eps > 0, eps, 1.0)), projected)
    else:
        sigma = sign_or_layer(s, eps)
    return np.asarray(gain * sigma, dtype=float)


def _law(
    x: Vector,
    t: float,
    drift: Vector,
    gain: Vector,
    ref: ReferenceSignal,
    params: ControllerParams,
    sstate: SlidingState,
    step: Optional[float],
) -> LawOutput:
    z = np.asarray(x, dtype=float) - np.asarray(ref.value(t), dtype=float)
    s = np.asarray(sliding_value(z, sstate, params.sliding), dtype=float)
    if step is not None and params.discretization == "implicit":
        rate = np.asarray(limited_integrand(z, params.sliding, step), dtype=float)
    else:
        rate = np.asarray(integrand(z, params.sliding), dtype=float)
    reach = reaching_term(s, params, step)
    alpha1 = np.asarray(params.sliding.alpha1, dtype=float)
    equivalent = drift + alpha1 * rate - np.asarray(ref.derivative(t), dtype=float)
    u = -(equivalent + reach) / gain
    return LawOutput(u=u, z=z, s=np.atleast_1d(s), rate=np.atleast_1d(rate),
                     reach=np.atleast_1d(reach), drift=drift)


def known_law(
    x: Vector,
    t: float,
    model: SystemModel,
    ref: ReferenceSignal,
    params: ControllerParams,
    sstate: SlidingState,
    step: Optional[float] = None,
) -> LawOutput:
    x = np.asarray(x, dtype=float)
    return _law(x, t, model.drift_at(x), model.gain_at(x, t), ref, params, sstate, step)


def gp_law(
    x: Vector,
    t: float,
    gp: Sequence["GPModel"],
    gain: Callable[[Vector], Vector],
    ref: ReferenceSignal,
    params: ControllerParams,
    sstate: SlidingState,
    step: Optional[float] = None,
) -> LawOutput:
    from fxtsmc.gp.regression import estimate_drift

    x = np.asarray(x, dtype=float)
    g = np.asarray(gain(x), dtype=float)
    zero = np.flatnonzero(g == 0.0)
    if zero.size:
        raise SingularGainError(int(zero[0]), t)
    return _law(x, t, estimate_drift(gp, x), g, ref, params, sstate, step)


def control_known(
    x: Vector,
    t: float,
    model: SystemModel,
    ref: ReferenceSignal,
    params: ControllerParams,
    sstate: SlidingState,
    step: Optional[float] = None,
) -> Vector:
    """Known-model law; `step` enables the implicit limits of the chosen discretisation."""
    return known_law(x, t, model, ref, params, sstate, step).u


def control_gp(
    x: Vector,
    t: float,
    gp: Sequence["GPModel"],
    gain: Callable[[Vector], Vector],
    ref: ReferenceSignal,
    params: ControllerParams,
    sstate: SlidingState,
    step: Optional[float] = None,
) -> Vector:
    """Learned law: the drift is replaced by the per-channel GP posterior means."""
    return gp_law(x, t, gp, gain, ref, params, sstate, step).u
