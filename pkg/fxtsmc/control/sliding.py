"""Integral sliding variable s = z + alpha1 * int_0^t exp(z^2) |z|^(p/q) sign(z) dtau.

Every function works per channel on floats or on NumPy vectors, with
`SlidingParams` fields holding either scalars or one entry per channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from fxtsmc.core.errors import AccumulationError, ParameterError
from fxtsmc.core.numerics import ArrayLike, safe_exp, signed_power

IntLike = Union[int, NDArray[np.int64]]


@dataclass(frozen=True)
class SlidingParams:
    """alpha1 > 0 and integer exponent pair with 0 <= p/q < 1."""

    alpha1: ArrayLike
    p: IntLike
    q: IntLike

    def __post_init__(self) -> None:
        alpha1 = np.asarray(self.alpha1, dtype=float)
        p = np.asarray(self.p)
        q = np.asarray(self.q)
        if np.any(~np.isfinite(alpha1)) or np.any(alpha1 <= 0):
            raise ParameterError(f"alpha1 must be > 0, got {self.alpha1}")
        if not (np.issubdtype(p.dtype, np.integer) and np.issubdtype(q.dtype, np.integer)):
            raise ParameterError(f"exponents must be integer pairs, got p={self.p}, q={self.q}")
        if np.any(q < 1) or np.any(p < 0):
            raise ParameterError(f"need p >= 0 and q >= 1, got p={self.p}, q={self.q}")
        if np.any(p >= q):
            raise ParameterError(f"p/q must be < 1, got p={self.p}, q={self.q}")

    @property
    def ratio(self) -> ArrayLike:
        r = np.asarray(self.p, dtype=float) / np.asarray(self.q, dtype=float)
        return float(r) if r.ndim == 0 else r

    def channel(self, i: int) -> "SlidingParams":
        def pick(values: np.ndarray) -> np.generic:
            flat = np.ravel(values)
            return flat[i if flat.size > 1 else 0]

        return SlidingParams(
            alpha1=float(pick(np.asarray(self.alpha1, dtype=float))),
            p=int(pick(np.asarray(self.p))),
            q=int(pick(np.asarray(self.q))),
        )

    @classmethod
    def stack(cls, channels: Sequence["SlidingParams"]) -> "SlidingParams":
        return cls(
            alpha1=np.array([float(c.alpha1) for c in channels]),
            p=np.array([int(c.p) for c in channels], dtype=np.int64),
            q=np.array([int(c.q) for c in channels], dtype=np.int64),
        )


@dataclass(frozen=True)
class SlidingState:
    integral: NDArray[np.float64] = field(default_factory=lambda: np.zeros(1))
    t: float = 0.0

    @classmethod
    def zero(cls, n: int) -> "SlidingState":
        return cls(integral=np.zeros(n), t=0.0)


def integrand(z: ArrayLike, params: SlidingParams) -> ArrayLike:
    return safe_exp(np.square(z)) * signed_power(z, params.ratio)


def limited_integrand(z: ArrayLike, params: SlidingParams, h: float) -> ArrayLike:
    """Integrand clipped so one step of alpha1 * h * rate cannot carry z past zero."""
    rate = np.asarray(integrand(z, params), dtype=float)
    cap = np.abs(z) / (h * np.asarray(params.alpha1, dtype=float))
    limited = np.sign(rate) * np.minimum(np.abs(rate), cap)
    return float(limited) if limited.ndim == 0 else limited


def advance(
    state: SlidingState,
    z: ArrayLike,
    params: SlidingParams,
    h: float,
    rate: Optional[ArrayLike] = None,
) -> SlidingState:
    """One explicit-Euler accumulation step.

    `rate` overrides integrand(z) so the controller and the accumulator can share
    one (possibly limited) value.
    """
    if not h > 0:
        raise ParameterError(f"step must be > 0, got {h}")
    if rate is None:
        rate = integrand(z, params)
    integral = np.asarray(state.integral, dtype=float) + h * np.asarray(rate, dtype=float)
    t = state.t + h
    bad = np.flatnonzero(~np.isfinite(np.atleast_1d(integral)))
    if bad.size:
        raise AccumulationError(t, int(bad[0]))
    return SlidingState(integral=np.atleast_1d(integral), t=t)


def sliding_value(z: ArrayLike, state: SlidingState, params: SlidingParams) -> ArrayLike:
    integral = state.integral
    if np.ndim(z) == 0 and np.size(integral) == 1:
        return float(z) + float(params.alpha1) * float(np.ravel(integral)[0])
    return np.asarray(z, dtype=float) + np.asarray(params.alpha1, dtype=float) * integral
