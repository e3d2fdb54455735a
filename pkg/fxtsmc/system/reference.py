"""Reference trajectories x_d(t) and their derivatives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from fxtsmc.system.models import Vector, as_vector


@dataclass(frozen=True)
class ReferenceSignal:
    n: int
    value: Callable[[float], Vector]
    derivative: Callable[[float], Vector]
    kind: str = "custom"


def constant_reference(values: float | Sequence[float], n: int) -> ReferenceSignal:
    level = as_vector(values, n, "reference value")
    zeros = np.zeros(n)
    return ReferenceSignal(n=n, value=lambda t: level, derivative=lambda t: zeros,
                           kind="constant")


def sinusoidal_reference(
    n: int,
    amplitude: float | Sequence[float],
    omega: float | Sequence[float],
    phase: float | Sequence[float] = 0.0,
    offset: float | Sequence[float] = 0.0,
) -> ReferenceSignal:
    """x_d = offset + amplitude * sin(omega t + phase)."""
    a = as_vector(amplitude, n, "amplitude")
    w = as_vector(omega, n, "omega")
    ph = as_vector(phase, n, "phase")
    c = as_vector(offset, n, "offset")
    return ReferenceSignal(
        n=n,
        value=lambda t: c + a * np.sin(w * t + ph),
        derivative=lambda t: a * w * np.cos(w * t + ph),
        kind="sine",
    )
