"""Stationary kernels with unit prior variance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist, pdist, squareform

from fxtsmc.core.errors import ParameterError

KernelFamily = Literal["exponential", "squared-exponential"]
FAMILIES = ("exponential", "squared-exponential")


@dataclass(frozen=True)
class KernelConfig:
    """exponential: exp(-l |x - x'|); squared-exponential: exp(-|x - x'|^2 / (2 l^2))."""

    family: KernelFamily = "exponential"
    length_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ParameterError(f"kernel family must be one of {FAMILIES}, got {self.family!r}")
        if not self.length_scale > 0:
            raise ParameterError(f"length_scale must be > 0, got {self.length_scale}")

    def from_distance(self, r: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.family == "exponential":
            return np.exp(-self.length_scale * r)
        return np.exp(-np.square(r) / (2.0 * self.length_scale ** 2))

    def to_dict(self) -> dict:
        return {"family": self.family, "length_scale": self.length_scale}


def as_rows(x: NDArray[np.float64] | float) -> NDArray[np.float64]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return arr.reshape(1, -1)
    return arr


def kernel_eval(cfg: KernelConfig, x: NDArray[np.float64] | float,
                x_prime: NDArray[np.float64] | float) -> float:
    r = np.linalg.norm(as_rows(x)[0] - as_rows(x_prime)[0])
    return float(cfg.from_distance(np.asarray(r)))


def gram(cfg: KernelConfig, inputs: NDArray[np.float64]) -> NDArray[np.float64]:
    """K_jk = k(x_j, x_k), one kernel evaluation per unordered pair."""
    rows = as_rows(inputs)
    # squareform fills both triangles from the same condensed entry
    K = squareform(cfg.from_distance(pdist(rows)))
    np.fill_diagonal(K, 1.0)
    return K


def cross(cfg: KernelConfig, queries: NDArray[np.float64],
          inputs: NDArray[np.float64]) -> NDArray[np.float64]:
    """Matrix of k(query_a, input_j), shape (n_queries, N)."""
    return cfg.from_distance(cdist(as_rows(queries), as_rows(inputs)))
