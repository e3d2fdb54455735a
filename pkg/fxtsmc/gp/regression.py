"""Exact GP regression: one scalar zero-mean GP per drift channel, sharing inputs.

    mean(x)     = k(x)^T (K + sigma_F^2 I)^-1 y
    variance(x) = k(x, x) - k(x)^T (K + sigma_F^2 I)^-1 k(x)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve, solve_triangular
from scipy.spatial.distance import pdist, squareform

from fxtsmc.core.errors import (
    ChannelMismatchError,
    IllConditionedDataError,
    ParameterError,
    UnfitModelError,
)
from fxtsmc.core.log import get_logger
from fxtsmc.gp.dataset import GPDataset
from fxtsmc.gp.kernels import KernelConfig, as_rows, cross, gram

log = get_logger(__name__)

Vector = NDArray[np.float64]

JITTER_START = 1e-10
JITTER_MAX = 1e-6
DEFAULT_CHI = 2.0


@dataclass(frozen=True)
class ErrorBoundConfig:
    """Per-channel constant chi in |f_i - mean_i| <= chi_i sigma_i, held with
    probability 1 - confidence."""

    chi: float | Tuple[float, ...] = DEFAULT_CHI
    confidence: Optional[float] = None

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.chi, dtype=float) <= 0):
            raise ParameterError(f"chi must be > 0, got {self.chi}")

    def for_channel(self, i: int) -> float:
        flat = np.ravel(np.asarray(self.chi, dtype=float))
        return float(flat[i if flat.size > 1 else 0])


@dataclass(frozen=True)
class GPModel:
    dataset: GPDataset
    kernel: KernelConfig
    factor: Tuple[NDArray[np.float64], bool]
    weights: Vector
    jitter: float = 0.0

    @property
    def inputs(self) -> NDArray[np.float64]:
        return self.dataset.inputs


def _closest_pair(inputs: NDArray[np.float64]) -> Tuple[Tuple[int, int], float]:
    D = squareform(pdist(as_rows(inputs)))
    np.fill_diagonal(D, np.inf)
    i, j = np.unravel_index(int(np.argmin(D)), D.shape)
    return (int(min(i, j)), int(max(i, j))), float(D[i, j])


def gp_fit(dataset: GPDataset, cfg: KernelConfig) -> GPModel:
    """Factorise K + sigma_F^2 I by Cholesky and solve for the weight vector.

    The plain factorisation (zero jitter) is always tried first, so noise-free data is only
    regularised when it has to be. On failure the diagonal jitter climbs from 1e-10 by x10
    up to 1e-6 and the value used is kept on the model.
    """
    inputs = dataset.inputs
    N = len(inputs)
    noise_var = dataset.noise_std ** 2
    if N >= 2 and dataset.noise_std == 0:
        pair, dist = _closest_pair(inputs)
        if dist == 0.0:
            raise IllConditionedDataError("duplicate noise-free inputs make K singular", pair)

    K = gram(cfg, inputs)
    ladder: List[float] = [0.0]
    jitter = JITTER_START
    while jitter <= JITTER_MAX * (1 + 1e-9):
        ladder.append(jitter)
        jitter *= 10

    for jitter in ladder:
        A = K + (noise_var + jitter) * np.eye(N)
        try:
            factor = cho_factor(A, lower=True, check_finite=True)
        except LinAlgError:
            log.warning("Cholesky failed with jitter %.0e; escalating", jitter)
            continue
        if jitter > 0:
            log.warning("Gram matrix needed jitter %.0e to factorise", jitter)
        weights = cho_solve(factor, dataset.targets)
        return GPModel(dataset=dataset, kernel=cfg, factor=factor, weights=weights,
                       jitter=jitter)

    pair, dist = _closest_pair(inputs) if N >= 2 else ((0, 0), 0.0)
    raise IllConditionedDataError(
        f"Gram matrix not positive definite after jitter {JITTER_MAX:.0e}; "
        f"closest inputs are {dist:.3g} apart", pair
    )


def _check_fit(model: GPModel) -> None:
    if not isinstance(model, GPModel) or model.weights is None:
        raise UnfitModelError("GP model has not been fitted")


def gp_predict(model: GPModel, x: NDArray[np.float64]) -> Tuple[Vector, Vector]:
    """Posterior mean and variance at each row of x (floored at 0)."""
    _check_fit(model)
    k_star = cross(model.kernel, x, model.inputs)
    mean = k_star @ model.weights
    L, lower = model.factor
    v = solve_triangular(L, k_star.T, lower=lower, check_finite=False)
    # both kernel families have k(x, x) = 1
    var = 1.0 - np.sum(v * v, axis=0)
    return mean, np.maximum(var, 0.0)


def gp_mean(model: GPModel, x: NDArray[np.float64] | float) -> float:
    _check_fit(model)
    return float(cross(model.kernel, x, model.inputs)[0] @ model.weights)


def gp_variance(model: GPModel, x: NDArray[np.float64] | float) -> float:
    return float(gp_predict(model, as_rows(x)[:1])[1][0])


def gp_error_bound(model: GPModel, x: NDArray[np.float64] | float,
                   cfg: ErrorBoundConfig, channel: int = 0) -> float:
    return cfg.for_channel(channel) * float(np.sqrt(gp_variance(model, x)))


def estimate_drift(models: Sequence[GPModel], x: NDArray[np.float64]) -> Vector:
    """Vector of posterior means, one per channel model."""
    x = np.asarray(x, dtype=float)
    if len(models) != x.size:
        raise ChannelMismatchError(x.size, len(models))
    out = np.empty(len(models))
    k_star = None
    for i, m in enumerate(models):
        _check_fit(m)
        shared = i > 0 and m.inputs is models[0].inputs and m.kernel == models[0].kernel
        if not shared:
            k_star = cross(m.kernel, x, m.inputs)[0]
        out[i] = k_star @ m.weights
    return out


def fit_channels(datasets: Sequence[GPDataset], cfg: KernelConfig) -> List[GPModel]:
    return [gp_fit(ds, cfg) for ds in datasets]


def max_error_bound(models: Sequence[GPModel], points: NDArray[np.float64],
                    cfg: ErrorBoundConfig) -> Vector:
    """Per-channel max of chi * sigma(x) over the rows of `points`."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(models))
    for i, m in enumerate(models):
        _, var = gp_predict(m, points)
        out[i] = cfg.for_channel(i) * float(np.sqrt(var.max()))
    return out


def calibrate_chi(
    models: Sequence[GPModel],
    drift: Callable[[Vector], Vector],
    points: NDArray[np.float64],
    floor: float = 1e-12,
) -> ErrorBoundConfig:
    """Smallest per-channel chi with |f_i - mean_i| <= chi_i sigma_i on every check point."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    truth = np.array([np.asarray(drift(p), dtype=float) for p in points])
    chis = []
    for i, m in enumerate(models):
        mean, var = gp_predict(m, points)
        err = np.abs(truth[:, i] - mean)
        sigma = np.sqrt(var)
        resolved = sigma > floor
        ratio = np.where(resolved, err / np.where(resolved, sigma, 1.0), 0.0)
        chis.append(max(float(ratio.max()), floor))
    return ErrorBoundConfig(chi=tuple(chis))


def drift_rms(models: Sequence[GPModel], drift: Callable[[Vector], Vector],
              states: NDArray[np.float64]) -> float:
    """Root-mean-square of f(x) - mean(x) over states and channels."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    truth = np.array([np.asarray(drift(s), dtype=float) for s in states])
    est = np.column_stack([gp_predict(m, states)[0] for m in models])
    return float(np.sqrt(np.mean(np.square(truth - est))))


def training_residuals(models: Sequence[GPModel]) -> Vector:
    """Per-channel max |mean(x_j) - y_j| over the model's own training rows."""
    out = np.empty(len(models))
    for i, m in enumerate(models):
        mean, _ = gp_predict(m, m.inputs)
        out[i] = float(np.max(np.abs(mean - m.dataset.targets)))
    return out
