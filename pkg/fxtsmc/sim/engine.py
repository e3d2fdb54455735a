"""Fixed-step closed-loop simulation of plant, sliding integral and controller."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from fxtsmc.control.laws import ControllerParams, LawOutput, gp_law, known_law
from fxtsmc.control.sliding import SlidingState, advance
from fxtsmc.core.errors import ChannelMismatchError, ConfigError, SimulationDivergedError
from fxtsmc.core.log import get_logger
from fxtsmc.core.numerics import StepConfig, integrate_step
from fxtsmc.gp.regression import GPModel
from fxtsmc.system.models import SystemModel, eval_dynamics
from fxtsmc.system.reference import ReferenceSignal, constant_reference

log = get_logger(__name__)

Mode = Literal["known", "gp", "open-loop"]
MODES = ("known", "gp", "open-loop")
DEFAULT_THRESHOLD = 1e-2

Array = NDArray[np.float64]


@dataclass(frozen=True)
class Scenario:
    system: SystemModel
    x0: Array
    step: StepConfig = field(default_factory=StepConfig)
    mode: Mode = "known"
    params: Optional[ControllerParams] = None
    reference: Optional[ReferenceSignal] = None
    gp_models: Optional[Sequence[GPModel]] = None
    threshold: float = DEFAULT_THRESHOLD
    log_every: int = 1

    def __post_init__(self) -> None:
        n = self.system.n
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if x0.shape != (n,):
            raise ChannelMismatchError(n, int(x0.size))
        object.__setattr__(self, "x0", x0)
        if self.reference is None:
            object.__setattr__(self, "reference", constant_reference(0.0, n))
        elif self.reference.n != n:
            raise ChannelMismatchError(n, self.reference.n)
        if self.mode not in MODES:
            raise ConfigError(f"controller mode must be one of {MODES}, got {self.mode!r}")
        if self.mode != "open-loop":
            if self.params is None:
                raise ConfigError(f"mode '{self.mode}' needs controller params")
            if self.params.n not in (1, n):
                raise ChannelMismatchError(n, self.params.n)
            if self.params.law != self.mode:
                raise ConfigError(f"controller law '{self.params.law}' does not match "
                                  f"mode '{self.mode}'")
        if self.mode == "gp":
            if not self.gp_models:
                raise ConfigError("mode 'gp' needs fitted GP models")
            if len(self.gp_models) != n:
                raise ChannelMismatchError(n, len(self.gp_models))
        if not self.threshold > 0:
            raise ConfigError(f"settling threshold must be > 0, got {self.threshold}")
        if self.log_every < 1:
            raise ConfigError(f"log_every must be >= 1, got {self.log_every}")

    def with_x0(self, x0: Sequence[float] | Array) -> "Scenario":
        return replace(self, x0=np.asarray(x0, dtype=float))


@dataclass
class Trajectory:
    """Uniformly sampled closed-loop log; per-channel arrays have shape (samples, n)."""

    t: Array
    x: Array
    xd: Array
    z: Array
    s: Array
    u: Array
    d: Array
    fhat: Optional[Array]
    step: float
    method: str
    mode: str

    @property
    def V(self) -> Array:
        return 0.5 * np.square(self.s)

    @property
    def n(self) -> int:
        return self.x.shape[1]

    def __len__(self) -> int:
        return len(self.t)


def _evaluate(scenario: Scenario, x: Array, t: float, sstate: SlidingState) -> LawOutput:
    n = scenario.system.n
    h = scenario.step.step_size
    if scenario.mode == "known":
        return known_law(x, t, scenario.system, scenario.reference, scenario.params, sstate, h)
    if scenario.mode == "gp":
        return gp_law(x, t, scenario.gp_models, scenario.system.gain, scenario.reference,
                      scenario.params, sstate, h)
    z = x - np.asarray(scenario.reference.value(t), dtype=float)
    zeros = np.zeros(n)
    return LawOutput(u=zeros, z=z, s=z.copy(), rate=zeros, reach=zeros, drift=zeros)


def simulate(scenario: Scenario) -> Trajectory:
    """Run the fixed-step loop from t = 0 to the grid end.

    Each step evaluates the controller at (x_k, t_k), holds u over the step, advances
    the plant with the configured method and the sliding integral by explicit Euler
    with the same step.
    """
    cfg = scenario.step
    n = scenario.system.n
    steps = cfg.n_steps
    stride = scenario.log_every
    samples = steps // stride + 1
    closed = scenario.mode != "open-loop"
    log.debug("simulate %s mode=%s h=%g steps=%d", scenario.system.name, scenario.mode,
              cfg.step_size, steps)
    if scenario.system.perturbation_bounds is not None:
        log.info("asserting |d(t)| <= %s on every sample",
                 scenario.system.perturbation_bounds.tolist())

    out = {key: np.empty((samples, n)) for key in ("x", "xd", "z", "s", "u", "d")}
    fhat = np.empty((samples, n)) if scenario.mode == "gp" else None
    t_log = np.empty(samples)

    x = scenario.x0.copy()
    sstate = SlidingState.zero(n)
    row = 0
    for k in range(steps + 1):
        t = cfg.time(k)
        law = _evaluate(scenario, x, t, sstate)
        if k % stride == 0:
            t_log[row] = t
            out["x"][row] = x
            out["xd"][row] = scenario.reference.value(t)
            out["z"][row] = law.z
            out["s"][row] = law.s
            out["u"][row] = law.u
            out["d"][row] = scenario.system.perturbation_at(t)
            if fhat is not None:
                fhat[row] = law.drift
            row += 1
        if k == steps:
            break
        u = law.u
        x = integrate_step(x, lambda tau, xs: eval_dynamics(scenario.system, xs, u, tau), t, cfg)
        bad = np.flatnonzero(~np.isfinite(x))
        if bad.size:
            raise SimulationDivergedError(t + cfg.step_size, int(bad[0]))
        if closed:
            sstate = advance(sstate, law.z, scenario.params.sliding, cfg.step_size, law.rate)

    log.debug("simulate done: final |z|max=%.3g", float(np.max(np.abs(out["z"][-1]))))
    return Trajectory(
        t=t_log, x=out["x"], xd=out["xd"], z=out["z"], s=out["s"], u=out["u"], d=out["d"],
        fhat=fhat, step=cfg.step_size, method=cfg.method, mode=scenario.mode,
    )
