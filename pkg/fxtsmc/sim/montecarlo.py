"""Monte-Carlo batches over random initial states."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from fxtsmc.control.bounds import BoundReport
from fxtsmc.core.errors import FxtError, ParameterError
from fxtsmc.core.log import get_logger
from fxtsmc.sim.checks import lyapunov_violations, max_gain_along
from fxtsmc.sim.engine import Scenario, simulate
from fxtsmc.sim.settling import RunSummary, summarize

log = get_logger(__name__)

Box = Sequence[Tuple[float, float]]


@dataclass
class RunRecord:
    index: int
    x0: List[float]
    summary: Optional[RunSummary] = None
    violations: Optional[List[int]] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        out = {"run": self.index, "x0": list(self.x0), "error": self.error,
               "lyapunov_violations": self.violations}
        if self.summary is not None:
            out.update(self.summary.to_dict())
        return out


@dataclass
class Aggregate:
    runs: int
    failures: int
    settled: int
    satisfied: int
    max_settling: Optional[float]
    max_chatter: Optional[float]
    max_u: Optional[float]
    lyapunov_violations: int
    bound: Optional[float] = None

    @property
    def satisfied_fraction(self) -> float:
        return self.satisfied / self.runs

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "failures": self.failures,
            "settled": self.settled,
            "satisfied": self.satisfied,
            "satisfied_fraction": self.satisfied_fraction,
            "max_settling": self.max_settling,
            "max_chatter": self.max_chatter,
            "max_u": self.max_u,
            "lyapunov_violations": self.lyapunov_violations,
            "bound": self.bound,
        }


@dataclass
class MonteCarloResult:
    records: List[RunRecord] = field(default_factory=list)
    aggregate: Optional[Aggregate] = None


def sample_initial_states(ic_box: Box, runs: int, seed: int) -> NDArray[np.float64]:
    """One uniform draw per run, each from its own child stream of SeedSequence(seed)."""
    box = np.asarray(ic_box, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2 or np.any(box[:, 1] < box[:, 0]):
        raise ParameterError(f"ic_box needs [low, high] pairs with low <= high, got {ic_box}")
    children = np.random.SeedSequence(seed).spawn(runs)
    out = np.empty((runs, len(box)))
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        out[i] = box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random(len(box))
    return out


def _one_run(index: int, template: Scenario, x0: NDArray[np.float64],
             bounds: Optional[BoundReport], bound: Optional[float],
             max_gain: Optional[float]) -> RunRecord:
    record = RunRecord(index=index, x0=[float(v) for v in x0])
    try:
        traj = simulate(template.with_x0(x0))
        record.summary = summarize(traj, template.threshold, bounds, bound)
        if template.log_every == 1 and len(traj) > 1:
            gain = max_gain if max_gain is not None else max_gain_along(template.system, traj)
            record.violations = [int(v) for v in lyapunov_violations(traj, gain)]
    except FxtError as e:
        log.warning("run %d failed from x0=%s: %s", index, record.x0, e)
        record.error = f"{type(e).__name__}: {e}"
    return record


def aggregate(records: Sequence[RunRecord], bound: Optional[float]) -> Aggregate:
    done = [r.summary for r in records if r.summary is not None]
    settled = [s for s in done if s.settled]
    times = [s.settling_time for s in settled if s.settling_time is not None]
    chatter = [c for s in settled for c in s.chatter if np.isfinite(c)]
    return Aggregate(
        runs=len(records),
        failures=sum(1 for r in records if not r.ok),
        settled=len(settled),
        satisfied=sum(1 for s in done if all(s.bound_satisfied)),
        max_settling=max(times) if times else None,
        max_chatter=max(chatter) if chatter else None,
        max_u=max(s.max_u for s in done) if done else None,
        lyapunov_violations=sum(sum(r.violations) for r in records if r.violations),
        bound=bound,
    )


def run_monte_carlo(
    template: Scenario,
    ic_box: Box,
    runs: int,
    seed: int,
    workers: int = 1,
    bounds: Optional[BoundReport] = None,
    bound: Optional[float] = None,
    max_gain: Optional[float] = None,
    on_done: Optional[Callable[[RunRecord], None]] = None,
) -> MonteCarloResult:
    """Simulate `runs` copies of `template` from seeded-uniform initial states.

    A failing run becomes a record with `error` set; the batch carries on. Records
    are ordered by run index whatever the completion order.
    Without `max_gain` the chatter floor uses max|g| along each run's own trajectory.
    """
    if runs < 1:
        raise ParameterError(f"runs must be >= 1, got {runs}")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    if bound is None and bounds is not None:
        bound = bounds.T_max
    starts = sample_initial_states(ic_box, runs, seed)
    if starts.shape[1] != template.system.n:
        raise ParameterError(f"ic_box has {starts.shape[1]} intervals for a "
                             f"{template.system.n}-state system")

    records: List[Optional[RunRecord]] = [None] * runs
    if workers == 1:
        for i in range(runs):
            records[i] = _one_run(i, template, starts[i], bounds, bound, max_gain)
            if on_done:
                on_done(records[i])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_one_run, i, template, starts[i], bounds, bound, max_gain)
                       for i in range(runs)]
            for i, fut in enumerate(futures):
                records[i] = fut.result()
                if on_done:
                    on_done(records[i])

    done = [r for r in records if r is not None]
    return MonteCarloResult(records=done, aggregate=aggregate(done, bound))
