"""Tests for Monte-Carlo batches over random initial states."""

from __future__ import annotations

import numpy as np
import pytest


def _template(t_end=1.0):
    from fxtsmc.control.laws import ControllerParams
    from fxtsmc.control.sliding import SlidingParams
    from fxtsmc.core.numerics import StepConfig
    from fxtsmc.sim.engine import Scenario
    from fxtsmc.system.benchmarks import make_pmsm
    params = ControllerParams(sliding=SlidingParams(alpha1=6.0, p=8, q=10), alpha2=4.0, d_bar=1.0)
    return Scenario(system=make_pmsm(), x0=np.zeros(3), step=StepConfig(1e-4, "euler", t_end),
                    params=params, threshold=0.02)


def _exp_template(t_end=1.0):
    from fxtsmc.core.numerics import StepConfig
    from fxtsmc.sim.engine import Scenario
    from fxtsmc.system.benchmarks import make_exp_reaching_plant
    return Scenario(system=make_exp_reaching_plant(1.0), x0=np.zeros(1),
                    step=StepConfig(1e-4, "euler", t_end), mode="open-loop", threshold=1e-2)


# ── Initial states ───────────────────────────────────────────────────────────────

def test_sample_initial_states_seeded_and_in_box():
    from fxtsmc.sim.montecarlo import sample_initial_states
    box = [(-1.0, 1.0), (0.0, 2.0), (5.0, 5.5)]
    a = sample_initial_states(box, 40, seed=7)
    b = sample_initial_states(box, 40, seed=7)
    c = sample_initial_states(box, 40, seed=8)
    assert a.shape == (40, 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    lo = np.array([lo for lo, _ in box])
    hi = np.array([hi for _, hi in box])
    assert np.all((a >= lo) & (a <= hi))


def test_sample_initial_states_prefix_stable():
    from fxtsmc.sim.montecarlo import sample_initial_states
    few = sample_initial_states([(-1.0, 1.0)], 3, seed=1)
    many = sample_initial_states([(-1.0, 1.0)], 10, seed=1)
    assert np.array_equal(few, many[:3])


def test_sample_initial_states_rejects_bad_box():
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.sim.montecarlo import sample_initial_states
    with pytest.raises(ParameterError):
        sample_initial_states([(1.0, -1.0)], 3, seed=0)


# ── Batches ──────────────────────────────────────────────────────────────────────

def test_single_run_batch_matches_direct_simulation():
    from fxtsmc.sim.engine import simulate
    from fxtsmc.sim.montecarlo import run_monte_carlo, sample_initial_states
    from fxtsmc.sim.settling import summarize
    template = _exp_template()
    result = run_monte_carlo(template, [(-2.0, 2.0)], runs=1, seed=3, bound=1.0)
    x0 = sample_initial_states([(-2.0, 2.0)], 1, seed=3)[0]
    direct = summarize(simulate(template.with_x0(x0)), template.threshold, bound=1.0)
    assert result.records[0].summary.to_dict() == direct.to_dict()


def test_workers_do_not_change_results():
    from fxtsmc.sim.montecarlo import run_monte_carlo
    serial = run_monte_carlo(_exp_template(), [(-2.0, 2.0)], runs=4, seed=5, workers=1)
    pooled = run_monte_carlo(_exp_template(), [(-2.0, 2.0)], runs=4, seed=5, workers=3)
    assert [r.to_dict() for r in serial.records] == [r.to_dict() for r in pooled.records]
    assert [r.index for r in pooled.records] == [0, 1, 2, 3]


def test_exp_reaching_batch_within_bound():
    from fxtsmc.sim.montecarlo import run_monte_carlo
    result = run_monte_carlo(_exp_template(1.0), [(-2.0, 2.0)], runs=5, seed=0, bound=1.0)
    agg = result.aggregate
    assert agg.runs == 5
    assert agg.failures == 0
    assert agg.satisfied_fraction == 1.0
    assert agg.max_settling <= 1.0


def test_pmsm_batch_respects_bound():
    from fxtsmc.control.bounds import bound_report
    from fxtsmc.sim.montecarlo import run_monte_carlo
    template = _template(t_end=2.0)
    report = bound_report(template.params)
    result = run_monte_carlo(template, [(-10.0, 10.0)] * 3, runs=3, seed=7, bounds=report)
    agg = result.aggregate
    assert agg.bound == report.T_max
    assert agg.satisfied_fraction == 1.0
    assert agg.lyapunov_violations == 0
    assert all(r.violations == [0, 0, 0] for r in result.records)


def test_failed_runs_are_recorded():
    from fxtsmc.core.numerics import StepConfig
    from fxtsmc.sim.engine import Scenario
    from fxtsmc.sim.montecarlo import run_monte_carlo
    from fxtsmc.system.models import SystemModel, unit_gain, zero_perturbation
    plant = SystemModel(n=1, drift=lambda x: 1e200 * x, gain=unit_gain(1),
                        perturbation=zero_perturbation(1))
    template = Scenario(system=plant, x0=np.ones(1), step=StepConfig(0.1, "euler", 1.0),
                        mode="open-loop")
    result = run_monte_carlo(template, [(1.0, 2.0)], runs=2, seed=0)
    assert result.aggregate.failures == 2
    assert result.aggregate.satisfied_fraction == 0.0
    assert all(r.error and r.summary is None for r in result.records)


def test_on_done_called_per_run():
    from fxtsmc.sim.montecarlo import run_monte_carlo
    seen = []
    run_monte_carlo(_exp_template(0.1), [(-1.0, 1.0)], runs=3, seed=0, on_done=seen.append)
    assert [r.index for r in seen] == [0, 1, 2]


@pytest.mark.parametrize("kwargs", [{"runs": 0}, {"workers": 0}])
def test_run_monte_carlo_rejects(kwargs):
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.sim.montecarlo import run_monte_carlo
    args = {"runs": 2, "seed": 0, **kwargs}
    with pytest.raises(ParameterError):
        run_monte_carlo(_exp_template(0.1), [(-1.0, 1.0)], **args)


def test_run_monte_carlo_box_dimension():
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.sim.montecarlo import run_monte_carlo
    with pytest.raises(ParameterError):
        run_monte_carlo(_exp_template(0.1), [(-1.0, 1.0)] * 2, runs=2, seed=0)


def test_gp_law_batch_settles_within_gp_bound():
    from fxtsmc.control.bounds import bound_report
    from fxtsmc.control.laws import ControllerParams, check_gp_gains
    from fxtsmc.control.sliding import SlidingParams
    from fxtsmc.core.numerics import StepConfig
    from fxtsmc.gp.dataset import generate_training_data
    from fxtsmc.gp.kernels import KernelConfig
    from fxtsmc.gp.regression import ErrorBoundConfig, fit_channels, max_error_bound
    from fxtsmc.sim.engine import Scenario
    from fxtsmc.sim.montecarlo import run_monte_carlo, sample_initial_states
    from fxtsmc.system.benchmarks import make_pmsm

    plant = make_pmsm()
    box = [(-2.0, 2.0)] * 3
    models = fit_channels(generate_training_data(plant, 50, box, 0.01, 11), KernelConfig())
    points = np.vstack([sample_initial_states(box, 256, 11), models[0].inputs])
    delta_f_bar = max_error_bound(models, points, ErrorBoundConfig(chi=2.0))
    params = ControllerParams(sliding=SlidingParams(alpha1=6.0, p=8, q=10), alpha2=25.0,
                              d_bar=1.0, law="gp")
    check_gp_gains(params, delta_f_bar)
    report = bound_report(params, delta_f_bar)
    assert len(report.T_s_i) == 3

    template = Scenario(system=plant, x0=np.zeros(3), step=StepConfig(1e-4, "euler", 1.2),
                        mode="gp", params=params, gp_models=models, threshold=0.05)
    result = run_monte_carlo(template, box, runs=20, seed=11, workers=4, bounds=report)
    agg = result.aggregate
    assert agg.failures == 0
    assert agg.settled == 20
    assert agg.satisfied_fraction == 1.0
    assert agg.max_settling <= report.T_max


def test_settling_bound_holds_across_growing_boxes():
    from fxtsmc.control.bounds import bound_report
    from fxtsmc.sim.montecarlo import run_monte_carlo
    template = _template(t_end=1.2)
    report = bound_report(template.params)
    worst = []
    for half_width in (1.0, 10.0, 100.0):
        result = run_monte_carlo(template, [(-half_width, half_width)] * 3, runs=30, seed=0,
                                 workers=4, bounds=report)
        agg = result.aggregate
        assert agg.failures == 0
        assert agg.satisfied_fraction == 1.0
        assert agg.lyapunov_violations == 0
        assert agg.max_settling <= 3.7544
        worst.append(agg.max_settling)
    # the worst case saturates instead of growing with the box
    assert max(worst) <= 1.25 * worst[0]
    assert worst[2] <= 1.10 * worst[1]
