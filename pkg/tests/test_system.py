"""Tests for plant models, the built-in benchmarks and reference signals."""

from __future__ import annotations

import math

import numpy as np
import pytest


def _plant(drift=None, gain=None, perturbation=None, n=1, bounds=None):
    from fxtsmc.system.models import SystemModel, unit_gain, zero_perturbation
    return SystemModel(
        n=n,
        drift=drift or (lambda x: np.zeros(n)),
        gain=gain or unit_gain(n),
        perturbation=perturbation or zero_perturbation(n),
        perturbation_bounds=bounds,
    )


# ── eval_dynamics ────────────────────────────────────────────────────────────────

def test_eval_dynamics_zero_plant():
    from fxtsmc.system.models import eval_dynamics
    out = eval_dynamics(_plant(n=2), np.array([3.0, -1.0]), np.zeros(2), 0.7)
    assert np.array_equal(out, np.zeros(2))


def test_eval_dynamics_pmsm_hand_value():
    from fxtsmc.system.benchmarks import make_pmsm
    from fxtsmc.system.models import eval_dynamics
    out = eval_dynamics(make_pmsm(), np.ones(3), np.zeros(3), 0.0)
    assert out == pytest.approx([0.0, 24.0, 0.0])


def test_eval_dynamics_linear_in_u():
    from fxtsmc.system.benchmarks import make_pmsm
    from fxtsmc.system.models import eval_dynamics, with_gain_scale
    model = with_gain_scale(make_pmsm(), 3.0)
    x = np.array([0.4, -1.2, 2.0])
    u = np.array([1.0, 2.0, -0.5])
    v = np.array([-0.3, 0.1, 4.0])
    diff = eval_dynamics(model, x, u + v, 1.3) - eval_dynamics(model, x, u, 1.3)
    assert diff == pytest.approx(3.0 * v)


def test_eval_dynamics_singular_gain():
    from fxtsmc.core.errors import SingularGainError
    from fxtsmc.system.models import eval_dynamics
    model = _plant(n=2, gain=lambda x: np.array([1.0, 0.0]))
    with pytest.raises(SingularGainError) as exc:
        eval_dynamics(model, np.zeros(2), np.zeros(2), 0.2)
    assert exc.value.channel == 1


def test_eval_dynamics_non_finite_drift():
    from fxtsmc.core.errors import EvaluationError
    from fxtsmc.system.models import eval_dynamics
    model = _plant(drift=lambda x: np.array([np.inf]))
    with pytest.raises(EvaluationError):
        eval_dynamics(model, np.zeros(1), np.zeros(1), 0.0)


def test_eval_dynamics_dimension_mismatch():
    from fxtsmc.core.errors import ChannelMismatchError
    from fxtsmc.system.models import eval_dynamics
    with pytest.raises(ChannelMismatchError):
        eval_dynamics(_plant(n=2), np.zeros(3), np.zeros(2), 0.0)


def test_declared_perturbation_bound_is_asserted():
    from fxtsmc.core.errors import PerturbationBoundError
    model = _plant(perturbation=lambda t: np.array([2.0 * math.sin(t)]), bounds=np.ones(1))
    assert model.perturbation_at(0.1)[0] == pytest.approx(2.0 * math.sin(0.1))
    with pytest.raises(PerturbationBoundError):
        model.perturbation_at(math.pi / 2)


# ── Benchmarks ───────────────────────────────────────────────────────────────────

def test_pmsm_definition():
    from fxtsmc.system.benchmarks import make_pmsm
    model = make_pmsm()
    assert model.n == 3
    assert np.array_equal(model.drift_at(np.zeros(3)), np.zeros(3))
    assert model.perturbation_at(0.0) == pytest.approx([0.0, 1.0, 0.0])
    assert np.array_equal(model.perturbation_bounds, np.ones(3))


def test_pmsm_perturbation_within_bounds_on_grid():
    from fxtsmc.system.benchmarks import make_pmsm
    model = make_pmsm()
    for t in np.arange(0.0, 10.0, 1e-3):
        assert np.all(np.abs(model.perturbation_at(float(t))) <= 1.0)


def test_exp_reaching_plant():
    from fxtsmc.system.benchmarks import make_exp_reaching_plant
    from fxtsmc.system.models import eval_dynamics
    model = make_exp_reaching_plant(1.0)
    assert eval_dynamics(model, np.zeros(1), np.zeros(1), 0.0)[0] == 0.0
    assert model.drift_at(np.ones(1))[0] == pytest.approx(-2.409015, abs=1e-5)
    for x in (0.3, 1.0, 2.2):
        assert model.drift_at(np.array([-x]))[0] == -model.drift_at(np.array([x]))[0]


def test_exp_reaching_plant_rejects_bad_alpha():
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.system.benchmarks import make_exp_reaching_plant
    with pytest.raises(ParameterError):
        make_exp_reaching_plant(0.0)


def test_make_builtin_and_plugin():
    from fxtsmc.core.errors import ConfigError
    from fxtsmc.system.benchmarks import load_plugin, make_builtin
    assert make_builtin("pmsm").name == "pmsm"
    assert make_builtin("exp-reaching", alpha=2.0).n == 1
    assert load_plugin("fxtsmc.system.benchmarks:make_pmsm").n == 3
    with pytest.raises(ConfigError):
        make_builtin("lorenz")
    with pytest.raises(ConfigError):
        load_plugin("fxtsmc.system.benchmarks")
    with pytest.raises(ConfigError):
        load_plugin("fxtsmc.nowhere:make")


# ── References ───────────────────────────────────────────────────────────────────

def test_constant_reference():
    from fxtsmc.system.reference import constant_reference
    ref = constant_reference([1.0, -2.0], 2)
    assert np.array_equal(ref.value(3.0), [1.0, -2.0])
    assert np.array_equal(ref.derivative(3.0), [0.0, 0.0])


def test_sinusoidal_reference():
    from fxtsmc.system.reference import sinusoidal_reference
    ref = sinusoidal_reference(1, amplitude=2.0, omega=3.0, offset=0.5)
    assert ref.value(0.4)[0] == pytest.approx(0.5 + 2.0 * math.sin(1.2))
    assert ref.derivative(0.4)[0] == pytest.approx(6.0 * math.cos(1.2))
