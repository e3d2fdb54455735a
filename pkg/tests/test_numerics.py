"""Tests for the numeric primitives: signed power, clamped exponential, fixed-step integrators."""

from __future__ import annotations

import math

import numpy as np
import pytest

# ── Signed power ─────────────────────────────────────────────────────────────────

def test_signed_power_examples():
    from fxtsmc.core.numerics import signed_power
    assert signed_power(-2.0, 2.0) == -4.0
    assert signed_power(0.0, 0.0) == 0.0  # sign(0) = 0
    assert signed_power(4.0, 0.5) == 2.0


def test_signed_power_alpha_zero_is_sign():
    from fxtsmc.core.numerics import signed_power
    assert signed_power(-3.5, 0.0) == -1.0
    assert signed_power(0.2, 0.0) == 1.0


def test_signed_power_odd_and_monotone():
    from fxtsmc.core.numerics import signed_power
    xs = np.linspace(-5, 5, 201)
    for alpha in (0.3, 0.8, 1.0, 2.5):
        ys = signed_power(xs, alpha)
        assert np.array_equal(signed_power(-xs, alpha), -ys)
        assert np.all(np.diff(ys) >= 0)


def test_signed_power_rejects_negative_alpha():
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.core.numerics import signed_power
    with pytest.raises(ParameterError):
        signed_power(1.0, -0.5)


def test_signed_power_returns_python_float_for_scalars():
    from fxtsmc.core.numerics import signed_power
    assert isinstance(signed_power(2.0, 0.8), float)


# ── Clamped exponential ──────────────────────────────────────────────────────────

def test_safe_exp_examples():
    from fxtsmc.core.numerics import E_MAX, safe_exp
    assert safe_exp(0.0) == 1.0
    assert safe_exp(1.0) == pytest.approx(math.e)
    assert safe_exp(1000.0) == math.exp(E_MAX)


def test_safe_exp_always_finite():
    from fxtsmc.core.numerics import safe_exp
    values = safe_exp(np.array([-1e308, -1.0, 0.0, 49.9, 50.0, 51.0, 1e308]))
    assert np.all(np.isfinite(values))


def test_sign_or_layer():
    from fxtsmc.core.numerics import sign_or_layer
    assert sign_or_layer(-0.3, 0.0) == -1.0
    assert sign_or_layer(0.0, 0.0) == 0.0
    assert sign_or_layer(0.1, 0.5) == pytest.approx(math.tanh(0.2))


# ── Step config ──────────────────────────────────────────────────────────────────

def test_step_config_grid():
    from fxtsmc.core.numerics import StepConfig
    cfg = StepConfig(step_size=0.1, method="euler", t_end=1.0)
    assert cfg.n_steps == 10
    assert cfg.time(3) == pytest.approx(0.3)


def test_step_config_accepts_rounding_noise():
    from fxtsmc.core.numerics import StepConfig
    assert StepConfig(step_size=0.1, t_end=0.3).n_steps == 3
    assert StepConfig(step_size=1e-5, t_end=1.0).n_steps == 100_000


@pytest.mark.parametrize("kwargs", [
    {"step_size": 0.0},
    {"step_size": -1e-3},
    {"step_size": 0.1, "t_end": 1.05},
    {"step_size": 0.1, "t_end": -1.0},
    {"method": "midpoint"},
])
def test_step_config_rejects(kwargs):
    from fxtsmc.core.errors import ParameterError
    from fxtsmc.core.numerics import StepConfig
    with pytest.raises(ParameterError):
        StepConfig(**kwargs)


# ── Integrators ──────────────────────────────────────────────────────────────────

def test_integrate_step_constant_state():
    from fxtsmc.core.numerics import StepConfig, integrate_step
    for method in ("euler", "rk4"):
        cfg = StepConfig(step_size=0.1, method=method, t_end=1.0)
        out = integrate_step(np.array([3.0]), lambda t, x: np.zeros(1), 0.0, cfg)
        assert out[0] == 3.0


def test_integrate_step_euler_unit_slope():
    from fxtsmc.core.numerics import StepConfig, integrate_step
    cfg = StepConfig(step_size=0.1, method="euler", t_end=1.0)
    out = integrate_step(np.array([0.0]), lambda t, x: np.ones(1), 0.0, cfg)
    assert out[0] == pytest.approx(0.1)


def test_integrate_step_rk4_exponential():
    from fxtsmc.core.numerics import StepConfig, integrate_step
    cfg = StepConfig(step_size=0.1, method="rk4", t_end=1.0)
    out = integrate_step(np.array([1.0]), lambda t, x: x, 0.0, cfg)
    assert abs(out[0] - math.exp(0.1)) < 1e-7


def test_rk4_over_unit_interval_matches_e():
    from fxtsmc.core.numerics import StepConfig, integrate_step
    cfg = StepConfig(step_size=1e-3, method="rk4", t_end=1.0)
    x = np.array([1.0])
    for k in range(cfg.n_steps):
        x = integrate_step(x, lambda t, s: s, cfg.time(k), cfg)
    assert abs(x[0] - math.e) < 1e-9


def test_integrate_step_non_finite_derivative():
    from fxtsmc.core.errors import SimulationDivergedError
    from fxtsmc.core.numerics import StepConfig, integrate_step
    cfg = StepConfig(step_size=0.1, method="euler", t_end=1.0)
    with pytest.raises(SimulationDivergedError) as exc:
        integrate_step(np.zeros(2), lambda t, x: np.array([0.0, np.nan]), 0.5, cfg)
    assert exc.value.channel == 1
    assert exc.value.t == 0.5
