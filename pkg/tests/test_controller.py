"""Tests for the known-model and GP control laws."""

from __future__ import annotations

import math

import numpy as np
import pytest


def _scalar_plant():
    from fxtsmc.system.models import SystemModel, unit_gain, zero_perturbation
    return SystemModel(n=1, drift=lambda x: np.zeros(1), gain=unit_gain(1),
                       perturbation=zero_perturbation(1))


def _params(law="known", alpha2=4.0, d_bar=0.0, **kwargs):
    from fxtsmc.control.laws import ControllerParams
    from fxtsmc.control.sliding import SlidingParams
    return ControllerParams(sliding=SlidingParams(alpha1=6.0, p=8, q=10), alpha2=alpha2,
                            d_bar=d_bar, law=law, **kwargs)


def _ref(value=0.0):
    from fxtsmc.system.reference import constant_reference
    return constant_reference(value, 1)


def _zero_state():
    from fxtsmc.control.sliding import SlidingState
    return SlidingState.zero(1)


def _gp_models(inputs, targets, noise_std=0.0):
    from fxtsmc.gp.dataset import GPDataset
    from fxtsmc.gp.kernels import KernelConfig
    from fxtsmc.gp.regression import gp_fit
    return [gp_fit(GPDataset(inputs=inputs, targets=targets, noise_std=noise_std),
                   KernelConfig())]


# ── Known-model law ──────────────────────────────────────────────────────────────

def test_known_law_zero_at_rest():
    from fxtsmc.control.laws import control_known
    u = control_known(np.zeros(1), 0.0, _scalar_plant(), _ref(), _params(), _zero_state())
    assert u[0] == 0.0


def test_known_law_scalar_example():
    from fxtsmc.control.laws import control_known
    u = control_known(np.ones(1), 0.0, _scalar_plant(), _ref(), _params(), _zero_state())
    assert u[0] == pytest.approx(-math.e * (6.0 + 2.0 * math.sqrt(math.pi)))
    assert u[0] == pytest.approx(-25.945749, abs=1e-5)


def test_known_law_scales_with_inverse_gain():
    from fxtsmc.control.laws import control_known
    from fxtsmc.system.models import with_gain_scale
    plant = with_gain_scale(_scalar_plant(), 2.0)
    u = control_known(np.ones(1), 0.0, plant, _ref(), _params(), _zero_state())
    assert u[0] == pytest.approx(-12.972875, abs=1e-5)


def test_known_law_tracks_reference_derivative():
    from fxtsmc.control.laws import control_known
    from fxtsmc.system.reference import sinusoidal_reference
    ref = sinusoidal_reference(1, amplitude=1.0, omega=2.0)
    # x = x_d(0) = 0 and x_d'(0) = 2 so the law only feeds the derivative forward
    u = control_known(np.zeros(1), 0.0, _scalar_plant(), ref, _params(), _zero_state())
    assert u[0] == pytest.approx(2.0)


def test_known_law_gain_condition():
    from fxtsmc.core.errors import GainTooSmallError
    with pytest.raises(GainTooSmallError) as exc:
        _params(alpha2=1.0, d_bar=1.0)
    assert "gain condition" in str(exc.value)
    _params(alpha2=1.2, d_bar=1.0)


def test_sqrt_pi_factor_defaults():
    assert _params().include_sqrt_pi_factor is True
    assert _params(law="gp").include_sqrt_pi_factor is False
    assert _params(law="gp").kappa == 1.0
    assert _params().kappa == pytest.approx(math.sqrt(math.pi) / 2)


def test_params_reject_bad_values():
    from fxtsmc.core.errors import ParameterError
    with pytest.raises(ParameterError):
        _params(alpha2=0.0)
    with pytest.raises(ParameterError):
        _params(d_bar=-1.0)
    with pytest.raises(ParameterError):
        _params(sign_boundary_layer=-0.1)
    with pytest.raises(ParameterError):
        _params(discretization="trapezoid")


# ── Reaching term ────────────────────────────────────────────────────────────────

def test_reaching_term_continuous():
    from fxtsmc.control.laws import reaching_term
    params = _params()
    expected = 2 * math.sqrt(math.pi) * math.e
    assert reaching_term(np.array([1.0]), params)[0] == pytest.approx(expected)
    assert reaching_term(np.array([0.0]), params)[0] == 0.0


def test_reaching_term_implicit_lands_on_zero():
    from fxtsmc.control.laws import reaching_term
    params = _params()
    s, h = 1e-6, 1e-4
    assert reaching_term(np.array([s]), params, h)[0] == pytest.approx(s / h)


def test_reaching_term_explicit_ignores_step():
    from fxtsmc.control.laws import reaching_term
    params = _params(discretization="explicit")
    assert reaching_term(np.array([1e-6]), params, 1e-4)[0] == pytest.approx(
        2 * math.sqrt(math.pi) * math.exp(1e-12))


def test_reaching_term_boundary_layer():
    from fxtsmc.control.laws import reaching_term
    params = _params(sign_boundary_layer=0.5)
    out = reaching_term(np.array([0.1]), params, 1e-4)[0]
    assert out == pytest.approx(2 * math.sqrt(math.pi) * math.exp(0.01) * math.tanh(0.2))


# ── GP law ───────────────────────────────────────────────────────────────────────

def test_gp_law_with_zero_estimate_matches_known_law():
    from fxtsmc.control.laws import control_gp, control_known
    models = _gp_models(np.array([[0.0], [1.0]]), np.zeros(2))
    params = _params(law="gp", include_sqrt_pi_factor=True)
    known = _params()
    for x in (-0.7, 0.0, 0.3, 1.5):
        xs = np.array([x])
        u_gp = control_gp(xs, 0.0, models, lambda v: np.ones(1), _ref(), params, _zero_state())
        u_known = control_known(xs, 0.0, _scalar_plant(), _ref(), known, _zero_state())
        assert u_gp[0] == pytest.approx(u_known[0])


def test_gp_law_cancels_estimate_at_rest():
    from fxtsmc.control.laws import control_gp
    models = _gp_models(np.array([[0.0]]), np.array([3.5]))
    u = control_gp(np.zeros(1), 0.0, models, lambda v: np.ones(1), _ref(), _params(law="gp"),
                   _zero_state())
    assert u[0] == pytest.approx(-3.5)


def test_gp_law_default_kappa_example():
    from fxtsmc.control.laws import control_gp
    models = _gp_models(np.array([[5.0], [6.0]]), np.zeros(2))
    u = control_gp(np.ones(1), 0.0, models, lambda v: np.ones(1), _ref(), _params(law="gp"),
                   _zero_state())
    assert u[0] == pytest.approx(-10.0 * math.e)
    assert u[0] == pytest.approx(-27.1828, abs=1e-4)


def test_gp_law_singular_gain():
    from fxtsmc.control.laws import control_gp
    from fxtsmc.core.errors import SingularGainError
    models = _gp_models(np.array([[0.0]]), np.zeros(1))
    with pytest.raises(SingularGainError):
        control_gp(np.ones(1), 0.0, models, lambda v: np.zeros(1), _ref(), _params(law="gp"),
                   _zero_state())


def test_gp_gain_check():
    from fxtsmc.control.laws import check_gp_gains
    from fxtsmc.core.errors import GainTooSmallError
    params = _params(law="gp", d_bar=1.0)
    check_gp_gains(params, 2.5)
    with pytest.raises(GainTooSmallError):
        check_gp_gains(params, 3.5)


def test_gp_gain_check_scalar_gains_cover_every_channel():
    from fxtsmc.control.laws import check_gp_gains
    from fxtsmc.core.errors import GainTooSmallError
    params = _params(law="gp", d_bar=1.0)
    check_gp_gains(params, [0.5, 1.0, 2.5])
    with pytest.raises(GainTooSmallError) as exc:
        check_gp_gains(params, [0.5, 3.5, 0.5])
    assert exc.value.channel == 1


def test_gp_gain_check_rejects_length_mismatch():
    from fxtsmc.control.laws import check_gp_gains
    from fxtsmc.core.errors import ParameterError
    params = _params(law="gp", alpha2=np.array([4.0, 4.0, 4.0]), d_bar=1.0)
    with pytest.raises(ParameterError):
        check_gp_gains(params, [0.5, 0.5])
    with pytest.raises(ParameterError):
        check_gp_gains(params, "wide")


def test_gp_params_skip_known_gain_check():
    params = _params(law="gp", alpha2=1.0, d_bar=1.0)
    assert params.law == "gp"


# ── Per-channel parameters ───────────────────────────────────────────────────────

def test_params_channel_split_and_stack():
    from fxtsmc.control.laws import ControllerParams
    from fxtsmc.control.sliding import SlidingParams
    params = ControllerParams(sliding=SlidingParams(alpha1=6.0, p=8, q=10),
                              alpha2=np.array([4.0, 5.0, 6.0]), d_bar=1.0)
    assert params.n == 3
    assert params.channel(2).alpha2 == 6.0
    stacked = ControllerParams.from_channels([params.channel(i) for i in range(3)])
    assert np.array_equal(stacked.alpha2, [4.0, 5.0, 6.0])
    assert np.array_equal(stacked.sliding.p, [8, 8, 8])
