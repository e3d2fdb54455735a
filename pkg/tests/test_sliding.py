"""Tests for the integral sliding variable and its accumulator."""

from __future__ import annotations

import math

import numpy as np
import pytest


def _params(alpha1=6.0, p=8, q=10):
    from fxtsmc.control.sliding import SlidingParams
    return SlidingParams(alpha1=alpha1, p=p, q=q)


# ── Integrand ────────────────────────────────────────────────────────────────────

def test_integrand_values():
    from fxtsmc.control.sliding import integrand
    params = _params()
    assert integrand(0.0, params) == 0.0
    assert integrand(1.0, params) == pytest.approx(math.e)
    assert integrand(-1.0, params) == pytest.approx(-math.e)


def test_limited_integrand_never_crosses_zero():
    from fxtsmc.control.sliding import limited_integrand
    params = _params()
    h = 1e-4
    for z in (-10.0, -0.5, 1e-3, 3.0, 25.0):
        rate = limited_integrand(z, params, h)
        z_next = z - params.alpha1 * h * rate
        assert z_next * z >= 0 or abs(z_next) < 1e-12


# ── Accumulator ──────────────────────────────────────────────────────────────────

def test_advance_one_step():
    from fxtsmc.control.sliding import SlidingState, advance
    state = advance(SlidingState.zero(1), np.array([1.0]), _params(), 0.1)
    assert state.integral[0] == pytest.approx(0.1 * math.e)
    assert state.t == pytest.approx(0.1)


def test_advance_at_zero_stays_zero():
    from fxtsmc.control.sliding import SlidingState, advance
    state = SlidingState.zero(2)
    for _ in range(5):
        state = advance(state, np.zeros(2), _params(), 0.01)
    assert np.array_equal(state.integral, np.zeros(2))


def test_advance_constant_error_over_unit_interval():
    from fxtsmc.control.sliding import SlidingState, advance
    state = SlidingState.zero(1)
    for _ in range(1000):
        state = advance(state, np.array([1.0]), _params(), 1e-3)
    assert abs(state.integral[0] - math.e) < 1e-9


def test_advance_is_odd_in_z():
    from fxtsmc.control.sliding import SlidingState, advance
    up, down = SlidingState.zero(1), SlidingState.zero(1)
    for z in (0.4, 1.3, 0.2, 0.05):
        up = advance(up, np.array([z]), _params(), 1e-2)
        down = advance(down, np.array([-z]), _params(), 1e-2)
    assert np.array_equal(up.integral, -down.integral)


def test_advance_rejects_bad_step():
    from fxtsmc.control.sliding import SlidingState, advance
    from fxtsmc.core.errors import ParameterError
    with pytest.raises(ParameterError):
        advance(SlidingState.zero(1), np.array([1.0]), _params(), 0.0)


def test_advance_non_finite():
    from fxtsmc.control.sliding import SlidingState, advance
    from fxtsmc.core.errors import AccumulationError
    with pytest.raises(AccumulationError) as exc:
        advance(SlidingState.zero(2), np.array([0.0, np.inf]), _params(), 1e-3)
    assert exc.value.channel == 1


def test_sliding_value():
    from fxtsmc.control.sliding import SlidingState, sliding_value
    state = SlidingState(integral=np.array([0.5]))
    assert sliding_value(2.0, state, _params()) == pytest.approx(5.0)


# ── Parameters ───────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("kwargs", [
    {"alpha1": 0.0},
    {"alpha1": -1.0},
    {"p": 10, "q": 10},
    {"p": 11, "q": 10},
    {"p": 8.0, "q": 10},
    {"p": 1, "q": 0},
])
def test_sliding_params_rejects(kwargs):
    from fxtsmc.core.errors import ParameterError
    with pytest.raises(ParameterError):
        _params(**kwargs)


def test_sliding_params_zero_exponent_allowed():
    params = _params(p=0, q=1)
    assert params.ratio == 0.0


def test_sliding_params_per_channel():
    from fxtsmc.control.sliding import SlidingParams
    params = SlidingParams(alpha1=np.array([1.0, 2.0]), p=np.array([1, 3]), q=np.array([2, 5]))
    assert params.channel(1) == SlidingParams(alpha1=2.0, p=3, q=5)
    assert params.ratio == pytest.approx([0.5, 0.6])


# ── Manifold dynamics ────────────────────────────────────────────────────────────

@pytest.mark.parametrize("z0", [0.1, 1.0, 10.0])
def test_reduced_dynamics_settle_within_tracking_bound(z0):
    """On s = 0 the error obeys z' = -alpha1 exp(z^2)|z|^(p/q) sign(z)."""
    from fxtsmc.control.bounds import tracking_error_bound
    from fxtsmc.control.sliding import limited_integrand
    params = _params()
    bound = tracking_error_bound(6.0, 8, 10)
    h = 1e-4
    z, t = z0, 0.0
    while abs(z) >= 1e-3 and t <= bound:
        z -= params.alpha1 * h * limited_integrand(z, params, h)
        t += h
    assert abs(z) < 1e-3
    assert t <= bound
