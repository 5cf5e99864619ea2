from __future__ import annotations

import numpy as np
import pytest

from conftest import random_scenarios
from qcool.dynamics import (
    DensityState,
    IntegrationError,
    IntegrationSettings,
    derivative_residual,
    evolve_to_steady,
    rk4_propagator,
    step,
    trajectory,
)
from qcool.model import rates_for
from qcool.steady_state import build_generator, generator_norm, solve_steady_state


@pytest.fixture
def G(chiller):
    return build_generator(rates_for(chiller))


def test_steady_state_is_a_fixed_point(chiller, G):
    ss = solve_steady_state(rates_for(chiller))
    state = DensityState.from_vector(ss.as_vector())
    assert derivative_residual(G, state.as_vector()) < 1e-12
    after = step(G, state, 0.1 / generator_norm(G))
    np.testing.assert_allclose(after.as_vector(), state.as_vector(), atol=1e-12)


def test_undriven_coherence_decays_monotonically(chiller):
    G = build_generator(rates_for(chiller.with_epsilon(0.0)))
    s0 = DensityState(0.5, 0.25, 0.25, 0.1, -0.2)
    t = np.linspace(0.0, 5e3, 40)
    mags = [np.hypot(s.re_coh, s.im_coh) for s in trajectory(G, s0, t)]
    assert np.all(np.diff(mags) < 0)


def test_step_is_fourth_order(G):
    v = DensityState.excited()
    dt = 1.0 / generator_norm(G)
    exact = trajectory(G, v, [dt], dt=dt / 256)[0].as_vector()
    e1 = np.abs(step(G, v, dt).as_vector() - exact).max()
    half = step(G, step(G, v, dt / 2), dt / 2)
    e2 = np.abs(half.as_vector() - exact).max()
    assert 12.0 < e1 / e2 < 20.0


def test_propagator_matches_step(G):
    dt = 3.0
    v = DensityState(0.2, 0.3, 0.5, 0.0, 0.1)
    np.testing.assert_allclose(rk4_propagator(G, dt) @ v.as_vector(), step(G, v, dt).as_vector(),
                               rtol=1e-14, atol=1e-17)


@pytest.mark.parametrize("initial", [DensityState.ground(), DensityState.excited(),
                                     DensityState(1 / 3, 1 / 3, 1 / 3, 0.0, 0.0)])
def test_evolution_reaches_algebraic_steady_state(chiller, G, initial):
    final, elapsed, residual = evolve_to_steady(G, initial)
    ref = solve_steady_state(rates_for(chiller)).as_vector()
    assert elapsed > 0 and residual < 1e-12
    np.testing.assert_allclose(final.as_vector(), ref, atol=1e-8)
    assert final.time == pytest.approx(elapsed)


def test_start_at_steady_state_returns_immediately(chiller, G):
    ss = DensityState.from_vector(solve_steady_state(rates_for(chiller)).as_vector())
    final, elapsed, residual = evolve_to_steady(G, ss)
    assert final is ss and elapsed == 0.0 and residual < 1e-12


def test_time_limit_raises(G):
    with pytest.raises(IntegrationError, match="no steady state"):
        evolve_to_steady(G, DensityState.ground(), IntegrationSettings(t_max=10.0))


def test_settings_validation():
    with pytest.raises(ValueError):
        IntegrationSettings(dt=-1.0)
    with pytest.raises(ValueError):
        IntegrationSettings(steady_tol=0.0)


def test_trajectory_identity_and_validation(G):
    s0 = DensityState.excited()
    assert trajectory(G, s0, [0.0])[0].as_vector().tolist() == s0.as_vector().tolist()
    assert trajectory(G, s0, []) == []
    with pytest.raises(ValueError):
        trajectory(G, s0, [1.0, 0.5])


def test_trace_and_populations_stay_physical():
    for s in random_scenarios(20, seed=31):
        G = build_generator(rates_for(s))
        t = np.linspace(0.0, 50.0 / generator_norm(G), 25)
        for st in trajectory(G, DensityState.excited(), t):
            assert abs(st.trace - 1.0) <= 1e-10
            pops = st.as_vector()[:3]
            assert pops.min() >= -1e-10 and pops.max() <= 1.0 + 1e-10
