import math

import numpy as np
import pytest

from baesim import presets
from baesim.errors import ConfigurationError
from baesim.model import SystemParams, drift_matrix, symplectic_form
from baesim.stability import beta_roots
from baesim.timedomain import (
    FullModelParams,
    exact_rwa,
    growth_rate,
    integrate_full,
    integrate_rwa,
    propagator,
    rk4_step_matrix,
    rwa_deviation,
    rwa_scaling_check,
)

from conftest import random_params


def test_lossless_bae_ramp():
    p = SystemParams(g=0.7)
    tr = integrate_rwa(p, (1.3, 0.0, 0.0, 0.0), T=4.0, dt=0.01)
    assert np.allclose(tr.v[:, 0], 1.3, rtol=0, atol=1e-14)
    assert np.allclose(tr.v[:, 3], -2 * 0.7 * 1.3 * tr.t, rtol=1e-12, atol=1e-13)
    assert np.allclose(tr.v[:, 1], 0) and np.allclose(tr.v[:, 2], 0)


def test_damped_bae_ramp():
    g, ka, kb, x0 = 0.7, 0.4, 1.1, 1.3
    p = SystemParams(g=g, kappa_A=ka, kappa_B=kb)
    tr = integrate_rwa(p, (x0, 0.0, 0.0, 0.0), T=6.0, dt=0.005)
    t = tr.t
    assert np.allclose(tr.v[:, 0], x0 * np.exp(-ka * t / 2), rtol=1e-10)
    ramp = -2 * g * x0 * (np.exp(-ka * t / 2) - np.exp(-kb * t / 2)) / ((kb - ka) / 2)
    assert np.allclose(tr.v[:, 3], ramp, rtol=1e-9, atol=1e-12)


def test_rk4_is_fourth_order():
    p = presets.fig2("zero").replace(kappa_A=6.0, kappa_B=6.0)
    v0 = np.array([1.0, 0.3, -0.2, 0.5])
    T = 1.0
    ref = exact_rwa(p, v0, [T])[0]
    steps = np.array([0.008, 0.004, 0.002, 0.001])
    errs = [np.linalg.norm(integrate_rwa(p, v0, T, h).v[-1] - ref) for h in steps]
    slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.2)


def test_step_matrix_matches_stepping():
    p = presets.fig2("optimal")
    v0 = np.array([0.2, -1.0, 0.4, 0.1])
    tr = integrate_rwa(p, v0, 0.5, 0.005)
    step = rk4_step_matrix(drift_matrix(p), 0.005)
    assert np.allclose(np.linalg.matrix_power(step, 100) @ v0, tr.v[-1], rtol=1e-12)


@pytest.mark.parametrize("case", ["optimal", "zero"])
def test_lossless_flow_is_symplectic(case):
    p = presets.fig2(case).replace(kappa_A=0.0, kappa_B=0.0)
    j = symplectic_form(2)
    dt = 0.005 / p.max_rate
    n = int(round(3.0 / dt))
    for phi in (propagator(p, n * dt), np.linalg.matrix_power(rk4_step_matrix(drift_matrix(p), dt), n)):
        scale = np.linalg.norm(phi, 2) ** 2
        assert np.max(np.abs(phi.T @ j @ phi - j)) <= 1e-9 * scale


def test_trajectory_norm_follows_stability(rng):
    checked = 0
    while checked < 20:
        p = random_params(rng)
        rep = beta_roots(p)
        if abs(rep.margin) < 0.05 * p.max_rate:
            continue
        T = 40 / abs(rep.margin)
        dt = 0.05 / p.max_rate
        T = dt * math.ceil(T / dt)
        tr = integrate_rwa(p, np.ones(4), T, dt)
        grew = tr.diverged or tr.norm[-1] > tr.norm[0]
        assert grew == (not rep.stable)
        checked += 1


def test_growth_rate_of_an_unstable_system():
    p = presets.fig2("zero")
    assert growth_rate(p) == pytest.approx(-beta_roots(p).margin, rel=1e-3)


def test_divergence_is_truncated_and_flagged():
    p = presets.fig2("zero")
    tr = integrate_rwa(p, np.ones(4), 300.0, 0.01)
    assert tr.diverged and tr.t[-1] < 300.0 and np.all(np.isfinite(tr.v))


def test_step_validation():
    p = presets.fig2()
    with pytest.raises(ConfigurationError):
        integrate_rwa(p, np.ones(4), 1.0, 0.02)  # limit is 0.05 / 5
    with pytest.raises(ConfigurationError):
        integrate_rwa(p, np.ones(4), 1.0, 0.003)
    f = FullModelParams(omega_A=100.0, omega_B=137.0, g=0.1)
    with pytest.raises(ConfigurationError):
        integrate_full(f, np.ones(4), 1.0, 0.1)


def test_unpumped_full_model_is_a_damped_oscillation():
    wa, wb, ka, kb = 50.0, 71.0, 0.3, 0.5
    f = FullModelParams(omega_A=wa, omega_B=wb, g=0.0, kappa_A=ka, kappa_B=kb)
    T = 2.0
    n = int(math.ceil(T / (2 * math.pi / (40 * f.Omega_sum))))
    tr = integrate_full(f, (1.0, 0.5, -0.3, 0.2), T, T / n)
    a, b = tr.lab_fields
    a0, b0 = complex(1.0, 0.5) / math.sqrt(2), complex(-0.3, 0.2) / math.sqrt(2)
    assert np.allclose(a, a0 * np.exp((-1j * wa - ka / 2) * tr.t), rtol=1e-12)
    assert np.allclose(b, b0 * np.exp((-1j * wb - kb / 2) * tr.t), rtol=1e-12)
    assert tr.frame == (wa, wb)


def test_full_params_from_system():
    p = presets.fig2("optimal").replace(pump_phase=0.3)
    f = FullModelParams.from_system(p, 1e3, 1.4e3)
    assert f.rwa_params() == p
    assert f.Omega_sum - f.Omega_difference == pytest.approx(2 * f.frame[0])
    with pytest.raises(ConfigurationError):
        FullModelParams.from_system(p.replace(sms_phase_A=0.1), 1e3, 1.4e3)


def test_low_separation_warns():
    f = FullModelParams(omega_A=10.0, omega_B=13.7, g=1.0)
    dt = 2 * math.pi / (40 * f.Omega_sum)
    with pytest.warns(RuntimeWarning):
        integrate_full(f, np.ones(4), 10 * dt, dt)


@pytest.mark.parametrize("case", ["optimal", "zero"])
def test_full_model_approaches_rwa(case):
    check = rwa_scaling_check(presets.fig2(case).replace(kappa_A=2.0), separation=100, t_max_g=1.0)
    assert check.deviations[1] < check.deviations[0] < 0.05
    assert check.halving_ratio == pytest.approx(2.0, rel=0.2)


def test_deviation_needs_shared_grid():
    p = presets.fig2()
    a = integrate_rwa(p, np.ones(4), 1.0, 0.01)
    b = integrate_rwa(p, np.ones(4), 1.0, 0.005)
    with pytest.raises(ConfigurationError):
        rwa_deviation(a, b)
    assert rwa_deviation(a, a) == 0.0
