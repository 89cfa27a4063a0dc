import numpy as np
import pytest
from hypothesis import given

from baesim import presets
from baesim.errors import ConfigurationError
from baesim.model import PortConfig, SystemParams, quadrature_rotation, symplectic_form
from baesim.scattering import (
    CONVENTION,
    FrequencyGrid,
    beta_factors,
    closed_form_scattering,
    solve_scattering,
)
from baesim.stability import beta_roots

from conftest import params, random_stable_params

GRID = FrequencyGrid.uniform(6.0, 61)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        FrequencyGrid([0.0, 0.0])
    with pytest.raises(ConfigurationError):
        FrequencyGrid([])
    assert FrequencyGrid.uniform(1.0, 5).is_symmetric
    assert FrequencyGrid.log_dense(10.0, 101, 0.1).is_symmetric
    assert not FrequencyGrid([0.0, 1.0]).is_symmetric


def test_empty_cavity_reflection():
    p = SystemParams(g=0.0, kappa_A=1.0, kappa_B=2.0)
    sm = solve_scattering(p)
    assert sm.entry("Y_B", "Y_B")[0] == pytest.approx(-1.0, abs=1e-15)
    assert sm.entry("X_A", "X_A")[0] == pytest.approx(-1.0, abs=1e-15)
    assert sm.convention == CONVENTION


def test_fig2_closed_forms_on_401_points():
    p = presets.fig2()
    grid = FrequencyGrid.uniform(12.0, 401)
    sm = solve_scattering(p, grid=grid)
    for (out, inp), value in closed_form_scattering(p, grid.omega).items():
        assert np.allclose(sm.entry(out, inp), value, rtol=1e-12, atol=1e-13), (out, inp)


def _max_rel_dev(p, omega):
    sm = solve_scattering(p, grid=FrequencyGrid(omega))
    cf = closed_form_scattering(p, omega)
    scale = max(np.max(np.abs(v)) for v in cf.values())
    return max(np.max(np.abs(sm.entry(o, i) - v)) for (o, i), v in cf.items()) / scale


def test_random_stable_closed_form_agreement(rng):
    omega = np.linspace(-8, 8, 41)
    for _ in range(200):
        assert _max_rel_dev(random_stable_params(rng), omega) <= 1e-10


def test_closed_forms_reject_unsupported_configurations():
    with pytest.raises(ConfigurationError):
        closed_form_scattering(SystemParams(g=1, kappa_A=1, kappa_L=0.1, kappa_B=1), 0.0)
    with pytest.raises(ConfigurationError):
        closed_form_scattering(SystemParams(g=1, kappa_A=1, kappa_B=1, pump_phase=0.1), 0.0)


@given(params(detuned=False))
def test_optimal_detuning_nulls_squeezing_paths(p):
    q = p.with_optimal_detunings()
    sm = solve_scattering(q, grid=GRID)
    scale = np.max(np.abs(sm.S))
    assert np.max(np.abs(sm.entry("Y_B", "Y_A"))) <= 1e-12 * scale
    assert np.max(np.abs(sm.entry("Y_B", "X_B"))) <= 1e-12 * scale
    cf = closed_form_scattering(q.replace(delta_d=-q.s_A), GRID.omega)
    assert np.all(cf[("X_A", "X_B")] == 0) and np.all(cf[("X_A", "Y_B")] == 0)


def test_beta_factorizes():
    w = np.linspace(-3, 3, 13)
    p = SystemParams(g=1.3, kappa_A=0.7, kappa_B=1.9)
    target = (1j * w + 0.35) ** 2 * (1j * w + 0.95) ** 2
    assert np.allclose(beta_factors(p, w).beta, target, rtol=1e-14)
    q = p.replace(s_A=2.2, s_B=-4.1).with_optimal_detunings()
    assert np.allclose(beta_factors(q, w).beta, target, rtol=1e-13)


def test_beta_fig2_at_zero_frequency():
    # hand evaluation: beta_A = beta_B = 4 - 1 = 3, cross term 4*25*1*1 = 100
    assert beta_factors(presets.fig2("zero"), 0.0).beta == pytest.approx(-91.0)
    assert beta_factors(presets.fig2("optimal"), 0.0).beta == pytest.approx(16.0)


def test_beta_uses_total_science_damping():
    p = SystemParams(g=1.0, kappa_A=1.0, kappa_L=0.5, kappa_B=2.0)
    assert beta_factors(p, 0.0).beta_A == pytest.approx(0.75**2)


@given(params(loss=True))
def test_symplectic_with_all_baths(p):
    if not beta_roots(p).stable:
        return
    sm = solve_scattering(p, grid=GRID)
    j = symplectic_form(3)
    prod = sm.S @ j @ np.conj(np.transpose(sm.S, (0, 2, 1)))
    assert np.max(np.abs(prod - j)) <= 1e-9 * max(1.0, np.max(np.abs(sm.S)) ** 2)


@given(params(loss=True))
def test_reality_symmetry(p):
    sm = solve_scattering(p, grid=GRID)
    assert np.array_equal(sm.S[::-1], np.conj(sm.S))


def _covariance_error(p, phi):
    s0 = solve_scattering(p, grid=GRID).S
    s1 = solve_scattering(p.replace(pump_phase=phi), grid=GRID).S
    r = quadrature_rotation(phi / 2)
    return np.max(np.abs(s1 - r @ s0 @ r.T)), max(1.0, np.max(np.abs(s0)))


def test_pump_phase_covariance_well_conditioned(rng):
    for _ in range(50):
        p = random_stable_params(rng, margin_frac=0.05)
        err, scale = _covariance_error(p, rng.uniform(-np.pi, np.pi))
        assert err <= 1e-12 * scale


@given(params())
def test_pump_phase_covariance(p):
    # near-marginal draws amplify rounding by the resolvent condition number
    err, scale = _covariance_error(p, 0.83)
    assert err <= 1e-12 * scale**2


def test_internal_rows_and_output_relation():
    p = presets.fig2("zero")
    sm = solve_scattering(p, grid=GRID)
    # out = in - sqrt(kappa) * mode
    assert np.allclose(sm.entry("Y_B", "X_A"), -np.sqrt(p.kappa_B) * sm.entry("int:Y_B", "X_A"))


def test_singular_points_are_flagged():
    # lossless, undriven mode A at omega = 0 gives a singular resolvent
    p = SystemParams(g=0.0, kappa_A=0.0, kappa_B=1.0)
    ports = PortConfig.default(p)
    sm = solve_scattering(p, ports, FrequencyGrid([-1.0, 0.0, 1.0]))
    assert sm.singular.tolist() == [False, True, False]
    assert np.all(np.isnan(sm.S[1])) and np.all(np.isfinite(sm.S[0]))
