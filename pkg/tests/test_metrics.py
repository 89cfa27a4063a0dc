import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from baesim import presets
from baesim.metrics import (
    gains,
    max_snr_over_theta,
    rotate_scattering,
    snr_spectrum,
    snr_vs_theta,
    variational_snr,
    variational_snr_exact,
)
from baesim.model import SystemParams
from baesim.scattering import FrequencyGrid, closed_form_scattering, solve_scattering
from baesim.stability import beta_roots

from conftest import params

GRID = FrequencyGrid.uniform(8.0, 81)
ZERO = FrequencyGrid([0.0])


def fig2(case, grid=GRID):
    return solve_scattering(presets.fig2(case), grid=grid)


def test_empty_cavity_gains():
    gs = gains(solve_scattering(SystemParams(g=0.0, kappa_A=1.0, kappa_B=3.0), grid=GRID))
    assert np.allclose(gs.G_B, 1.0, rtol=0, atol=1e-14)
    assert np.all(gs.G_A == 0) and np.all(gs.G_loss == 0)


@given(params(loss=True, detuned=False))
def test_backaction_on_readout_vanishes_at_optimal_detuning(p):
    gs = gains(solve_scattering(p.with_optimal_detunings(), grid=GRID))
    assert np.max(gs.B_B) <= 1e-24 * max(1.0, np.max(gs.B_A)) ** 2


@given(params(loss=True))
def test_gains_nonnegative_and_snr_bounded(p):
    sm = solve_scattering(p, grid=GRID)
    gs = gains(sm)
    for arr in (gs.G_A, gs.G_B, gs.G_loss, gs.B_A, gs.B_B):
        assert np.all(arr >= 0)
    snr = snr_spectrum(sm).snr
    assert np.all((snr >= 0) & (snr <= 1 + 1e-12))


def test_fig2a_features():
    zero, s0 = gains(fig2("zero")), gains(fig2("s0"))
    mid = GRID.omega.size // 2
    # uncompensated squeezing: extra readout noise and a changed signal gain
    assert np.max(zero.G_B) > 1.0
    assert zero.G_A[mid] != pytest.approx(s0.G_A[mid])
    assert np.max(zero.B_B) > 0


def test_rotation_identity_and_quarter_turn():
    sm = fig2("zero")
    assert np.allclose(rotate_scattering(sm, 0.0).S, sm.S, rtol=0, atol=0)
    quarter = rotate_scattering(sm, np.pi / 2)
    # rows: X -> Y, Y -> -X; every input pair also turns by a quarter
    for inp_x, inp_y in (("X_A", "Y_A"), ("X_B", "Y_B")):
        assert np.allclose(quarter.entry("X_B", inp_x), sm.entry("Y_B", inp_y), atol=1e-14)
        assert np.allclose(quarter.entry("Y_B", inp_x), -sm.entry("X_B", inp_y), atol=1e-14)
        assert np.allclose(quarter.entry("X_B", inp_y), -sm.entry("Y_B", inp_x), atol=1e-14)


def test_rotation_eighth_turn_by_hand():
    p = presets.fig2("zero")
    cf = closed_form_scattering(p, GRID.omega)
    rot = rotate_scattering(solve_scattering(p, grid=GRID), np.pi / 4)
    # Y' = (Y_B - X_B)/sqrt2 on rows; X_A' = (X_A + Y_A)/sqrt2 on columns
    expected = 0.5 * (cf["Y_B", "X_A"] - cf["X_B", "X_A"] + cf["Y_B", "Y_A"] - cf["X_B", "Y_A"])
    assert np.allclose(rot.entry("Y_B", "X_A"), expected, rtol=1e-12, atol=1e-14)
    # X' = (X_B + Y_B)/sqrt2; Y_B' column = (Y_B - X_B)/sqrt2
    expected = 0.5 * (cf["X_B", "Y_B"] - cf["X_B", "X_B"] + cf["Y_B", "Y_B"] - cf["Y_B", "X_B"])
    assert np.allclose(rot.entry("X_B", "Y_B"), expected, rtol=1e-12, atol=1e-14)


@given(params(loss=True), st.floats(0, np.pi))
def test_total_readout_power_is_rotation_invariant(p, theta):
    sm = solve_scattering(p, grid=GRID)
    rd = sm.ports.columns("B")
    before = np.sum(np.abs(sm.S[:, rd, :]) ** 2, axis=(1, 2))
    after = np.sum(np.abs(rotate_scattering(sm, theta).S[:, rd, :]) ** 2, axis=(1, 2))
    assert np.allclose(after, before, rtol=1e-12)


@given(st.floats(0, np.pi))
def test_snr_spectrum_matches_rotated_row(theta):
    sm = fig2("zero")
    # the rotated Y_B row is cos(theta) X_B + sin(theta) Y_B
    gs = gains(rotate_scattering(sm, theta - np.pi / 2))
    direct = snr_spectrum(sm, theta).snr
    assert np.allclose(direct, gs.G_A / (gs.G_A + gs.G_B), rtol=1e-12)


@given(params(loss=True, detuned=False))
def test_compensated_snr_equals_unsqueezed(p):
    q = p.with_optimal_detunings()
    s0 = p.replace(s_A=0.0, s_B=0.0)
    if not beta_roots(s0).stable:
        return
    assert np.allclose(snr_spectrum(solve_scattering(q, grid=GRID)).snr,
                       snr_spectrum(solve_scattering(s0, grid=GRID)).snr, rtol=1e-10, atol=1e-14)


def test_fig2c_hand_values():
    s0 = fig2("s0", ZERO)
    assert snr_spectrum(s0).snr[0] == pytest.approx(100 / 101, rel=1e-14)
    th, value = max_snr_over_theta(fig2("zero", ZERO))
    assert th == pytest.approx(0.253, abs=2e-3)
    assert value == pytest.approx(0.8284, abs=1e-4)
    th, value = max_snr_over_theta(fig2("optimal", ZERO))
    assert th == pytest.approx(1.2497, abs=1e-3)
    assert value == pytest.approx(0.995025, abs=1e-6)
    assert snr_spectrum(fig2("optimal", ZERO)).snr[0] == pytest.approx(100 / 101, rel=1e-12)


def test_golden_refinement_matches_eigenvalue_bound():
    sm = fig2("zero")
    exact = variational_snr_exact(sm)
    golden = variational_snr(sm).snr
    assert np.allclose(golden, exact, rtol=1e-9)


def test_argmax_is_stationary():
    sm = fig2("optimal", ZERO)
    th, _ = max_snr_over_theta(sm)
    h = 1e-4
    _, v = snr_vs_theta(sm, 0, [th - h, th, th + h])
    assert abs(v[2] - v[0]) / (2 * h) < 1e-6
    assert v[1] >= max(v[0], v[2])


def test_variational_envelope():
    s0 = fig2("s0")
    assert np.allclose(variational_snr(s0).snr, snr_spectrum(s0).snr, rtol=1e-10)
    opt = fig2("optimal")
    env = variational_snr(opt).snr
    assert np.all(env >= snr_spectrum(opt).snr - 1e-15)
    assert env[GRID.omega.size // 2] > np.max(snr_spectrum(s0).snr)


def test_thermal_weighting():
    p = presets.fig2("optimal")
    hot = p.replace(n_bath={"B": 1.0})
    gs = gains(solve_scattering(p, grid=ZERO))
    snr = snr_spectrum(solve_scattering(hot, grid=ZERO)).snr[0]
    assert snr == pytest.approx(gs.G_A[0] / (gs.G_A[0] + 3 * gs.G_B[0]), rel=1e-14)


def test_rotated_squeezing_axis_moves_the_backaction_null():
    # a tilted squeezing axis shifts, rather than removes, the X_A backaction null
    psi = np.pi / 4
    p = presets.fig2("zero").replace(sms_phase_A=psi)
    naive = gains(solve_scattering(p.replace(delta_d=-p.s_A, delta_c=p.s_B), grid=GRID)).B_B
    moved = gains(solve_scattering(p.replace(delta_d=-p.s_A * np.cos(psi), delta_c=p.s_B), grid=GRID)).B_B
    assert np.max(naive) > 1e-3
    assert np.max(moved) <= 1e-24
