import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from baesim import presets
from baesim.errors import ConfigurationError, UnstableSystemError
from baesim.model import SystemParams
from baesim.scanrate import (
    BASELINES,
    SreConfig,
    baseline_scan_rate,
    integrate_symmetric,
    optimize_detunings,
    scan_rate,
    snr_squared,
    sre,
    sre_map,
    sre_vs_cooperativity,
)

FIG3 = presets.fig3()
CFG = SreConfig(FIG3)


def _quad_scan_rate(p):
    """Independent adaptive-quadrature value of the scan-rate integral."""
    f = lambda w: snr_squared(p, np.array([w]))[0]  # noqa: E731
    k = p.kappa_A_total
    edges = [0.0, k, 10 * k, 100 * k, np.inf]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return 2 * sum(quad(f, a, b, epsabs=0, epsrel=1e-11, limit=200)[0] for a, b in zip(edges, edges[1:]))


def test_integrator_on_known_integrals():
    # integral of 1/(1+w^2)^2 over the line is pi/2
    assert integrate_symmetric(lambda w: 1 / (1 + w**2) ** 2, 1.0, 4.0) == pytest.approx(math.pi / 2, rel=1e-7)
    # narrow core inside a wide window
    core = 1e-3
    value = integrate_symmetric(lambda w: 1 / (core**2 + w**2) ** 2, core, 10.0)
    assert value == pytest.approx(math.pi / (2 * core**3), rel=1e-7)


def test_uncoupled_signal_has_zero_scan_rate():
    assert scan_rate(SystemParams(g=0.0, kappa_A=1.0, kappa_B=1.0)) == 0.0


def test_unstable_system_raises():
    with pytest.raises(UnstableSystemError):
        scan_rate(presets.fig3("zero"))


def test_fig3_scan_rate_matches_adaptive_quadrature():
    assert scan_rate(FIG3, CFG) == pytest.approx(_quad_scan_rate(FIG3), rel=1e-7)


def test_fig3_reference_value():
    # frozen from the quadrature oracle above
    assert sre(FIG3, CFG) == pytest.approx(18.3641205, rel=1e-6)


def test_window_doubling_is_converged():
    base = scan_rate(FIG3, CFG)
    tight = scan_rate(FIG3, SreConfig(FIG3, rel_tol=1e-9))
    assert abs(tight - base) <= 1e-3 * tight


def test_matched_baseline_closed_form():
    # maximizing km^2 / (ka + km)^3 gives km = 2 ka
    p = SystemParams(g=1.0, kappa_A=0.3, kappa_L=0.2, kappa_B=1.0)
    ka, km = 0.5, 1.0
    half = (ka + km) / 2
    expected = (0.3 * km / 2) ** 2 * math.pi / (2 * half**3)
    assert baseline_scan_rate(p, "matched-QL-v1") == pytest.approx(expected, rel=1e-9)
    numeric = integrate_symmetric(lambda w: (0.3 * km / 2 / (half**2 + w**2)) ** 2, half, 10.0, rel_tol=1e-10)
    assert numeric == pytest.approx(expected, rel=1e-8)


def test_baseline_validation():
    with pytest.raises(ConfigurationError):
        SreConfig(FIG3, baseline="nope")
    with pytest.raises(ConfigurationError):
        baseline_scan_rate(SystemParams(g=1.0, kappa_B=1.0, kappa_L=1.0))


def test_ratios_do_not_depend_on_baseline():
    # same damping rates, weaker pump and no detuning
    other = CFG.at(math.sqrt(3.0 / FIG3.cooperativity), "zero")
    ratios = []
    for name in BASELINES:
        cfg = SreConfig(FIG3, baseline=name)
        ratios.append(sre(FIG3, cfg) / sre(other, cfg))
    assert ratios[0] == pytest.approx(ratios[1], rel=1e-9)


def test_compensated_sre_equals_unsqueezed():
    s0 = FIG3.replace(s_A=0.0, s_B=0.0, delta_d=0.0, delta_c=0.0)
    assert sre(FIG3, CFG) == pytest.approx(sre(s0, CFG), rel=1e-9)
    p = presets.fig2("optimal")
    assert scan_rate(p) == pytest.approx(scan_rate(presets.fig2("s0")), rel=1e-9)


def test_variational_scan_rate_dominates():
    p = presets.fig2("optimal")
    cfg = SreConfig(p, variational=True)
    assert scan_rate(p, cfg) > scan_rate(p)


def test_tracking_policy_is_non_decreasing():
    res = sre_vs_cooperativity(CFG, "tracking-optimal", np.linspace(0.5, 10.4, 12))
    values = res.values["sre"]
    assert res.values["stable"].all()
    assert np.all(np.diff(values) >= -1e-9 * values[1:])


def test_zero_policy_turns_over_before_instability():
    res = sre_vs_cooperativity(CFG, "zero", np.linspace(0.5, 10.4, 34))
    stable = res.values["stable"]
    values = res.values["sre"][stable]
    assert not stable.all()
    # truncated: once unstable, every later point is unstable too
    first_bad = int(np.argmin(stable))
    assert not stable[first_bad:].any()
    peak = int(np.nanargmax(values))
    assert 0 < peak < values.size - 1
    assert values[-1] < values[peak]


def test_map_flags_unstable_cells():
    res = sre_map(CFG, [0.0, -FIG3.s_A], [0.0, FIG3.s_B])
    assert not res.values["stable"][0, 0] and np.isnan(res.values["sre"][0, 0])
    assert res.values["sre"][1, 1] == pytest.approx(sre(FIG3, CFG), rel=1e-12)


def test_line_cut_along_compensated_delta_d():
    # scanning delta_c at delta_d = -s_A: the compensation point lies on the
    # rising side; the maximum sits at a larger common detuning
    dc = FIG3.s_B * np.linspace(0.0, 4.0, 33)
    values = np.array([sre(FIG3.replace(delta_c=y), CFG) for y in dc])
    k = int(np.argmax(values))
    assert 1.5 < dc[k] / FIG3.s_B < 3.5
    assert values[k] > values[8]  # index 8 is delta_c = s_B


def test_optimizer_is_seed_independent_and_beats_compensation():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = optimize_detunings(CFG, seed=0)
        b = optimize_detunings(CFG, seed=7, restarts=2, grid_n=7)
    assert a.converged and a.margin > 0
    assert abs(a.delta_d - b.delta_d) <= 1e-3 * FIG3.s_A
    assert abs(a.delta_c - b.delta_c) <= 1e-3 * FIG3.s_A
    assert a.sre >= sre(FIG3, CFG)
    assert a.sre == pytest.approx(sre(FIG3.replace(delta_d=a.delta_d, delta_c=a.delta_c), CFG), rel=1e-12)
