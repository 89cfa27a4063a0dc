"""Spectral scan rate, scan-rate enhancement (SRE) and detuning optimization.

The scan rate of a search for a weak signal at unknown frequency scales as
``integral SNR(omega)^2 d omega``. SRE compares it with a quantum-limited
reference readout of the same science mode; how that reference is built is
a convention, recorded in every output. Ratios of SRE values taken with the
same damping rates do not depend on the convention.

Baseline conventions
--------------------
``matched-QL-v1``
    Two-quadrature quantum-limited readout of mode A through a measurement
    port at rate kappa_m, ``SNR_QL = kappa_A kappa_m / (((kappa_A + kappa_L +
    kappa_m)/2)^2 + omega^2) / N_QL`` with N_QL = 2 vacuum units, kappa_m
    chosen to maximize the integral.
``critical-QL-v1``
    Same with the measurement port critically coupled, kappa_m = kappa_A + kappa_L.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import minimize, minimize_scalar

from .errors import ConfigurationError, NumericalError, UnstableSystemError
from .metrics import snr_spectrum, variational_snr_exact
from .model import PortConfig, SystemParams
from .scattering import solve_scattering
from .stability import beta_roots, detuned_for_policy
from .sweep import SweepResult

BASELINES = {
    "matched-QL-v1": {"n_ql": 2.0, "coupling": "optimized"},
    "critical-QL-v1": {"n_ql": 2.0, "coupling": "critical"},
}
DEFAULT_BASELINE = "matched-QL-v1"


@dataclass(frozen=True)
class SreConfig:
    """Anchor rates (pump scale lambda = 1) and integration settings."""

    anchor: SystemParams
    baseline: str = DEFAULT_BASELINE
    theta: float = math.pi / 2
    variational: bool = False
    rel_tol: float = 1e-6
    n_points: int = 1025
    max_doublings: int = 30

    def __post_init__(self):
        if self.baseline not in BASELINES:
            raise ConfigurationError(f"unknown baseline {self.baseline!r}; have {sorted(BASELINES)}")

    def at(self, lam=1.0, policy="fixed", offsets=(0.0, 0.0)):
        return detuned_for_policy(self.anchor.scaled_pump(lam), policy, offsets)


def snr_squared(p: SystemParams, omega, theta=math.pi / 2, variational=False, ports=None):
    sm = solve_scattering(p, ports or PortConfig.default(p, include_loss=True), omega)
    snr = variational_snr_exact(sm) if variational else snr_spectrum(sm, theta).snr
    return snr**2


def _mapped_simpson(f, core, window, n):
    u = np.linspace(0.0, math.asinh(window / core), n)
    w = core * np.sinh(u)
    return simpson(f(w) * core * np.cosh(u), x=u)


def integrate_symmetric(f, core, window, n_points=1025, rel_tol=1e-6, max_doublings=30):
    """2 * integral_0^inf f, for an even integrand peaked within ~core of zero.

    Simpson's rule on an asinh-mapped grid. The grid is refined until halving
    the step changes the result by less than ``rel_tol``, then the window is
    doubled until the tail contributes less than ``rel_tol``.
    """
    n = n_points | 1
    total = _mapped_simpson(f, core, window, n)
    for _ in range(8):
        n2 = 2 * n - 1
        finer = _mapped_simpson(f, core, window, n2)
        done = abs(finer - total) <= rel_tol * abs(finer)
        total, n = finer, n2
        if done or finer == 0:
            break
    for _ in range(max_doublings):
        u_old = math.asinh(window / core)
        window *= 2
        n = (int(math.ceil((n - 1) * math.asinh(window / core) / u_old)) + 1) | 1
        wider = _mapped_simpson(f, core, window, n)
        if abs(wider - total) <= rel_tol * abs(wider) or wider == total:
            return 2 * wider
        total = wider
    raise NumericalError("scan-rate integral did not converge", {"window": window, "points": n, "value": total})


def scan_rate(p: SystemParams, cfg: SreConfig | None = None, ports=None):
    """integral SNR(omega, theta)^2 d omega over all omega (theta = pi/2 by default)."""
    cfg = cfg or SreConfig(p)
    report = beta_roots(p)
    if not report.stable:
        raise UnstableSystemError(f"scan rate needs a stable system (verdict {report.verdict})", report)
    if p.g == 0 or p.kappa_A == 0:
        return 0.0
    core = max(p.kappa_A_total / 2, 1e-12 * p.max_rate)
    window = 4 * (p.kappa_A_total + p.kappa_B + 2 * p.g + abs(p.s_A) + abs(p.s_B) + abs(p.delta_d) + abs(p.delta_c))
    return integrate_symmetric(
        lambda w: snr_squared(p, w, cfg.theta, cfg.variational, ports),
        core,
        window,
        cfg.n_points,
        cfg.rel_tol,
        cfg.max_doublings,
    )


def baseline_scan_rate(p: SystemParams, convention=DEFAULT_BASELINE):
    """Scan rate of the quantum-limited reference readout (closed form)."""
    if convention not in BASELINES:
        raise ConfigurationError(f"unknown baseline {convention!r}")
    spec = BASELINES[convention]
    ka_tot = p.kappa_A_total
    if p.kappa_A <= 0:
        raise ConfigurationError("SRE needs a nonzero signal coupling kappa_A")

    def integral(km):
        half = (ka_tot + km) / 2
        # integral of 1/(half^2 + w^2)^2 over the real line is pi / (2 half^3)
        return (p.kappa_A * km / spec["n_ql"]) ** 2 * math.pi / (2 * half**3)

    if spec["coupling"] == "critical":
        return integral(ka_tot)
    res = minimize_scalar(
        lambda x: -integral(ka_tot * math.exp(x)), bounds=(-8.0, 8.0), method="bounded", options={"xatol": 1e-10}
    )
    return integral(ka_tot * math.exp(res.x))


def sre(p: SystemParams, cfg: SreConfig | None = None):
    cfg = cfg or SreConfig(p)
    return scan_rate(p, cfg) / baseline_scan_rate(p, cfg.baseline)


def sre_vs_cooperativity(cfg: SreConfig, policy="tracking-optimal", cooperativities=None, offsets=(0.0, 0.0)):
    """SRE along the pump-scaling path g -> lam g, s -> lam^2 s.

    Points past the first instability are recorded as NaN with
    ``stable = False`` (the branch is truncated, not thrown).
    """
    c1 = cfg.anchor.cooperativity
    if cooperativities is None:
        cooperativities = np.linspace(0.5, c1, 24)
    cs = np.asarray(cooperativities, dtype=float)
    lam = np.sqrt(cs / c1)
    out = np.full(cs.size, np.nan)
    margin = np.full(cs.size, np.nan)
    stable = np.zeros(cs.size, dtype=bool)
    truncated = False
    for i, la in enumerate(lam):
        p = cfg.at(la, policy, offsets)
        rep = beta_roots(p)
        margin[i] = rep.margin
        if truncated or not rep.stable:
            truncated = True
            continue
        stable[i] = True
        out[i] = sre(p, cfg)
    return SweepResult(
        axes={"cooperativity": cs},
        values={"lambda": lam, "sre": out, "margin": margin, "stable": stable},
        params=cfg.anchor,
        meta={"kind": "sre-vs-cooperativity", "policy": policy, "baseline": cfg.baseline, "theta": cfg.theta,
              "variational": cfg.variational},
    )


def sre_map(cfg: SreConfig, delta_d_values, delta_c_values, lam=1.0):
    """SRE over absolute (delta_d, delta_c); unstable cells are NaN and flagged."""
    base = cfg.at(lam)
    dd = np.asarray(delta_d_values, dtype=float)
    dc = np.asarray(delta_c_values, dtype=float)
    values = np.full((dd.size, dc.size), np.nan)
    margin = np.empty((dd.size, dc.size))
    stable = np.zeros((dd.size, dc.size), dtype=bool)
    for i, x in enumerate(dd):
        for j, y in enumerate(dc):
            p = base.replace(delta_d=x, delta_c=y)
            rep = beta_roots(p)
            margin[i, j] = rep.margin
            if rep.stable:
                stable[i, j] = True
                values[i, j] = sre(p, cfg)
    return SweepResult(
        axes={"delta_d": dd, "delta_c": dc},
        values={"sre": values, "margin": margin, "stable": stable},
        params=base,
        meta={"kind": "sre-map", "baseline": cfg.baseline, "lambda": lam, "theta": cfg.theta},
    )


@dataclass(frozen=True)
class DetuningOptimum:
    delta_d: float
    delta_c: float
    sre: float
    margin: float
    converged: bool
    evaluations: int
    message: str = ""


def optimize_detunings(cfg: SreConfig, lam=1.0, seed=0, restarts=3, grid_n=9, span=3.0, rel_tol=1e-6):
    """Maximize SRE over (delta_d, delta_c), staying inside the stable region.

    A coarse ``grid_n x grid_n`` scan over +-``span`` squeezing-rate units
    seeds Nelder-Mead; further restarts jitter the best grid cells with a
    seeded generator. Unstable points get a penalty above every stable value.
    """
    base = cfg.at(lam)
    unit = max(abs(base.s_A), abs(base.s_B)) or base.kappa_A_total
    evals = 0

    def objective(v):
        nonlocal evals
        evals += 1
        p = base.replace(delta_d=v[0] * unit, delta_c=v[1] * unit)
        rep = beta_roots(p)
        if not rep.stable:
            return 1.0 + abs(rep.margin) / unit
        return -sre(p, cfg)

    axis = np.linspace(-span, span, grid_n)
    cells = sorted((objective((x, y)), x, y) for x in axis for y in axis)
    if cells[0][0] > 0:
        raise NumericalError("no stable detuning found on the seed grid", {"span": span, "unit": unit})
    rng = np.random.default_rng(seed)
    step = axis[1] - axis[0]
    starts = [np.array(cells[0][1:])]
    for k in range(1, restarts):
        anchor = np.array(cells[min(k - 1, len(cells) - 1)][1:])
        starts.append(anchor + rng.uniform(-0.5, 0.5, size=2) * step)
    best = None
    for x0 in starts:
        f0 = objective(x0)
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": 1e-8,
                "fatol": rel_tol * max(abs(f0), 1e-300),
                "maxiter": 4000,
                "initial_simplex": [x0, x0 + [0.1 * step, 0], x0 + [0, 0.1 * step]],
            },
        )
        if best is None or res.fun < best.fun:
            best = res
    if not best.success:
        warnings.warn(f"detuning optimizer did not converge: {best.message}", RuntimeWarning)
    p = base.replace(delta_d=best.x[0] * unit, delta_c=best.x[1] * unit)
    rep = beta_roots(p)
    return DetuningOptimum(
        delta_d=p.delta_d,
        delta_c=p.delta_c,
        sre=-best.fun if best.fun <= 0 else float("nan"),
        margin=rep.margin,
        converged=bool(best.success),
        evaluations=evals,
        message=str(best.message),
    )
