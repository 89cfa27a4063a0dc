"""Deterministic time-domain trajectories, with and without the RWA.

``integrate_rwa`` steps the linear quadrature equations ``dv/dt = M v``.
``integrate_full`` keeps every term of the two-tone pumped equations before
the rotating-wave approximation: both pump tones, both rotation senses of
the cubic coupling, and the full ``P(t)^2`` Kerr product. The free rotation
at the frame frequencies ``omega_A + delta_d`` and ``omega_B + delta_c`` is
removed analytically, so the demodulated envelopes are exact (no lock-in)
and the lab-frame fields follow by multiplying the phase back in.

Noise inputs are excluded throughout.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ConfigurationError
from .model import SystemParams, drift_matrix

SQRT2 = math.sqrt(2.0)
RWA_MAX_STEP = 0.05  # in units of 1 / max_rate
FULL_STEPS_PER_PERIOD = 40  # of the sum-frequency pump
DIVERGENCE_NORM = 1e150


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled quadrature trajectory ``v = (X_A, Y_A, X_B, Y_B)``."""

    t: np.ndarray
    v: np.ndarray
    model: str
    frame: tuple = (0.0, 0.0)  # angular frequencies of the A and B frames
    diverged: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def envelopes(self):
        """Complex envelopes (A, B) with X = sqrt2 Re A, Y = sqrt2 Im A."""
        return (self.v[:, 0] + 1j * self.v[:, 1]) / SQRT2, (self.v[:, 2] + 1j * self.v[:, 3]) / SQRT2

    @property
    def lab_fields(self):
        """Lab-frame complex amplitudes a(t), b(t)."""
        env_a, env_b = self.envelopes
        return env_a * np.exp(-1j * self.frame[0] * self.t), env_b * np.exp(-1j * self.frame[1] * self.t)

    @property
    def norm(self):
        return np.linalg.norm(self.v, axis=1)


def _check_step(dt, limit, what):
    if not dt > 0:
        raise ConfigurationError("time step must be positive")
    if dt > limit * (1 + 1e-12):
        raise ConfigurationError(f"time step {dt:g} exceeds the {what} limit {limit:g}")


def _n_steps(T, dt):
    n = int(round(T / dt))
    if n < 1 or abs(n * dt - T) > 1e-9 * T:
        raise ConfigurationError("T must be a positive integer multiple of dt")
    return n


def integrate_rwa(p: SystemParams, v0, T, dt) -> Trajectory:
    """Classical RK4 on the effective equations, in the detuned half-pump frame."""
    limit = RWA_MAX_STEP / p.max_rate if p.max_rate > 0 else math.inf
    _check_step(dt, limit, "RWA")
    n = _n_steps(T, dt)
    m = drift_matrix(p)
    v = np.empty((n + 1, 4))
    v[0] = v0
    diverged = False
    for k in range(n):
        x = v[k]
        k1 = m @ x
        k2 = m @ (x + 0.5 * dt * k1)
        k3 = m @ (x + 0.5 * dt * k2)
        k4 = m @ (x + dt * k3)
        v[k + 1] = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.abs(v[k + 1]) < DIVERGENCE_NORM):
            v = v[: k + 1]
            diverged = True
            break
    t = dt * np.arange(v.shape[0])
    return Trajectory(t, v, "rwa", diverged=diverged, meta={"dt": dt})


def rk4_step_matrix(m, h):
    """One RK4 step of dv/dt = m v is multiplication by this matrix."""
    hm = h * m
    out = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for k in range(1, 5):
        term = term @ hm / k
        out = out + term
    return out


def propagator(p: SystemParams, t):
    """Exact state-transition matrix exp(M t) (scaling and squaring)."""
    return expm(drift_matrix(p) * t)


def exact_rwa(p: SystemParams, v0, times):
    m = drift_matrix(p)
    return np.array([expm(m * t) @ v0 for t in np.asarray(times)])


def growth_rate(p: SystemParams, horizon=60.0, dt_factor=0.02):
    """Asymptotic growth rate of ||v(t)|| from RK4 state-transition matrices.

    Compares operator norms at T and 2T, ``T = horizon / |rate scale|``, so
    constant prefactors cancel. RK4 on a linear system is a fixed matrix
    per step; powers of it give the same result as stepping.
    """
    m = drift_matrix(p)
    scale = max(abs(np.max(np.linalg.eigvals(m).real)), 1e-6 * p.max_rate)
    dt = dt_factor / p.max_rate
    steps = max(1, int(math.ceil(horizon / scale / dt)))
    step = rk4_step_matrix(m, dt)
    phi_t = np.linalg.matrix_power(step, steps)
    phi_2t = phi_t @ phi_t
    return (math.log(np.linalg.norm(phi_2t, 2)) - math.log(np.linalg.norm(phi_t, 2))) / (steps * dt)


@dataclass(frozen=True)
class FullModelParams:
    """Pre-RWA parameters: Kerr-shifted mode frequencies plus effective rates.

    The pump tones sit at ``Omega_difference = omega_B - omega_A + delta_Delta``
    and ``Omega_sum = omega_A + omega_B + delta_Sigma``; ``phase`` is the
    relative phase of the sum tone.
    """

    omega_A: float
    omega_B: float
    g: float
    s_A: float = 0.0
    s_B: float = 0.0
    kappa_A: float = 0.0
    kappa_B: float = 0.0
    delta_d: float = 0.0
    delta_c: float = 0.0
    phase: float = 0.0

    @classmethod
    def from_system(cls, p: SystemParams, omega_A, omega_B):
        if p.sms_phase_A or p.sms_phase_B:
            raise ConfigurationError("the circuit model has Hamiltonian squeezing only (sms phases must be 0)")
        return cls(omega_A, omega_B, p.g, p.s_A, p.s_B, p.kappa_A_total, p.kappa_B, p.delta_d, p.delta_c,
                   p.pump_phase)

    def rwa_params(self) -> SystemParams:
        return SystemParams(
            g=self.g, s_A=self.s_A, s_B=self.s_B, kappa_A=self.kappa_A, kappa_B=self.kappa_B,
            delta_d=self.delta_d, delta_c=self.delta_c, pump_phase=self.phase,
        )

    @property
    def Omega_difference(self):
        return self.omega_B - self.omega_A + (self.delta_c - self.delta_d)

    @property
    def Omega_sum(self):
        return self.omega_A + self.omega_B + (self.delta_c + self.delta_d)

    @property
    def frame(self):
        return self.omega_A + self.delta_d, self.omega_B + self.delta_c

    def separation(self):
        """Smallest fast frequency over the largest interaction rate."""
        rate = max(abs(self.g), abs(self.s_A), abs(self.s_B), self.kappa_A, self.kappa_B,
                   abs(self.delta_d), abs(self.delta_c))
        fast = min(abs(self.omega_A), abs(self.omega_B), abs(self.omega_B - self.omega_A),
                   abs(self.omega_B - 2 * self.omega_A), abs(2 * self.omega_B - self.omega_A))
        return fast / rate if rate > 0 else math.inf


def integrate_full(f: FullModelParams, v0, T, dt) -> Trajectory:
    """RK4 on the two-tone pumped equations with all counter-rotating terms.

    Lab-frame equations (mode A; B is symmetric)::

        da/dt = -i (omega_A - 2 s_A) a - kappa_A/2 a
                - 2 i g (b + b*) P(t) - 2 i s_A (a + a*) P(t)^2
        P(t)  = cos(Omega_difference t) + cos(Omega_sum t - phase)

    The constant part of ``P^2`` cancels the ``-2 s_A`` offset, so
    ``omega_A`` is the mode frequency in the presence of the pump.
    """
    _check_step(dt, 2 * math.pi / (FULL_STEPS_PER_PERIOD * f.Omega_sum), "full-model")
    if f.separation() < 20:
        warnings.warn(f"mode frequencies only {f.separation():.3g}x the interaction rates; RWA comparison is "
                      "not meaningful", RuntimeWarning)
    n = _n_steps(T, dt)
    wa, wb = f.frame
    o1, o2 = f.Omega_difference, f.Omega_sum
    g, sa, sb, ph = f.g, f.s_A, f.s_B, f.phase
    lin_a = 1j * (f.delta_d + 2 * sa) - f.kappa_A / 2
    lin_b = 1j * (f.delta_c + 2 * sb) - f.kappa_B / 2
    exp = cmath.exp
    cos = math.cos

    def coeffs(t):
        p = cos(o1 * t) + cos(o2 * t - ph)
        return (p, p * p, exp(1j * (wa - wb) * t), exp(1j * (wa + wb) * t), exp(2j * wa * t), exp(2j * wb * t))

    def rhs(x, y, c):
        p, p2, e_m, e_p, e_aa, e_bb = c
        dx = lin_a * x - 2j * g * p * (y * e_m + y.conjugate() * e_p) - 2j * sa * p2 * (x + x.conjugate() * e_aa)
        dy = lin_b * y - 2j * g * p * (x * e_m.conjugate() + x.conjugate() * e_p) - 2j * sb * p2 * (
            y + y.conjugate() * e_bb)
        return dx, dy

    out_a = np.empty(n + 1, dtype=complex)
    out_b = np.empty(n + 1, dtype=complex)
    x = complex(v0[0], v0[1]) / SQRT2
    y = complex(v0[2], v0[3]) / SQRT2
    out_a[0], out_b[0] = x, y
    c0 = coeffs(0.0)
    h = dt
    count = n
    diverged = False
    for k in range(n):
        t = k * h
        cm = coeffs(t + h / 2)
        c1 = coeffs(t + h)
        k1x, k1y = rhs(x, y, c0)
        k2x, k2y = rhs(x + h / 2 * k1x, y + h / 2 * k1y, cm)
        k3x, k3y = rhs(x + h / 2 * k2x, y + h / 2 * k2y, cm)
        k4x, k4y = rhs(x + h * k3x, y + h * k3y, c1)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        c0 = c1
        if not (abs(x) < DIVERGENCE_NORM and abs(y) < DIVERGENCE_NORM):
            count, diverged = k, True
            break
        out_a[k + 1], out_b[k + 1] = x, y
    out_a, out_b = out_a[: count + 1], out_b[: count + 1]
    v = SQRT2 * np.column_stack([out_a.real, out_a.imag, out_b.real, out_b.imag])
    t = dt * np.arange(v.shape[0])
    return Trajectory(t, v, "full", frame=(wa, wb), diverged=diverged, meta={"dt": dt, "separation": f.separation()})


def rwa_deviation(full: Trajectory, rwa: Trajectory):
    """max_t ||v_full - v_rwa|| relative to max_t ||v_rwa|| on a shared grid."""
    if full.t.shape != rwa.t.shape or not np.allclose(full.t, rwa.t, rtol=0, atol=1e-12 * full.t[-1]):
        raise ConfigurationError("trajectories must share a time grid")
    return float(np.max(np.linalg.norm(full.v - rwa.v, axis=1)) / np.max(rwa.norm))


@dataclass(frozen=True)
class RwaCheck:
    separations: tuple
    deviations: tuple
    halving_ratio: float
    slope: float


def rwa_scaling_check(p: SystemParams, separation=1e3, v0=(1.0, 0.0, 0.0, 0.0), t_max_g=5.0, b_over_a=1.37):
    """Deviation of the full model from the RWA at ``omega_A / g = separation``
    and twice that; the ratio of the two deviations should be close to 2."""
    if p.g <= 0:
        raise ConfigurationError("RWA check needs g > 0")
    T = t_max_g / p.g
    devs = []
    seps = (separation, 2 * separation)
    for sep in seps:
        f = FullModelParams.from_system(p, sep * p.g, b_over_a * sep * p.g)
        limit = 2 * math.pi / (FULL_STEPS_PER_PERIOD * f.Omega_sum)
        n = int(math.ceil(T / limit))
        dt = T / n
        full = integrate_full(f, v0, T, dt)
        rwa = integrate_rwa(p, v0, T, dt)
        devs.append(rwa_deviation(full, rwa))
    ratio = devs[0] / devs[1]
    return RwaCheck(seps, tuple(devs), ratio, math.log(ratio) / math.log(2))
