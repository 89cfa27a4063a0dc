"""Josephson ring modulator: from circuit constants to effective rates.

Reduced mode coordinates of the ring, its exact and Taylor-expanded
potential, quantization into cubic (three-wave) and quartic (Kerr) rates,
and the stiff-pump reduction to ``g``, ``s_A`` and ``s_B``.

Conventions
-----------
* ``phi_0 = hbar / 2e`` is the reduced flux quantum and ``E_J = I_0 phi_0``.
* Each coordinate is quantized as ``phi_M = xi_M (m + m^dag)`` with
  ``xi_M = sqrt(hbar Z_M / 2) / phi_0``. The factor 4 on ``phi_C^2`` in the
  quadratic potential is folded into ``Z_C``: the user supplies the physical
  impedance of the resonant C mode and it is used unchanged.
* Rates are angular frequencies (energy / hbar). Kerr coefficients multiply
  ``(m + m^dag)^4`` (self) or ``(m + m^dag)^2 (n + n^dag)^2`` (cross).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from .errors import ConfigurationError
from .model import SystemParams

HBAR = constants.hbar
PHI0 = constants.hbar / (2 * constants.e)


@dataclass(frozen=True)
class JrmCircuit:
    """Ring constants: Josephson energy (J), reduced external flux (rad),
    mode impedances (ohm) and bare mode angular frequencies (rad/s)."""

    E_J: float
    phi_ext: float
    Z_A: float
    Z_B: float
    Z_C: float
    omega_a: float
    omega_b: float
    omega_c: float

    def __post_init__(self):
        for name in ("Z_A", "Z_B", "Z_C"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive")
        if not math.isfinite(self.E_J) or self.E_J < 0:
            raise ConfigurationError("E_J must be finite and >= 0")

    @classmethod
    def from_critical_current(cls, I0, **kwargs):
        return cls(E_J=I0 * PHI0, **kwargs)

    @property
    def I0(self):
        return self.E_J / PHI0

    def xi(self, mode):
        """Zero-point amplitude of the reduced coordinate of ``mode``."""
        z = {"A": self.Z_A, "B": self.Z_B, "C": self.Z_C}[mode]
        return math.sqrt(HBAR * z / 2) / PHI0


@dataclass(frozen=True)
class NodeFluxes:
    Phi_1: float
    Phi_2: float
    Phi_3: float
    Phi_4: float


def mode_coordinates(n: NodeFluxes):
    """Reduced (phi_A, phi_B, phi_C) from the four node fluxes."""
    phi_a = (n.Phi_1 - n.Phi_2) / PHI0
    phi_b = (n.Phi_3 - n.Phi_4) / PHI0
    phi_c = (n.Phi_1 + n.Phi_2 - n.Phi_3 - n.Phi_4) / (2 * PHI0)
    return phi_a, phi_b, phi_c


def ring_energy_exact(phi_a, phi_b, phi_c, phi_ext, E_J):
    q = phi_ext / 4
    return -4 * E_J * (
        math.cos(phi_a / 2) * math.cos(phi_b / 2) * math.cos(phi_c) * math.cos(q)
        + math.sin(phi_a / 2) * math.sin(phi_b / 2) * math.sin(phi_c) * math.sin(q)
    )


def junction_phases(phi_a, phi_b, phi_c, phi_ext):
    """Gauge-invariant phase across each of the four junctions.

    The external flux is shared equally, a quarter per junction.
    """
    u, v, q = phi_a / 2, phi_b / 2, phi_ext / 4
    return (u - v + phi_c - q, u + v - phi_c - q, -u + v + phi_c - q, -u - v - phi_c - q)


def junction_sum_energy(phi_a, phi_b, phi_c, phi_ext, E_J):
    """Ring energy as a plain sum of four Josephson cosines."""
    return -E_J * sum(math.cos(t) for t in junction_phases(phi_a, phi_b, phi_c, phi_ext))


# Structural prefactors of the Taylor series. Keys are exponents (a, b, c) of
# phi_A^a phi_B^b phi_C^c; the value is (trig, factor) so the coefficient is
# E_J * factor * trig(phi_ext / 4).
SERIES_TERMS = {
    (0, 0, 0): ("cos", -4.0),
    (2, 0, 0): ("cos", 1 / 2),
    (0, 2, 0): ("cos", 1 / 2),
    (0, 0, 2): ("cos", 2.0),
    (1, 1, 1): ("sin", -1.0),
    (4, 0, 0): ("cos", -1 / 96),
    (0, 4, 0): ("cos", -1 / 96),
    (0, 0, 4): ("cos", -1 / 6),
    (2, 2, 0): ("cos", -1 / 16),
    (2, 0, 2): ("cos", -1 / 4),
    (0, 2, 2): ("cos", -1 / 4),
}


def series_coefficients(phi_ext, E_J, order=4):
    if order not in (3, 4):
        raise ConfigurationError(f"series order must be 3 or 4, got {order!r}")
    q = phi_ext / 4
    trig = {"cos": math.cos(q), "sin": math.sin(q)}
    return {k: E_J * f * trig[t] for k, (t, f) in SERIES_TERMS.items() if sum(k) <= order}


def ring_energy_series(phi_a, phi_b, phi_c, phi_ext, E_J, order=4):
    """Taylor polynomial of the ring energy about zero flux, through ``order``."""
    total = 0.0
    for (i, j, k), coeff in series_coefficients(phi_ext, E_J, order).items():
        total += coeff * phi_a**i * phi_b**j * phi_c**k
    return total


@dataclass(frozen=True)
class KerrCoefficients:
    K_AA: float
    K_BB: float
    K_CC: float
    K_AB: float
    K_AC: float
    K_BC: float


def kerr_coefficients(c: JrmCircuit) -> KerrCoefficients:
    """Quartic monomials with each phi_M replaced by xi_M (m + m^dag), over hbar."""
    coeffs = series_coefficients(c.phi_ext, c.E_J, order=4)
    xa, xb, xc = c.xi("A"), c.xi("B"), c.xi("C")

    def rate(key):
        i, j, k = key
        return coeffs[key] * xa**i * xb**j * xc**k / HBAR

    return KerrCoefficients(
        K_AA=rate((4, 0, 0)),
        K_BB=rate((0, 4, 0)),
        K_CC=rate((0, 0, 4)),
        K_AB=rate((2, 2, 0)),
        K_AC=rate((2, 0, 2)),
        K_BC=rate((0, 2, 2)),
    )


def three_wave_rate(c: JrmCircuit):
    """g3 multiplying (a + a^dag)(b + b^dag)(c + c^dag)."""
    coeff = series_coefficients(c.phi_ext, c.E_J, order=3)[(1, 1, 1)]
    return coeff * c.xi("A") * c.xi("B") * c.xi("C") / HBAR


def kerr_shifted_frequencies(c: JrmCircuit, n_a=0.0, n_b=0.0, n_c=0.0, kerr=None):
    """Mean-field mode frequencies including self- and cross-Kerr shifts."""
    if min(n_a, n_b, n_c) < 0:
        raise ConfigurationError("occupancies must be nonnegative")
    k = kerr or kerr_coefficients(c)
    ha, hb, hc = n_a + 0.5, n_b + 0.5, n_c + 0.5
    omega_A = c.omega_a + 12 * k.K_AA * ha + 4 * k.K_AB * hb + 4 * k.K_AC * hc
    omega_B = c.omega_b + 12 * k.K_BB * hb + 4 * k.K_AB * ha + 4 * k.K_BC * hc
    omega_C = c.omega_c + 12 * k.K_CC * hc + 4 * k.K_AC * ha + 4 * k.K_BC * hb
    return omega_A, omega_B, omega_C


def detunings_from_pumps(delta_Sigma, delta_Delta):
    """(delta_d, delta_c) from the sum- and difference-pump detunings."""
    return (delta_Sigma - delta_Delta) / 2, (delta_Sigma + delta_Delta) / 2


def pumps_from_detunings(delta_d, delta_c):
    """(delta_Sigma, delta_Delta); inverse of :func:`detunings_from_pumps`."""
    return delta_d + delta_c, delta_c - delta_d


@dataclass(frozen=True)
class PumpDrive:
    """Stiff classical pump on mode C: amplitude |<c>| per tone and detunings."""

    c_amp: float
    phase: float = 0.0
    delta_Sigma: float = 0.0
    delta_Delta: float = 0.0

    def __post_init__(self):
        if not self.c_amp >= 0:
            raise ConfigurationError("c_amp must be >= 0")

    @classmethod
    def from_detunings(cls, c_amp, delta_d=0.0, delta_c=0.0, phase=0.0):
        d_sigma, d_delta = pumps_from_detunings(delta_d, delta_c)
        return cls(c_amp, phase, d_sigma, d_delta)

    @property
    def delta_d(self):
        return detunings_from_pumps(self.delta_Sigma, self.delta_Delta)[0]

    @property
    def delta_c(self):
        return detunings_from_pumps(self.delta_Sigma, self.delta_Delta)[1]


def c_amp_from_power(power, transfer):
    """|<c>| = transfer * sqrt(power) for a linear pump line (user-calibrated)."""
    if power < 0 or transfer < 0:
        raise ConfigurationError("pump power and transfer constant must be >= 0")
    return transfer * math.sqrt(power)


@dataclass(frozen=True)
class EffectiveRates:
    g3: float
    g: float
    s_A: float
    s_B: float
    omega_A: float
    omega_B: float
    omega_C: float
    pump_difference: float
    pump_sum: float
    kerr: KerrCoefficients

    def to_system_params(self, drive: PumpDrive, kappa_A, kappa_B, kappa_L=0.0, n_bath=None):
        """Model params; the sign of g is absorbed into the phase of mode B."""
        return SystemParams(
            g=abs(self.g),
            s_A=self.s_A,
            s_B=self.s_B,
            kappa_A=kappa_A,
            kappa_L=kappa_L,
            kappa_B=kappa_B,
            delta_d=drive.delta_d,
            delta_c=drive.delta_c,
            pump_phase=drive.phase,
            n_bath=dict(n_bath or {}),
        )


def effective_rates(c: JrmCircuit, d: PumpDrive, n_a=0.0, n_b=0.0, n_c=None) -> EffectiveRates:
    """Stiff-pump reduction to the two-mode rates and the applied pump frequencies.

    ``n_c`` defaults to the time-averaged pump occupancy ``2 |<c>|^2`` of two
    equal tones. Validity of the stiff-pump picture is assumed, not checked.
    """
    kerr = kerr_coefficients(c)
    g3 = three_wave_rate(c)
    if n_c is None:
        n_c = 2 * d.c_amp**2
    omega_A, omega_B, omega_C = kerr_shifted_frequencies(c, n_a, n_b, n_c, kerr)
    return EffectiveRates(
        g3=g3,
        g=g3 * d.c_amp,
        s_A=2 * kerr.K_AC * d.c_amp**2,
        s_B=2 * kerr.K_BC * d.c_amp**2,
        omega_A=omega_A,
        omega_B=omega_B,
        omega_C=omega_C,
        pump_difference=omega_B - omega_A + d.delta_Delta,
        pump_sum=omega_A + omega_B + d.delta_Sigma,
        kerr=kerr,
    )


def c_amp_for_squeezing_ratio(c: JrmCircuit, ratio_A):
    """Pump amplitude at which |s_A| / |g| equals ``ratio_A``."""
    g3 = three_wave_rate(c)
    k_ac = kerr_coefficients(c).K_AC
    if g3 == 0 or k_ac == 0:
        raise ConfigurationError("ratio undefined: g3 or K_AC vanishes at this flux bias")
    return ratio_A * abs(g3) / (2 * abs(k_ac))
