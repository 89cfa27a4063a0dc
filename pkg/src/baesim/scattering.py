"""Frequency-domain scattering of bath input quadratures to port outputs.

Fourier convention: a mode response ``v(t) ~ exp(+i omega t)`` so that
``d/dt -> +i omega``. With this choice the resolvent denominators come out as
``(i omega + kappa/2)`` and a pole with negative imaginary part is unstable.
The output field of each port is ``out = in - sqrt(kappa) * mode``, giving::

    S(omega) = I - Xi^T (i omega I - M)^{-1} Xi
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .model import QUADRATURES, PortConfig, SystemParams, drift_matrix, input_matrix

CONVENTION = "exp(+i*omega*t); d/dt -> +i*omega; out = in - sqrt(kappa)*mode"


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing analysis frequencies (offsets from the half-pump frame)."""

    omega: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.omega, dtype=float))
        if w.ndim != 1 or w.size == 0:
            raise ConfigurationError("frequency grid must be a non-empty 1-d sequence")
        if w.size > 1 and np.any(np.diff(w) <= 0):
            raise ConfigurationError("frequency grid must be strictly increasing")
        object.__setattr__(self, "omega", w)

    @staticmethod
    def _mirrored(positive_of, n):
        # build the upper half and mirror it so the grid is exactly symmetric
        u = np.linspace(-1.0, 1.0, n)
        upper = positive_of(u[n // 2:])
        if n % 2:
            upper[0] = 0.0
            return np.concatenate([-upper[:0:-1], upper])
        return np.concatenate([-upper[::-1], upper])

    @classmethod
    def uniform(cls, half_span, n):
        return cls(cls._mirrored(lambda u: half_span * u, n))

    @classmethod
    def log_dense(cls, half_span, n, core):
        """Symmetric grid whose points cluster within ``core`` of zero."""
        top = np.arcsinh(half_span / core)
        return cls(cls._mirrored(lambda u: core * np.sinh(top * u), n))

    @property
    def is_symmetric(self):
        return bool(np.array_equal(self.omega, -self.omega[::-1]))

    def __len__(self):
        return self.omega.size


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """S(omega) from every bath input quadrature to every port output quadrature.

    ``S`` has shape (n_omega, 2N, 2N) with rows and columns labelled by
    ``ports.labels``; ``internal`` (n_omega, 4, 2N) is the intracavity response
    of (X_A, Y_A, X_B, Y_B). Points where the resolvent is singular are NaN and
    flagged in ``singular``.
    """

    omega: np.ndarray
    S: np.ndarray
    internal: np.ndarray
    params: SystemParams
    ports: PortConfig
    singular: np.ndarray
    convention: str = CONVENTION

    @property
    def labels(self):
        return self.ports.labels

    def entry(self, out, inp):
        """Entry such as ``entry("Y_B", "X_A")``; internal rows are ``"int:X_A"``."""
        col = self.ports.index(inp)
        if out.startswith("int:"):
            return self.internal[:, QUADRATURES.index(out[4:]), col]
        return self.S[:, self.ports.index(out), col]

    def at(self, i):
        return self.S[i]


def _resolvent_solve(m, xi, omega):
    n = omega.size
    a = 1j * omega[:, None, None] * np.eye(4)[None] - m[None]
    rhs = np.broadcast_to(xi.astype(complex), (n,) + xi.shape)
    singular = np.zeros(n, dtype=bool)
    try:
        return np.linalg.solve(a, rhs), singular
    except np.linalg.LinAlgError:
        pass
    out = np.full((n,) + xi.shape, np.nan + 0j)
    for k in range(n):
        try:
            out[k] = np.linalg.solve(a[k], rhs[k])
        except np.linalg.LinAlgError:
            singular[k] = True
    return out, singular


def solve_scattering(p: SystemParams, ports: PortConfig | None = None, grid=None) -> ScatteringMatrix:
    """Generic linear solve of the Langevin equations on a frequency grid."""
    if ports is None:
        ports = PortConfig.default(p)
    if grid is None:
        grid = FrequencyGrid(np.array([0.0]))
    if not isinstance(grid, FrequencyGrid):
        grid = FrequencyGrid(grid)
    m = drift_matrix(p)
    xi = input_matrix(p, ports)
    internal, singular = _resolvent_solve(m, xi, grid.omega)
    s = np.eye(xi.shape[1])[None] - np.einsum("ki,nkj->nij", xi, internal)
    return ScatteringMatrix(grid.omega, s, internal, p, ports, singular)


@dataclass(frozen=True)
class BetaFactors:
    beta_A: complex
    beta_B: complex
    beta: complex


def beta_factors(p: SystemParams, omega):
    """Denominator factors of the closed-form scattering parameters.

    ``kappa_A`` is read as the total science-mode damping ``kappa_A + kappa_L``
    so that the same factors describe the lossy sensing configuration.
    """
    w = np.asarray(omega, dtype=float)
    la = 1j * w + p.kappa_A_total / 2
    lb = 1j * w + p.kappa_B / 2
    beta_a = la**2 - (p.s_A**2 - p.delta_d**2)
    beta_b = lb**2 - (p.s_B**2 - p.delta_c**2)
    beta = beta_a * beta_b - 4 * p.g**2 * (p.s_A + p.delta_d) * (p.s_B + p.delta_c)
    return BetaFactors(beta_a, beta_b, beta)


def closed_form_scattering(p: SystemParams, omega):
    """The twelve closed-form two-port scattering parameters, evaluated term by term.

    Keys are (output, input) label pairs such as ``("Y_B", "X_A")``. Only valid
    for the lossless two-port system with zero pump and squeezing phases.
    """
    if p.kappa_L != 0:
        raise ConfigurationError("closed forms cover the two-port system only (kappa_L must be 0)")
    if p.pump_phase != 0 or p.sms_phase_A != 0 or p.sms_phase_B != 0:
        raise ConfigurationError("closed forms assume zero pump phase and zero squeezing phases")
    w = np.asarray(omega, dtype=float)
    bf = beta_factors(p, w)
    ba, bb, b = bf.beta_A, bf.beta_B, bf.beta
    g, ka, kb = p.g, p.kappa_A, p.kappa_B
    la = 1j * w + ka / 2
    lb = 1j * w + kb / 2
    root = np.sqrt(ka * kb)
    sa_p = p.s_A + p.delta_d
    sb_p = p.s_B + p.delta_c
    sb_m = p.s_B - p.delta_c
    return {
        ("Y_B", "X_A"): 2 * g * la * lb * root / b,
        ("Y_B", "Y_A"): -2 * g * sa_p * lb * root / b,
        ("Y_B", "X_B"): (4 * g**2 * sa_p + ba * sb_m) * kb / b,
        ("Y_B", "Y_B"): 1 - ba * lb * kb / b,
        ("X_A", "X_A"): 1 - bb * la * ka / b,
        ("X_A", "Y_A"): bb * sa_p * ka / b,
        ("X_A", "X_B"): -2 * g * sa_p * lb * root / b,
        ("X_A", "Y_B"): 2 * g * sa_p * sb_p * root / b,
        ("X_B", "X_A"): -2 * g * sb_p * la * root / b,
        ("X_B", "Y_A"): 2 * g * sa_p * sb_p * root / b,
        ("X_B", "X_B"): 1 - ba * lb * kb / b,
        ("X_B", "Y_B"): ba * sb_p * kb / b,
    }
