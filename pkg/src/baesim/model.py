"""Two-mode parametric model in the real quadrature basis.

State vector ordering is fixed everywhere in the package::

    v = (X_A, Y_A, X_B, Y_B)

Mode A is the science mode, mode B the measurement mode. All rates are
angular frequencies in one caller-chosen unit; the model is invariant under
a uniform rescaling of every rate (and of the analysis frequency).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

QUADRATURES = ("X_A", "Y_A", "X_B", "Y_B")
QUADRATURE_INDEX = {name: i for i, name in enumerate(QUADRATURES)}
MODES = ("A", "B")


@dataclass(frozen=True)
class SystemParams:
    """Effective rates of the pumped two-mode system.

    ``kappa_A`` couples mode A to the signal port, ``kappa_L`` to its internal
    loss bath and ``kappa_B`` couples mode B to the readout port.
    ``sms_phase_A``/``sms_phase_B`` rotate the single-mode squeezing axis away
    from the Hamiltonian (pump-locked) orientation; zero is the circuit case.
    ``n_bath`` maps a port name (``"A"``, ``"L"``, ``"B"``) to its thermal
    occupancy.
    """

    g: float
    s_A: float = 0.0
    s_B: float = 0.0
    kappa_A: float = 0.0
    kappa_L: float = 0.0
    kappa_B: float = 0.0
    delta_d: float = 0.0
    delta_c: float = 0.0
    pump_phase: float = 0.0
    sms_phase_A: float = 0.0
    sms_phase_B: float = 0.0
    n_bath: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("kappa_A", "kappa_L", "kappa_B", "g"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigurationError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("s_A", "s_B", "delta_d", "delta_c", "pump_phase", "sms_phase_A", "sms_phase_B"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        for port, n in self.n_bath.items():
            if n < 0:
                raise ConfigurationError(f"thermal occupancy of port {port!r} is negative")

    @property
    def kappa_A_total(self):
        """Total damping of the science mode (signal port plus internal loss)."""
        return self.kappa_A + self.kappa_L

    @property
    def cooperativity(self):
        return 4 * self.g**2 / (self.kappa_B * self.kappa_A_total)

    @property
    def max_rate(self):
        rates = [self.g, self.s_A, self.s_B, self.kappa_A_total, self.kappa_B, self.delta_d, self.delta_c]
        return max(abs(r) for r in rates)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def with_optimal_detunings(self):
        """Detunings that cancel the squeezing on X_A and Y_B."""
        return self.replace(delta_d=-self.s_A, delta_c=self.s_B)

    def scaled_pump(self, lam):
        """Scale the pump amplitude by ``lam``: g is linear, squeezing quadratic."""
        return self.replace(g=lam * self.g, s_A=lam**2 * self.s_A, s_B=lam**2 * self.s_B)

    def rescaled(self, factor):
        """Uniformly rescale every rate (phases and occupancies untouched)."""
        return self.replace(
            g=factor * self.g,
            s_A=factor * self.s_A,
            s_B=factor * self.s_B,
            kappa_A=factor * self.kappa_A,
            kappa_L=factor * self.kappa_L,
            kappa_B=factor * self.kappa_B,
            delta_d=factor * self.delta_d,
            delta_c=factor * self.delta_c,
        )


@dataclass(frozen=True)
class Bath:
    name: str
    mode: str
    kappa: float
    n_th: float = 0.0


@dataclass(frozen=True)
class PortConfig:
    """Ordered baths; each contributes an (X, Y) input and output column pair.

    By convention the bath named ``"A"`` carries the signal and the bath
    named ``"B"`` is the readout port. Any other bath is treated as loss.
    """

    baths: tuple

    signal = "A"
    readout = "B"

    @classmethod
    def default(cls, p: SystemParams, include_loss=None):
        """Signal and readout ports, plus the loss bath when ``kappa_L > 0``."""
        if include_loss is None:
            include_loss = p.kappa_L > 0
        baths = [Bath("A", "A", p.kappa_A, p.n_bath.get("A", 0.0))]
        if include_loss:
            baths.append(Bath("L", "A", p.kappa_L, p.n_bath.get("L", 0.0)))
        baths.append(Bath("B", "B", p.kappa_B, p.n_bath.get("B", 0.0)))
        return cls(tuple(baths))

    @property
    def names(self):
        return tuple(b.name for b in self.baths)

    @property
    def labels(self):
        return tuple(f"{q}_{b.name}" for b in self.baths for q in ("X", "Y"))

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown port quadrature {label!r}; have {self.labels}") from None

    def bath(self, name):
        for b in self.baths:
            if b.name == name:
                return b
        raise KeyError(name)

    def columns(self, name):
        """Input/output column indices (X, Y) of the named bath."""
        k = self.names.index(name)
        return [2 * k, 2 * k + 1]

    def validate(self, p: SystemParams, rtol=1e-12):
        if len(set(self.names)) != len(self.names):
            raise ConfigurationError(f"duplicate bath names in {self.names}")
        totals = {"A": 0.0, "B": 0.0}
        for b in self.baths:
            if b.mode not in totals:
                raise ConfigurationError(f"bath {b.name!r} couples to unknown mode {b.mode!r}")
            if b.kappa < 0 or b.n_th < 0:
                raise ConfigurationError(f"bath {b.name!r} has negative rate or occupancy")
            totals[b.mode] += b.kappa
        expected = {"A": p.kappa_A_total, "B": p.kappa_B}
        for mode in MODES:
            if not np.isclose(totals[mode], expected[mode], rtol=rtol, atol=0.0):
                raise ConfigurationError(
                    f"bath couplings on mode {mode} sum to {totals[mode]!r}, "
                    f"but the params give total damping {expected[mode]!r}"
                )


def rotation(theta):
    """2x2 counter-clockwise rotation acting on an (X, Y) pair."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def quadrature_rotation(theta):
    """Rotate both modes' quadrature pairs by ``theta``."""
    r = rotation(theta)
    out = np.zeros((4, 4))
    out[:2, :2] = r
    out[2:, 2:] = r
    return out


def symplectic_form(n_pairs):
    """Block-diagonal J with [[0, 1], [-1, 0]] blocks, one per (X, Y) pair."""
    return np.kron(np.eye(n_pairs), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _quadrature_axes(theta):
    # X_theta = cos X + sin Y and its conjugate Y_theta = -sin X + cos Y
    x = np.array([np.cos(theta), np.sin(theta)])
    y = np.array([-np.sin(theta), np.cos(theta)])
    return x, y


def hamiltonian_matrix(p: SystemParams):
    """Symmetric matrix H with H_int = v^T H v / 2 in the quadrature basis.

    Built term by term: the BAE coupling ``2 g X_{A,phi/2} X_{B,phi/2}``, the
    single-mode squeezing ``s/2 [cos(psi)(X'^2 - Y'^2) + sin(psi)(X'Y' + Y'X')]``
    written in the pump-rotated quadratures X', Y', and the frame detunings
    ``-delta/2 (X^2 + Y^2)``.
    """
    h = np.zeros((4, 4))
    half = p.pump_phase / 2
    xa, _ = _quadrature_axes(half)
    xb, _ = _quadrature_axes(half)
    h[0:2, 2:4] += 2 * p.g * np.outer(xa, xb)
    h[2:4, 0:2] += 2 * p.g * np.outer(xb, xa)

    for sl, s, psi, delta in (
        (slice(0, 2), p.s_A, p.sms_phase_A, p.delta_d),
        (slice(2, 4), p.s_B, p.sms_phase_B, p.delta_c),
    ):
        x, y = _quadrature_axes(half)
        squeeze = np.outer(x, x) - np.outer(y, y)
        cross = np.outer(x, y) + np.outer(y, x)
        h[sl, sl] += s * (np.cos(psi) * squeeze + np.sin(psi) * cross)
        h[sl, sl] -= delta * np.eye(2)
    return h


def drift_matrix(p: SystemParams):
    """Real 4x4 M with dv/dt = M v + (input noise terms).

    With ``pump_phase = sms_phase = 0`` the rows are, for example,
    ``dY_B/dt = -2g X_A - (s_B - delta_c) X_B - kappa_B/2 Y_B``.
    """
    j = symplectic_form(2)
    damping = np.diag([p.kappa_A_total, p.kappa_A_total, p.kappa_B, p.kappa_B]) / 2
    return j @ hamiltonian_matrix(p) - damping


def input_matrix(p: SystemParams, ports: PortConfig | None = None):
    """4 x 2N coupling of bath input quadratures into the mode equations."""
    if ports is None:
        ports = PortConfig.default(p)
    ports.validate(p)
    xi = np.zeros((4, 2 * len(ports.baths)))
    for k, b in enumerate(ports.baths):
        m = 2 * MODES.index(b.mode)
        root = np.sqrt(b.kappa)
        xi[m, 2 * k] = root
        xi[m + 1, 2 * k + 1] = root
    return xi
