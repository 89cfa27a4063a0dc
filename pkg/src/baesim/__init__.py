"""Backaction-evading parametric measurement with parasitic single-mode squeezing.

Scattering, SNR, stability, scan-rate enhancement and detuning compensation
for a two-mode (science A, measurement B) pumped system, plus the circuit
reduction of a Josephson ring modulator and a time-domain RWA check.
"""

from .errors import ConfigurationError, NumericalError, UnstableSystemError
from .model import PortConfig, SystemParams, drift_matrix, input_matrix
from .scattering import FrequencyGrid, closed_form_scattering, solve_scattering
from .stability import beta_roots

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "FrequencyGrid",
    "NumericalError",
    "PortConfig",
    "SystemParams",
    "UnstableSystemError",
    "beta_roots",
    "closed_form_scattering",
    "drift_matrix",
    "input_matrix",
    "solve_scattering",
]
