"""Gains, backaction, quadrature rotation and signal-to-noise spectra.

SNR is normalized as the fraction of the measured output noise power that
originates at the signal port::

    SNR = G_sig / sum_b (2 n_b + 1) G_b

where the sum runs over every bath. It is dimensionless and lies in [0, 1].
Ratios, argmaxes and recovery checks do not depend on this normalization.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .model import rotation
from .scattering import ScatteringMatrix

SNR_NORMALIZATION = "signal-fraction-of-output-noise"


@dataclass(frozen=True, eq=False)
class GainSet:
    omega: np.ndarray
    G_A: np.ndarray
    G_B: np.ndarray
    G_loss: np.ndarray
    B_A: np.ndarray
    B_B: np.ndarray


@dataclass(frozen=True, eq=False)
class SnrSpectrum:
    omega: np.ndarray
    snr: np.ndarray
    theta: float
    normalization: str = SNR_NORMALIZATION


def _row_power(row, cols):
    return np.sum(np.abs(row[..., cols]) ** 2, axis=-1)


def _loss_columns(ports):
    cols = []
    for b in ports.baths:
        if b.name not in (ports.signal, ports.readout):
            cols += ports.columns(b.name)
    return cols


def gains(sm: ScatteringMatrix) -> GainSet:
    """Port gains seen at Y_B and backaction seen at X_A."""
    ports = sm.ports
    sig = ports.columns(ports.signal)
    rd = ports.columns(ports.readout)
    loss = _loss_columns(ports)
    y_b = sm.S[:, rd[1], :]
    x_a = sm.S[:, sig[0], :]
    return GainSet(
        omega=sm.omega,
        G_A=_row_power(y_b, sig),
        G_B=_row_power(y_b, rd),
        G_loss=_row_power(y_b, loss) if loss else np.zeros(sm.omega.size),
        B_A=_row_power(x_a, sig),
        B_B=_row_power(x_a, rd),
    )


def rotate_scattering(sm: ScatteringMatrix, theta) -> ScatteringMatrix:
    """Rotate the readout quadratures by ``theta`` away from X_B.

    Readout output rows become ``R (X_B, Y_B)`` and every input column pair is
    multiplied by ``R^T``, i.e. each readout block transforms as ``R U R^T``.
    After rotation the readout "X" row is ``cos(theta) X_B + sin(theta) Y_B``.
    """
    r = rotation(-theta)  # [[cos, sin], [-sin, cos]]
    s = sm.S.copy()
    rd = sm.ports.columns(sm.ports.readout)
    s[:, rd, :] = np.einsum("ij,njk->nik", r, s[:, rd, :])
    for k in range(len(sm.ports.baths)):
        cols = [2 * k, 2 * k + 1]
        s[:, :, cols] = np.einsum("nij,kj->nik", s[:, :, cols], r)
    return dataclasses.replace(sm, S=s)


def _weights(ports):
    return {b.name: 2 * b.n_th + 1 for b in ports.baths}


def _readout_row(sm, theta):
    rd = sm.ports.columns(sm.ports.readout)
    return np.cos(theta) * sm.S[:, rd[0], :] + np.sin(theta) * sm.S[:, rd[1], :]


def _snr_from_row(row, ports):
    w = _weights(ports)
    sig = _row_power(row, ports.columns(ports.signal))
    noise = sum(w[b.name] * _row_power(row, ports.columns(b.name)) for b in ports.baths)
    return sig / noise


def snr_spectrum(sm: ScatteringMatrix, theta=np.pi / 2) -> SnrSpectrum:
    """SNR(omega) for a single-quadrature readout rotated by ``theta`` from X_B."""
    return SnrSpectrum(sm.omega, _snr_from_row(_readout_row(sm, theta), sm.ports), float(theta))


def snr_vs_theta(sm: ScatteringMatrix, index=0, thetas=None):
    """SNR as a function of readout angle at the ``index``-th grid frequency."""
    if thetas is None:
        thetas = np.deg2rad(np.arange(0, 180.0 + 0.5, 1.0))
    thetas = np.asarray(thetas, dtype=float)
    rd = sm.ports.columns(sm.ports.readout)
    rx = sm.S[index, rd[0], :]
    ry = sm.S[index, rd[1], :]
    rows = np.cos(thetas)[:, None] * rx[None] + np.sin(thetas)[:, None] * ry[None]
    return thetas, _snr_from_row(rows, sm.ports)


def _snr_quadratic_forms(sm, index):
    """2x2 real forms (signal, noise) in the readout direction (cos, sin)."""
    rd = sm.ports.columns(sm.ports.readout)
    v = sm.S[index][rd, :]  # 2 x 2N
    w = _weights(sm.ports)
    weights = np.concatenate([[w[b.name]] * 2 for b in sm.ports.baths])
    sig = np.zeros(v.shape[1])
    sig[sm.ports.columns(sm.ports.signal)] = 1.0
    q_sig = np.real((v * sig) @ v.conj().T)
    q_noise = np.real((v * weights) @ v.conj().T)
    return q_sig, q_noise


def max_snr_over_theta(sm: ScatteringMatrix, index=0, coarse_deg=1.0, xtol=1e-6):
    """Maximize SNR over the readout angle at one frequency.

    A coarse scan at ``coarse_deg`` resolution seeds a golden-section search
    on the bracketing interval. The result is then polished with the exact
    maximizer, the top eigenvector of ``noise^-1 signal``, whenever that
    lands inside the golden bracket. Returns ``(theta_opt, snr_max)`` with
    theta in [0, pi).
    """
    thetas = np.deg2rad(np.arange(-coarse_deg, 180.0 + coarse_deg + 1e-9, coarse_deg))
    _, values = snr_vs_theta(sm, index, thetas)
    k = int(np.argmax(values[1:-1])) + 1
    q_sig, q_noise = _snr_quadratic_forms(sm, index)

    def neg(theta):
        u = np.array([np.cos(theta), np.sin(theta)])
        return -(u @ q_sig @ u) / (u @ q_noise @ u)

    a, b, c = thetas[k - 1], thetas[k], thetas[k + 1]
    if not (neg(b) < neg(a) and neg(b) < neg(c)):
        return float(np.mod(b, np.pi)), float(values[k])
    res = minimize_scalar(neg, bracket=(a, b, c), method="golden", tol=xtol / max(abs(b), 1.0))
    theta = float(res.x)
    ev, vec = np.linalg.eig(np.linalg.solve(q_noise, q_sig))
    top = vec[:, int(np.argmax(ev.real))].real
    exact = np.arctan2(top[1], top[0])
    exact += np.pi * np.round((theta - exact) / np.pi)
    if abs(exact - theta) <= 10 * xtol and neg(exact) <= neg(theta):
        theta = float(exact)
    return float(np.mod(theta, np.pi)), float(-neg(theta))


def variational_snr(sm: ScatteringMatrix) -> SnrSpectrum:
    """Envelope max_theta SNR(omega, theta): frequency-dependent readout angle."""
    best = np.array([max_snr_over_theta(sm, i)[1] for i in range(sm.omega.size)])
    return SnrSpectrum(sm.omega, best, float("nan"), SNR_NORMALIZATION + "+variational")


def variational_snr_exact(sm: ScatteringMatrix) -> np.ndarray:
    """max_theta SNR(omega, theta) as the largest generalized eigenvalue.

    SNR(theta) is a ratio of two 2x2 quadratic forms in (cos, sin), so its
    maximum is the top eigenvalue of noise^-1 @ signal. Used for fast
    variational scan rates and as a check on the golden-section search.
    """
    rd = sm.ports.columns(sm.ports.readout)
    v = sm.S[:, rd, :]  # n x 2 x 2N
    w = _weights(sm.ports)
    weights = np.concatenate([[w[b.name]] * 2 for b in sm.ports.baths])
    sig = np.zeros(v.shape[2])
    sig[sm.ports.columns(sm.ports.signal)] = 1.0
    q_sig = np.real(np.einsum("nik,k,njk->nij", v, sig, v.conj()))
    q_noise = np.real(np.einsum("nik,k,njk->nij", v, weights, v.conj()))
    ev = np.linalg.eigvals(np.linalg.solve(q_noise, q_sig))
    return np.max(ev.real, axis=-1)
