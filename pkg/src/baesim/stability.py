"""Stability from the poles of the scattering parameters.

The poles are the roots in omega of the determinant ``beta(omega) =
det(i omega I - M)``, a quartic. A root with negative imaginary part grows as
``exp(+i omega t)`` and marks an unstable system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError
from .model import SystemParams, drift_matrix
from .sweep import SweepResult

MARGINAL_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Quartic coefficients (highest power of omega first), roots and verdict."""

    coefficients: np.ndarray
    roots: np.ndarray
    verdict: str
    margin: float
    tolerance: float
    iterations: int

    @property
    def stable(self):
        return self.verdict == "stable"


def beta_coefficients(p: SystemParams):
    """Coefficients of beta(omega), highest power first.

    Zero squeezing phases use the factorized form
    ``beta_A beta_B - 4 g^2 (s_A + delta_d)(s_B + delta_c)``; otherwise the
    characteristic polynomial of the drift matrix is built from traces
    (Faddeev-LeVerrier). The pump phase is a rotation and leaves beta unchanged.
    """
    if p.sms_phase_A == 0 and p.sms_phase_B == 0:
        P = np.polynomial.polynomial
        la = np.array([p.kappa_A_total / 2, 1j])
        lb = np.array([p.kappa_B / 2, 1j])
        beta_a = P.polysub(P.polymul(la, la), [p.s_A**2 - p.delta_d**2])
        beta_b = P.polysub(P.polymul(lb, lb), [p.s_B**2 - p.delta_c**2])
        beta = P.polysub(P.polymul(beta_a, beta_b), [4 * p.g**2 * (p.s_A + p.delta_d) * (p.s_B + p.delta_c)])
        return np.asarray(beta[::-1], dtype=complex)
    char = charpoly(drift_matrix(p))  # det(x I - M), x = i omega
    n = char.size - 1
    return np.array([char[k] * (1j) ** (n - k) for k in range(n + 1)], dtype=complex)


def charpoly(m):
    """Characteristic polynomial det(x I - m), highest power first."""
    n = m.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(m)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(m @ mk) / k)
    return np.array(coeffs)


def durand_kerner(coeffs, max_iter=500):
    """All roots of a polynomial by simultaneous (Weierstrass) iteration.

    The variable is rescaled so the roots lie within radius ~1, and seeds sit
    on the unit circle rotated off the axes. Iteration stops once every
    iterate is a root to within the rounding error of evaluating the
    polynomial there (this also terminates the slow linear convergence onto
    multiple roots). Returns ``(roots, iterations)``.
    """
    a = np.asarray(coeffs, dtype=complex)
    if a[0] == 0:
        raise ConfigurationError("leading coefficient is zero")
    a = a / a[0]
    n = a.size - 1
    if n == 0:
        return np.zeros(0, dtype=complex), 0
    scale = max(np.max(np.abs(a[1:]) ** (1.0 / np.arange(1, n + 1))), np.finfo(float).tiny)
    b = a / scale ** np.arange(n + 1)
    z = np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    eps = np.finfo(float).eps
    it = 0
    for it in range(1, max_iter + 1):
        pz = np.polyval(b, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        z = z - pz / np.prod(diff, axis=1)
        bound = 16 * eps * np.polyval(np.abs(b), np.abs(z))
        if np.all(np.abs(np.polyval(b, z)) <= bound):
            break
    return z * scale, it


def newton_polish(coeffs, roots, steps=4):
    a = np.asarray(coeffs, dtype=complex)
    da = np.polyder(a)
    out = roots.copy()
    for i, z in enumerate(out):
        best = abs(np.polyval(a, z))
        for _ in range(steps):
            d = np.polyval(da, z)
            if d == 0:
                break
            trial = z - np.polyval(a, z) / d
            r = abs(np.polyval(a, trial))
            if r < best:
                z, best = trial, r
            else:
                break
        out[i] = z
    return out


def _rounding_bound(coeffs, z):
    return 16 * np.finfo(float).eps * np.polyval(np.abs(coeffs), abs(z))


def _split(points, idx):
    """Two sub-clusters seeded by the farthest pair of points."""
    far = max(((i, j) for i in idx for j in idx if i < j), key=lambda ij: abs(points[ij[0]] - points[ij[1]]))
    left = [k for k in idx if abs(points[k] - points[far[0]]) <= abs(points[k] - points[far[1]])]
    return left, [k for k in idx if k not in left]


def refine_clusters(coeffs, roots, radius):
    """Resolve clusters of nearly equal roots as one multiple root.

    Any iteration finds a root of multiplicity m only to ~eps**(1/m). For a
    cluster of m iterates we instead solve for the simple root of the
    (m-1)-th derivative by Newton's method, starting at the centroid, and
    accept it when it is a root of the polynomial to rounding accuracy. A
    rejected cluster (for example two nearby double roots) is split at its
    widest pair and each part is tried again; singletons are kept as found.
    """
    a = np.asarray(coeffs, dtype=complex)
    z = roots.copy()
    labels = list(range(z.size))
    for i in range(z.size):
        for j in range(i + 1, z.size):
            if abs(z[i] - z[j]) < radius:
                old, new = labels[j], labels[i]
                labels = [new if lab == old else lab for lab in labels]
    pending = [[k for k, v in enumerate(labels) if v == lab] for lab in sorted(set(labels))]
    while pending:
        idx = pending.pop()
        m = len(idx)
        if m < 2:
            continue
        d = np.polyder(a, m - 1)
        dd = np.polyder(d)
        c = np.mean(z[idx])
        for _ in range(20):
            slope = np.polyval(dd, c)
            if slope == 0:
                break
            step = np.polyval(d, c) / slope
            c = c - step
            if abs(step) <= 4 * np.finfo(float).eps * max(abs(c), radius):
                break
        if abs(np.polyval(a, c)) <= _rounding_bound(a, c):
            z[idx] = c
        else:
            pending.extend(_split(z, idx))
    return z


def beta_roots(p: SystemParams) -> StabilityReport:
    """Roots of beta and the stable / unstable / marginal classification."""
    coeffs = beta_coefficients(p)
    scale = max(p.max_rate, np.finfo(float).tiny)
    z, iterations = durand_kerner(coeffs)
    z = newton_polish(coeffs, z)
    z = refine_clusters(coeffs, z, 1e-2 * scale)
    residual = np.max(np.abs(np.polyval(coeffs, z)))
    bound = 1e-10 * abs(coeffs[0]) * scale**4
    if not np.all(np.isfinite(z)) or residual > bound:
        raise NumericalError(
            "root finding for beta did not converge",
            {"coefficients": coeffs, "roots": z, "residual": residual, "bound": bound, "iterations": iterations},
        )
    order = np.lexsort((z.real, z.imag))
    z = z[order]
    margin = float(np.min(z.imag))
    tol = MARGINAL_RTOL * scale
    if margin > tol:
        verdict = "stable"
    elif margin < -tol:
        verdict = "unstable"
    else:
        verdict = "marginal"
    return StabilityReport(coeffs, z, verdict, margin, tol, iterations)


def stability_map(p: SystemParams, delta_d_values, delta_c_values) -> SweepResult:
    """Margin and verdict over a grid of differential and common detunings."""
    dd = np.asarray(delta_d_values, dtype=float)
    dc = np.asarray(delta_c_values, dtype=float)
    margin = np.empty((dd.size, dc.size))
    stable = np.zeros((dd.size, dc.size), dtype=bool)
    for i, x in enumerate(dd):
        for j, y in enumerate(dc):
            rep = beta_roots(p.replace(delta_d=x, delta_c=y))
            margin[i, j] = rep.margin
            stable[i, j] = rep.stable
    return SweepResult(
        axes={"delta_d": dd, "delta_c": dc},
        values={"margin": margin, "stable": stable},
        params=p,
        meta={"kind": "stability-map"},
    )


POLICIES = ("zero", "fixed", "tracking-optimal")


def detuned_for_policy(p: SystemParams, policy, offsets=(0.0, 0.0)):
    """Apply a detuning policy to (already pump-scaled) params."""
    if policy == "zero":
        return p.replace(delta_d=0.0, delta_c=0.0)
    if policy == "fixed":
        return p
    if policy == "tracking-optimal":
        return p.replace(delta_d=-p.s_A + offsets[0], delta_c=p.s_B + offsets[1])
    raise ConfigurationError(f"unknown detuning policy {policy!r}; choose from {POLICIES}")


@dataclass(frozen=True)
class CriticalCooperativity:
    c_star: float | None
    lam_star: float | None
    verdict: str  # "onset" or "open"
    policy: str
    c_max: float


def critical_cooperativity(
    p: SystemParams, policy="zero", offsets=(0.0, 0.0), c_min=1e-2, c_max=1e3, ratio=1.05, rtol=1e-4
) -> CriticalCooperativity:
    """First instability onset as the pump is scaled by lambda.

    ``p`` holds the anchor rates at lambda = 1; g scales as lambda and the
    squeezing rates as lambda**2. Cooperativity is scanned upward on a
    geometric grid from ``c_min``; the first stable-to-unstable step is refined
    by bisection to relative ``rtol`` in C.
    """
    c1 = p.cooperativity
    lam_lo = np.sqrt(c_min / c1)
    lam_cap = np.sqrt(c_max / c1)

    def stable_at(lam):
        return beta_roots(detuned_for_policy(p.scaled_pump(lam), policy, offsets)).stable

    if not stable_at(lam_lo):
        return CriticalCooperativity(c_min, lam_lo, "onset", policy, c_max)
    lam = lam_lo
    lam_hi = None
    while lam < lam_cap:
        nxt = min(lam * ratio, lam_cap)
        if not stable_at(nxt):
            lam_hi = nxt
            break
        lam = nxt
    if lam_hi is None:
        return CriticalCooperativity(None, None, "open", policy, c_max)
    lo, hi = lam, lam_hi
    while (hi**2 - lo**2) > rtol * lo**2:
        mid = 0.5 * (lo + hi)
        if stable_at(mid):
            lo = mid
        else:
            hi = mid
    lam_star = 0.5 * (lo + hi)
    return CriticalCooperativity(c1 * lam_star**2, lam_star, "onset", policy, c_max)


def stable_detuning_interval(p: SystemParams, span, n=401, rtol=1e-6):
    """Width of the stable delta_d interval around -s_A at delta_c = s_B.

    Scans offsets in [-span, span] around the compensation point, takes the
    contiguous stable run containing it and refines both edges by bisection.
    Returns ``(lower_offset, upper_offset)``; an edge equal to ``-span`` or
    ``span`` means the band is open on that side within the scan.
    """
    base = p.with_optimal_detunings()

    def ok(offset):
        return beta_roots(base.replace(delta_d=base.delta_d + offset)).stable

    offs = np.linspace(-span, span, n)
    centre = n // 2
    flags = np.array([ok(x) for x in offs])
    if not flags[centre]:
        return 0.0, 0.0
    edges = []
    for direction in (-1, 1):
        k = centre
        while 0 <= k + direction < n and flags[k + direction]:
            k += direction
        if k + direction < 0 or k + direction >= n:
            edges.append(offs[k])
            continue
        a, b = offs[k], offs[k + direction]
        while abs(b - a) > rtol * span:
            mid = 0.5 * (a + b)
            if ok(mid):
                a = mid
            else:
                b = mid
        edges.append(a)
    return edges[0], edges[1]
