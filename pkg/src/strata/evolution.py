"""Symbol exponentials, exact linearized evolution, vorticity compatibility.

Hyperbolicity is equivalent to uniformly bounded oscillatory exponentials
exp(-i tau A(u, theta)); this module makes that definition falsifiable:
``mode_growth`` measures the sup-norm trend of the exponential, and
``evolve_linear`` solves the frozen-coefficient Cauchy problem exactly, one
Fourier mode at a time, on a periodic square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model_matrices import (
    AugmentedState,
    LayerState,
    PhysParams,
    build_A_theta,
    build_aug_A_theta,
)

__all__ = [
    "ModeGrowthReport",
    "PeriodicField",
    "mode_growth",
    "evolve_linear",
    "well_posedness_bound",
    "vorticity_compatibility",
]

CONDITION_LIMIT = 1e8


@dataclass(frozen=True)
class ModeGrowthReport:
    """Measured sup-norm of exp(-i tau A(u, theta)) over a tau grid."""

    theta: float
    tau_max: float
    n_tau: int
    sup_norm: float
    growth_rate: float
    condition: float

    def __post_init__(self):
        if self.sup_norm < 1.0 - 1e-12:
            raise ValueError(f"sup over tau includes tau=0, got {self.sup_norm}")


@dataclass(frozen=True)
class PeriodicField:
    """Perturbation samples on an N x N periodic grid over [0, L)^2.

    values has shape (N, N, m) with m = 6 (base) or 8 (augmented); axis 0
    is x, axis 1 is y.
    """

    values: np.ndarray
    length: float = 2.0 * math.pi

    def __post_init__(self):
        v = np.asarray(self.values, float)
        if v.ndim != 3 or v.shape[0] != v.shape[1] or v.shape[2] not in (6, 8):
            raise ValueError(f"expected (N, N, 6|8) samples, got shape {v.shape}")
        n = v.shape[0]
        if n < 2 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two, got {n}")
        if not np.isfinite(v).all():
            raise ValueError("field values must be finite")
        if not self.length > 0.0:
            raise ValueError("period length must be positive")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def n_components(self) -> int:
        return self.values.shape[2]

    @property
    def spacing(self) -> float:
        return self.length / self.n

    def norm_l2(self) -> float:
        """Discrete L2 norm (cell-area weighted)."""
        return float(np.linalg.norm(self.values) * self.spacing)


def _expm_minus_i_tau(A: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i tau A) through the eigenbasis, expm fallback near collisions."""
    w, V = np.linalg.eig(A)
    cond = np.linalg.cond(V)
    if np.isfinite(cond) and cond < CONDITION_LIMIT:
        return (V * np.exp(-1j * tau * w)) @ np.linalg.inv(V)
    return scipy.linalg.expm(-1j * tau * A)


def mode_growth(
    s,
    p: PhysParams,
    theta: float = 0.0,
    tau_max: float = 20.0,
    n_tau: int = 64,
) -> ModeGrowthReport:
    """Sup-norm of the symbol exponential over tau in [0, tau_max].

    The growth rate is fitted on log ||exp(-i tau A)|| over the second half
    of the grid: about zero for hyperbolic diagonalizable states, and equal
    to max Im(mu) when the spectrum has a complex pair.
    """
    if n_tau < 16:
        raise ValueError(f"need n_tau >= 16 grid points, got {n_tau}")
    if isinstance(s, AugmentedState):
        A = build_aug_A_theta(s, p, theta)
    elif isinstance(s, LayerState):
        A = build_A_theta(s, p, theta)
    else:
        A = np.asarray(s, float)
    w, V = np.linalg.eig(A)
    cond = np.linalg.cond(V)
    taus = np.linspace(0.0, tau_max, n_tau)
    norms = np.array([np.linalg.norm(_expm_minus_i_tau(A, t), 2) for t in taus])
    half = n_tau // 2
    rate = float(np.polyfit(taus[half:], np.log(np.maximum(norms[half:], 1e-300)), 1)[0])
    return ModeGrowthReport(
        theta=theta,
        tau_max=tau_max,
        n_tau=n_tau,
        sup_norm=float(norms.max()),
        growth_rate=rate,
        condition=float(cond),
    )


def well_posedness_bound(s, p: PhysParams, n_theta: int = 16) -> float:
    """Empirical constant c_T: worst eigenbasis condition over directions.

    For a hyperbolic diagonalizable background every mode satisfies
    ||exp(-i tau A(theta))|| <= cond(V(theta)), uniformly in tau; the bound
    reported here is the max over a theta grid.  Infinite when some
    direction has a complex pair.
    """
    build = build_aug_A_theta if isinstance(s, AugmentedState) else build_A_theta
    worst = 1.0
    for theta in np.linspace(0.0, math.pi, n_theta, endpoint=False):
        A = build(s, p, theta)
        w, V = np.linalg.eig(A)
        if np.abs(w.imag).max() > 1e-9 * (1.0 + np.abs(w).max()):
            return math.inf
        worst = max(worst, float(np.linalg.cond(V)))
    return worst


def _wavenumbers(n: int, length: float) -> np.ndarray:
    return 2.0 * math.pi * np.fft.fftfreq(n, d=length / n)


def evolve_linear(
    background, p: PhysParams, init: PeriodicField, T: float
) -> PeriodicField:
    """Exact solution of the frozen-coefficient linear system at time T.

    Each Fourier mode k evolves by exp(-i T |k| A(u, theta_k)) with
    theta_k = arg(k); Coriolis and topography do not enter the cited linear
    problem and are excluded.  The k = 0 mode is constant in time.
    """
    if isinstance(background, AugmentedState):
        build = build_aug_A_theta
        m = 8
    else:
        build = build_A_theta
        m = 6
    if init.n_components != m:
        raise ValueError(
            f"field has {init.n_components} components, background expects {m}"
        )
    n = init.n
    k1d = _wavenumbers(n, init.length)
    vhat = np.fft.fft2(init.values, axes=(0, 1))
    out = np.empty_like(vhat)
    # group modes by direction: A depends on theta_k only, |k| enters as time
    for i in range(n):
        for j in range(n):
            kx, ky = k1d[i], k1d[j]
            kn = math.hypot(kx, ky)
            if kn == 0.0:
                out[i, j] = vhat[i, j]
                continue
            A = build(background, p, math.atan2(ky, kx))
            out[i, j] = _expm_minus_i_tau(A, T * kn) @ vhat[i, j]
    values = np.fft.ifft2(out, axes=(0, 1)).real
    return PeriodicField(values=values, length=init.length)


def _spectral_curl(vx: np.ndarray, vy: np.ndarray, length: float) -> np.ndarray:
    """d(vy)/dx - d(vx)/dy on the periodic grid, exact for band-limited data."""
    n = vx.shape[0]
    k = _wavenumbers(n, length)
    kx = k[:, None]
    ky = k[None, :]
    return np.fft.ifft2(
        1j * kx * np.fft.fft2(vy) - 1j * ky * np.fft.fft2(vx)
    ).real


def vorticity_compatibility(
    background: AugmentedState,
    p: PhysParams,
    init: PeriodicField,
    times=(0.0, 1.0, 2.0, 5.0),
):
    """Track the vorticity mismatch phi_i = w_i - (dx v_i - dy u_i) in time.

    The linearized augmented evolution transports the mismatch without
    changing it, so phi_i(t) = phi_i(0) mode by mode; in particular an
    initially compatible field (w_i the exact curl of the layer velocity)
    stays compatible at every later time.

    Returns
    -------
    dict with per-time max|phi_1|, max|phi_2| and the drift
    max_t max_i |phi_i(t) - phi_i(0)|.
    """
    if init.n_components != 8:
        raise ValueError("vorticity compatibility needs an 8-component field")

    def mismatches(field: PeriodicField):
        v = field.values
        phi1 = v[:, :, 6] - _spectral_curl(v[:, :, 2], v[:, :, 4], field.length)
        phi2 = v[:, :, 7] - _spectral_curl(v[:, :, 3], v[:, :, 5], field.length)
        return phi1, phi2

    phi1_0, phi2_0 = mismatches(init)
    report = {"times": list(times), "max_phi1": [], "max_phi2": [], "drift": 0.0}
    drift = 0.0
    for t in times:
        field_t = init if t == 0.0 else evolve_linear(background, p, init, t)
        phi1, phi2 = mismatches(field_t)
        report["max_phi1"].append(float(np.abs(phi1).max()))
        report["max_phi2"].append(float(np.abs(phi2).max()))
        drift = max(
            drift,
            float(np.abs(phi1 - phi1_0).max()),
            float(np.abs(phi2 - phi2_0).max()),
        )
    report["drift"] = drift
    return report
