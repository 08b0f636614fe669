import math

import numpy as np
import pytest

from strata.evolution import (
    PeriodicField,
    evolve_linear,
    mode_growth,
    vorticity_compatibility,
    well_posedness_bound,
)
from strata.eigen import spectrum
from strata.model_matrices import (
    AugmentedState,
    LayerState,
    NondimState,
    PhysParams,
    state_from_nondim,
)


RNG = np.random.default_rng(5)
N = 32
L = 2.0 * math.pi


def band_limited(n, m, rng=RNG):
    vals = rng.standard_normal((n, n, m))
    vhat = np.fft.fft2(vals, axes=(0, 1))
    k = np.abs(np.fft.fftfreq(n) * n)
    vhat[(k[:, None] > n // 4) | (k[None, :] > n // 4)] = 0.0
    return PeriodicField(np.fft.ifft2(vhat, axes=(0, 1)).real)


def spectral_curl(vx, vy, length=L):
    n = vx.shape[0]
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=length / n)
    return np.fft.ifft2(
        1j * k[:, None] * np.fft.fft2(vy) - 1j * k[None, :] * np.fft.fft2(vx)
    ).real


def test_mode_growth_diagonal_matrix():
    A = np.diag([1.0, -2.0, 0.5, 3.0, 0.0, -1.0])
    r = mode_growth(A, PhysParams(gamma=0.5), tau_max=10.0, n_tau=32)
    assert r.sup_norm == pytest.approx(1.0, abs=1e-12)
    assert abs(r.growth_rate) < 1e-12


def test_mode_growth_requires_enough_points():
    with pytest.raises(ValueError):
        mode_growth(np.eye(6), PhysParams(gamma=0.5), n_tau=8)


def test_hyperbolic_sup_norm_bounded():
    p = PhysParams(gamma=0.9, g=1.0)
    s = LayerState(1.0, 1.0, 0.0, 0.1, 0.0, 0.0)
    r1 = mode_growth(s, p, theta=0.4, tau_max=20.0)
    r2 = mode_growth(s, p, theta=0.4, tau_max=40.0)
    assert r1.sup_norm >= 1.0
    assert r2.sup_norm <= r1.sup_norm * 1.01
    assert r1.sup_norm <= r1.condition * 1.01


def test_gap_growth_matches_oracle():
    p = PhysParams(gamma=0.5, g=1.0)
    s = state_from_nondim(NondimState(1.5, 0.0, 1.0), p)
    r = mode_growth(s, p, tau_max=30.0)
    oracle = max(abs(v.imag) for v in spectrum(s, p).values())
    assert r.growth_rate == pytest.approx(oracle, rel=0.05)


def test_unit_determinant_modulus_hyperbolic():
    """|det exp(-i tau A)| = 1 when the spectrum is real."""
    import scipy.linalg

    p = PhysParams(gamma=0.9, g=1.0)
    s = LayerState(1.0, 0.8, 0.1, 0.3, -0.2, 0.1)
    from strata.model_matrices import build_A_theta

    A = build_A_theta(s, p, 0.7)
    for tau in (0.5, 3.0, 11.0):
        E = scipy.linalg.expm(-1j * tau * A)
        assert abs(abs(np.linalg.det(E)) - 1.0) < 1e-10


def test_evolve_zero_init():
    p = PhysParams(gamma=0.9, g=1.0)
    s = LayerState(1.0, 1.0, 0.0, 0.1, 0.0, 0.0)
    init = PeriodicField(np.zeros((N, N, 6)))
    out = evolve_linear(s, p, init, 3.0)
    assert np.abs(out.values).max() == 0.0


def test_evolve_norm_bound_hyperbolic():
    p = PhysParams(gamma=0.9, g=1.0)
    s = LayerState(1.0, 1.0, 0.0, 0.1, 0.0, 0.0)
    init = band_limited(N, 6)
    c_t = well_posedness_bound(s, p)
    assert math.isfinite(c_t)
    for T in (1.0, 4.0, 10.0):
        out = evolve_linear(s, p, init, T)
        assert out.norm_l2() <= c_t * init.norm_l2() * (1.0 + 1e-9)


def test_evolve_single_mode_gap_growth():
    p = PhysParams(gamma=0.5, g=1.0)
    s = state_from_nondim(NondimState(1.5, 0.0, 1.0), p)
    x = np.arange(N) * (L / N)
    vals = np.zeros((N, N, 6))
    vals[:, :, 0] = np.cos(2.0 * x)[:, None]  # single mode k = (2, 0)
    init = PeriodicField(vals)
    rate = max(abs(v.imag) for v in spectrum(s, p).values())
    # once the growing eigenvector dominates, norms gain exp(rate |k| dt)
    n1 = evolve_linear(s, p, init, 4.0).norm_l2()
    n2 = evolve_linear(s, p, init, 6.0).norm_l2()
    measured = math.log(n2 / n1) / (2.0 * 2.0)  # |k| = 2, dt = 2
    assert measured == pytest.approx(rate, rel=0.05)
    assert well_posedness_bound(s, p) == math.inf


def test_periodic_field_validation():
    with pytest.raises(ValueError):
        PeriodicField(np.zeros((30, 30, 6)))  # not a power of two
    with pytest.raises(ValueError):
        PeriodicField(np.zeros((16, 16, 5)))
    with pytest.raises(ValueError):
        PeriodicField(np.full((16, 16, 6), np.nan))


def test_vorticity_compatibility_rest_background():
    p = PhysParams(gamma=0.9, g=1.0)
    bg = AugmentedState(1, 1, 0, 0, 0, 0, 0, 0)
    vals = band_limited(N, 8).values.copy()
    vals[:, :, 6] = spectral_curl(vals[:, :, 2], vals[:, :, 4])
    vals[:, :, 7] = spectral_curl(vals[:, :, 3], vals[:, :, 5])
    rep = vorticity_compatibility(bg, p, PeriodicField(vals), times=(0.0, 1.0, 3.0))
    scale = np.abs(vals).max()
    assert max(rep["max_phi1"]) < 1e-10 * scale
    assert max(rep["max_phi2"]) < 1e-10 * scale
    assert rep["drift"] < 1e-10 * scale


def test_vorticity_mismatch_invariant():
    p = PhysParams(gamma=0.9, g=1.0)
    bg = AugmentedState(1, 1, 0, 0, 0, 0, 0, 0)
    vals = band_limited(N, 8).values.copy()
    vals[:, :, 6] = spectral_curl(vals[:, :, 2], vals[:, :, 4]) + 0.7
    vals[:, :, 7] = spectral_curl(vals[:, :, 3], vals[:, :, 5])
    rep = vorticity_compatibility(bg, p, PeriodicField(vals), times=(0.0, 2.0, 5.0))
    assert rep["drift"] < 1e-10
    assert all(m == pytest.approx(0.7, abs=1e-10) for m in rep["max_phi1"])


def test_vorticity_zero_init():
    p = PhysParams(gamma=0.9, g=1.0)
    bg = AugmentedState(1, 1, 0, 0, 0, 0, 0, 0)
    rep = vorticity_compatibility(bg, p, PeriodicField(np.zeros((16, 16, 8))), times=(0.0, 1.0))
    assert rep["drift"] == 0.0
    assert rep["max_phi1"] == [0.0, 0.0]
