import math

import numpy as np
import pytest

from strata.errors import DegenerateLayer, OutOfRegime
from strata.hyperbolicity import (
    Regime,
    classify,
    critical_froude,
    is_hyperbolic_1d,
    is_hyperbolic_2d,
    is_symmetrizable,
    rigid_lid_threshold,
    symmetrizer,
    symmetrizer_pd_all_theta,
)
from strata.model_matrices import LayerState, NondimState, PhysParams, build_Ax, state_from_nondim
from strata.polynomial import char_quartic, quartic_roots_oracle
from strata.verdict import TriState


RNG = np.random.default_rng(7)


def test_critical_froude_are_transition_points():
    """The spectrum is real strictly inside/outside and complex in between."""
    for h in (0.4, 1.0, 2.3):
        for gam in (0.5, 0.9, 0.99):
            fc = critical_froude(h, gam)
            assert 0.0 < fc.f_minus < 1.0 + math.sqrt(h) < fc.f_plus

            def max_imag(Fx):
                lam = quartic_roots_oracle(char_quartic(NondimState(Fx, 0, h), gam))
                return np.abs(lam.imag).max()

            assert max_imag(0.9 * fc.f_minus) < 1e-8
            assert max_imag(1.1 * fc.f_minus) > 1e-4
            assert max_imag(0.9 * fc.f_plus) > 1e-4
            assert max_imag(1.1 * fc.f_plus) < 1e-8


def test_critical_froude_guards():
    with pytest.raises(DegenerateLayer):
        critical_froude(0.0, 0.5)
    with pytest.raises(OutOfRegime):
        critical_froude(1.0, 1.0)
    with pytest.raises(OutOfRegime):
        critical_froude(1.0, 1.2)


def test_upper_threshold_limit():
    """F_crit^+ tends to (1 + h^(1/3))^(3/2) as gamma -> 1."""
    for h in (0.5, 1.0, 2.0):
        target = (1.0 + h ** (1.0 / 3.0)) ** 1.5
        f_prev = critical_froude(h, 1.0 - 2.0 ** -6).f_plus
        f_next = critical_froude(h, 1.0 - 2.0 ** -10).f_plus
        assert abs(f_next - target) < abs(f_prev - target)
        assert abs(f_next - target) < 5e-3


def test_rigid_lid_threshold_value():
    assert rigid_lid_threshold(1.0, 0.98) == pytest.approx(0.04)


def test_symmetrizer_identities():
    p = PhysParams(gamma=0.8, g=9.81)
    for _ in range(200):
        s = LayerState(
            RNG.uniform(0.1, 3),
            RNG.uniform(0.1, 3),
            *RNG.normal(scale=2.0, size=4),
        )
        u0 = RNG.normal(scale=3.0)
        S = symmetrizer(s, p, u0)
        assert np.array_equal(S, S.T)
        SA = S @ build_Ax(s, p)
        scale = max(np.abs(SA).max(), 1.0)
        assert np.abs(SA - SA.T).max() < 1e-12 * scale


def test_symmetrizable_closed_form():
    p = PhysParams(gamma=0.9, g=1.0)
    # (1-gamma) g h2 = 0.1; shear^2 below/above
    assert is_symmetrizable(LayerState(1, 1, 0, 0.3, 0, 0), p) is True
    assert is_symmetrizable(LayerState(1, 1, 0, 0.4, 0, 0), p) is False
    assert is_symmetrizable(LayerState(1, 1, 0, 0, 0, 0), PhysParams(gamma=1.0)) is False
    assert is_symmetrizable(LayerState(1, -1, 0, 0, 0, 0), p) is False


def test_pd_grid_agrees_with_closed_form():
    p = PhysParams(gamma=0.9, g=1.0)
    for _ in range(100):
        s = LayerState(
            RNG.uniform(0.2, 2),
            RNG.uniform(0.2, 2),
            *RNG.normal(scale=0.3, size=4),
        )
        shear2 = (s.u2 - s.u1) ** 2 + (s.v2 - s.v1) ** 2
        margin = (1.0 - p.gamma) * p.g * s.h2 - shear2
        if abs(margin) < 1e-6:
            continue  # skip the boundary band
        worst = symmetrizer_pd_all_theta(s, p)
        assert (worst > 0.0) == (margin > 0.0)


def test_hyperbolic_1d_2d_split():
    """High shear: 1D supercritical-hyperbolic but 2D non-hyperbolic."""
    p = PhysParams(gamma=0.9, g=1.0)
    s = state_from_nondim(NondimState(10.0, 0.0, 1.0), p)
    assert is_hyperbolic_1d(s, p) == TriState.TRUE
    assert is_hyperbolic_2d(s, p) == TriState.FALSE
    rep = classify(s, p)
    assert rep.regime == Regime.SUPERCRITICAL


def test_classify_regimes():
    p = PhysParams(gamma=0.9, g=1.0)
    fc = critical_froude(1.0, 0.9)
    sub = classify(state_from_nondim(NondimState(0.5 * fc.f_minus, 0, 1.0), p), p)
    assert sub.regime == Regime.SUBCRITICAL
    assert sub.hyperbolic_1d == TriState.TRUE and sub.hyperbolic_2d == TriState.TRUE
    gap = classify(state_from_nondim(NondimState(1.5, 0, 1.0), p), p)
    assert gap.regime == Regime.GAP
    assert gap.hyperbolic_1d == TriState.FALSE
    deg = classify(LayerState(1, 1, 0, 0, 0, 0), PhysParams(gamma=1.1))
    assert deg.regime == Regime.DEGENERATE
    assert deg.hyperbolic_2d == TriState.FALSE and deg.symmetrizable is False


def test_boundary_band():
    p = PhysParams(gamma=0.9, g=1.0)
    fc = critical_froude(1.0, 0.9)
    s = state_from_nondim(NondimState(fc.f_minus, 0.0, 1.0), p)
    assert is_hyperbolic_1d(s, p) == TriState.BOUNDARY


def test_symmetrizable_strictly_inside_hyperbolic():
    """At gamma = 0.99, h = 1 there is an annulus: hyperbolic, not symmetrizable."""
    gam = 0.99
    p = PhysParams(gamma=gam, g=1.0)
    fc = critical_froude(1.0, gam)
    sym_edge = math.sqrt((1.0 - gam) * 1.0)  # Fx^2 < (1-gamma) h
    assert sym_edge < fc.f_minus
    Fx = 0.5 * (sym_edge + fc.f_minus)
    s = state_from_nondim(NondimState(Fx, 0.0, 1.0), p)
    assert is_hyperbolic_2d(s, p) == TriState.TRUE
    assert is_symmetrizable(s, p) is False
    # symmetrizability still implies 2D hyperbolicity on samples
    for _ in range(200):
        st = LayerState(
            RNG.uniform(0.2, 2),
            RNG.uniform(0.2, 2),
            *RNG.normal(scale=0.2, size=4),
        )
        if is_symmetrizable(st, p):
            assert is_hyperbolic_2d(st, p) != TriState.FALSE
