import math

import numpy as np
import pytest

from strata.errors import DegenerateLayer
from strata.model_matrices import (
    AugmentedState,
    LayerState,
    NondimState,
    PhysParams,
    build_A_theta,
    build_Ax,
    build_aug_A_theta,
    build_aug_Ax,
    build_rotation,
    build_rotation_aug,
    build_source_aug,
    energy,
    nondimensionalize,
    rotate_state,
    rotate_state_aug,
    state_from_nondim,
)
from strata.polynomial import char_quartic


RNG = np.random.default_rng(1234)


def random_state(rng=RNG):
    return LayerState(
        h1=rng.uniform(0.1, 3.0),
        h2=rng.uniform(0.1, 3.0),
        u1=rng.normal(scale=2.0),
        u2=rng.normal(scale=2.0),
        v1=rng.normal(scale=2.0),
        v2=rng.normal(scale=2.0),
    )


def random_aug_state(rng=RNG):
    s = random_state(rng)
    return AugmentedState(
        s.h1, s.h2, s.u1, s.u2, s.v1, s.v2, rng.normal(), rng.normal()
    )


def test_ax_entries_simple_state():
    p = PhysParams(gamma=0.5, g=2.0)
    s = LayerState(1.0, 3.0, 4.0, 5.0, 6.0, 7.0)
    A = build_Ax(s, p)
    assert A[0, 0] == 4.0 and A[0, 2] == 1.0
    assert A[1, 1] == 5.0 and A[1, 3] == 3.0
    assert A[2, 0] == A[2, 1] == 2.0
    assert A[3, 0] == 1.0 and A[3, 1] == 2.0  # gamma*g and g
    assert A[4, 4] == 4.0 and A[5, 5] == 5.0  # v rows advect with u in x


def test_rotation_orthogonal():
    for theta in np.linspace(0.0, 2.0 * math.pi, 17):
        P = build_rotation(theta)
        assert np.abs(P @ P.T - np.eye(6)).max() < 1e-14
        Pr = build_rotation_aug(theta)
        assert np.abs(Pr @ Pr.T - np.eye(8)).max() < 1e-14


def test_rotational_invariance_base():
    p = PhysParams(gamma=0.8, g=9.81)
    for _ in range(200):
        s = random_state()
        theta = RNG.uniform(0.0, 2.0 * math.pi)
        A = build_A_theta(s, p, theta)
        P = build_rotation(theta)
        B = P.T @ build_Ax(rotate_state(s, theta), p) @ P
        scale = max(np.abs(A).max(), 1.0)
        assert np.abs(A - B).max() < 1e-12 * scale


def test_rotational_invariance_augmented():
    p = PhysParams(gamma=0.8, g=9.81, f=0.4)
    for _ in range(200):
        v = random_aug_state()
        theta = RNG.uniform(0.0, 2.0 * math.pi)
        A = build_aug_A_theta(v, p, theta)
        P = build_rotation_aug(theta)
        B = P.T @ build_aug_Ax(rotate_state_aug(v, theta), p) @ P
        scale = max(np.abs(A).max(), 1.0)
        assert np.abs(A - B).max() < 1e-12 * scale


def test_characteristic_polynomial_factorization():
    """det(Ax - mu I) = (mu - u1)(mu - u2) * c^4 * P((mu - u1)/c)."""
    p = PhysParams(gamma=0.7, g=9.81)
    for _ in range(50):
        s = random_state()
        c = math.sqrt(p.g * s.h1)
        q = char_quartic(nondimensionalize(s, p), p.gamma)
        A = build_Ax(s, p)
        for mu in RNG.normal(scale=5.0, size=4):
            lhs = np.linalg.det(A - mu * np.eye(6))
            rhs = (mu - s.u1) * (mu - s.u2) * c ** 4 * q((mu - s.u1) / c)
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs), abs(rhs))


def test_augmented_factorization():
    p = PhysParams(gamma=0.7, g=9.81, f=0.2)
    for _ in range(10):
        v = random_aug_state()
        A6 = build_Ax(v.base, p)
        A8 = build_aug_Ax(v, p)
        for mu in RNG.normal(scale=5.0, size=20):
            lhs = np.linalg.det(A8 - mu * np.eye(8))
            rhs = mu ** 2 * np.linalg.det(A6 - mu * np.eye(6))
            assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(lhs), abs(rhs))


def test_nondimensionalize_examples():
    nd = nondimensionalize(LayerState(1, 1, 0, 0, 0, 0), PhysParams(gamma=0.5, g=1.0))
    assert (nd.Fx, nd.Fy, nd.h) == (0.0, 0.0, 1.0)
    nd = nondimensionalize(LayerState(1, 2, 0, 3, 0, 0), PhysParams(gamma=0.5, g=9.0))
    assert nd.Fx == pytest.approx(1.0) and nd.h == 2.0
    with pytest.raises(DegenerateLayer):
        nondimensionalize(LayerState(0, 1, 0, 0, 0, 0), PhysParams(gamma=0.5))


def test_state_from_nondim_round_trip():
    p = PhysParams(gamma=0.6, g=9.81)
    nd = NondimState(0.4, -0.2, 1.7)
    s = state_from_nondim(nd, p, h1=2.5)
    back = nondimensionalize(s, p)
    assert back.Fx == pytest.approx(nd.Fx)
    assert back.Fy == pytest.approx(nd.Fy)
    assert back.h == pytest.approx(nd.h)


def test_augmented_source_component():
    v = AugmentedState(1, 1, 0, 0, 3.0, 0, 2.0, 0)
    b = build_source_aug(v, PhysParams(gamma=0.5, g=1.0, f=1.0))
    assert b[2] == -9.0  # -(w1 + f) v1
    assert b[0] == b[1] == b[6] == b[7] == 0.0


def test_energy_examples():
    p = PhysParams(gamma=1.0, g=1.0)
    s = LayerState(1, 1, 0, 0, 0, 0)
    assert energy(s, p, "e1_1d") == pytest.approx(2.0)
    s2 = LayerState(1.2, 0.7, 0.3, -0.4, 0.0, 0.0)
    assert energy(s2, p, "e2_2d") == pytest.approx(energy(s2, p, "e1_1d"))
    with pytest.raises(ValueError):
        energy(s, p, "e3")
