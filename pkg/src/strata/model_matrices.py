"""States and matrices of the two-layer free-surface shallow-water system.

The base quasilinear system acts on the 6-vector (h1, h2, u1, u2, v1, v2);
the augmented conservative system adds the layer vorticities (w1, w2).  All
matrices here are literal transcriptions of the displayed entries; the only
computation is evaluating them at a state.  Everything is pure and pointwise,
so values are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLayer

__all__ = [
    "PhysParams",
    "LayerState",
    "AugmentedState",
    "NondimState",
    "build_Ax",
    "build_Ay",
    "build_A_theta",
    "build_rotation",
    "build_rotation_aug",
    "rotate_state",
    "rotate_state_aug",
    "build_source",
    "build_source_aug",
    "build_aug_Ax",
    "build_aug_Ay",
    "build_aug_A_theta",
    "nondimensionalize",
    "state_from_nondim",
    "energy",
]


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysParams:
    """Physical parameters: density ratio rho1/rho2, gravity, Coriolis.

    ``gamma >= 1`` is representable on purpose: the criteria modules classify
    such states as non-hyperbolic instead of rejecting them at construction.
    """

    gamma: float
    g: float = 9.81
    f: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "g", "f"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if self.g <= 0.0:
            raise ValueError("g must be positive")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class LayerState:
    """Pointwise state (h1, h2, u1, u2, v1, v2).

    No positivity is imposed on the thicknesses here; whether a state is
    admissible is exactly what the hyperbolicity criteria decide.
    """

    h1: float
    h2: float
    u1: float
    u2: float
    v1: float
    v2: float

    def __post_init__(self):
        for name in ("h1", "h2", "u1", "u2", "v1", "v2"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))

    def as_array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.u1, self.u2, self.v1, self.v2])

    @classmethod
    def from_array(cls, arr) -> "LayerState":
        return cls(*map(float, arr))


@dataclass(frozen=True)
class AugmentedState:
    """State of the 8-equation conservative model: layer vorticities added."""

    h1: float
    h2: float
    u1: float
    u2: float
    v1: float
    v2: float
    w1: float
    w2: float

    def __post_init__(self):
        for name in ("h1", "h2", "u1", "u2", "v1", "v2", "w1", "w2"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.h1, self.h2, self.u1, self.u2, self.v1, self.v2, self.w1, self.w2]
        )

    @classmethod
    def from_array(cls, arr) -> "AugmentedState":
        return cls(*map(float, arr))

    @property
    def base(self) -> LayerState:
        return LayerState(self.h1, self.h2, self.u1, self.u2, self.v1, self.v2)


@dataclass(frozen=True)
class NondimState:
    """Froude-type shear numbers and thickness ratio; requires h1 > 0."""

    Fx: float
    Fy: float
    h: float

    def __post_init__(self):
        for name in ("Fx", "Fy", "h"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if self.h < 0.0:
            raise ValueError("thickness ratio h must be nonnegative")


def build_Ax(s: LayerState, p: PhysParams) -> np.ndarray:
    """x-direction flux Jacobian of the base 6-equation system."""
    g = p.g
    return np.array(
        [
            [s.u1, 0.0, s.h1, 0.0, 0.0, 0.0],
            [0.0, s.u2, 0.0, s.h2, 0.0, 0.0],
            [g, g, s.u1, 0.0, 0.0, 0.0],
            [p.gamma * g, g, 0.0, s.u2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, s.u1, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, s.u2],
        ]
    )


def build_Ay(s: LayerState, p: PhysParams) -> np.ndarray:
    """y-direction flux Jacobian of the base 6-equation system."""
    g = p.g
    return np.array(
        [
            [s.v1, 0.0, 0.0, 0.0, s.h1, 0.0],
            [0.0, s.v2, 0.0, 0.0, 0.0, s.h2],
            [0.0, 0.0, s.v1, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, s.v2, 0.0, 0.0],
            [g, g, 0.0, 0.0, s.v1, 0.0],
            [p.gamma * g, g, 0.0, 0.0, 0.0, s.v2],
        ]
    )


def build_rotation(theta: float) -> np.ndarray:
    """Orthogonal block rotation acting on the velocity pairs of a 6-state."""
    c, sn = math.cos(theta), math.sin(theta)
    P = np.eye(6)
    P[2, 2] = c
    P[2, 4] = sn
    P[3, 3] = c
    P[3, 5] = sn
    P[4, 2] = -sn
    P[4, 4] = c
    P[5, 3] = -sn
    P[5, 5] = c
    return P


def build_rotation_aug(theta: float) -> np.ndarray:
    """8x8 rotation: velocity pairs rotate, thicknesses and vorticities fixed."""
    P = np.eye(8)
    P[:6, :6] = build_rotation(theta)
    return P


def rotate_state(s: LayerState, theta: float) -> LayerState:
    """State P(theta) s, i.e. velocities expressed in the rotated frame."""
    return LayerState.from_array(build_rotation(theta) @ s.as_array())


def rotate_state_aug(v: AugmentedState, theta: float) -> AugmentedState:
    return AugmentedState.from_array(build_rotation_aug(theta) @ v.as_array())


def build_A_theta(s: LayerState, p: PhysParams, theta: float) -> np.ndarray:
    """Directional symbol cos(theta) Ax + sin(theta) Ay."""
    return math.cos(theta) * build_Ax(s, p) + math.sin(theta) * build_Ay(s, p)


def build_source(s: LayerState, p: PhysParams, grad_b=(0.0, 0.0)) -> np.ndarray:
    """Source vector: Coriolis plus topography gradient, zero in the mass rows."""
    bx, by = grad_b
    g, f = p.g, p.f
    return np.array(
        [
            0.0,
            0.0,
            -f * s.v1 + g * bx,
            -f * s.v2 + g * bx,
            f * s.u1 + g * by,
            f * s.u2 + g * by,
        ]
    )


def build_source_aug(v: AugmentedState, p: PhysParams, grad_b=(0.0, 0.0)) -> np.ndarray:
    """Source of the augmented model; the rotation terms carry (w_i + f)."""
    bx, by = grad_b
    g, f = p.g, p.f
    return np.array(
        [
            0.0,
            0.0,
            -(v.w1 + f) * v.v1 + g * bx,
            -(v.w2 + f) * v.v2 + g * bx,
            (v.w1 + f) * v.u1 + g * by,
            (v.w2 + f) * v.u2 + g * by,
            0.0,
            0.0,
        ]
    )


def build_aug_Ax(v: AugmentedState, p: PhysParams) -> np.ndarray:
    """x-direction Jacobian of the augmented 8-equation system.

    Rows 5 and 6 vanish: the y-momentum equations carry no x-derivatives in
    the conservative form, their coupling moved to the source.
    """
    g = p.g
    f = p.f
    A = np.zeros((8, 8))
    A[0, 0] = v.u1
    A[0, 2] = v.h1
    A[1, 1] = v.u2
    A[1, 3] = v.h2
    A[2, 0] = g
    A[2, 1] = g
    A[2, 2] = v.u1
    A[2, 4] = v.v1
    A[3, 0] = p.gamma * g
    A[3, 1] = g
    A[3, 3] = v.u2
    A[3, 5] = v.v2
    A[6, 2] = v.w1 + f
    A[6, 6] = v.u1
    A[7, 3] = v.w2 + f
    A[7, 7] = v.u2
    return A


def build_aug_Ay(v: AugmentedState, p: PhysParams) -> np.ndarray:
    """y-direction Jacobian of the augmented system; rows 3 and 4 vanish.

    The vorticity rows are the quasilinear form of the conservative flux
    (w_i + f) v_i, hence carry both the (w_i + f) coupling and the advective
    diagonal v_i; the latter is required for the rotational invariance
    A^r(v, theta) = P^r(theta)^T A^r_x(P^r(theta) v) P^r(theta) to hold.
    """
    g = p.g
    f = p.f
    A = np.zeros((8, 8))
    A[0, 0] = v.v1
    A[0, 4] = v.h1
    A[1, 1] = v.v2
    A[1, 5] = v.h2
    A[4, 0] = g
    A[4, 1] = g
    A[4, 2] = v.u1
    A[4, 4] = v.v1
    A[5, 0] = p.gamma * g
    A[5, 1] = g
    A[5, 3] = v.u2
    A[5, 5] = v.v2
    A[6, 4] = v.w1 + f
    A[6, 6] = v.v1
    A[7, 5] = v.w2 + f
    A[7, 7] = v.v2
    return A


def build_aug_A_theta(v: AugmentedState, p: PhysParams, theta: float) -> np.ndarray:
    return math.cos(theta) * build_aug_Ax(v, p) + math.sin(theta) * build_aug_Ay(v, p)


def nondimensionalize(s: LayerState, p: PhysParams) -> NondimState:
    """Shear Froude numbers and thickness ratio of a state.

    Raises
    ------
    DegenerateLayer
        If h1 <= 0, where the scaling sqrt(g h1) is undefined.
    """
    if s.h1 <= 0.0:
        raise DegenerateLayer(f"nondimensionalization requires h1 > 0, got {s.h1}")
    c = math.sqrt(p.g * s.h1)
    return NondimState((s.u2 - s.u1) / c, (s.v2 - s.v1) / c, s.h2 / s.h1)


def state_from_nondim(nd: NondimState, p: PhysParams, h1: float = 1.0) -> LayerState:
    """A canonical dimensional representative of a nondimensional state."""
    if h1 <= 0.0:
        raise DegenerateLayer("reference thickness h1 must be positive")
    c = math.sqrt(p.g * h1)
    return LayerState(h1, nd.h * h1, 0.0, nd.Fx * c, 0.0, nd.Fy * c)


def energy(s: LayerState, p: PhysParams, which: str = "e1_1d") -> float:
    """Mechanical energy density (modulo a constant, per unit rho2).

    ``e1_1d`` is the one-dimensional energy; ``e2_2d`` adds the v^2 terms.
    """
    g, gam = p.g, p.gamma
    if which == "e1_1d":
        ke1, ke2 = s.u1 ** 2, s.u2 ** 2
    elif which == "e2_2d":
        ke1, ke2 = s.u1 ** 2 + s.v1 ** 2, s.u2 ** 2 + s.v2 ** 2
    else:
        raise ValueError(f"unknown energy {which!r}; expected 'e1_1d' or 'e2_2d'")
    return 0.5 * gam * s.h1 * (ke1 + g * (s.h1 + 2.0 * s.h2)) + 0.5 * s.h2 * (
        ke2 + g * s.h2
    )
