"""Critical Froude numbers, exact hyperbolicity criteria and regime reports.

The 1D criterion is minor-positivity of the Bezout matrix of the
characteristic quartic, equivalently |Fx| outside [F_crit^-, F_crit^+].
In 2D only the subcritical branch survives: the shear can be rotated into
any direction, so hyperbolicity requires Fx^2 + Fy^2 < F_crit^-^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateLayer, OutOfRegime
from .model_matrices import LayerState, PhysParams, nondimensionalize, rotate_state
from .polynomial import q_of_z, quartic_roots_oracle
from .verdict import TriState

__all__ = [
    "CriticalFroude",
    "Regime",
    "HyperbolicityReport",
    "critical_froude",
    "rigid_lid_threshold",
    "symmetrizer",
    "is_symmetrizable",
    "symmetrizer_pd_all_theta",
    "is_hyperbolic_1d",
    "is_hyperbolic_2d",
    "classify",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class CriticalFroude:
    """Shear thresholds: real spectrum for |Fx| < f_minus or |Fx| > f_plus."""

    f_minus: float
    f_plus: float

    def __post_init__(self):
        if not 0.0 <= self.f_minus <= self.f_plus:
            raise ValueError(f"need 0 <= f_minus <= f_plus, got {self}")


class Regime(str, Enum):
    SUBCRITICAL = "subcritical"
    GAP = "gap"
    SUPERCRITICAL = "supercritical"
    BOUNDARY = "boundary"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class HyperbolicityReport:
    minors: tuple | None
    f_crit: CriticalFroude | None
    symmetrizable: bool
    hyperbolic_1d: TriState
    hyperbolic_2d: TriState
    regime: Regime


def _bisect(q, lo: float, hi: float, n_iter: int = 200) -> float:
    """Bisection on a bracketing interval; q(lo) and q(hi) have opposite signs."""
    flo = q(lo)
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = q(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_froude(h: float, gamma: float) -> CriticalFroude:
    """The two positive thresholds bounding the complex-spectrum gap.

    Squares of the thresholds are the two positive roots of the quartic
    q(z) in z = Fx^2, bracketing (1 + sqrt(h))^2.  Roots are located by
    the companion oracle and polished by bisection on sign changes.
    """
    if h <= 0.0:
        raise DegenerateLayer(f"thickness ratio must be positive, got {h}")
    if not 0.0 < gamma < 1.0:
        raise OutOfRegime(
            f"two positive roots are guaranteed only for gamma in (0,1), got {gamma}"
        )
    q = q_of_z(h, gamma)
    z_mid = (1.0 + math.sqrt(h)) ** 2  # q < 0 here, q(0) > 0, q(+inf) > 0
    if not (q(0.0) > 0.0 and q(z_mid) < 0.0):
        # only possible through rounding at extreme parameters
        raise OutOfRegime(f"sign pattern of q broke down at h={h}, gamma={gamma}")
    z_hi = 2.0 * z_mid
    while q(z_hi) <= 0.0:
        z_hi *= 2.0
        if z_hi > 1e60:  # pragma: no cover - q is monic, cannot happen
            raise OutOfRegime("upper root of q not bracketed")
    z_minus = _bisect(q, 0.0, z_mid)
    z_plus = _bisect(q, z_hi, z_mid)
    # Newton polish from the bisection output
    roots = []
    for z in (z_minus, z_plus):
        for _ in range(3):
            dq = q.deriv(z)
            if dq == 0.0:
                break
            step = q(z) / dq
            z_new = z - step
            if z_new > 0.0 and abs(q(z_new)) <= abs(q(z)):
                z = z_new
        roots.append(z)
    z_minus, z_plus = roots
    return CriticalFroude(math.sqrt(max(z_minus, 0.0)), math.sqrt(z_plus))


def rigid_lid_threshold(h: float, gamma: float) -> float:
    """Squared hyperbolicity threshold (1 - gamma)(1 + h) of the rigid-lid model."""
    return (1.0 - gamma) * (1.0 + h)


def symmetrizer(s: LayerState, p: PhysParams, u0: float | None = None) -> np.ndarray:
    """Candidate symmetrizer S_x: a perturbed energy hessian.

    Symmetric for every state, and S_x A_x is symmetric for every state and
    every u0; positive-definiteness is the actual criterion.  Default
    u0 = u1 kills the (1,3) coupling.
    """
    if u0 is None:
        u0 = s.u1
    g, gam = p.g, p.gamma
    S = np.zeros((6, 6))
    S[0, 0] = g * gam
    S[0, 1] = S[1, 0] = g * gam
    S[0, 2] = S[2, 0] = gam * (s.u1 - u0)
    S[1, 1] = g
    S[1, 3] = S[3, 1] = s.u2 - u0
    S[2, 2] = gam * s.h1
    S[3, 3] = s.h2
    S[4, 4] = gam * s.h1
    S[5, 5] = s.h2
    return S


def is_symmetrizable(s: LayerState, p: PhysParams) -> bool:
    """Closed-form symmetrizability: (1-gamma) g h2 > shear^2, strictly."""
    if not 0.0 < p.gamma < 1.0:
        return False
    if s.h1 <= 0.0 or s.h2 <= 0.0:
        return False
    shear2 = (s.u2 - s.u1) ** 2 + (s.v2 - s.v1) ** 2
    return (1.0 - p.gamma) * p.g * s.h2 > shear2


def symmetrizer_pd_all_theta(s: LayerState, p: PhysParams, n_theta: int = 64) -> float:
    """Worst minimum eigenvalue of S_x(P(theta) u) over directions.

    A uniform grid alone can miss the maximizing shear direction by up to
    O(1/n^2), so the analytically worst angle atan2(dv, du) is always
    included.  Positive return value means PD for every tested direction.
    """
    thetas = list(np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False))
    thetas.append(math.atan2(s.v2 - s.v1, s.u2 - s.u1))
    worst = math.inf
    for theta in thetas:
        S = symmetrizer(rotate_state(s, theta), p)
        worst = min(worst, float(np.linalg.eigvalsh(S)[0]))
    return worst


def _tri_threshold(x: float, threshold: float, tol: float, above_is_true: bool) -> TriState:
    band = tol * max(1.0, abs(threshold))
    if abs(x - threshold) <= band:
        return TriState.BOUNDARY
    hit = x > threshold if above_is_true else x < threshold
    return TriState.TRUE if hit else TriState.FALSE


def is_hyperbolic_1d(s: LayerState, p: PhysParams, tol: float = DEFAULT_TOL) -> TriState:
    """Exact 1D criterion: gamma in (0,1), positive layers, shear off the gap."""
    if not 0.0 < p.gamma < 1.0 or s.h1 <= 0.0 or s.h2 <= 0.0:
        return TriState.FALSE
    nd = nondimensionalize(s, p)
    if nd.h <= 0.0:
        return TriState.FALSE
    fc = critical_froude(nd.h, p.gamma)
    x = abs(nd.Fx)
    lower = _tri_threshold(x, fc.f_minus, tol, above_is_true=False)
    upper = _tri_threshold(x, fc.f_plus, tol, above_is_true=True)
    if lower == TriState.TRUE or upper == TriState.TRUE:
        return TriState.TRUE
    if lower == TriState.BOUNDARY or upper == TriState.BOUNDARY:
        return TriState.BOUNDARY
    return TriState.FALSE


def is_hyperbolic_2d(s: LayerState, p: PhysParams, tol: float = DEFAULT_TOL) -> TriState:
    """Exact 2D criterion: Fx^2 + Fy^2 < F_crit^-^2.

    The supercritical branch does not survive in 2D: rotating the shear
    direction sweeps F(theta)^2 over [0, Fx^2 + Fy^2], which always visits
    the gap when the planar shear exceeds the lower threshold.
    """
    if not 0.0 < p.gamma < 1.0 or s.h1 <= 0.0 or s.h2 <= 0.0:
        return TriState.FALSE
    nd = nondimensionalize(s, p)
    if nd.h <= 0.0:
        return TriState.FALSE
    fc = critical_froude(nd.h, p.gamma)
    return _tri_threshold(
        nd.Fx ** 2 + nd.Fy ** 2, fc.f_minus ** 2, tol, above_is_true=False
    )


def classify(s: LayerState, p: PhysParams, tol: float = DEFAULT_TOL) -> HyperbolicityReport:
    """Full pointwise report: minors, thresholds, criteria and regime."""
    from .polynomial import bezout_matrix, char_quartic, leading_minors

    degenerate = (
        not 0.0 < p.gamma < 1.0 or s.h1 <= 0.0 or s.h2 <= 0.0
    )
    minors = None
    if s.h1 > 0.0:
        nd = nondimensionalize(s, p)
        minors = leading_minors(bezout_matrix(char_quartic(nd, p.gamma)))
    if degenerate:
        return HyperbolicityReport(
            minors=minors,
            f_crit=None,
            symmetrizable=False,
            hyperbolic_1d=TriState.FALSE,
            hyperbolic_2d=TriState.FALSE,
            regime=Regime.DEGENERATE,
        )

    fc = critical_froude(nd.h, p.gamma)
    hyp1 = is_hyperbolic_1d(s, p, tol)
    hyp2 = is_hyperbolic_2d(s, p, tol)
    symm = is_symmetrizable(s, p)
    if symm and hyp2 == TriState.FALSE:
        # theory forbids this combination; near-threshold rounding only
        hyp2 = TriState.BOUNDARY

    F = math.hypot(nd.Fx, nd.Fy)
    lower = _tri_threshold(F, fc.f_minus, tol, above_is_true=False)
    upper = _tri_threshold(F, fc.f_plus, tol, above_is_true=True)
    if lower == TriState.BOUNDARY or upper == TriState.BOUNDARY:
        regime = Regime.BOUNDARY
    elif lower == TriState.TRUE:
        regime = Regime.SUBCRITICAL
    elif upper == TriState.TRUE:
        regime = Regime.SUPERCRITICAL
    else:
        regime = Regime.GAP

    return HyperbolicityReport(
        minors=minors,
        f_crit=fc,
        symmetrizable=symm,
        hyperbolic_1d=hyp1,
        hyperbolic_2d=hyp2,
        regime=regime,
    )
