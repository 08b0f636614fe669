"""Eigenstructure of the directional symbols, wave classification, expansions.

The 6x6 symbol has two trivial advective eigenvalues (u1, u2 of the rotated
state) and four coupled wave speeds, the roots of the characteristic quartic.
Labels mu1 (external pair) and mu2 (internal pair) follow the weak
stratification limits +-sqrt(1+h) and 0; in the supercritical branch mu1 is
the pair riding on the shear.  Eigenvectors come from closed forms and carry
an explicit residual contract; everything asymptotic lives in ``expansions``
and is cross-check only, never a source of truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateEigenvector,
    DegenerateLayer,
    EigenTrackingFailure,
    NonRealSpectrum,
    OutOfRegime,
)
from .model_matrices import (
    AugmentedState,
    LayerState,
    NondimState,
    PhysParams,
    build_A_theta,
    build_aug_A_theta,
    build_rotation,
    build_rotation_aug,
    nondimensionalize,
    rotate_state,
    rotate_state_aug,
)
from .polynomial import char_quartic, quartic_roots_oracle
from .verdict import TriState

__all__ = [
    "LabeledSpectrum",
    "EigenDecomposition",
    "FieldClassification",
    "spectrum",
    "spectrum_aug",
    "eigendecomposition",
    "right_eigenvectors",
    "left_eigenvectors",
    "augmented_eigenvectors",
    "is_diagonalizable",
    "characteristic_fields",
    "expansions",
    "expansion_order_fit",
    "stratification_window_probe",
]

REALNESS_TOL = 1e-8
WAVE_LABELS = ("mu1_minus", "mu2_minus", "mu2_plus", "mu1_plus")


@dataclass(frozen=True)
class LabeledSpectrum:
    """Labeled eigenvalues of the 6x6 symbol; complex entries tag the gap."""

    mu1_minus: complex
    mu1_plus: complex
    mu2_minus: complex
    mu2_plus: complex
    mu3_minus: float
    mu3_plus: float
    real: bool

    def waves(self) -> dict[str, complex]:
        return {
            "mu1_minus": self.mu1_minus,
            "mu2_minus": self.mu2_minus,
            "mu2_plus": self.mu2_plus,
            "mu1_plus": self.mu1_plus,
        }

    def values(self) -> list[complex]:
        return [
            self.mu1_minus,
            self.mu2_minus,
            self.mu2_plus,
            self.mu1_plus,
            self.mu3_minus,
            self.mu3_plus,
        ]


@dataclass(frozen=True)
class EigenDecomposition:
    labels: tuple[str, ...]
    eigenvalues: np.ndarray
    right: np.ndarray  # columns, ordered as labels
    left: np.ndarray  # rows, ordered as labels
    residual_right: np.ndarray
    residual_left: np.ndarray
    diagonalizable: TriState
    condition: float
    fallback_null_space: bool = False


@dataclass(frozen=True)
class FieldClassification:
    kind: str  # genuinely_nonlinear | linearly_degenerate | indeterminate
    dot: float
    scale: float
    gradient: np.ndarray = field(repr=False, default=None)
    vector: np.ndarray = field(repr=False, default=None)


def _label_lambdas(lam: np.ndarray, Fx: float, h: float) -> tuple[dict, bool]:
    """Assign quartic roots to the labels mu1-/mu2-/mu2+/mu1+.

    The gap straddles (1 + sqrt(h))^2 in z = Fx^2, so on the real branch the
    side of that pivot decides between subcritical labeling (outer pair is
    mu1) and supercritical labeling (pair nearest the shear is mu1).
    """
    scale = 1.0 + float(np.abs(lam).max())
    is_real = bool(np.abs(lam.imag).max() <= REALNESS_TOL * scale)
    out: dict[str, complex] = {}
    if is_real:
        r = np.sort(lam.real)
        if Fx * Fx > (1.0 + math.sqrt(h)) ** 2:
            by_dist = np.argsort(np.abs(r - Fx))
            pair1 = np.sort(r[by_dist[:2]])
            pair2 = np.sort(r[by_dist[2:]])
            out["mu1_minus"], out["mu1_plus"] = pair1
            out["mu2_minus"], out["mu2_plus"] = pair2
        else:
            out["mu1_minus"], out["mu2_minus"], out["mu2_plus"], out["mu1_plus"] = r
    else:
        cplx = np.abs(lam.imag) > REALNESS_TOL * scale
        if cplx.sum() == 2:
            pair = lam[cplx]
            out["mu2_minus"] = pair[np.argmin(pair.imag)]
            out["mu2_plus"] = pair[np.argmax(pair.imag)]
            rest = np.sort(lam[~cplx].real)
            out["mu1_minus"], out["mu1_plus"] = rest
        else:
            # two complex pairs: order by real part, normalize imag sign
            order = np.argsort(lam.real + 1e-12 * lam.imag)
            lo, hi = lam[order[:2]], lam[order[2:]]
            out["mu1_minus"] = lo[np.argmin(lo.imag)]
            out["mu2_minus"] = lo[np.argmax(lo.imag)]
            out["mu2_plus"] = hi[np.argmin(hi.imag)]
            out["mu1_plus"] = hi[np.argmax(hi.imag)]
    return out, is_real


def spectrum(s: LayerState, p: PhysParams, theta: float = 0.0) -> LabeledSpectrum:
    """Labeled spectrum of A(u, theta), via the rotated-frame quartic."""
    sr = rotate_state(s, theta)
    if sr.h1 <= 0.0:
        raise DegenerateLayer("spectrum labeling requires h1 > 0")
    nd = nondimensionalize(sr, p)
    lam = quartic_roots_oracle(char_quartic(nd, p.gamma))
    waves, is_real = _label_lambdas(lam, nd.Fx, nd.h)
    c = math.sqrt(p.g * sr.h1)
    mu = {k: sr.u1 + v * c for k, v in waves.items()}
    if is_real:
        mu = {k: complex(v.real, 0.0) for k, v in mu.items()}
    return LabeledSpectrum(
        mu1_minus=mu["mu1_minus"],
        mu1_plus=mu["mu1_plus"],
        mu2_minus=mu["mu2_minus"],
        mu2_plus=mu["mu2_plus"],
        mu3_minus=sr.u1,
        mu3_plus=sr.u2,
        real=is_real,
    )


def spectrum_aug(v: AugmentedState, p: PhysParams, theta: float = 0.0):
    """Spectrum of the augmented symbol: base spectrum plus the double zero."""
    return spectrum(v.base, p, theta), (0.0, 0.0)


def _diag_verdict(eigenvalues, right, velocity_scale, tol=1e-9, exempt_pair=None):
    gaps = np.abs(eigenvalues[:, None] - eigenvalues[None, :])
    np.fill_diagonal(gaps, np.inf)
    if exempt_pair is not None:
        # structurally double eigenvalue with a full eigenspace (zero pair)
        i, j = exempt_pair
        gaps[i, j] = gaps[j, i] = np.inf
    if gaps.min() <= tol * max(1.0, velocity_scale):
        return TriState.BOUNDARY
    cols = right / np.linalg.norm(right, axis=0)
    smin = np.linalg.svd(cols, compute_uv=False)[-1]
    if smin > 1e-8:
        return TriState.TRUE
    return TriState.BOUNDARY


def eigendecomposition(s: LayerState, p: PhysParams, theta: float = 0.0) -> EigenDecomposition:
    """Closed-form right and left eigenvectors of A(u, theta).

    Wave vectors are built in the rotated frame and transported back with
    the block rotation; trivial advective vectors are canonical basis
    vectors.  Raises NonRealSpectrum inside the gap.
    """
    sp = spectrum(s, p, theta)
    if not sp.real:
        raise NonRealSpectrum("closed-form eigenvectors require a real spectrum")
    sr = rotate_state(s, theta)
    if sr.h2 <= 0.0:
        raise DegenerateLayer("closed-form eigenvectors require h2 > 0")
    g = p.g
    gh1 = g * sr.h1
    gh2 = g * sr.h2

    labels = WAVE_LABELS + ("mu3_minus", "mu3_plus")
    mus = np.array([sp.waves()[k].real for k in WAVE_LABELS] + [sp.mu3_minus, sp.mu3_plus])
    R = np.zeros((6, 6))
    L = np.zeros((6, 6))
    for j, mu in enumerate(mus[:4]):
        cr = 1.0 - (mu - sr.u1) ** 2 / gh1
        cl = 1.0 - (mu - sr.u2) ** 2 / gh2
        R[:, j] = [1.0, -cr, (mu - sr.u1) / sr.h1, -cr * (mu - sr.u2) / sr.h2, 0.0, 0.0]
        L[j, :] = [
            cl * (mu - sr.u1) / sr.h1,
            -(mu - sr.u2) / sr.h2,
            cl,
            -1.0,
            0.0,
            0.0,
        ]
    R[4, 4] = 1.0
    R[5, 5] = 1.0
    L[4, 4] = 1.0
    L[5, 5] = 1.0

    P = build_rotation(theta)
    R = P.T @ R
    L = L @ P

    A = build_A_theta(s, p, theta)
    res_r = np.linalg.norm(A @ R - R * mus[None, :], axis=0)
    res_l = np.linalg.norm(L @ A - mus[:, None] * L, axis=1)
    vel_scale = math.sqrt(gh1) + max(abs(sr.u1), abs(sr.u2))
    cols = R / np.linalg.norm(R, axis=0)
    condition = float(np.linalg.cond(cols))
    return EigenDecomposition(
        labels=labels,
        eigenvalues=mus,
        right=R,
        left=L,
        residual_right=res_r,
        residual_left=res_l,
        diagonalizable=_diag_verdict(mus, R, vel_scale),
        condition=condition,
    )


def right_eigenvectors(s: LayerState, p: PhysParams, theta: float = 0.0) -> EigenDecomposition:
    return eigendecomposition(s, p, theta)


def left_eigenvectors(s: LayerState, p: PhysParams, theta: float = 0.0) -> EigenDecomposition:
    return eigendecomposition(s, p, theta)


def augmented_eigenvectors(
    v: AugmentedState,
    p: PhysParams,
    theta: float = 0.0,
    allow_fallback: bool = False,
) -> EigenDecomposition:
    """Closed-form eigenstructure of the 8x8 augmented symbol.

    The two zero-speed vectors carry factors v1, v2 of the rotated state and
    collapse (or become collinear) when either transverse velocity vanishes;
    in that case either DegenerateEigenvector is raised or, with
    ``allow_fallback``, an SVD null-space basis is substituted and flagged.
    """
    sp = spectrum(v.base, p, theta)
    if not sp.real:
        raise NonRealSpectrum("closed-form eigenvectors require a real spectrum")
    vr = rotate_state_aug(v, theta)
    if vr.h2 <= 0.0:
        raise DegenerateLayer("closed-form eigenvectors require h2 > 0")
    g, gam, f = p.g, p.gamma, p.f
    gh1, gh2 = g * vr.h1, g * vr.h2

    labels = (
        "nu1_minus",
        "nu2_minus",
        "nu2_plus",
        "nu1_plus",
        "nu3_minus",
        "nu3_plus",
        "nu4_minus",
        "nu4_plus",
    )
    nus = np.array(
        [sp.waves()[k].real for k in WAVE_LABELS] + [vr.u1, vr.u2, 0.0, 0.0]
    )
    R = np.zeros((8, 8))
    L = np.zeros((8, 8))
    for j, nu in enumerate(nus[:4]):
        cr = 1.0 - (nu - vr.u1) ** 2 / gh1
        cl = 1.0 - (nu - vr.u2) ** 2 / gh2
        R[:, j] = [
            1.0,
            -cr,
            (nu - vr.u1) / vr.h1,
            -cr * (nu - vr.u2) / vr.h2,
            0.0,
            0.0,
            (vr.w1 + f) / vr.h1,
            -cr * (vr.w2 + f) / vr.h2,
        ]
        L[j, :] = [
            cl * nu * (nu - vr.u1) / vr.h1,
            -nu * (nu - vr.u2) / vr.h2,
            cl * nu,
            -nu,
            cl * vr.v1,
            -vr.v2,
            0.0,
            0.0,
        ]
    R[6, 4] = 1.0  # nu3- right: e7
    R[7, 5] = 1.0  # nu3+ right: e8
    L[4, 0] = -(f + vr.w1)
    L[4, 6] = vr.h1
    L[5, 1] = -(f + vr.w2)
    L[5, 7] = vr.h2
    # zero-speed pair
    R[:, 6] = [
        0.0,
        vr.v1 * vr.v2 * vr.h2,
        0.0,
        -vr.v1 * vr.v2 * vr.u2,
        -gh2 * vr.v2,
        vr.v1 * (vr.u2 ** 2 - gh2),
        0.0,
        vr.v1 * vr.v2 * (f + vr.w2),
    ]
    R[:, 7] = [
        vr.v1 * vr.v2 * vr.h1,
        0.0,
        -vr.v1 * vr.v2 * vr.u1,
        0.0,
        vr.v2 * (vr.u1 ** 2 - gh1),
        -gam * gh1 * vr.v1,
        vr.v1 * vr.v2 * (f + vr.w1),
        0.0,
    ]
    L[6, 4] = 1.0  # nu4- left: e5
    L[7, 5] = 1.0  # nu4+ left: e6

    fallback = False
    state_scale = max(1.0, float(np.abs(vr.as_array()).max()), gh1, gh2)
    n4m, n4p = np.linalg.norm(R[:, 6]), np.linalg.norm(R[:, 7])
    collinear = False
    if n4m > 0.0 and n4p > 0.0:
        cosang = abs(R[:, 6] @ R[:, 7]) / (n4m * n4p)
        collinear = cosang > 1.0 - 1e-10
    degenerate = min(n4m, n4p) <= 1e-12 * state_scale ** 2 or collinear
    A = build_aug_A_theta(v, p, theta)
    if degenerate and not allow_fallback:
        raise DegenerateEigenvector(
            "zero-speed eigenvectors collapse when v1 or v2 vanishes; "
            "pass allow_fallback=True for a numerical null-space basis"
        )

    P = build_rotation_aug(theta)
    R = P.T @ R
    L = L @ P
    if degenerate:
        # numerical null space of the theta-frame symbol replaces the pair
        _, _, Vt = np.linalg.svd(A)
        R[:, 6] = Vt[-1]
        R[:, 7] = Vt[-2]
        fallback = True

    res_r = np.linalg.norm(A @ R - R * nus[None, :], axis=0)
    res_l = np.linalg.norm(L @ A - nus[:, None] * L, axis=1)
    vel_scale = math.sqrt(gh1) + max(abs(vr.u1), abs(vr.u2))
    cols = R / np.linalg.norm(R, axis=0)
    condition = float(np.linalg.cond(cols))
    return EigenDecomposition(
        labels=labels,
        eigenvalues=nus,
        right=R,
        left=L,
        residual_right=res_r,
        residual_left=res_l,
        diagonalizable=_diag_verdict(nus, R, vel_scale, exempt_pair=(6, 7)),
        condition=condition,
        fallback_null_space=fallback,
    )


def is_diagonalizable(s: LayerState, p: PhysParams, theta: float = 0.0) -> TriState:
    """Tri-state diagonalizability of the 6x6 symbol at a state."""
    try:
        sp = spectrum(s, p, theta)
    except DegenerateLayer:
        return TriState.FALSE
    if not sp.real:
        return TriState.FALSE
    sr = rotate_state(s, theta)
    if sr.h2 <= 0.0:
        return TriState.FALSE
    return eigendecomposition(s, p, theta).diagonalizable


def _wave_mu_at(x: np.ndarray, p: PhysParams, mu0: float, min_gap: float) -> float:
    """Wave eigenvalue of the state array nearest to mu0 (tracking step)."""
    s = LayerState.from_array(x[:6])
    nd = nondimensionalize(s, p)
    lam = quartic_roots_oracle(char_quartic(nd, p.gamma))
    mu = s.u1 + lam.real * math.sqrt(p.g * s.h1)
    dist = np.abs(mu - mu0)
    j = int(np.argmin(dist))
    if dist[j] > 0.45 * min_gap:
        raise EigenTrackingFailure(
            f"perturbed eigenvalue drifted {dist[j]:.3e}, ambiguity gap {min_gap:.3e}"
        )
    return float(mu[j])


def _grad_wave_mu(x: np.ndarray, p: PhysParams, mu0: float, others, rel_step=1e-6):
    """Central-difference eigenvalue gradient with Richardson refinement."""
    n = len(x)
    min_gap = min(abs(mu0 - o) for o in others)
    c = math.sqrt(p.g * x[0])
    ref = np.empty(n)
    ref[:2] = max(abs(x[0]), abs(x[1]))
    ref[2:] = c
    grad = np.empty(n)
    for j in range(n):
        d = rel_step * max(abs(x[j]), ref[j])
        slopes = []
        for dj in (d, 0.5 * d):
            xp, xm = x.copy(), x.copy()
            xp[j] += dj
            xm[j] -= dj
            slopes.append(
                (_wave_mu_at(xp, p, mu0, min_gap) - _wave_mu_at(xm, p, mu0, min_gap))
                / (2.0 * dj)
            )
        grad[j] = (4.0 * slopes[1] - slopes[0]) / 3.0
    return grad


def _classify_dot(dot: float, scale: float) -> str:
    if abs(dot) > 1e-6 * scale:
        return "genuinely_nonlinear"
    if abs(dot) < 1e-10 * max(scale, 1e-300):
        return "linearly_degenerate"
    return "indeterminate"


def characteristic_fields(s, p: PhysParams, rel_step: float = 1e-6):
    """Classify every characteristic field at a state (theta = 0 frame).

    Accepts a LayerState (six fields) or an AugmentedState (eight).  Wave
    eigenvalue gradients come from tracked central differences; the trivial
    advective and zero-speed eigenvalues have exact gradients.
    """
    augmented = isinstance(s, AugmentedState)
    if augmented:
        dec = augmented_eigenvectors(s, p)
        n = 8
    else:
        dec = eigendecomposition(s, p)
        n = 6
    x = s.as_array()
    out: dict[str, FieldClassification] = {}
    waves = dec.eigenvalues[:4]
    for j, label in enumerate(dec.labels):
        r = dec.right[:, j]
        mu = dec.eigenvalues[j]
        if label.startswith(("mu1", "mu2", "nu1", "nu2")):
            others = [m for i, m in enumerate(waves) if i != j]
            grad = _grad_wave_mu(x, p, mu, others, rel_step)
        elif label.endswith("3_minus") or label == "mu3_minus" or label == "nu3_minus":
            grad = np.zeros(n)
            grad[2] = 1.0  # eigenvalue is u1
        elif label in ("mu3_plus", "nu3_plus"):
            grad = np.zeros(n)
            grad[3] = 1.0  # eigenvalue is u2
        else:  # nu4 pair: eigenvalue identically zero
            grad = np.zeros(n)
        dot = float(grad @ r)
        scale = float(np.linalg.norm(grad) * np.linalg.norm(r))
        out[label] = FieldClassification(
            kind=_classify_dot(dot, scale), dot=dot, scale=scale, gradient=grad, vector=r
        )
    return out


# --- asymptotic expansions (cross-checks only) -------------------------------

_EXPANSIONS = ("f_crit_minus", "f_crit_plus", "lambda_sub", "lambda_super", "rigid_lid_gap")


def expansions(nd: NondimState, gamma: float, which: str, margin: float = 0.25):
    """Evaluate a displayed asymptotic closed form at (Fx, h, gamma).

    These are verification targets, never sources of truth; OutOfRegime is
    raised when the hypothesis of the expansion (small 1-gamma, small h,
    shear regime) is violated by more than ``margin``.

    Note: the second-order ``rigid_lid_gap`` closed form is kept verbatim as
    printed although the root oracle measures a coefficient h/(1+h) instead;
    callers comparing against the oracle should expect that mismatch.
    """
    if which not in _EXPANSIONS:
        raise ValueError(f"unknown expansion {which!r}")
    h, Fx = nd.h, nd.Fx
    if h <= 0.0:
        raise DegenerateLayer("expansions require h > 0")
    eps = 1.0 - gamma
    if not 0.0 < gamma < 1.0 or eps > margin:
        raise OutOfRegime(f"expansion {which} assumes small 1-gamma, got {eps}")

    if which == "f_crit_minus":
        return math.sqrt(eps * (1.0 + h))
    if which == "f_crit_plus":
        return (1.0 + h ** (1.0 / 3.0)) ** 1.5
    if which == "rigid_lid_gap":
        return eps * eps * h * (1.0 + 27.0 * h + 27.0 * h * h + 9.0 * h ** 3) / (1.0 + h) ** 4
    if which == "lambda_sub":
        if Fx * Fx > eps * (1.0 + h):
            raise OutOfRegime("subcritical expansion needs |Fx| below the lower threshold")
        disc = max(h * ((1.0 + h) * eps - Fx * Fx), 0.0)
        l2 = math.sqrt(disc) / (1.0 + h)
        base2 = Fx / (1.0 + h)
        sq = math.sqrt(1.0 + h)
        l1m = (Fx * h * sq - ((1.0 + h) ** 2 - 0.5 * h * eps)) / (1.0 + h) ** 1.5
        l1p = (Fx * h * sq + ((1.0 + h) ** 2 - 0.5 * h * eps)) / (1.0 + h) ** 1.5
        return {
            "lambda1_minus": l1m,
            "lambda1_plus": l1p,
            "lambda2_minus": base2 - l2,
            "lambda2_plus": base2 + l2,
        }
    # lambda_super
    if h > 0.5:
        raise OutOfRegime("supercritical expansion assumes small h")
    if abs(Fx) <= (1.0 + h ** (1.0 / 3.0)) ** 1.5:
        raise OutOfRegime("supercritical expansion needs |Fx| above the upper threshold")
    d = Fx * Fx - 1.0
    root = math.sqrt(h) * math.sqrt(1.0 + h * gamma / d + (h * Fx / d) ** 2)
    return {
        "lambda1_minus": Fx + Fx * h / d - root,
        "lambda1_plus": Fx + Fx * h / d + root,
        "lambda2_minus": -(1.0 + h / (2.0 * (Fx + 1.0) ** 2)),
        "lambda2_plus": 1.0 + h / (2.0 * (Fx - 1.0) ** 2),
    }


def _oracle_inner_lambda(h: float, gamma: float) -> float:
    """Positive inner wave root at zero shear, from the root oracle."""
    lam = quartic_roots_oracle(char_quartic(NondimState(0.0, 0.0, h), gamma))
    return float(np.sort(lam.real)[2])


def expansion_order_fit(h: float, which: str, ks=range(4, 13)) -> float:
    """Fitted log-log slope of |oracle - expansion| against 1 - gamma.

    Checks the claimed remainder orders: the squared lower threshold should
    fit with slope about 2, the upper threshold and the zero-shear internal
    wave speed with slope about 1 (1.5 measured for the latter).
    """
    from .hyperbolicity import critical_froude

    if h <= 0.0:
        raise DegenerateLayer("expansion fits require h > 0")
    eps = np.array([2.0 ** -k for k in ks])
    errs = []
    for e in eps:
        gamma = 1.0 - e
        nd = NondimState(0.0, 0.0, h)
        if which == "f_crit_minus":
            oracle = critical_froude(h, gamma).f_minus ** 2
            pred = e * (1.0 + h)
        elif which == "f_crit_plus":
            oracle = critical_froude(h, gamma).f_plus
            pred = expansions(nd, gamma, "f_crit_plus")
        elif which == "lambda_sub":
            oracle = _oracle_inner_lambda(h, gamma)
            pred = math.sqrt(h * (1.0 + h) * e) / (1.0 + h)
        else:
            raise ValueError(f"no order fit defined for {which!r}")
        errs.append(abs(oracle - pred))
    errs = np.maximum(np.array(errs), 1e-300)
    slope = float(np.polyfit(np.log(eps), np.log(errs), 1)[0])
    return slope


def stratification_window_probe(h: float, Fx: float, gamma_lo: float = 0.5, n: int = 200):
    """Empirical lower edge of the weak-stratification window.

    Scans gamma downward from 1 and reports the largest gamma at which the
    strict wave ordering mu1+ > mu2+ > mu2- > mu1- first fails (or gamma_lo
    if it never does).  Makes the existential window constructive without
    claiming a sharp constant.
    """
    p_template = None
    for gamma in np.linspace(1.0 - 1e-6, gamma_lo, n):
        p_template = PhysParams(gamma=float(gamma), g=1.0)
        s = LayerState(1.0, h, 0.0, Fx, 0.0, 0.0)
        sp = spectrum(s, p_template)
        if not sp.real:
            return float(gamma)
        vals = [sp.mu1_plus.real, sp.mu2_plus.real, sp.mu2_minus.real, sp.mu1_minus.real]
        if not (vals[0] > vals[1] > vals[2] > vals[3]):
            return float(gamma)
    return float(gamma_lo)
