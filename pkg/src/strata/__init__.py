"""Hyperbolicity, eigenstructure and linear well-posedness of the two-layer
free-surface shallow-water system, plus its augmented conservative model."""

from .errors import (
    DegenerateEigenvector,
    DegenerateLayer,
    EigenTrackingFailure,
    NonRealSpectrum,
    OutOfRegime,
    StrataError,
)
from .verdict import TriState
from .model_matrices import (
    AugmentedState,
    LayerState,
    NondimState,
    PhysParams,
    build_A_theta,
    build_Ax,
    build_Ay,
    build_aug_A_theta,
    build_aug_Ax,
    build_aug_Ay,
    build_rotation,
    build_rotation_aug,
    build_source,
    build_source_aug,
    energy,
    nondimensionalize,
    rotate_state,
    rotate_state_aug,
    state_from_nondim,
)
from .polynomial import (
    Quartic,
    all_roots_real,
    all_roots_real_batch,
    bezout_matrix,
    char_quartic,
    leading_minors,
    q_of_z,
    quartic_roots_oracle,
)
from .hyperbolicity import (
    CriticalFroude,
    HyperbolicityReport,
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
from .eigen import (
    EigenDecomposition,
    LabeledSpectrum,
    augmented_eigenvectors,
    characteristic_fields,
    eigendecomposition,
    expansion_order_fit,
    expansions,
    is_diagonalizable,
    spectrum,
    spectrum_aug,
)
from .evolution import (
    ModeGrowthReport,
    PeriodicField,
    evolve_linear,
    mode_growth,
    vorticity_compatibility,
    well_posedness_bound,
)

__version__ = "1.0.0"
