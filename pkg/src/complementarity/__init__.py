"""Single-particle, entanglement and spin-flip measures for qubit states, the
complementarity relations that tie them together, and solvers for the
convex-roof tangle and the best separable approximation."""

from .convex_roof import ConvexRoofResult, convex_roof, convex_roof_tangle
from .lewenstein_sanpera import (
    LSDecomposition,
    best_separable_approximation,
    max_separable_weight,
    verify_ls,
)
from .linalg import (
    DimensionError,
    HermEigResult,
    herm_eig,
    hs_distance,
    kron,
    partial_trace,
    partial_transpose,
    psd_sqrt,
)
from .measures import (
    MeasureSet,
    NumericalNoiseWarning,
    ResidualTangleReport,
    SingleQubitProperties,
    concurrence_pure,
    hs_to_spinflip,
    i_tangle_pure,
    indistinguishability,
    is_ppt,
    measure_set,
    mixedness,
    ppt_min_eigenvalue,
    purity,
    residual_tangle,
    separable_uncertainty,
    single_qubit_properties,
    spin_flip,
    tangle,
    tr_rho_rhotilde,
    wootters_concurrence,
)
from .relations import (
    Eq16Report,
    RelationReport,
    reports_from_json,
    reports_to_json,
    summarize,
    verify_eq16,
    verify_mems,
    verify_monogamy,
    verify_pure,
    verify_spin_flip_identity,
    verify_state,
    verify_two_qubit,
)
from .states import (
    Bell,
    DensityMatrix,
    Form15Params,
    MEMSParams,
    PureState,
    StateValidationError,
    WernerParams,
    bell,
    form15_state,
    ghz,
    load_state,
    make_rng,
    mems,
    named_state,
    random_local_unitary,
    random_mixed,
    random_product,
    random_pure,
    save_state,
    state_from_json,
    state_to_json,
    w,
    werner,
)

__version__ = "0.1.0"
