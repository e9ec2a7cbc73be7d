"""Exact arithmetic for fundamental domains of group actions.

Three engines share one discipline: every construction is checked by an
independent verifier before it is returned, and all measures are exact
rationals. The finite engine handles pairs of free actions on weighted
atom spaces, the lattice engine handles full-rank lattices acting on
Euclidean space by translation, and the Heisenberg engine handles
discrete cocompact subgroups acting on the group by multiplication.
"""

from .errors import (
    TessellaError,
    InvalidInput,
    NotFree,
    InvalidDomain,
    ConditionFails,
    InvalidAlpha,
    TooLarge,
    Incommensurable,
    NotSublattice,
    CovolumeMismatch,
    NonRationalRatio,
    DimensionTooLarge,
    NotMeasurePreserving,
    WindowTooSmall,
)
from .boxes import FrameRegion, ReducedRegion, reduce_mod
from .finite import (
    FiniteMeasureSpace,
    FiniteGroup,
    FiniteAction,
    ActionPair,
    VerifyResult,
    verify_fundamental_domain,
    verify_packing,
    find_fundamental_domain,
    joint_invariant_partition,
    BlockReport,
    ConditionReport,
    check_condition,
    construct_packing_fds,
    construct_k_epsilon,
    construct_common_fd,
    Equidecomposition,
    dye_equivalent,
    SemidirectSpec,
    semidirect_product,
    semidirect_common_fd,
    brute_force_common_fd_exists,
)
from .lattices import (
    EucLattice,
    covolume,
    lattice_sum,
    lattice_intersection,
    index,
    fundamental_parallelepiped,
    region_reduce_mod,
    verify_tiling_exact,
    verify_packing_exact,
    common_fd_commensurable,
    construct_k_epsilon_lattices,
    TSComponent,
    TranslationSystem,
    TSReport,
    translation_system_check,
    translation_system_common_fd,
    StepFunction,
    function_tiling_check,
    BoundaryCount,
    boundary_count,
    BoundaryEntry,
    boundary_series,
)
from .dirichlet import ConvexCell, dirichlet_domain
from .heis import (
    HeisPoint,
    HEIS_IDENTITY,
    heis_mul,
    heis_inv,
    LieVec,
    lie_bracket,
    heis_exp,
    heis_log,
    flow_exp,
    cbh_identity_check,
    HeisAut,
    aut_apply,
    aut_compose,
    aut_dilation,
    aut_shear_upper,
    aut_shear_lower,
    aut_is_homomorphism_check,
    HeisLattice,
    malcev_lattice_check,
    lattice_covolume,
    aut_image_lattice,
    Reduction,
    reduce_left,
    reduce_right,
    CandidateDomain,
    malcev_cell,
    psi_cell,
    HeisAction,
    MCReport,
    mc_verify_tiling,
    psi_image_domain_check,
    discrete_ball_growth,
    growth_exponent_estimate,
)
from .sampling import DyadicSampler

__version__ = "0.1.0"

__all__ = [
    "TessellaError",
    "InvalidInput",
    "NotFree",
    "InvalidDomain",
    "ConditionFails",
    "InvalidAlpha",
    "TooLarge",
    "Incommensurable",
    "NotSublattice",
    "CovolumeMismatch",
    "NonRationalRatio",
    "DimensionTooLarge",
    "NotMeasurePreserving",
    "WindowTooSmall",
    "FrameRegion",
    "ReducedRegion",
    "reduce_mod",
    "FiniteMeasureSpace",
    "FiniteGroup",
    "FiniteAction",
    "ActionPair",
    "VerifyResult",
    "verify_fundamental_domain",
    "verify_packing",
    "find_fundamental_domain",
    "joint_invariant_partition",
    "BlockReport",
    "ConditionReport",
    "check_condition",
    "construct_packing_fds",
    "construct_k_epsilon",
    "construct_common_fd",
    "Equidecomposition",
    "dye_equivalent",
    "SemidirectSpec",
    "semidirect_product",
    "semidirect_common_fd",
    "brute_force_common_fd_exists",
    "EucLattice",
    "covolume",
    "lattice_sum",
    "lattice_intersection",
    "index",
    "fundamental_parallelepiped",
    "region_reduce_mod",
    "verify_tiling_exact",
    "verify_packing_exact",
    "common_fd_commensurable",
    "construct_k_epsilon_lattices",
    "TSComponent",
    "TranslationSystem",
    "TSReport",
    "translation_system_check",
    "translation_system_common_fd",
    "StepFunction",
    "function_tiling_check",
    "BoundaryCount",
    "boundary_count",
    "BoundaryEntry",
    "boundary_series",
    "ConvexCell",
    "dirichlet_domain",
    "HeisPoint",
    "HEIS_IDENTITY",
    "heis_mul",
    "heis_inv",
    "LieVec",
    "lie_bracket",
    "heis_exp",
    "heis_log",
    "flow_exp",
    "cbh_identity_check",
    "HeisAut",
    "aut_apply",
    "aut_compose",
    "aut_dilation",
    "aut_shear_upper",
    "aut_shear_lower",
    "aut_is_homomorphism_check",
    "HeisLattice",
    "malcev_lattice_check",
    "lattice_covolume",
    "aut_image_lattice",
    "Reduction",
    "reduce_left",
    "reduce_right",
    "CandidateDomain",
    "malcev_cell",
    "psi_cell",
    "HeisAction",
    "MCReport",
    "mc_verify_tiling",
    "psi_image_domain_check",
    "discrete_ball_growth",
    "growth_exponent_estimate",
    "DyadicSampler",
]
