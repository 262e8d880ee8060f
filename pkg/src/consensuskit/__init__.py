"""Consensus analysis of row-stochastic influence networks.

Given an influence matrix P, this package decomposes its communication
digraph into classes, computes the power limit of P by independent routes,
characterizes the subspace of initial opinions that plain iteration drives
to consensus, builds the orthogonal projector onto that subspace, and
derives the rank-one regularized limit whose single weight vector prices
every agent's pull on the final consensus. A brute-force spanning-tree
oracle cross-validates the linear-algebra routes on small networks.
"""

from .consensus_region import (
    MixedBasis,
    OrthogonalProjector,
    RegionBasis,
    build_mixed_basis,
    build_region_basis,
    dictatorial_matrix,
    membership,
    nonorthogonal_projection_tilde,
    orthogonal_projection_via_mixed_basis,
    orthogonal_projection_via_pinv,
    stationary_vectors_from_limit,
)
from .digraph import (
    BicomponentDecomposition,
    CommunicationDigraph,
    KirchhoffMatrix,
    SpectralClass,
    SpectralKind,
    build,
    class_period,
    decompose,
    export_dot,
    spectral_class,
)
from .errors import (
    ConsensusKitError,
    EnumerationCapError,
    ImproperMatrixError,
    NegativeEntryError,
    NoConvergenceError,
    NotSquareError,
    NotStronglyConnectedError,
    RankDeficientError,
    ResidualTooLargeError,
    RowSumError,
    SingularMatrixError,
    SingularZError,
    ZeroScaleError,
    ZeroTraceError,
)
from .limits import (
    PowerLimit,
    power_limit_iterative,
    power_limit_recursive,
    power_limit_resolvent,
    resolvent,
)
from .matrix_core import (
    DEFAULT_TOL,
    StochasticMatrix,
    ToleranceConfig,
    cofactor,
    determinant,
    invert,
    null_space_basis,
    pseudo_inverse_full_column_rank,
    rank_with_tolerance,
    validate_stochastic,
)
from .projection_method import (
    ConsensusAnalysis,
    OpinionTrajectory,
    analyze,
    consensus_value,
    homogeneity_weights,
    preequalize,
    simulate,
)
from .tree_oracle import (
    ClassTreeWeights,
    ForestMatrix,
    TreeWeights,
    enumerate_out_trees,
    maximum_out_forest_matrix,
    stationary_column_determinant,
    stationary_via_trees,
    tree_weights,
    tree_weights_from_cofactors,
)

__version__ = "0.1.0"
