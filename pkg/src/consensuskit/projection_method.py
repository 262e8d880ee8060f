"""Orthogonal projection procedure for reaching consensus.

Pipeline: classify the influence matrix, compute the power limit, project
the initial opinions onto the consensus region (preequalization), then
iterate. The product of the power limit with the projector is a rank-one
stochastic matrix, so the whole procedure is summarized by a single weight
vector: consensus = weights . initial opinions. The weights are positive
exactly on basic agents, stationary for P, and within each final class
proportional to the class stationary vector; across classes they carry an
extra per-class homogeneity factor computable from spanning-tree weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .consensus_region import (
    MixedBasis,
    OrthogonalProjector,
    RegionBasis,
    build_mixed_basis,
    build_region_basis,
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
    decompose,
    spectral_class,
)
from .errors import ImproperMatrixError, NoConvergenceError, ResidualTooLargeError
from .limits import PowerLimit, power_limit_recursive
from .matrix_core import (
    DEFAULT_TOL,
    StochasticMatrix,
    ToleranceConfig,
    _frozen,
    validate_stochastic,
)
from .tree_oracle import DEFAULT_CLASS_CAP, TreeWeights

_CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class ConsensusAnalysis:
    """Everything the projection procedure derives from one influence matrix."""

    influence: StochasticMatrix
    digraph: CommunicationDigraph
    kirchhoff: KirchhoffMatrix
    decomposition: BicomponentDecomposition
    spectral: SpectralClass
    power_limit: PowerLimit
    basis: RegionBasis
    projector: OrthogonalProjector
    mixed: MixedBasis
    rank_one_limit: np.ndarray
    weights: np.ndarray
    homogeneity: tuple[float, ...]
    stationary: tuple[np.ndarray, ...]
    tol: ToleranceConfig

    @property
    def n(self) -> int:
        return self.influence.n


@dataclass(frozen=True)
class OpinionTrajectory:
    """One run of preequalization plus iterative adjustment.

    ``states[k]`` is the opinion vector after k adjustment steps applied to
    the preequalized start; ``converged_at`` is the first step whose spread
    (max minus min opinion) fell below the convergence tolerance.
    """

    initial: np.ndarray
    preequalized: np.ndarray
    states: tuple[np.ndarray, ...]
    consensus: float
    converged_at: int


def analyze(
    p,
    tol: ToleranceConfig = DEFAULT_TOL,
    oracle_cap: int = DEFAULT_CLASS_CAP,
) -> ConsensusAnalysis:
    """Full consensus analysis of a row-stochastic influence matrix.

    Raises ImproperMatrixError (naming a periodic final class) when the
    powers of ``p`` do not converge. The weight vector is extracted from a
    row of the rank-one product and cross-checked against the first row of
    the mixed-basis inverse; disagreement raises ResidualTooLargeError.
    """
    sto = p if isinstance(p, StochasticMatrix) else validate_stochastic(p, tol)
    g, l = build(sto, tol)
    d = decompose(g)
    spec = spectral_class(sto, d, tol)
    if spec.kind is SpectralKind.IMPROPER:
        for cls, period in zip(d.basic_classes(), spec.periods):
            if period >= 2:
                raise ImproperMatrixError(cls, period)
    limit = power_limit_recursive(l, d.num_final_classes, tol)
    basis = build_region_basis(l, d, tol)
    projector = orthogonal_projection_via_pinv(basis, tol)
    mixed = build_mixed_basis(l, d, limit, tol)
    projector_alt = orthogonal_projection_via_mixed_basis(mixed, tol)

    route_gap = float(np.max(np.abs(projector.matrix - projector_alt.matrix)))
    if route_gap > _CROSS_CHECK_TOL:
        raise ResidualTooLargeError(route_gap, _CROSS_CHECK_TOL, "projector routes disagree")

    rank_one = limit.matrix @ projector.matrix
    weights = np.array(rank_one[0])
    row_spread = float(np.max(np.abs(rank_one - weights[None, :])))
    if row_spread > _CROSS_CHECK_TOL:
        raise ResidualTooLargeError(row_spread, _CROSS_CHECK_TOL, "rank-one limit rows differ")
    weight_gap = float(np.max(np.abs(weights - mixed.weight_row)))
    if weight_gap > _CROSS_CHECK_TOL:
        raise ResidualTooLargeError(weight_gap, _CROSS_CHECK_TOL, "weight-vector routes disagree")

    return ConsensusAnalysis(
        influence=sto,
        digraph=g,
        kirchhoff=l,
        decomposition=d,
        spectral=spec,
        power_limit=limit,
        basis=basis,
        projector=projector,
        mixed=mixed,
        rank_one_limit=_frozen(rank_one),
        weights=_frozen(weights),
        homogeneity=_homogeneity_per_class(g, d, oracle_cap),
        stationary=stationary_vectors_from_limit(limit, d),
        tol=tol,
    )


def _homogeneity_per_class(
    g: CommunicationDigraph, d: BicomponentDecomposition, oracle_cap: int
) -> tuple[float, ...]:
    # Exhaustive enumeration for small classes, cofactor route otherwise;
    # both are exact up to roundoff.
    from .tree_oracle import _class_kirchhoff_block, enumerate_out_trees, tree_weights_from_cofactors

    out = []
    for cls in d.basic_classes():
        verts = tuple(sorted(cls))
        if len(verts) <= oracle_cap:
            per_root = [enumerate_out_trees(g, verts, r, oracle_cap) for r in verts]
            total = sum(per_root)
        else:
            total, per_root = tree_weights_from_cofactors(_class_kirchhoff_block(g, verts))
        out.append(total**2 / sum(t * t for t in per_root))
    return tuple(out)


def homogeneity_weights(trees: TreeWeights) -> tuple[float, ...]:
    """Per-class homogeneity: squared total tree weight over sum of squared rooted totals.

    Within one final class the consensus weights are proportional to the
    stationary vector; across classes their ratio carries this factor.
    """
    return tuple(ct.total**2 / sum(t * t for t in ct.per_root) for ct in trees.per_class)


def preequalize(analysis: ConsensusAnalysis, opinions, mode: str = "orthogonal") -> np.ndarray:
    """Project initial opinions into the consensus region.

    ``mode='orthogonal'`` applies the minimal-distortion projector;
    ``mode='tilde'`` applies the stochastic variant (same eventual
    consensus). Nonbasic opinions pass through unchanged either way.
    """
    v = np.asarray(opinions, dtype=float)
    if v.shape != (analysis.n,):
        raise ValueError(f"expected opinion vector of length {analysis.n}, got shape {v.shape}")
    if mode == "orthogonal":
        return analysis.projector.matrix @ v
    if mode == "tilde":
        s_tilde = nonorthogonal_projection_tilde(
            analysis.influence, analysis.projector, analysis.decomposition
        )
        return s_tilde @ v
    raise ValueError(f"unknown preequalization mode: {mode!r}")


def simulate(
    p,
    analysis: ConsensusAnalysis,
    opinions,
    tol: ToleranceConfig | None = None,
    mode: str = "orthogonal",
) -> OpinionTrajectory:
    """Preequalize, then iterate the influence matrix on the opinion vector.

    ``mode='none'`` skips preequalization (plain iterative adjustment); with
    several final classes that generally stalls short of consensus, which is
    the point of preequalizing. Raises NoConvergenceError if the opinion
    spread fails to drop below ``conv_tol`` within ``max_iter`` steps.
    """
    tol = tol or analysis.tol
    sto = p if isinstance(p, StochasticMatrix) else validate_stochastic(p, tol)
    initial = np.asarray(opinions, dtype=float)
    start = initial if mode == "none" else preequalize(analysis, initial, mode)
    a = sto.matrix
    states = [np.array(start)]
    current = start
    for step in range(tol.max_iter + 1):
        spread = float(current.max() - current.min())
        if spread < tol.conv_tol:
            return OpinionTrajectory(
                initial=_frozen(initial),
                preequalized=_frozen(start),
                states=tuple(_frozen(s) for s in states),
                consensus=float((current.max() + current.min()) / 2.0),
                converged_at=step,
            )
        if step == tol.max_iter:
            break
        current = a @ current
        states.append(np.array(current))
    raise NoConvergenceError(
        tol.max_iter,
        f"opinion spread {float(current.max() - current.min()):.3e} still above "
        f"{tol.conv_tol} after {tol.max_iter} steps",
    )


def consensus_value(analysis: ConsensusAnalysis, opinions) -> float:
    """Consensus the procedure reaches: weight vector dotted with initial opinions."""
    v = np.asarray(opinions, dtype=float)
    if v.shape != (analysis.n,):
        raise ValueError(f"expected opinion vector of length {analysis.n}, got shape {v.shape}")
    return float(analysis.weights @ v)
