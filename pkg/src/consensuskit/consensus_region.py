"""The subspace of initial opinions that iteration drives to consensus.

For a proper influence matrix the region is the column space of I - P plus
the span of the all-ones vector. Two independent constructions of the
orthogonal projector onto it are provided: one through a full-column-rank
basis and its pseudo-inverse, one through a mixed basis of opinion space
whose columns have known projections. A cheaper stochastic (non-orthogonal)
preequalizer and the dictatorial column preequalizers round out the toolbox.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import BicomponentDecomposition, KirchhoffMatrix
from .errors import (
    RankDeficientError,
    SingularMatrixError,
    SingularZError,
    ZeroScaleError,
)
from .limits import PowerLimit
from .matrix_core import (
    DEFAULT_TOL,
    StochasticMatrix,
    ToleranceConfig,
    _frozen,
    invert,
    pseudo_inverse_full_column_rank,
    rank_with_tolerance,
)


@dataclass(frozen=True)
class RegionBasis:
    """Full-column-rank basis of the consensus region, in original indexing.

    Built from the Kirchhoff matrix by deleting the column of the smallest
    agent of each final class and prepending the all-ones column; the
    result has n - (number of final classes) + 1 independent columns.
    """

    matrix: np.ndarray
    deleted_columns: tuple[int, ...]
    decomposition: BicomponentDecomposition


@dataclass(frozen=True)
class OrthogonalProjector:
    """Symmetric idempotent matrix mapping opinion space onto the region.

    ``basic_block`` is the upper-left block after Frobenius reordering; the
    projector is that block extended by the identity on nonbasic agents.
    """

    matrix: np.ndarray
    basic_block: np.ndarray


@dataclass(frozen=True)
class MixedBasis:
    """A basis of opinion space paired with its image under the projector.

    ``basis`` is the reordered Kirchhoff matrix with the very first column
    replaced by the ones vector and, for every later final class, the
    leading block column replaced by the difference of consecutive padded
    stationary vectors; those columns span the kernel of the Kirchhoff
    matrix, the rest lie in its range, so ``basis`` is provably nonsingular.
    ``image`` holds the orthogonal projections of the same columns (range
    columns fixed, stationary differences annihilated), hence the projector
    equals image times inverse(basis). With nonbasic agents present both
    matrices carry the corresponding Kirchhoff blocks unchanged.
    """

    image: np.ndarray
    basis: np.ndarray
    image_basic_block: np.ndarray
    basis_basic_block: np.ndarray
    basis_inverse: np.ndarray
    stationary_differences: tuple[np.ndarray, ...]
    padded_stationary: tuple[np.ndarray, ...]
    coupling_block: np.ndarray
    decomposition: BicomponentDecomposition

    @property
    def weight_row(self) -> np.ndarray:
        """First row of the basis inverse, mapped back to original indexing."""
        d = self.decomposition
        out = np.zeros(d.n)
        out[list(d.order)] = self.basis_inverse[0]
        return out


def build_region_basis(
    l: KirchhoffMatrix,
    d: BicomponentDecomposition,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RegionBasis:
    """Basis of the consensus region; raises RankDeficientError if degenerate."""
    a = np.asarray(l.matrix)
    n = a.shape[0]
    deleted = tuple(min(cls) for cls in d.basic_classes())
    keep = [j for j in range(n) if j not in set(deleted)]
    u = np.column_stack([np.ones(n)] + [a[:, j] for j in keep])
    expected = n - d.num_final_classes + 1
    got = rank_with_tolerance(u, tol)
    if got != expected:
        raise RankDeficientError(
            f"region basis rank {got} != {expected}; input is numerically degenerate"
        )
    return RegionBasis(matrix=_frozen(u), deleted_columns=deleted, decomposition=d)


def membership(opinions, proj: OrthogonalProjector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``opinions`` is already in the region (projection fixes it)."""
    v = np.asarray(opinions, dtype=float)
    return float(np.max(np.abs(proj.matrix @ v - v))) <= tol.conv_tol


def _basic_block(s: np.ndarray, d: BicomponentDecomposition) -> np.ndarray:
    idx = np.asarray(d.order[: d.num_basic_agents], dtype=int)
    return s[np.ix_(idx, idx)]


def orthogonal_projection_via_pinv(
    basis: RegionBasis, tol: ToleranceConfig = DEFAULT_TOL
) -> OrthogonalProjector:
    """Projector as U (UᵀU)⁻¹ Uᵀ from the region basis U."""
    u = basis.matrix
    s = u @ pseudo_inverse_full_column_rank(u, tol)
    return OrthogonalProjector(
        matrix=_frozen(s), basic_block=_frozen(_basic_block(s, basis.decomposition))
    )


def stationary_vectors_from_limit(
    limit: PowerLimit, d: BicomponentDecomposition
) -> tuple[np.ndarray, ...]:
    """Per-final-class stationary vectors read off the power limit's rows."""
    a = np.asarray(limit.matrix)
    out = []
    for cls in d.basic_classes():
        cols = np.asarray(cls, dtype=int)
        out.append(np.array(a[cls[0], cols]))
    return tuple(out)


def build_mixed_basis(
    l: KirchhoffMatrix,
    d: BicomponentDecomposition,
    limit: PowerLimit,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MixedBasis:
    """Construct the mixed basis pair; raises SingularZError if it fails to invert."""
    lp = d.permute(np.asarray(l.matrix))
    n = d.n
    b = d.num_basic_agents
    offsets = d.class_offsets()

    pis = stationary_vectors_from_limit(limit, d)
    padded = []
    for ci, cls in enumerate(d.basic_classes()):
        full = np.zeros(n)
        full[list(cls)] = pis[ci]
        padded.append(_frozen(full))

    image_basic = lp[:b, :b].copy()
    basis_basic = lp[:b, :b].copy()
    image_basic[:, 0] = 1.0
    basis_basic[:, 0] = 1.0
    differences = []
    for i in range(1, d.num_final_classes):
        diff = np.zeros(b)
        prev_off, prev_size = offsets[i - 1], d.sizes[i - 1]
        cur_off, cur_size = offsets[i], d.sizes[i]
        diff[prev_off : prev_off + prev_size] = pis[i - 1]
        diff[cur_off : cur_off + cur_size] = -pis[i]
        image_basic[:, cur_off] = 0.0
        basis_basic[:, cur_off] = diff
        differences.append(_frozen(diff))

    coupling = lp[b:, :b]
    nonbasic_block = lp[b:, b:]
    image = np.zeros((n, n))
    basis = np.zeros((n, n))
    image[:b, :b] = image_basic
    basis[:b, :b] = basis_basic
    image[b:, :b] = coupling
    basis[b:, :b] = coupling
    image[b:, b:] = nonbasic_block
    basis[b:, b:] = nonbasic_block

    try:
        basis_inv = invert(basis, tol)
    except SingularMatrixError as exc:
        raise SingularZError(
            "mixed basis matrix is numerically singular; this contradicts its "
            "construction guarantee and suggests a degenerate input or too "
            "loose a tolerance"
        ) from exc

    return MixedBasis(
        image=_frozen(image),
        basis=_frozen(basis),
        image_basic_block=_frozen(image_basic),
        basis_basic_block=_frozen(basis_basic),
        basis_inverse=_frozen(basis_inv),
        stationary_differences=tuple(differences),
        padded_stationary=tuple(padded),
        coupling_block=_frozen(coupling),
        decomposition=d,
    )


def orthogonal_projection_via_mixed_basis(
    mixed: MixedBasis, tol: ToleranceConfig = DEFAULT_TOL
) -> OrthogonalProjector:
    """Projector as image times inverse(basis), back in original indexing."""
    d = mixed.decomposition
    s_perm = mixed.image @ mixed.basis_inverse
    s = d.unpermute(s_perm)
    return OrthogonalProjector(
        matrix=_frozen(s), basic_block=_frozen(s_perm[: d.num_basic_agents, : d.num_basic_agents])
    )


def nonorthogonal_projection_tilde(
    p: StochasticMatrix, proj: OrthogonalProjector, d: BicomponentDecomposition
) -> np.ndarray:
    """Stochastic preequalizer: projector rows for basic agents, P rows otherwise.

    Closer to P than the orthogonal projector and reaching the same
    consensus, at the price of not being idempotent in general.
    """
    basic = set(d.basic_vertices())
    out = np.array(p.matrix)
    for v in range(d.n):
        if v in basic:
            out[v] = proj.matrix[v]
    return _frozen(out)


def dictatorial_matrix(l: KirchhoffMatrix, agent: int, scale: float | None = None) -> np.ndarray:
    """Preequalizer whose subsequent iteration parrots one agent's opinion.

    With ``scale`` omitted, column ``agent`` of the Kirchhoff matrix is
    replaced by ones and the eventual consensus equals that agent's initial
    opinion exactly; with a nonzero ``scale``, that multiple of the ones
    vector is added to the column instead and the consensus is the scaled
    opinion. Either way the matrix maps opinion space onto the consensus
    region.
    """
    a = np.array(l.matrix)
    n = a.shape[0]
    if not 0 <= agent < n:
        raise IndexError(f"agent {agent} out of range for {n} agents")
    if scale is None:
        a[:, agent] = 1.0
    else:
        if scale == 0:
            raise ZeroScaleError("scale factor must be nonzero")
        a[:, agent] += float(scale)
    return _frozen(a)
