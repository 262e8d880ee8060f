"""Dense real-matrix substrate.

Everything downstream works on small, well-conditioned matrices, so the
routines here favor explicit control over pivoting thresholds rather than
LAPACK-style rank revelation: rank, inversion and cofactors all run Gaussian
elimination with partial pivoting and treat pivots at or below
``zero_tol`` as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeEntryError,
    NotSquareError,
    RankDeficientError,
    RowSumError,
    SingularMatrixError,
)

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical knobs shared across the package.

    zero_tol: pivot/zero threshold for rank decisions and arc pruning.
    conv_tol: convergence threshold for iterative limits and trajectories.
    max_iter: iteration cap for those loops.
    """

    zero_tol: float = 1e-9
    conv_tol: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        if not (self.zero_tol > 0 and self.conv_tol > 0 and self.max_iter > 0):
            raise ValueError("tolerances and iteration cap must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(a) -> np.ndarray:
    """Coerce to a float 2-D array and validate shape and finiteness."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix must be nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class StochasticMatrix:
    """A validated row-stochastic square influence matrix.

    Entry (i, j) is the influence weight of agent j on agent i; every row
    sums to one.
    """

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def validate_stochastic(m, tol: ToleranceConfig = DEFAULT_TOL) -> StochasticMatrix:
    """Check squareness, nonnegativity and unit row sums; wrap on success."""
    a = as_matrix(m)
    rows, cols = a.shape
    if rows != cols:
        raise NotSquareError(rows, cols)
    neg = np.argwhere(a < -tol.zero_tol)
    if neg.size:
        i, j = map(int, neg[0])
        raise NegativeEntryError(i, j, float(a[i, j]))
    sums = a.sum(axis=1)
    bad = np.nonzero(np.abs(sums - 1.0) > tol.zero_tol)[0]
    if bad.size:
        i = int(bad[0])
        raise RowSumError(i, float(sums[i]))
    return StochasticMatrix(_frozen(a))


def rank_with_tolerance(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank via row echelon with pivot threshold ``zero_tol``."""
    a = as_matrix(m).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= tol.zero_tol:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r + 1 :] -= np.outer(a[r + 1 :, c] / a[r, c], a[r])
        r += 1
    return r


def invert(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Invert via Gauss-Jordan with partial pivoting.

    Raises SingularMatrixError on a pivot at or below ``zero_tol`` or when
    the product residual exceeds what a backward-stable elimination can
    legitimately produce at the matrix's conditioning.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows != cols:
        raise NotSquareError(rows, cols)
    n = rows
    aug = np.hstack([a, np.eye(n)])
    for c in range(n):
        p = c + int(np.argmax(np.abs(aug[c:, c])))
        if abs(aug[p, c]) <= tol.zero_tol:
            raise SingularMatrixError(f"pivot {aug[p, c]:.3e} in column {c} below tolerance")
        if p != c:
            aug[[c, p]] = aug[[p, c]]
        aug[c] /= aug[c, c]
        factors = aug[:, c].copy()
        factors[c] = 0.0
        aug -= np.outer(factors, aug[c])
    inv = aug[:, n:]
    residual = float(np.max(np.abs(a @ inv - np.eye(n))))
    norm_a = float(np.max(np.abs(a).sum(axis=1)))
    norm_inv = float(np.max(np.abs(inv).sum(axis=1)))
    bound = max(100.0 * tol.conv_tol, 64.0 * n * _EPS * norm_a * norm_inv)
    if residual > bound:
        raise SingularMatrixError(
            f"inverse residual {residual:.3e} exceeds bound {bound:.3e}; "
            "matrix is numerically singular"
        )
    return inv


def pseudo_inverse_full_column_rank(u, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Left pseudo-inverse (UᵀU)⁻¹Uᵀ of a matrix with independent columns."""
    a = as_matrix(u)
    cols = a.shape[1]
    if rank_with_tolerance(a, tol) < cols:
        raise RankDeficientError(f"columns are dependent at tolerance {tol.zero_tol}")
    gram = a.T @ a
    try:
        gram_inv = invert(gram, tol)
    except SingularMatrixError as exc:  # rank check passed but Gram is borderline
        raise RankDeficientError(str(exc)) from exc
    return gram_inv @ a.T


def determinant(m) -> float:
    """Determinant via partial-pivot elimination (product of pivots)."""
    a = as_matrix(m).copy()
    rows, cols = a.shape
    if rows != cols:
        raise NotSquareError(rows, cols)
    n = rows
    det = 1.0
    for c in range(n):
        p = c + int(np.argmax(np.abs(a[c:, c])))
        if a[p, c] == 0.0:
            return 0.0
        if p != c:
            a[[c, p]] = a[[p, c]]
            det = -det
        det *= a[c, c]
        a[c + 1 :] -= np.outer(a[c + 1 :, c] / a[c, c], a[c])
    return det


def cofactor(m, i: int, j: int) -> float:
    """Signed minor (-1)^(i+j) det of ``m`` with row i and column j deleted.

    For a 1x1 matrix the minor is empty and the cofactor is 1 (empty
    product), matching the convention that a single-vertex component has
    total tree weight 1.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows != cols:
        raise NotSquareError(rows, cols)
    if not (0 <= i < rows and 0 <= j < cols):
        raise IndexError(f"cofactor index ({i}, {j}) out of range for {rows}x{cols}")
    if rows == 1:
        return 1.0
    minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
    sign = -1.0 if (i + j) % 2 else 1.0
    return sign * determinant(minor)


def null_space_basis(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Columns spanning the kernel of ``m`` (empty (n, 0) array if trivial)."""
    a = as_matrix(m).copy()
    rows, cols = a.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= tol.zero_tol:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        factors = a[:, c].copy()
        factors[r] = 0.0
        a -= np.outer(factors, a[r])
        pivot_cols.append(c)
        r += 1
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    basis = np.zeros((cols, len(free_cols)))
    for k, f in enumerate(free_cols):
        basis[f, k] = 1.0
        for row, pc in enumerate(pivot_cols):
            basis[pc, k] = -a[row, f]
    return basis
