"""Exception types raised by consensuskit."""

from __future__ import annotations


class ConsensusKitError(Exception):
    """Base class for all errors raised by this package."""


class NotSquareError(ConsensusKitError):
    def __init__(self, rows: int, cols: int):
        super().__init__(f"matrix must be square, got {rows}x{cols}")
        self.rows = rows
        self.cols = cols


class NegativeEntryError(ConsensusKitError):
    def __init__(self, row: int, col: int, value: float):
        super().__init__(f"entry ({row}, {col}) = {value} is negative")
        self.row = row
        self.col = col
        self.value = value


class RowSumError(ConsensusKitError):
    def __init__(self, row: int, total: float):
        super().__init__(f"row {row} sums to {total}, expected 1")
        self.row = row
        self.total = total


class SingularMatrixError(ConsensusKitError):
    """Pivot below the zero threshold, or an inverse failed its residual check."""


class RankDeficientError(ConsensusKitError):
    """Columns expected to be independent are not, at the working tolerance."""


class NotStronglyConnectedError(ConsensusKitError):
    """A vertex set that must induce a strongly connected subgraph does not."""


class ZeroTraceError(ConsensusKitError):
    """The trace normalizer in the power-limit recursion vanished early.

    Signals a wrong count of final classes or numerical breakdown.
    """

    def __init__(self, step: int, trace: float):
        super().__init__(f"trace normalizer {trace} at step {step} is below tolerance")
        self.step = step
        self.trace = trace


class ResidualTooLargeError(ConsensusKitError):
    """A computed matrix failed its defining residual identity."""

    def __init__(self, residual: float, bound: float, what: str):
        super().__init__(f"{what}: residual {residual:.3e} exceeds bound {bound:.3e}")
        self.residual = residual
        self.bound = bound


class NoConvergenceError(ConsensusKitError):
    def __init__(self, iterations: int, message: str = ""):
        detail = message or f"no convergence after {iterations} iterations"
        super().__init__(detail)
        self.iterations = iterations


class ImproperMatrixError(ConsensusKitError):
    """The influence matrix has a periodic final class, so powers do not converge.

    `vertices` holds the offending class (0-based agent indices) and `period`
    its period (at least 2).
    """

    def __init__(self, vertices: tuple[int, ...], period: int):
        agents = ", ".join(str(v + 1) for v in vertices)
        super().__init__(
            f"final class {{{agents}}} has period {period}; "
            "the influence matrix is not proper and its powers do not converge"
        )
        self.vertices = vertices
        self.period = period


class SingularZError(ConsensusKitError):
    """The mixed basis matrix is singular; contradicts its construction guarantees."""


class EnumerationCapError(ConsensusKitError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"enumeration over {size} vertices exceeds cap {cap}")
        self.size = size
        self.cap = cap


class ZeroScaleError(ConsensusKitError):
    """The column-shift preequalizer needs a nonzero scale factor."""
