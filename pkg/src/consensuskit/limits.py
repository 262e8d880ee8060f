"""Power limit of a proper stochastic matrix, by three independent routes.

The limit of P^k equals the eigenprojection of the Kirchhoff matrix
L = I - P onto its kernel. The primary route is a finite recursion
J_k = I - k * L J_{k-1} / tr(L J_{k-1}) that terminates after
n - (number of final classes) steps with L J = 0 exactly; it needs no
convergence threshold. The resolvent route drives (I + tau L)^{-1} to its
tau -> infinity limit; the iterative route squares P until stationary.
The three agreeing is a strong correctness signal, which is why all are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import KirchhoffMatrix
from .errors import NoConvergenceError, ResidualTooLargeError, ZeroTraceError
from .matrix_core import DEFAULT_TOL, StochasticMatrix, ToleranceConfig, _frozen, invert


@dataclass(frozen=True)
class PowerLimit:
    """Limit of P^k plus provenance: which route produced it and its effort.

    ``iterations_or_tau`` holds the step count for the recursive/iterative
    routes and the final extrapolation parameter for the resolvent route.
    """

    matrix: np.ndarray
    method: str
    iterations_or_tau: float


def _kirchhoff_array(l) -> np.ndarray:
    return np.asarray(getattr(l, "matrix", l), dtype=float)


def power_limit_recursive(
    l: KirchhoffMatrix, num_final_classes: int, tol: ToleranceConfig = DEFAULT_TOL
) -> PowerLimit:
    """Exact power limit in n - num_final_classes products via the trace recursion.

    Raises ZeroTraceError if the normalizing trace vanishes before the last
    step (wrong class count or numerical breakdown), and
    ResidualTooLargeError if the terminal identity L J = 0 fails at
    ``conv_tol``.
    """
    a = _kirchhoff_array(l)
    n = a.shape[0]
    steps = n - num_final_classes
    j = np.eye(n)
    for k in range(1, steps + 1):
        prod = a @ j
        trace = float(np.trace(prod))
        if abs(trace) <= tol.zero_tol:
            raise ZeroTraceError(k, trace)
        j = np.eye(n) - k * prod / trace
    residual = float(np.max(np.abs(a @ j)))
    if residual > tol.conv_tol:
        raise ResidualTooLargeError(residual, tol.conv_tol, "power-limit recursion")
    return PowerLimit(_frozen(j), "recursive", float(steps))


def resolvent(l: KirchhoffMatrix, tau: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """(I + tau L)^{-1} for a single finite ``tau`` (diagnostic probe)."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    a = _kirchhoff_array(l)
    return invert(np.eye(a.shape[0]) + tau * a, tol)


def power_limit_resolvent(
    l: KirchhoffMatrix, tau: float = 1.0, tol: ToleranceConfig = DEFAULT_TOL
) -> PowerLimit:
    """Extrapolated tau -> infinity limit of (I + tau L)^{-1}.

    (I + tau L)^{-1} approaches the limit with an O(1/tau) error term, so
    doubling tau and combining 2 R(2 tau) - R(tau) cancels that term.
    Inversion roundoff grows proportionally to tau, which puts a floor under
    the achievable Cauchy difference; the loop therefore stops either when
    successive extrapolants differ by less than ``conv_tol`` or when the
    differences stop shrinking (noise floor reached), returning the best
    iterate seen.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    a = _kirchhoff_array(l)
    eye = np.eye(a.shape[0])
    r_prev = invert(eye + tau * a, tol)
    extrap_prev = None
    best = None
    best_diff = np.inf
    best_tau = tau
    worse_streak = 0
    for _ in range(tol.max_iter):
        tau *= 2.0
        r = invert(eye + tau * a, tol)
        extrap = 2.0 * r - r_prev
        if extrap_prev is not None:
            diff = float(np.max(np.abs(extrap - extrap_prev)))
            if diff < best_diff:
                best, best_diff, best_tau = extrap, diff, tau
                worse_streak = 0
            else:
                worse_streak += 1
            if diff < tol.conv_tol:
                return PowerLimit(_frozen(extrap), "resolvent", tau)
            if worse_streak >= 4 or tau > 1e30:
                # Roundoff dominates from here on; the best iterate is as
                # close to the limit as double precision allows.
                return PowerLimit(_frozen(best), "resolvent", best_tau)
        r_prev = r
        extrap_prev = extrap
    raise NoConvergenceError(tol.max_iter, "resolvent extrapolation did not stabilize")


def power_limit_iterative(
    p: StochasticMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> PowerLimit:
    """Repeated squaring of P until P^(2k) matches P^k.

    Doubles as a convergence probe: a periodic (improper) matrix raises
    NoConvergenceError instead of returning. Squaring alone would accept the
    even-power limit of a period-2 matrix, so a Cauchy-converged candidate Q
    must also satisfy the fixed-point identity P Q = Q.
    """
    a = p.matrix
    # After 64 squarings the exponent is 2^64; any proper matrix has
    # converged to double precision long before, so further squaring only
    # circulates periodic iterates.
    cap = min(tol.max_iter, 64)
    q = np.array(a)
    for m in range(1, cap + 1):
        q2 = q @ q
        if float(np.max(np.abs(q2 - q))) < tol.conv_tol:
            fixed_point_gap = float(np.max(np.abs(a @ q2 - q2)))
            if fixed_point_gap > 10.0 * tol.conv_tol:
                raise NoConvergenceError(
                    m,
                    "even powers stabilized but P*Q != Q "
                    f"(gap {fixed_point_gap:.3e}); the matrix is periodic",
                )
            return PowerLimit(_frozen(q2), "iterative", float(m))
        q = q2
    raise NoConvergenceError(cap, f"powers did not converge within {cap} squarings")
