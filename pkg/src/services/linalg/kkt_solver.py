"""
Dense factorizations and the two linear solves the SQP iteration needs.

The saddle-point system

    [ H  Jᵀ ] [ d ]     [ g ]
    [ J  0  ] [ y ] = - [ c ]

is assembled in full and factored with partial-pivoting LU (LAPACK getrf via
scipy). Benchmark sizes stay below a few hundred unknowns, so dense O((n+m)³)
work is negligible next to a pass over the data. Least-squares multipliers
go through a Cholesky factorization of J Jᵀ, which doubles as the rank test.

All functions are pure: inputs are never modified and nothing is cached.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg as la

from ..errors import NotPositiveDefinite, RankDeficientJacobian, SingularKkt
from ..models.linalg_data import KktSolution, Matrix, Vector, as_matrix, as_vector

logger = logging.getLogger(__name__)

CHOLESKY_PIVOT_TOL = 1e-14  # relative to trace(M)/k
RANK_PIVOT_TOL = 1e-12  # relative, for J Jᵀ
KKT_RESIDUAL_TOL = 1e-8  # times (1 + ‖g‖∞ + ‖c‖∞)
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower Cholesky factor of an SPD matrix, reusable for several right-hand sides."""

    factor: Matrix
    min_pivot: float

    @property
    def size(self) -> int:
        return self.factor.shape[0]

    def solve(self, rhs) -> np.ndarray:
        """Solve M x = rhs for a vector or a matrix of right-hand sides."""
        return la.cho_solve((self.factor, True), np.asarray(rhs, dtype=np.float64), check_finite=False)


def _is_symmetric(M: Matrix) -> bool:
    scale = max(1.0, float(np.max(np.abs(M))))
    return bool(np.max(np.abs(M - M.T)) <= SYMMETRY_TOL * scale)


def cholesky_spd(M, pivot_tol: float = CHOLESKY_PIVOT_TOL) -> CholeskyFactor:
    """Factor a symmetric positive definite matrix.

    Args:
        M: k×k symmetric matrix
        pivot_tol: Pivots (squared diagonal of L) must exceed pivot_tol · trace(M)/k

    Returns:
        CholeskyFactor supporting solve(rhs)

    Raises:
        NotPositiveDefinite: If M is not symmetric, the factorization fails,
            or a pivot is below the relative threshold
    """
    M = as_matrix(M, "M")
    k = M.shape[0]
    if M.shape[1] != k:
        raise ValueError(f"M must be square, got shape {M.shape}")
    if not _is_symmetric(M):
        raise NotPositiveDefinite("matrix is not symmetric")

    threshold = pivot_tol * float(np.trace(M)) / k
    try:
        factor, _ = la.cho_factor(M, lower=True, check_finite=False)
    except la.LinAlgError as e:
        raise NotPositiveDefinite(f"Cholesky factorization failed: {e}")

    pivots = np.diag(factor) ** 2
    min_pivot = float(np.min(pivots))
    if min_pivot <= threshold:
        raise NotPositiveDefinite(f"pivot {min_pivot:.3e} below threshold {threshold:.3e}")

    # cho_factor leaves garbage in the unused triangle
    return CholeskyFactor(factor=np.tril(factor), min_pivot=min_pivot)


def jacobian_gram_factor(J) -> CholeskyFactor:
    """Factor J Jᵀ, raising RankDeficientJacobian when the pivot test fails."""
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2:
        raise ValueError(f"J must be 2-D, got shape {J.shape}")
    m, n = J.shape
    if m > n:
        raise RankDeficientJacobian(f"J has more rows than columns ({m}×{n})")
    try:
        return cholesky_spd(J @ J.T, pivot_tol=RANK_PIVOT_TOL)
    except NotPositiveDefinite as e:
        raise RankDeficientJacobian(f"J Jᵀ pivot test failed: {e.message}")


def kkt_residuals(H: Matrix, J: Matrix, g: Vector, c: Vector, d: Vector, y: Vector) -> Tuple[float, float]:
    """Return (‖H d + Jᵀ y + g‖∞, ‖J d + c‖∞)."""
    r_dual = H @ d + J.T @ y + g
    r_primal = J @ d + c
    return float(np.max(np.abs(r_dual))), float(np.max(np.abs(r_primal)))


def solve_kkt(H, J, g, c) -> KktSolution:
    """Solve the SQP subproblem's KKT system by dense partial-pivoting LU.

    Args:
        H: n×n symmetric matrix
        J: m×n constraint Jacobian with full row rank
        g: gradient (or gradient estimate), length n
        c: constraint values, length m

    Returns:
        KktSolution with direction d and multipliers y

    Raises:
        RankDeficientJacobian: If J fails the J Jᵀ pivot test
        SingularKkt: If the assembled system is numerically singular
    """
    H = as_matrix(H, "H")
    g = as_vector(g, "g")
    c = as_vector(c, "c")
    J = np.asarray(J, dtype=np.float64)
    n = g.shape[0]
    m = c.shape[0]
    if H.shape != (n, n):
        raise ValueError(f"H must be {n}×{n}, got {H.shape}")
    if J.shape != (m, n):
        raise ValueError(f"J must be {m}×{n}, got {J.shape}")
    if not _is_symmetric(H):
        raise ValueError("H must be symmetric")

    jacobian_gram_factor(J)

    K = np.zeros((n + m, n + m))
    K[:n, :n] = H
    K[:n, n:] = J.T
    K[n:, :n] = J
    rhs = -np.concatenate([g, c])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(K, check_finite=False)

    u_diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(u_diag)) or np.min(u_diag) <= np.finfo(float).eps * (n + m) * np.max(u_diag):
        raise SingularKkt(f"LU pivot {np.min(u_diag):.3e} is negligible for the {n + m}×{n + m} system")

    sol = la.lu_solve((lu, piv), rhs, check_finite=False)
    d, y = sol[:n], sol[n:]
    r_dual, r_primal = kkt_residuals(H, J, g, c, d, y)

    bound = KKT_RESIDUAL_TOL * (1.0 + float(np.max(np.abs(g), initial=0.0)) + float(np.max(np.abs(c), initial=0.0)))
    if max(r_dual, r_primal) > bound:
        # one step of iterative refinement before giving up
        residual = np.concatenate([H @ d + J.T @ y + g, J @ d + c])
        sol = sol + la.lu_solve((lu, piv), -residual, check_finite=False)
        d, y = sol[:n], sol[n:]
        r_dual, r_primal = kkt_residuals(H, J, g, c, d, y)
        logger.debug(f"KKT refinement applied, residuals now {r_dual:.2e}/{r_primal:.2e}")
        if max(r_dual, r_primal) > bound:
            raise SingularKkt(f"KKT residuals {r_dual:.3e}/{r_primal:.3e} exceed {bound:.3e}")

    return KktSolution(d=d, y=y, stationarity_residual=r_dual, feasibility_residual=r_primal)


def least_squares_multipliers(J, g) -> Vector:
    """Multipliers minimizing ‖g + Jᵀ y‖₂, from the normal equations (J Jᵀ) y = -J g.

    Raises:
        RankDeficientJacobian: If J fails the J Jᵀ pivot test
    """
    g = as_vector(g, "g")
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2 or J.shape[1] != g.shape[0]:
        raise ValueError(f"J shape {J.shape} incompatible with g of length {g.shape[0]}")
    gram = jacobian_gram_factor(J)
    return gram.solve(-(J @ g))
