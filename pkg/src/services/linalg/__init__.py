"""
Dense linear algebra: KKT solves, least-squares multipliers, Cholesky.
"""

from .kkt_solver import (
    CholeskyFactor,
    cholesky_spd,
    jacobian_gram_factor,
    kkt_residuals,
    least_squares_multipliers,
    solve_kkt,
)

__all__ = [
    "CholeskyFactor",
    "cholesky_spd",
    "jacobian_gram_factor",
    "kkt_residuals",
    "least_squares_multipliers",
    "solve_kkt",
]
