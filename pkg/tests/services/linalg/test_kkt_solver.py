"""
Tests for the dense KKT solver, least-squares multipliers and Cholesky helper.
"""

import numpy as np
import pytest

from src.services.errors import NotPositiveDefinite, RankDeficientJacobian, SingularKkt
from src.services.linalg.kkt_solver import (
    cholesky_spd,
    jacobian_gram_factor,
    kkt_residuals,
    least_squares_multipliers,
    solve_kkt,
)


def _random_instance(rng, n, m):
    M = rng.standard_normal((n, n))
    H = M.T @ M + np.eye(n)
    J = rng.standard_normal((m, n))
    g = rng.standard_normal(n)
    c = rng.standard_normal(m)
    return H, J, g, c


@pytest.mark.fast
@pytest.mark.core
class TestSolveKkt:
    """Tests for solve_kkt on hand-solvable and random systems."""

    def test_two_by_one_hand_solution(self):
        """H=I₂, J=[[1,0]], g=(1,1), c=0 gives d=(0,-1), y=(-1)."""
        sol = solve_kkt(np.eye(2), np.array([[1.0, 0.0]]), np.array([1.0, 1.0]), np.array([0.0]))
        np.testing.assert_allclose(sol.d, [0.0, -1.0], atol=1e-15)
        np.testing.assert_allclose(sol.y, [-1.0], atol=1e-15)

    def test_zero_right_hand_side(self):
        """g=0 and c=0 give d=0 and y=0."""
        rng = np.random.default_rng(1)
        J = rng.standard_normal((3, 7))
        sol = solve_kkt(np.eye(7), J, np.zeros(7), np.zeros(3))
        np.testing.assert_array_equal(sol.d, np.zeros(7))
        np.testing.assert_array_equal(sol.y, np.zeros(3))

    def test_matches_independent_dense_solve(self):
        """A random 10×4 instance matches numpy's solve of the assembled system."""
        rng = np.random.default_rng(2)
        H, J, g, c = _random_instance(rng, 10, 4)
        K = np.block([[H, J.T], [J, np.zeros((4, 4))]])
        expected = np.linalg.solve(K, -np.concatenate([g, c]))

        sol = solve_kkt(H, J, g, c)
        np.testing.assert_allclose(np.concatenate([sol.d, sol.y]), expected, rtol=1e-10, atol=1e-12)

    def test_residual_bounds_on_random_instances(self):
        """Both residuals stay below 1e-8·(1+‖g‖∞+‖c‖∞) on 200 random instances."""
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(2, 16))
            m = int(rng.integers(1, n))
            H, J, g, c = _random_instance(rng, n, m)
            sol = solve_kkt(H, J, g, c)
            bound = 1e-8 * (1 + np.max(np.abs(g)) + np.max(np.abs(c)))
            r_dual, r_primal = kkt_residuals(H, J, g, c, sol.d, sol.y)
            assert r_dual <= bound
            assert r_primal <= bound
            assert sol.stationarity_residual == r_dual
            assert sol.feasibility_residual == r_primal

    def test_gradient_shift_moves_only_multipliers(self):
        """Replacing g by g + Jᵀw shifts y by -w and leaves d unchanged."""
        rng = np.random.default_rng(4)
        H, J, g, c = _random_instance(rng, 9, 3)
        w = rng.standard_normal(3)

        base = solve_kkt(H, J, g, c)
        shifted = solve_kkt(H, J, g + J.T @ w, c)
        np.testing.assert_allclose(shifted.d, base.d, atol=1e-9)
        np.testing.assert_allclose(shifted.y, base.y - w, atol=1e-9)

    def test_inputs_not_modified(self):
        """The solve never writes to its inputs."""
        rng = np.random.default_rng(5)
        H, J, g, c = _random_instance(rng, 5, 2)
        copies = [a.copy() for a in (H, J, g, c)]
        solve_kkt(H, J, g, c)
        for original, copy in zip((H, J, g, c), copies):
            np.testing.assert_array_equal(original, copy)


@pytest.mark.fast
class TestSolveKktErrors:
    """Tests for solve_kkt failure modes."""

    def test_rank_deficient_jacobian(self):
        """Two identical constraint rows fail the rank test."""
        J = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
        with pytest.raises(RankDeficientJacobian):
            solve_kkt(np.eye(3), J, np.ones(3), np.ones(2))

    def test_zero_jacobian_row(self):
        """A zero Jacobian, as for the norm constraint at the origin, is rank deficient."""
        with pytest.raises(RankDeficientJacobian):
            solve_kkt(np.eye(3), np.zeros((1, 3)), np.ones(3), np.array([-1.0]))

    def test_more_constraints_than_variables(self):
        """m > n can never have full row rank."""
        with pytest.raises(RankDeficientJacobian):
            solve_kkt(np.eye(2), np.ones((3, 2)), np.ones(2), np.ones(3))

    def test_singular_reduced_hessian(self):
        """H = 0 with m < n leaves the system singular."""
        J = np.array([[1.0, 0.0, 0.0]])
        with pytest.raises(SingularKkt):
            solve_kkt(np.zeros((3, 3)), J, np.ones(3), np.array([0.5]))

    def test_nonsymmetric_hessian_rejected(self):
        """H must be symmetric."""
        H = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            solve_kkt(H, np.array([[1.0, 0.0]]), np.ones(2), np.zeros(1))

    def test_non_finite_gradient_rejected(self):
        """NaN inputs are rejected before factorization."""
        with pytest.raises(ValueError):
            solve_kkt(np.eye(2), np.array([[1.0, 0.0]]), np.array([np.nan, 1.0]), np.zeros(1))


@pytest.mark.fast
@pytest.mark.core
class TestLeastSquaresMultipliers:
    """Tests for least_squares_multipliers."""

    def test_one_by_one_normal_equation(self):
        """J=[[1,0]], g=(3,5) gives y=(-3)."""
        y = least_squares_multipliers(np.array([[1.0, 0.0]]), np.array([3.0, 5.0]))
        np.testing.assert_allclose(y, [-3.0])

    def test_gradient_orthogonal_to_rows(self):
        """J g = 0 gives y = 0."""
        y = least_squares_multipliers(np.array([[1.0, 0.0]]), np.array([0.0, 7.0]))
        np.testing.assert_allclose(y, [0.0], atol=1e-15)

    def test_matches_explicit_inverse(self):
        """A random 3×8 instance matches -(J Jᵀ)⁻¹ J g."""
        rng = np.random.default_rng(6)
        J = rng.standard_normal((3, 8))
        g = rng.standard_normal(8)
        expected = -np.linalg.inv(J @ J.T) @ (J @ g)
        np.testing.assert_allclose(least_squares_multipliers(J, g), expected, rtol=1e-10)

    def test_minimality(self):
        """No random w gives a smaller residual ‖g + Jᵀw‖₂."""
        rng = np.random.default_rng(7)
        J = rng.standard_normal((3, 8))
        g = rng.standard_normal(8)
        y = least_squares_multipliers(J, g)
        best = np.linalg.norm(g + J.T @ y)
        for _ in range(100):
            w = y + rng.standard_normal(3)
            assert best <= np.linalg.norm(g + J.T @ w) + 1e-9

    def test_rank_deficient(self):
        """Dependent rows raise RankDeficientJacobian."""
        J = np.array([[1.0, 1.0], [2.0, 2.0]])
        with pytest.raises(RankDeficientJacobian):
            least_squares_multipliers(J, np.ones(2))


@pytest.mark.fast
class TestCholesky:
    """Tests for cholesky_spd and the Jacobian Gram factor."""

    def test_identity(self):
        """M = I₃ solves to the right-hand side."""
        factor = cholesky_spd(np.eye(3))
        np.testing.assert_allclose(factor.solve(np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])
        assert factor.size == 3

    def test_two_by_two(self):
        """M=[[4,2],[2,3]], rhs=(8,7) solves to (1.25, 1.5)."""
        M = np.array([[4.0, 2.0], [2.0, 3.0]])
        x = cholesky_spd(M).solve(np.array([8.0, 7.0]))
        np.testing.assert_allclose(x, [1.25, 1.5])
        np.testing.assert_allclose(M @ x, [8.0, 7.0])

    def test_indefinite(self):
        """M=[[1,2],[2,1]] has eigenvalue -1."""
        with pytest.raises(NotPositiveDefinite):
            cholesky_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_nearly_singular_pivot(self):
        """A pivot below 1e-14·trace/k is rejected."""
        M = np.diag([1.0, 1e-16])
        with pytest.raises(NotPositiveDefinite):
            cholesky_spd(M)

    def test_factor_is_lower_triangular(self):
        """The stored factor L satisfies L Lᵀ = M."""
        M = np.array([[4.0, 2.0], [2.0, 3.0]])
        L = cholesky_spd(M).factor
        np.testing.assert_allclose(np.triu(L, 1), 0.0)
        np.testing.assert_allclose(L @ L.T, M)

    def test_gram_factor_of_full_rank_jacobian(self):
        """A full-rank J gives a factor of size m."""
        J = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert jacobian_gram_factor(J).size == 2
