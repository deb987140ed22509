"""
Tests for constraints, problem composition and the Lipschitz estimate.
"""

import numpy as np
import pytest

from src.services.errors import RankDeficientJacobian
from src.services.gradients.sampling import RandomStreams, Stream
from src.services.problems.constraints import (
    L2BallConstraint,
    LinearConstraint,
    l2ball_constraint,
    make_linear_constraints,
)
from src.services.problems.objectives import QuadraticObjective
from src.services.problems.problem import build_problem, estimate_lipschitz
from tests.conftest import A9A_DIM, SYNTHETIC_DIM, linear_constraint


@pytest.mark.fast
@pytest.mark.core
class TestLinearConstraints:
    """Tests for random linear constraints A x = a₁."""

    def test_same_seed_same_constraints(self):
        """Generation is a function of the seed only."""
        first = linear_constraint(14, 10, seed=3)
        second = linear_constraint(14, 10, seed=3)
        np.testing.assert_array_equal(first.A, second.A)
        np.testing.assert_array_equal(first.a1, second.a1)

    def test_different_seeds_differ(self):
        assert not np.array_equal(linear_constraint(14, 10, seed=0).A, linear_constraint(14, 10, seed=1).A)

    def test_benchmark_dimensions(self):
        """The a9a setting draws a 10×123 matrix."""
        constraint = linear_constraint(A9A_DIM, 10)
        assert constraint.A.shape == (10, A9A_DIM)
        assert constraint.a1.shape == (10,)
        assert constraint.num_constraints == 10

    def test_value_and_jacobian(self):
        constraint = LinearConstraint(A=np.array([[1.0, 2.0]]), a1=np.array([3.0]))
        x = np.array([1.0, 1.0])
        np.testing.assert_array_equal(constraint.value(x), [0.0])
        np.testing.assert_array_equal(constraint.jacobian(x), [[1.0, 2.0]])
        assert constraint.gamma == 0.0

    def test_requires_fewer_rows_than_columns(self):
        rng = RandomStreams(0).generator(Stream.CONSTRAINTS)
        with pytest.raises(ValueError):
            make_linear_constraints(5, 5, rng)
        with pytest.raises(ValueError):
            make_linear_constraints(5, 0, rng)

    def test_gives_up_after_repeated_rank_failures(self, monkeypatch):
        """Three rank-deficient draws raise RankDeficientJacobian."""

        class ZeroGenerator:
            def standard_normal(self, shape):
                return np.zeros(shape)

        with pytest.raises(RankDeficientJacobian):
            make_linear_constraints(4, 2, ZeroGenerator())

    def test_describe(self):
        info = linear_constraint(6, 2).describe()
        assert info["kind"] == "linear"
        assert info["m"] == 2


@pytest.mark.fast
@pytest.mark.core
class TestL2BallConstraint:
    """Tests for ‖x‖² = a₂."""

    def test_on_the_sphere(self):
        """At e₁ the value is 0 and the Jacobian is 2e₁ᵀ."""
        c, J = l2ball_constraint(np.array([1.0, 0.0, 0.0]))
        np.testing.assert_array_equal(c, [0.0])
        np.testing.assert_array_equal(J, [[2.0, 0.0, 0.0]])

    def test_at_origin(self):
        """At 0 the value is -a₂ and the Jacobian vanishes."""
        c, J = l2ball_constraint(np.zeros(3), a2=2.0)
        np.testing.assert_array_equal(c, [-2.0])
        np.testing.assert_array_equal(J, np.zeros((1, 3)))

    def test_constraint_object(self):
        constraint = L2BallConstraint(a2=4.0)
        x = np.array([1.0, 1.0])
        np.testing.assert_array_equal(constraint.value(x), [-2.0])
        assert constraint.gamma == 2.0
        assert constraint.num_constraints == 1

    def test_positive_radius_required(self):
        with pytest.raises(ValueError):
            L2BallConstraint(a2=0.0)


@pytest.mark.fast
class TestProblem:
    """Tests for problem composition."""

    def test_dimensions(self, logistic_linear_problem, synthetic_dataset):
        assert logistic_linear_problem.n == SYNTHETIC_DIM
        assert logistic_linear_problem.N == synthetic_dataset.num_samples
        assert logistic_linear_problem.m == 2
        assert logistic_linear_problem.gamma == 0.0

    def test_ball_problem_gamma(self, logistic_ball_problem):
        assert logistic_ball_problem.gamma == 2.0

    def test_dimension_mismatch(self):
        objective = QuadraticObjective(np.zeros((3, 4)), np.ones(4))
        with pytest.raises(ValueError):
            build_problem(objective, linear_constraint(5, 2))

    def test_oracles_delegate(self, logistic_linear_problem):
        x = np.ones(SYNTHETIC_DIM)
        c, J = logistic_linear_problem.constraint_and_jacobian(x)
        np.testing.assert_array_equal(c, logistic_linear_problem.constraint(x))
        np.testing.assert_array_equal(J, logistic_linear_problem.jacobian(x))


@pytest.mark.fast
@pytest.mark.core
class TestEstimateLipschitz:
    """Tests for the gradient-difference Lipschitz estimate."""

    def _quadratic(self, curvature):
        centers = np.random.default_rng(0).standard_normal((10, len(curvature)))
        return build_problem(QuadraticObjective(centers, curvature), linear_constraint(len(curvature), 1))

    def test_half_squared_norm(self):
        """f = ½‖x - p‖² has L = 1 and every probe sees exactly 1."""
        problem = self._quadratic(np.ones(4))
        rng = RandomStreams(0).generator(Stream.LIPSCHITZ)
        assert estimate_lipschitz(problem, np.zeros(4), rng) == pytest.approx(1.0, rel=1e-9)

    def test_never_exceeds_true_constant(self):
        """Each probe is a lower bound on max hⱼ."""
        curvature = np.array([0.5, 1.0, 3.0, 2.0])
        problem = self._quadratic(curvature)
        rng = RandomStreams(1).generator(Stream.LIPSCHITZ)
        estimate = estimate_lipschitz(problem, np.ones(4), rng)
        assert 0.5 - 1e-12 <= estimate <= 3.0 + 1e-9

    def test_deterministic_per_seed(self, logistic_linear_problem):
        x0 = np.full(SYNTHETIC_DIM, 0.1)
        first = estimate_lipschitz(logistic_linear_problem, x0, RandomStreams(5).generator(Stream.LIPSCHITZ))
        second = estimate_lipschitz(logistic_linear_problem, x0, RandomStreams(5).generator(Stream.LIPSCHITZ))
        assert first == second
        assert first > 0

    def test_flat_objective_floored(self):
        """A constant objective still yields a positive estimate."""
        problem = self._quadratic(np.zeros(3))
        estimate = estimate_lipschitz(problem, np.zeros(3), np.random.default_rng(0))
        assert estimate > 0
