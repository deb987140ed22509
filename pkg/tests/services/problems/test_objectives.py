"""
Tests for the logistic and quadratic finite-sum objectives.
"""

import math

import numpy as np
import pytest

from src.services.problems.libsvm_parser import parse_libsvm
from src.services.problems.objectives import (
    LogisticObjective,
    QuadraticObjective,
    logistic_component_gradient,
    logistic_objective,
)


def _finite_difference(fun, x, h=1e-6):
    grad = np.zeros_like(x)
    for j in range(len(x)):
        e = np.zeros_like(x)
        e[j] = h
        grad[j] = (fun(x + e) - fun(x - e)) / (2 * h)
    return grad


@pytest.mark.fast
@pytest.mark.core
class TestLogisticObjective:
    """Tests for the logistic loss oracles."""

    def test_value_at_origin_is_log_two(self, synthetic_dataset):
        """Every margin is zero at x = 0."""
        x = np.zeros(synthetic_dataset.num_features)
        assert logistic_objective(synthetic_dataset, x) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_gradient_at_origin(self, synthetic_dataset):
        """∇f(0) = -(1/2N) Σ yᵢ Xᵢ."""
        objective = LogisticObjective(synthetic_dataset)
        X = synthetic_dataset.features.toarray()
        y = synthetic_dataset.labels
        expected = -(y[:, None] * X).sum(axis=0) / (2 * synthetic_dataset.num_samples)
        np.testing.assert_allclose(objective.full_gradient(np.zeros(X.shape[1])), expected, atol=1e-15)

    def test_large_margins_do_not_overflow(self):
        """Huge positive margins give a tiny loss; huge negative ones a linear loss."""
        ds = parse_libsvm("1 1:1\n-1 1:1\n")
        objective = LogisticObjective(ds)
        with np.errstate(over="raise"):
            value = objective.value(np.array([1000.0]))
            grad = objective.full_gradient(np.array([1000.0]))
        assert value == pytest.approx(500.0)
        assert np.all(np.isfinite(grad))
        np.testing.assert_allclose(grad, [0.5])

    def test_gradient_matches_finite_differences(self, synthetic_dataset):
        objective = LogisticObjective(synthetic_dataset)
        x = np.random.default_rng(0).standard_normal(synthetic_dataset.num_features) * 0.5
        numeric = _finite_difference(objective.value, x)
        np.testing.assert_allclose(objective.full_gradient(x), numeric, atol=1e-7)

    def test_component_gradient_matches_finite_differences(self, synthetic_dataset):
        objective = LogisticObjective(synthetic_dataset)
        x = np.random.default_rng(1).standard_normal(synthetic_dataset.num_features) * 0.5
        for i in (0, 17, synthetic_dataset.num_samples - 1):
            numeric = _finite_difference(lambda z: objective.component_value(i, z), x)
            np.testing.assert_allclose(logistic_component_gradient(synthetic_dataset, i, x), numeric, atol=1e-7)

    def test_components_average_to_full_gradient(self, synthetic_dataset):
        """(1/N) Σᵢ ∇fᵢ = ∇f."""
        objective = LogisticObjective(synthetic_dataset)
        x = np.random.default_rng(2).standard_normal(synthetic_dataset.num_features)
        everything = np.arange(synthetic_dataset.num_samples)
        rows = objective.component_gradients(everything, x)
        assert rows.shape == (synthetic_dataset.num_samples, synthetic_dataset.num_features)
        np.testing.assert_allclose(rows.mean(axis=0), objective.full_gradient(x), atol=1e-14)
        np.testing.assert_allclose(objective.batch_gradient(everything, x), objective.full_gradient(x), atol=1e-14)

    def test_batch_gradient_counts_repeats(self, synthetic_dataset):
        """A repeated index is weighted by its multiplicity."""
        objective = LogisticObjective(synthetic_dataset)
        x = np.random.default_rng(3).standard_normal(synthetic_dataset.num_features)
        g0 = objective.component_gradient(0, x)
        g1 = objective.component_gradient(1, x)
        np.testing.assert_allclose(objective.batch_gradient(np.array([0, 0, 1]), x), (2 * g0 + g1) / 3, atol=1e-15)

    def test_value_is_mean_of_components(self, synthetic_dataset):
        objective = LogisticObjective(synthetic_dataset)
        x = np.random.default_rng(4).standard_normal(synthetic_dataset.num_features)
        components = [objective.component_value(i, x) for i in range(objective.num_components)]
        assert objective.value(x) == pytest.approx(np.mean(components), rel=1e-13)


@pytest.mark.fast
class TestQuadraticObjective:
    """Tests for the separable quadratic used as a known-constant test problem."""

    def test_lipschitz_is_max_curvature(self):
        objective = QuadraticObjective(np.zeros((3, 2)), [0.5, 2.0])
        assert objective.lipschitz == 2.0

    def test_gradient(self):
        """∇fᵢ(x) = h ∘ (x - pᵢ)."""
        centers = np.array([[1.0, 0.0], [0.0, 1.0]])
        objective = QuadraticObjective(centers, [1.0, 3.0])
        x = np.array([2.0, 2.0])
        np.testing.assert_allclose(objective.component_gradients(np.array([0, 1]), x), [[1.0, 6.0], [2.0, 3.0]])
        np.testing.assert_allclose(objective.full_gradient(x), [1.5, 4.5])

    def test_value(self):
        objective = QuadraticObjective(np.array([[1.0, 0.0]]), [2.0, 2.0])
        assert objective.value(np.array([0.0, 1.0])) == pytest.approx(2.0)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        objective = QuadraticObjective(rng.standard_normal((7, 4)), rng.uniform(0.5, 2.0, 4))
        x = rng.standard_normal(4)
        np.testing.assert_allclose(objective.full_gradient(x), _finite_difference(objective.value, x), atol=1e-7)

    def test_rejects_bad_curvature(self):
        with pytest.raises(ValueError):
            QuadraticObjective(np.zeros((2, 3)), [1.0, 1.0])
        with pytest.raises(ValueError):
            QuadraticObjective(np.zeros((2, 2)), [1.0, -1.0])
