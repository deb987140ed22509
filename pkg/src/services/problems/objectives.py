"""
Finite-sum objectives f(x) = (1/N) Σᵢ fᵢ(x).

Every objective answers the same oracle set: value, full gradient, and
component gradients for an index batch, either stacked (b×n) or averaged.
The averaged batch path and the full gradient share one code path, so a
batch covering [N] in order reproduces full_gradient bit for bit.
"""

from abc import ABC, abstractmethod

import numpy as np
from scipy.special import expit

from ..models.linalg_data import Matrix, Vector
from ..models.problem_data import Dataset


def logistic_objective(dataset: Dataset, x: Vector) -> float:
    """f(x) = (1/N) Σ log(1 + exp(-yᵢ Xᵢᵀx)), with softplus evaluated overflow-safely."""
    margins = dataset.labels * (dataset.features @ x)
    return float(np.mean(np.logaddexp(0.0, -margins)))


def logistic_component_objective(dataset: Dataset, i: int, x: Vector) -> float:
    """fᵢ(x) = log(1 + exp(-yᵢ Xᵢᵀx))."""
    margin = dataset.labels[i] * float((dataset.features[i] @ x)[0])
    return float(np.logaddexp(0.0, -margin))


def _logistic_weights(labels: np.ndarray, scores: np.ndarray) -> np.ndarray:
    # ∇fᵢ = -yᵢ σ(-yᵢ Xᵢᵀx) Xᵢ, so each row contributes weight -yᵢ σ(-tᵢ)
    return -labels * expit(-labels * scores)


def logistic_component_gradient(dataset: Dataset, i: int, x: Vector) -> Vector:
    """∇fᵢ(x) = -yᵢ Xᵢ σ(-yᵢ Xᵢᵀx)."""
    row = dataset.features[i]
    weight = _logistic_weights(dataset.labels[i : i + 1], row @ x)[0]
    return np.asarray(row.toarray()[0] * weight, dtype=np.float64)


class FiniteSumObjective(ABC):
    """Oracle bundle for f(x) = (1/N) Σᵢ fᵢ(x)."""

    @property
    @abstractmethod
    def num_components(self) -> int:
        """N"""

    @property
    @abstractmethod
    def dimension(self) -> int:
        """n"""

    @abstractmethod
    def value(self, x: Vector) -> float:
        """f(x)"""

    @abstractmethod
    def component_value(self, i: int, x: Vector) -> float:
        """fᵢ(x)"""

    @abstractmethod
    def batch_gradient(self, batch: np.ndarray, x: Vector) -> Vector:
        """(1/b) Σ_{i∈batch} ∇fᵢ(x); repeated indices count repeatedly."""

    @abstractmethod
    def component_gradients(self, batch: np.ndarray, x: Vector) -> Matrix:
        """Rows ∇fᵢ(x) for i in batch, shape b×n."""

    def full_gradient(self, x: Vector) -> Vector:
        return self.batch_gradient(np.arange(self.num_components), x)

    def component_gradient(self, i: int, x: Vector) -> Vector:
        return self.component_gradients(np.array([i]), x)[0]


class LogisticObjective(FiniteSumObjective):
    """Binary logistic loss over a LIBSVM dataset (no regularization, no scaling)."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self._X = dataset.features.tocsr()
        self._y = dataset.labels

    @property
    def num_components(self) -> int:
        return self._X.shape[0]

    @property
    def dimension(self) -> int:
        return self._X.shape[1]

    def value(self, x: Vector) -> float:
        return logistic_objective(self.dataset, x)

    def component_value(self, i: int, x: Vector) -> float:
        return logistic_component_objective(self.dataset, i, x)

    def batch_gradient(self, batch: np.ndarray, x: Vector) -> Vector:
        rows = self._X[batch]
        weights = _logistic_weights(self._y[batch], rows @ x)
        return np.asarray(rows.T @ weights, dtype=np.float64) / len(batch)

    def component_gradients(self, batch: np.ndarray, x: Vector) -> Matrix:
        rows = self._X[batch]
        weights = _logistic_weights(self._y[batch], rows @ x)
        return np.asarray(rows.multiply(weights[:, None]).toarray(), dtype=np.float64)


class QuadraticObjective(FiniteSumObjective):
    """Separable quadratic fᵢ(x) = ½ Σⱼ hⱼ (xⱼ - pᵢⱼ)², gradient Lipschitz constant max hⱼ."""

    def __init__(self, centers, curvature):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
        self.curvature = np.asarray(curvature, dtype=np.float64)
        if self.curvature.shape != (self.centers.shape[1],):
            raise ValueError(f"curvature must have length {self.centers.shape[1]}, got {self.curvature.shape}")
        if np.any(self.curvature < 0):
            raise ValueError("curvature must be nonnegative")

    @property
    def num_components(self) -> int:
        return self.centers.shape[0]

    @property
    def dimension(self) -> int:
        return self.centers.shape[1]

    @property
    def lipschitz(self) -> float:
        return float(np.max(self.curvature))

    def value(self, x: Vector) -> float:
        diff = x[None, :] - self.centers
        return float(np.mean(0.5 * (diff**2) @ self.curvature))

    def component_value(self, i: int, x: Vector) -> float:
        diff = x - self.centers[i]
        return float(0.5 * (diff**2) @ self.curvature)

    def batch_gradient(self, batch: np.ndarray, x: Vector) -> Vector:
        return self.component_gradients(batch, x).mean(axis=0)

    def component_gradients(self, batch: np.ndarray, x: Vector) -> Matrix:
        return self.curvature[None, :] * (x[None, :] - self.centers[batch])
