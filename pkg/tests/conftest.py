"""
Shared pytest fixtures for SVR-SQP tests.

Synthetic problems are small enough for full solver runs in milliseconds.
Real LIBSVM files (australian, a9a) are looked up in SVRSQP_DATA_DIR; tests
that need them are skipped when the files are missing.
"""

import os
from pathlib import Path
from typing import Optional

import numpy as np
import pytest

from src.services.gradients.sampling import RandomStreams, Stream
from src.services.models.problem_data import Dataset
from src.services.problems.constraints import L2BallConstraint, LinearConstraint, make_linear_constraints
from src.services.problems.libsvm_parser import parse_libsvm
from src.services.problems.objectives import QuadraticObjective
from src.services.problems.problem import Problem, build_logistic_problem, build_problem


def _get_data_dir() -> Path:
    """Get LIBSVM data directory, checking SVRSQP_DATA_DIR env var first."""
    if env_data := os.environ.get("SVRSQP_DATA_DIR"):
        return Path(env_data).expanduser()
    return Path.home() / "libsvm"


DATA_DIR = _get_data_dir()
AUSTRALIAN_PATH = DATA_DIR / "australian"
A9A_PATH = DATA_DIR / "a9a"

# Benchmark sizes (N points, n features)
AUSTRALIAN_N, AUSTRALIAN_DIM = 621, 14
A9A_N, A9A_DIM = 32561, 123

SYNTHETIC_N = 60
SYNTHETIC_DIM = 6


def to_libsvm_text(X: np.ndarray, y: np.ndarray) -> str:
    """Serialize a dense matrix and labels in LIBSVM format, skipping zeros."""
    lines = []
    for row, label in zip(X, y):
        tokens = [f"{label:g}"] + [f"{j + 1}:{float(v)!r}" for j, v in enumerate(row) if v != 0.0]
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


def make_synthetic_data(num_samples: int, num_features: int, seed: int = 0):
    """Features with about a third of entries zero and labels from a noisy linear model."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((num_samples, num_features))
    X[rng.random(X.shape) < 0.3] = 0.0
    w = rng.standard_normal(num_features)
    y = np.where(X @ w + 0.3 * rng.standard_normal(num_samples) > 0, 1.0, -1.0)
    return X, y


def write_libsvm(path: Path, X: np.ndarray, y: np.ndarray) -> Path:
    path.write_text(to_libsvm_text(X, y))
    return path


# =============================================================================
# Dataset fixtures
# =============================================================================


@pytest.fixture(scope="session")
def synthetic_arrays():
    """Dense (X, y) behind the synthetic dataset."""
    return make_synthetic_data(SYNTHETIC_N, SYNTHETIC_DIM, seed=7)


@pytest.fixture(scope="session")
def synthetic_dataset(synthetic_arrays) -> Dataset:
    """Synthetic binary classification dataset (N=60, n=6), parsed from LIBSVM text."""
    X, y = synthetic_arrays
    return parse_libsvm(to_libsvm_text(X, y), n_features=SYNTHETIC_DIM, name="synthetic")


@pytest.fixture
def synthetic_file(tmp_path, synthetic_arrays) -> Path:
    """The synthetic dataset written to a LIBSVM file."""
    X, y = synthetic_arrays
    return write_libsvm(tmp_path / "synthetic.libsvm", X, y)


def _require(path: Path) -> Path:
    if not path.is_file():
        pytest.skip(f"LIBSVM file not found: {path} (set SVRSQP_DATA_DIR)")
    return path


@pytest.fixture(scope="session")
def australian_path() -> Path:
    return _require(AUSTRALIAN_PATH)


@pytest.fixture(scope="session")
def a9a_path() -> Path:
    return _require(A9A_PATH)


# =============================================================================
# Problem fixtures
# =============================================================================


def linear_constraint(n: int, m: int, seed: int = 0) -> LinearConstraint:
    return make_linear_constraints(n, m, RandomStreams(seed).generator(Stream.CONSTRAINTS))


@pytest.fixture(scope="session")
def logistic_linear_problem(synthetic_dataset) -> Problem:
    """Logistic loss on the synthetic data with two random linear constraints."""
    return build_logistic_problem(synthetic_dataset, linear_constraint(SYNTHETIC_DIM, 2))


@pytest.fixture(scope="session")
def logistic_ball_problem(synthetic_dataset) -> Problem:
    """Logistic loss on the synthetic data on the sphere ‖x‖² = 1."""
    return build_logistic_problem(synthetic_dataset, L2BallConstraint(a2=1.0))


def quadratic_problem(
    num_components: int = 40,
    dimension: int = 5,
    m: int = 2,
    seed: int = 0,
    curvature: Optional[np.ndarray] = None,
) -> Problem:
    """Separable quadratic finite sum with known Lipschitz constant and linear constraints."""
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((num_components, dimension))
    if curvature is None:
        curvature = rng.uniform(0.5, 2.0, size=dimension)
    objective = QuadraticObjective(centers, curvature)
    return build_problem(objective, linear_constraint(dimension, m, seed), name="quadratic")


def small_logistic_problem(num_components: int, dimension: int = 3, seed: int = 0) -> Problem:
    """Logistic loss on a few synthetic points with one linear constraint."""
    X, y = make_synthetic_data(num_components, dimension, seed=seed)
    dataset = parse_libsvm(to_libsvm_text(X, y), n_features=dimension, name="small")
    return build_logistic_problem(dataset, linear_constraint(dimension, 1, seed))


@pytest.fixture(scope="session")
def quadratic_linear_problem() -> Problem:
    return quadratic_problem()


SPHERE_KKT_POINT = np.array([1.0, 0.0, 0.0])


def sphere_kkt_problem(num_components: int = 3) -> Problem:
    """Every fᵢ = ½‖x - (2, 0, 0)‖² on ‖x‖² = 1; x = e₁ is a KKT point with y = 1/2."""
    centers = np.tile([2.0, 0.0, 0.0], (num_components, 1))
    return build_problem(QuadraticObjective(centers, np.ones(3)), L2BallConstraint(a2=1.0), name="sphere")
