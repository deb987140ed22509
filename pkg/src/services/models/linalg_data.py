"""
Data models for the dense linear algebra layer.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

# Dense vectors and matrices are float64 numpy arrays throughout.
Vector = NDArray[np.float64]
Matrix = NDArray[np.float64]


@dataclass(frozen=True)
class KktSolution:
    """Primal direction and multipliers solving the saddle-point system."""

    d: Vector
    y: Vector

    # ‖H d + Jᵀ y + g‖∞ and ‖J d + c‖∞ at solve time
    stationarity_residual: float = 0.0
    feasibility_residual: float = 0.0


def as_vector(values, name: str = "vector") -> Vector:
    """Convert to a finite 1-D float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_matrix(values, name: str = "matrix") -> Matrix:
    """Convert to a finite 2-D float64 array with positive dimensions."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be 2-D with positive dimensions, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr
