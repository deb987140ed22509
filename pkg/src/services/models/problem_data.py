"""
Data models for benchmark datasets.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
import scipy.sparse as sp


@dataclass
class Dataset:
    """Binary classification data: sparse feature rows and ±1 labels."""

    features: sp.csr_matrix  # N × n
    labels: np.ndarray  # N entries, each exactly -1.0 or +1.0

    # raw label value (as read) -> normalized label
    label_map: Dict[float, float] = field(default_factory=dict)
    source: str = ""

    @property
    def num_samples(self) -> int:
        return self.features.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    def label_histogram(self) -> Dict[int, int]:
        """Count of samples per normalized label."""
        return {
            -1: int(np.count_nonzero(self.labels < 0)),
            1: int(np.count_nonzero(self.labels > 0)),
        }

    def to_cache_dict(self) -> Dict[str, Any]:
        """Plain-array representation for the disk cache."""
        csr = self.features
        return {
            "data": csr.data,
            "indices": csr.indices,
            "indptr": csr.indptr,
            "shape": csr.shape,
            "labels": self.labels,
            "label_map": dict(self.label_map),
            "source": self.source,
        }

    @classmethod
    def from_cache_dict(cls, cached: Dict[str, Any]) -> "Dataset":
        features = sp.csr_matrix(
            (cached["data"], cached["indices"], cached["indptr"]),
            shape=tuple(cached["shape"]),
        )
        return cls(
            features=features,
            labels=np.asarray(cached["labels"], dtype=np.float64),
            label_map=dict(cached.get("label_map", {})),
            source=cached.get("source", ""),
        )
