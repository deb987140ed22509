"""
Dataset loading service: parse LIBSVM files once, serve later loads from cache.

NO MCP DEPENDENCIES - used by the harness, the CLI and the MCP tools alike.
"""

import logging
from pathlib import Path
from typing import Optional

from ..cache.dataset_cache import DatasetCache
from ..models.problem_data import Dataset
from .libsvm_parser import load_libsvm

logger = logging.getLogger(__name__)


class DatasetService:
    """
    Main service for dataset access.

    Handles:
    - Parsing LIBSVM text files
    - Caching parsed CSR arrays on disk
    """

    def __init__(self, cache: Optional[DatasetCache] = None, use_cache: bool = True):
        """Initialize the dataset service.

        Args:
            cache: DatasetCache instance. Creates default if not provided and caching is on.
            use_cache: Disable to always parse from text
        """
        self._use_cache = use_cache
        self._cache = cache if cache is not None else (DatasetCache() if use_cache else None)

    def load(self, path: Path, n_features: Optional[int] = None, use_cache: bool = True) -> Dataset:
        """Get a parsed dataset, parsing and caching on first access.

        Args:
            path: LIBSVM file path
            n_features: Optional override for the feature dimension
            use_cache: Set False to bypass the cache for this load

        Returns:
            Dataset

        Raises:
            FileNotFoundError: If the file does not exist
            ParseError / LabelError: If the file is malformed
        """
        path = Path(path).expanduser()
        if not path.is_file():
            raise FileNotFoundError(f"Dataset file not found: {path}")

        key = None
        if use_cache and self._use_cache and self._cache is not None:
            key = DatasetCache.cache_key(path, n_features)
            cached = self._cache.get(key)
            if cached is not None:
                logger.info(f"Loaded {path.name} from cache (N={cached.num_samples}, n={cached.num_features})")
                return cached

        dataset = load_libsvm(path, n_features=n_features)

        if key is not None:
            self._cache.set(key, dataset)

        return dataset
