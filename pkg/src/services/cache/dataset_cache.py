"""
Parsed dataset cache using diskcache.

Stores the CSR arrays of parsed LIBSVM files so repeated experiments on the
same file skip text parsing. Keys include the file's size and mtime, so an
edited file is re-parsed.
"""

import hashlib
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from diskcache import Cache

from ..models.problem_data import Dataset

logger = logging.getLogger(__name__)

DEFAULT_TTL = 86400 * 30  # 30 days
DEFAULT_SIZE_LIMIT = 2 * 1024**3  # 2GB


def _get_default_cache_dir() -> Path:
    """Get cache directory, checking SVRSQP_CACHE_DIR env var first."""
    if env_cache := os.environ.get("SVRSQP_CACHE_DIR"):
        return Path(env_cache).expanduser()
    return Path.home() / ".cache" / "svr_sqp" / "datasets"


class DatasetCache:
    """
    Disk-based cache for parsed datasets.

    Uses diskcache for persistent storage with LRU eviction.
    NO MCP DEPENDENCIES - can be used from any interface.
    """

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        size_limit: int = DEFAULT_SIZE_LIMIT,
        ttl: int = DEFAULT_TTL,
    ):
        """Initialize the cache.

        Args:
            cache_dir: Directory for cache storage. Defaults to ~/.cache/svr_sqp/datasets
            size_limit: Maximum cache size in bytes. Defaults to 2GB.
            ttl: Time-to-live in seconds. Defaults to 30 days.
        """
        self._cache_dir = Path(cache_dir) if cache_dir else _get_default_cache_dir()
        self._cache_dir.mkdir(parents=True, exist_ok=True)
        self._cache = Cache(directory=str(self._cache_dir), size_limit=size_limit)
        self._ttl = ttl

    @staticmethod
    def cache_key(path: Path, n_features: Optional[int] = None) -> str:
        """Key derived from the resolved path, size, mtime and feature override."""
        path = Path(path).expanduser().resolve()
        stat = path.stat()
        fingerprint = f"{path}|{stat.st_size}|{stat.st_mtime_ns}|{n_features}"
        return "libsvm_v1_" + hashlib.sha256(fingerprint.encode()).hexdigest()[:32]

    def get(self, key: str) -> Optional[Dataset]:
        """Get a cached dataset, or None."""
        cached = self._cache.get(key)

        if cached is not None:
            logger.debug(f"Cache hit for {key}")
            # LRU behavior: reset TTL on access
            self._cache.touch(key, expire=self._ttl)
            return Dataset.from_cache_dict(cached)

        logger.debug(f"Cache miss for {key}")
        return None

    def set(self, key: str, dataset: Dataset) -> None:
        """Store a parsed dataset."""
        self._cache.set(key, dataset.to_cache_dict(), expire=self._ttl)
        logger.info(f"Cached parsed dataset {dataset.source or key}")

    def has(self, key: str) -> bool:
        return key in self._cache

    def delete(self, key: str) -> bool:
        return self._cache.delete(key)

    def clear_all(self) -> None:
        """Clear entire cache."""
        self._cache.clear()

    def close(self) -> None:
        self._cache.close()

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        return {
            "size_bytes": self._cache.volume(),
            "count": len(self._cache),
            "directory": str(self._cache_dir),
            "ttl_seconds": self._ttl,
        }
