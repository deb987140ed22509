"""
Cache services for persistent data storage.
"""

from .dataset_cache import DatasetCache

__all__ = ["DatasetCache"]
