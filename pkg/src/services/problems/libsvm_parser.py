"""
Reader for the LIBSVM / svmlight sparse text format.

One sample per line: ``<label> <idx>:<val> <idx>:<val> ...`` with 1-based
feature indices. Blank lines and ``#`` comments are skipped. Labels from the
usual binary conventions ({0,1}, {1,2}, {-1,+1}) are normalized so the larger
raw label becomes +1. No scaling is applied to feature values.
"""

import logging
import math
from pathlib import Path
from typing import IO, Iterable, List, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError, LabelError, ParseError
from ..models.problem_data import Dataset

logger = logging.getLogger(__name__)

Source = Union[bytes, str, IO[bytes], IO[str], Iterable[Union[bytes, str]]]


def _iter_lines(source: Source) -> Iterable[Tuple[int, str]]:
    """(line number, text) pairs; bytes are decoded one line at a time."""
    if isinstance(source, (bytes, str)):
        source = source.splitlines()
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(lineno, f"invalid UTF-8 at byte {e.start}") from e
        yield lineno, raw


def _parse_float(token: str, lineno: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"invalid {what} {token!r}")
    if not math.isfinite(value):
        raise ParseError(lineno, f"non-finite {what} {token!r}")
    return value


def normalize_labels(raw_labels: List[float]) -> dict:
    """Map raw labels to ±1: the larger of two distinct labels becomes +1.

    A file with a single distinct label maps it by sign (positive -> +1).

    Raises:
        LabelError: If more than two distinct labels occur
    """
    distinct = sorted(set(raw_labels))
    if len(distinct) > 2:
        shown = ", ".join(f"{v:g}" for v in distinct[:5])
        more = ", ..." if len(distinct) > 5 else ""
        raise LabelError(f"expected two distinct labels, found {len(distinct)} ({shown}{more})")
    if len(distinct) == 2:
        return {distinct[0]: -1.0, distinct[1]: 1.0}
    if len(distinct) == 1:
        return {distinct[0]: 1.0 if distinct[0] > 0 else -1.0}
    return {}


def parse_libsvm(source: Source, n_features: Optional[int] = None, name: str = "") -> Dataset:
    """Parse LIBSVM text into a Dataset with a CSR feature matrix.

    Args:
        source: Bytes, text, or a (binary or text) line iterable such as an open file
        n_features: Override for n; defaults to the largest index seen
        name: Label recorded as the dataset source

    Returns:
        Dataset with zero-padded rows

    Raises:
        ParseError: On malformed tokens, indices < 1, duplicate indices in a row,
            or indices above the n_features override
            and on lines that are not valid UTF-8
        ConfigError: If n_features is below 1
        LabelError: If more than two distinct labels occur
    """
    if n_features is not None and n_features < 1:
        raise ConfigError("n_features", f"must be positive, got {n_features}")

    raw_labels: List[float] = []
    data: List[float] = []
    indices: List[int] = []
    indptr: List[int] = [0]
    max_index = 0

    for lineno, line in _iter_lines(source):
        content = line.split("#", 1)[0]
        tokens = content.split()
        if not tokens:
            continue

        raw_labels.append(_parse_float(tokens[0], lineno, "label"))

        seen = set()
        for token in tokens[1:]:
            idx_str, sep, val_str = token.partition(":")
            if not sep or not idx_str or not val_str:
                raise ParseError(lineno, f"expected <index>:<value>, got {token!r}")
            try:
                idx = int(idx_str)
            except ValueError:
                raise ParseError(lineno, f"invalid feature index {idx_str!r}")
            if idx < 1:
                raise ParseError(lineno, f"feature index {idx} must be >= 1")
            if n_features is not None and idx > n_features:
                raise ParseError(lineno, f"feature index {idx} exceeds n_features={n_features}")
            if idx in seen:
                raise ParseError(lineno, f"duplicate feature index {idx}")
            seen.add(idx)

            indices.append(idx - 1)
            data.append(_parse_float(val_str, lineno, "feature value"))
            max_index = max(max_index, idx)

        indptr.append(len(indices))

    if not raw_labels:
        raise ParseError(0, "no samples found")

    label_map = normalize_labels(raw_labels)
    n = n_features if n_features is not None else max_index
    if n < 1:
        raise ParseError(max(len(indptr) - 1, 1), "no features found")

    features = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(raw_labels), n),
    )
    features.sort_indices()
    labels = np.array([label_map[v] for v in raw_labels], dtype=np.float64)

    logger.info(f"Parsed {features.shape[0]} samples with {n} features from {name or 'stream'}")
    return Dataset(features=features, labels=labels, label_map=label_map, source=name)


def load_libsvm(path: Path, n_features: Optional[int] = None) -> Dataset:
    """Parse a LIBSVM file from disk."""
    path = Path(path).expanduser()
    with open(path, "rb") as f:
        return parse_libsvm(f, n_features=n_features, name=str(path))
