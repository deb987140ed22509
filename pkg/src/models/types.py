"""Custom Pydantic types for automatic type coercion."""

from typing import Annotated

from pydantic import BeforeValidator


def _coerce_count(v):
    """Accept numpy integers and integral floats (e.g. 621.0) for counts."""
    if v is None:
        return v
    if float(v) != int(v):
        raise ValueError(f"expected an integral count, got {v}")
    return int(v)


CoercedInt = Annotated[int, BeforeValidator(_coerce_count)]
