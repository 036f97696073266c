"""Input validation helpers.

All public entry points funnel array arguments through these so that
dimension mismatches and non-finite values fail early with a clear message.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InvalidInputError


def check_vector(
    x: ArrayLike,
    dim: int | None = None,
    name: str = "x",
) -> NDArray[np.float64]:
    """Coerce to a finite 1-D float64 array, optionally of fixed dimension."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise InvalidInputError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    return arr


def check_matrix(
    m: ArrayLike,
    shape: tuple[int, int] | None = None,
    name: str = "matrix",
) -> NDArray[np.float64]:
    """Coerce to a finite 2-D float64 array, optionally of fixed shape."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if shape is not None and arr.shape != shape:
        raise InvalidInputError(f"{name} has shape {arr.shape}, expected {shape}")
    return arr


def check_scalar(
    v: float,
    name: str = "value",
    positive: bool = False,
    nonnegative: bool = False,
) -> float:
    """Coerce to a finite float with optional sign constraints."""
    try:
        val = float(v)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not a real number: {v!r}") from exc
    if not np.isfinite(val):
        raise InvalidInputError(f"{name} must be finite, got {val}")
    if positive and val <= 0.0:
        raise InvalidInputError(f"{name} must be positive, got {val}")
    if nonnegative and val < 0.0:
        raise InvalidInputError(f"{name} must be nonnegative, got {val}")
    return val
