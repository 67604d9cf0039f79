"""Input validation helpers shared across the public API."""
from __future__ import annotations

import math

import numpy as np


class ParameterError(ValueError):
    """Raised when an argument violates a documented precondition."""


def check_series(x, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array of finite values, length >= 1."""
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} is not numeric: {exc}") from None
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ParameterError(f"{name} must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains NaN or infinite values")
    return arr


def check_fraction(value, name: str) -> float:
    """Validate a strictly interior fraction, 0 < value < 1."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number in (0, 1)") from None
    if not math.isfinite(v) or not 0.0 < v < 1.0:
        raise ParameterError(f"{name} must lie strictly between 0 and 1, got {value!r}")
    return v


def check_int(value, name: str, minimum: int | None = None, maximum: int | None = None) -> int:
    """Validate an integer, optionally bounded on either side."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    v = int(value)
    if minimum is not None and v < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {v}")
    if maximum is not None and v > maximum:
        raise ParameterError(f"{name} must be <= {maximum}, got {v}")
    return v
