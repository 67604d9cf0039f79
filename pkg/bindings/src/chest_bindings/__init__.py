"""Minimal scripting surface over the chest changepoint library.

Exactly two calls plus a version string, for host environments that only
need estimates: list_estimator ranks candidate changepoints strongest
first, find_changepoints returns the consolidated locations in ascending
order. All returned values are 0-based positions into the input sequence,
as plain Python ints, so outputs compare bitwise-equal with the primary
library's.

One-dimensional float64 arrays cross the boundary by reference; any other
numeric input (lists, tuples, integer or float32 arrays) is converted to
a float64 copy first. Results never depend on which path was taken.

The counting kernels underneath release the interpreter lock while they
run, so concurrent calls from host threads are safe; no state is shared
between calls.
"""

from __future__ import annotations

import numpy as _np

import chest as _chest

__version__ = "0.1.0"

__all__ = ["find_changepoints", "list_estimator", "__version__"]


def _as_series(seq) -> _np.ndarray:
    try:
        arr = _np.asarray(seq, dtype=_np.float64)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"seq must be a numeric sequence: {exc}") from None
    if arr.ndim != 1:
        raise ValueError(f"seq must be one-dimensional, got shape {arr.shape}")
    if arr.size and not _np.isfinite(arr).all():
        raise ValueError("seq must be finite; found NaN or infinity")
    return arr


def _checked_min_distance(value) -> float:
    try:
        md = float(value)
    except (TypeError, ValueError):
        raise TypeError(
            f"min_distance must be a real number, got {value!r}") from None
    if not 0.0 < md < 1.0:
        raise ValueError(
            f"min_distance must lie strictly between 0 and 1, got {md!r}")
    return md


def list_estimator(seq, min_distance):
    """Rank candidate changepoints in seq, strongest first.

    min_distance is the assumed lower bound on segment length as a
    fraction of len(seq). Returns candidate indices only, ordered by
    segment score descending; the caller keeps however many leading
    entries it has use for.
    """
    arr = _as_series(seq)
    md = _checked_min_distance(min_distance)
    return [int(i) for i in _chest.list_estimator(arr, md).indices]


def find_changepoints(seq, min_distance, process_count):
    """Estimate changepoint positions in seq, in ascending order.

    process_count is the number of distinct generating processes behind
    the segments; with a single process the result is empty.
    """
    arr = _as_series(seq)
    md = _checked_min_distance(min_distance)
    try:
        count = int(process_count)
    except (TypeError, ValueError):
        raise TypeError(
            f"process_count must be an integer, got {process_count!r}") from None
    if count != process_count:
        raise TypeError(
            f"process_count must be an integer, got {process_count!r}")
    return [int(t) for t in _chest.find_changepoints(arr, md, count)]
