"""Empirical distributional distance between time-series samples.

The distance compares sliding-window pattern frequencies of the two samples
at every word length up to a schedule bound and, for real-valued data, at
every dyadic quantization depth up to a second bound, combining the scales
with summable weights. It requires no independence or mixing assumptions and
is a (pseudo)metric on samples, bounded by 2.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np

from .validation import ParameterError, check_int, check_series

MAX_WORD_LEN = 20
MAX_QUANT_DEPTH = 16

# Integer-valued series with an alphabet wider than this are treated as real.
_AUTO_ALPHABET_CAP = 4096


def default_weight(j: int) -> float:
    """Scale weight 2**-j, positive and summable over j >= 1."""
    return 2.0 ** -j


@dataclass(frozen=True)
class DistanceParams:
    """Configuration of the empirical distance.

    mode
        "discrete" compares symbol patterns over a finite alphabet (no
        quantization sum), "real" sums over dyadic quantization depths,
        None infers the mode from the data: series whose values are all
        integers in [0, 4096) are discrete, anything else is real.
    alphabet_size
        Alphabet size k >= 2 for discrete mode; None infers max value + 1.
    m_max, l_max
        Word-length and quantization-depth schedules. None resolves to
        max(1, floor(log2 n)) with n the shorter sample, capped at
        MAX_WORD_LEN and MAX_QUANT_DEPTH. l_max is ignored in discrete mode.
    value_range
        (lo, hi) quantization range for real mode; None uses the min/max of
        the concatenated samples.
    weight
        Per-scale weight function j -> w_j, default 2**-j. Must be positive.
    """

    mode: str | None = None
    alphabet_size: int | None = None
    m_max: int | None = None
    l_max: int | None = None
    value_range: tuple[float, float] | None = None
    weight: Callable[[int], float] | None = None

    def __post_init__(self) -> None:
        if self.mode not in (None, "discrete", "real"):
            raise ParameterError(f"mode must be 'discrete' or 'real', got {self.mode!r}")
        if self.alphabet_size is not None:
            # upper bound keeps the radix window encoding inside int64
            check_int(self.alphabet_size, "alphabet_size", minimum=2, maximum=1 << 24)
        if self.m_max is not None:
            check_int(self.m_max, "m_max", minimum=1, maximum=MAX_WORD_LEN)
        if self.l_max is not None:
            check_int(self.l_max, "l_max", minimum=1, maximum=MAX_QUANT_DEPTH)
        if self.value_range is not None:
            lo, hi = self.value_range
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ParameterError(f"value_range must satisfy lo < hi, got {self.value_range!r}")


@dataclass(frozen=True)
class ResolvedParams:
    """DistanceParams with every default filled in against concrete data."""

    mode: str                 # "discrete" | "real"
    alphabet_size: int        # k in discrete mode, 0 otherwise
    m_max: int
    l_max: int                # 1 in discrete mode (unused)
    value_range: tuple[float, float]  # (0, 1) placeholder in discrete mode
    weights: tuple[float, ...]        # weights[j] = w_j, index 0 unused
    # whether each schedule came from the default log2 rule; defaulted
    # schedules rescale with the shorter sample of every comparison, pinned
    # ones apply as given
    m_auto: bool = False
    l_auto: bool = False


def _auto_schedule(n: int) -> int:
    return max(1, int(math.floor(math.log2(n))))


def _integer_alphabet(arrays: tuple[np.ndarray, ...]) -> tuple[bool, int]:
    """Whether every value is a nonnegative integer, and the largest one."""
    hi = 0
    for a in arrays:
        if a.size == 0:
            continue
        if not np.all(a == np.floor(a)) or float(a.min()) < 0.0:
            return False, 0
        hi = max(hi, int(a.max()))
    return True, hi


def resolve_params(params: DistanceParams | None, *arrays: np.ndarray,
                   schedule_n: int | None = None) -> ResolvedParams:
    """Fill every DistanceParams default against the given sample(s)."""
    if params is None:
        params = DistanceParams()
    n = schedule_n if schedule_n is not None else min(a.size for a in arrays)
    n = max(1, n)

    mode = params.mode
    if mode is None and params.alphabet_size is not None:
        mode = "discrete"
    if mode is None:
        integral, top = _integer_alphabet(arrays)
        mode = "discrete" if integral and top < _AUTO_ALPHABET_CAP else "real"

    if mode == "discrete":
        integral, top = _integer_alphabet(arrays)
        if not integral:
            raise ParameterError("discrete mode requires nonnegative integer values")
        k = params.alphabet_size if params.alphabet_size is not None else max(2, top + 1)
        if top >= k:
            raise ParameterError(f"data contains symbols >= alphabet_size ({top} >= {k})")
    else:
        k = 0

    m_max = params.m_max or min(_auto_schedule(n), MAX_WORD_LEN)
    l_max = params.l_max or min(_auto_schedule(n), MAX_QUANT_DEPTH)
    if mode == "discrete":
        l_max = 1

    if mode == "real":
        if params.value_range is not None:
            lo, hi = float(params.value_range[0]), float(params.value_range[1])
        else:
            lo = min(float(a.min()) for a in arrays if a.size)
            hi = max(float(a.max()) for a in arrays if a.size)
            if lo == hi:
                # degenerate constant data: any single-cell quantization works
                hi = lo + 1.0
        value_range = (lo, hi)
    else:
        value_range = (0.0, 1.0)

    wf = params.weight or default_weight
    weights = [0.0]
    for j in range(1, max(m_max, l_max) + 1):
        w = float(wf(j))
        if not math.isfinite(w) or w <= 0.0:
            raise ParameterError(f"weight({j}) must be positive and finite, got {w!r}")
        weights.append(w)
    return ResolvedParams(mode, k, m_max, l_max, value_range, tuple(weights),
                          m_auto=params.m_max is None,
                          l_auto=params.l_max is None and mode == "real")


def quantize(x, depth: int, value_range: tuple[float, float]) -> np.ndarray:
    """Map real values onto the dyadic cell grid of the given depth.

    Cell of v is floor((v - lo) / (hi - lo) * 2**depth), with values outside
    [lo, hi] clamped into the edge cells, so outputs lie in [0, 2**depth).
    """
    arr = check_series(x)
    check_int(depth, "depth", minimum=1, maximum=MAX_QUANT_DEPTH)
    lo, hi = float(value_range[0]), float(value_range[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ParameterError(f"value_range must satisfy lo < hi, got {value_range!r}")
    cells = np.floor((arr - lo) / (hi - lo) * float(1 << depth))
    np.clip(cells, 0, (1 << depth) - 1, out=cells)
    return cells.astype(np.int64)


def _symbols(arr: np.ndarray, k: int, name: str) -> np.ndarray:
    if not np.all(arr == np.floor(arr)) or float(arr.min()) < 0 or float(arr.max()) >= k:
        raise ParameterError(f"{name}: discrete mode requires integer values in [0, {k})")
    return arr.astype(np.int64)


@dataclass(frozen=True)
class FrequencyTable:
    """Sliding-window pattern counts of one sample at one scale.

    counts maps cell-index tuples of length word_len to occurrence counts;
    window_total is the number of windows, max(0, n - word_len + 1). The
    table is empty when the sample is shorter than the word length.
    quant_depth is None for discrete-mode tables.
    """

    word_len: int
    quant_depth: int | None
    counts: Mapping[tuple[int, ...], int]
    window_total: int

    def __post_init__(self) -> None:
        total = sum(self.counts.values())
        if total != self.window_total:
            raise ParameterError(
                f"counts sum to {total}, expected window_total={self.window_total}")

    def frequency(self, pattern: tuple[int, ...]) -> float:
        """Empirical frequency of one pattern; 0 for an empty table."""
        if self.window_total == 0:
            return 0.0
        return self.counts.get(tuple(pattern), 0) / self.window_total

    def to_json(self) -> str:
        payload = {
            "word_len": self.word_len,
            "quant_depth": self.quant_depth,
            "window_total": self.window_total,
            "counts": {" ".join(map(str, pat)): c for pat, c in sorted(self.counts.items())},
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "FrequencyTable":
        payload = json.loads(text)
        counts = {tuple(int(s) for s in key.split()): int(c)
                  for key, c in payload["counts"].items()}
        return cls(payload["word_len"], payload["quant_depth"], counts,
                   payload["window_total"])


def empirical_frequencies(x, word_len: int, depth: int | None = None,
                          params: DistanceParams | None = None) -> FrequencyTable:
    """Count sliding-window patterns of one sample at one scale.

    Discrete data is compared symbol-wise (``depth`` is ignored); real data
    is first quantized at ``depth``, which is then required.
    """
    arr = check_series(x)
    check_int(word_len, "word_len", minimum=1, maximum=MAX_WORD_LEN)
    r = resolve_params(params, arr)
    if r.mode == "discrete":
        q = _symbols(arr, r.alphabet_size, "x")
        depth_out = None
    else:
        if depth is None:
            raise ParameterError("depth is required for real-valued data")
        check_int(depth, "depth", minimum=1, maximum=MAX_QUANT_DEPTH)
        q = quantize(arr, depth, r.value_range)
        depth_out = depth
    total = max(0, arr.size - word_len + 1)
    if total == 0:
        return FrequencyTable(word_len, depth_out, {}, 0)
    windows = np.lib.stride_tricks.sliding_window_view(q, word_len)
    patterns, counts = np.unique(windows, axis=0, return_counts=True)
    table = {tuple(int(v) for v in row): int(c) for row, c in zip(patterns, counts)}
    return FrequencyTable(word_len, depth_out, table, total)


def _pair_term_sums(qx: np.ndarray, qy: np.ndarray, m_max: int,
                    alphabet: int) -> Iterator[float]:
    """Yield sum_B |freq_x(B) - freq_y(B)| for word lengths 1..m_max.

    Window patterns of both samples are re-encoded jointly at each length
    (radix chaining over np.unique), so counting is exact at any depth.
    """
    nx, ny = qx.size, qy.size
    px, py = qx, qy
    for m in range(1, m_max + 1):
        if m == 1:
            keys_x, keys_y = px, py
        else:
            # previous-length code plus next raw symbol; rebased below
            keys_x = px[:-1] * alphabet + qx[m - 1:]
            keys_y = py[:-1] * alphabet + qy[m - 1:]
        uniq, inverse = np.unique(np.concatenate([keys_x, keys_y]), return_inverse=True)
        px = inverse[:keys_x.size]
        py = inverse[keys_x.size:]
        tx = max(0, nx - m + 1)
        ty = max(0, ny - m + 1)
        if tx == 0 and ty == 0:
            yield 0.0
            continue
        if tx == 0 or ty == 0:
            # one empty table: every observed pattern contributes its full mass
            yield 1.0
            continue
        cx = np.bincount(px, minlength=uniq.size)
        cy = np.bincount(py, minlength=uniq.size)
        yield float(np.abs(cx / tx - cy / ty).sum())


def empirical_distance(x, y, params: DistanceParams | None = None) -> float:
    """Weighted pattern-frequency distance between two samples, in [0, 2].

    Sums weight(m) * weight(l) * sum_B |freq_x(B) - freq_y(B)| over word
    lengths m (and quantization depths l for real-valued data; discrete data
    has a single symbol-level term per m). The pattern sum runs over patterns
    observed in either sample, accumulated in lexicographic cell order.
    """
    xa = check_series(x, "x")
    ya = check_series(y, "y")
    r = resolve_params(params, xa, ya)
    w = r.weights
    total = 0.0
    if r.mode == "discrete":
        qx = _symbols(xa, r.alphabet_size, "x")
        qy = _symbols(ya, r.alphabet_size, "y")
        for m, term in enumerate(_pair_term_sums(qx, qy, r.m_max, r.alphabet_size), start=1):
            total += w[m] * term
        return total
    for depth in range(1, r.l_max + 1):
        qx = quantize(xa, depth, r.value_range)
        qy = quantize(ya, depth, r.value_range)
        for m, term in enumerate(_pair_term_sums(qx, qy, r.m_max, 1 << depth), start=1):
            total += (w[m] * w[depth]) * term
    return total
