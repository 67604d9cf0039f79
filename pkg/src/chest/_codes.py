"""Per-series window codes shared by every slice comparison.

Scoring a split compares pattern frequencies between two slices of the same
series. Encoding every window of the whole series once, per word length and
quantization depth, gives both sides of any split the same pattern
dictionary and turns each comparison into integer work on small code arrays
(see _kernels.py).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels
from .distance import ResolvedParams, _symbols, quantize


class CodeEntry(NamedTuple):
    word_len: int
    weight: float         # combined word-length (and cell-depth) weight
    codes: np.ndarray     # int32, codes[p] encodes the window at position p
    universe: int         # number of distinct codes
    depth: int            # quantization depth, 0 in discrete mode


def _rebase(keys: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inverse = np.unique(keys, return_inverse=True)
    return inverse.astype(np.int64), int(uniq.size)


class SeriesCodes:
    """Window code arrays for one series under resolved parameters."""

    def __init__(self, x: np.ndarray, resolved: ResolvedParams):
        self.n = int(x.size)
        self.resolved = resolved
        self.entries: list[CodeEntry] = []
        if resolved.mode == "discrete":
            sym = _symbols(x, resolved.alphabet_size, "x")
            self._chain(sym, resolved.alphabet_size, 1.0, 0)
        else:
            for depth in range(1, resolved.l_max + 1):
                sym = quantize(x, depth, resolved.value_range)
                self._chain(sym, 1 << depth, resolved.weights[depth], depth)

    def _chain(self, sym: np.ndarray, alphabet: int, scale: float,
               depth: int) -> None:
        # codes for length m+1 come from the rebased length-m code plus the
        # next raw symbol; rebasing keeps products inside int64
        w = self.resolved.weights
        prev = np.empty(0, np.int64)
        for m in range(1, self.resolved.m_max + 1):
            windows = self.n - m + 1
            if windows <= 0:
                break  # no slice can contain such a window either
            if m == 1:
                keys = sym.astype(np.int64)
            else:
                keys = prev[:windows] * alphabet + sym[m - 1:]
            prev, universe = _rebase(keys)
            self.entries.append(
                CodeEntry(m, w[m] * scale, prev.astype(np.int32), universe,
                          depth))

    def _min_samples(self, e: CodeEntry) -> int:
        # defaulted schedules follow the log2 rule of the shorter compared
        # sample, so entry e only takes part when both sides hold at least
        # 2**level samples; pinned schedules always apply
        need = 1
        if self.resolved.m_auto and e.word_len >= 2:
            need = 1 << e.word_len
        if self.resolved.l_auto and e.depth >= 2:
            need = max(need, 1 << e.depth)
        return need

    def pair_distance(self, a_lo: int, a_hi: int, b_lo: int, b_hi: int) -> float:
        """Distance between slices [a_lo, a_hi) and [b_lo, b_hi)."""
        total = 0.0
        for e in self.entries:
            if min(a_hi - a_lo, b_hi - b_lo) < self._min_samples(e):
                continue
            na = a_hi - a_lo - e.word_len + 1
            nb = b_hi - b_lo - e.word_len + 1
            if na <= 0 and nb <= 0:
                continue
            if na <= 0 or nb <= 0:
                total += e.weight
                continue
            s = _kernels.range_min_sum(e.codes, a_lo, a_lo + na - 1,
                                       b_lo, b_lo + nb - 1, e.universe)
            total += e.weight * (2.0 - 2.0 * s / (na * nb))
        return total

    def split_scores(self, lo: int, hi: int, t_lo: int, t_hi: int,
                     stride: int) -> np.ndarray:
        """Scores for cutting [lo, hi) at t = t_lo, t_lo+stride, ... <= t_hi."""
        out = np.zeros((t_hi - t_lo) // stride + 1)
        for e in self.entries:
            need = self._min_samples(e)
            if need == 1:
                _kernels.split_scan(e.codes, e.word_len, e.universe, lo, hi,
                                    t_lo, t_hi, stride, e.weight, out)
                continue
            # left side has t - lo samples, right hi - t; restrict the scan
            # to the strided t where both reach `need`
            k_lo = max(0, -((t_lo - (lo + need)) // stride))
            k_hi = (min(t_hi, hi - need) - t_lo) // stride
            if k_lo > k_hi:
                continue
            s_lo = t_lo + k_lo * stride
            s_hi = t_lo + k_hi * stride
            part = np.zeros(k_hi - k_lo + 1)
            _kernels.split_scan(e.codes, e.word_len, e.universe, lo, hi,
                                s_lo, s_hi, stride, e.weight, part)
            out[k_lo:k_hi + 1] += part
        return out
