"""Numba kernels for exact pattern-frequency comparisons.

Both kernels work on precomputed window codes (see _codes.py) and return or
accumulate values derived from the integer quantity

    S = sum over codes c of min(count_left[c] * n_right, count_right[c] * n_left)

which relates to the summed absolute frequency difference through

    sum_B |nu_left(B) - nu_right(B)| = 2 - 2 * S / (n_left * n_right)

whenever both sides contain at least one window. Keeping S in integers makes
every split score exact and independent of evaluation order.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def range_min_sum(codes, a_lo, a_hi, b_lo, b_hi, universe):
    """S for window-position ranges [a_lo, a_hi] and [b_lo, b_hi], inclusive."""
    cnt_a = np.zeros(universe, np.int64)
    cnt_b = np.zeros(universe, np.int64)
    for p in range(a_lo, a_hi + 1):
        cnt_a[codes[p]] += 1
    for p in range(b_lo, b_hi + 1):
        cnt_b[codes[p]] += 1
    na = a_hi + 1 - a_lo
    nb = b_hi + 1 - b_lo
    s = np.int64(0)
    for p in range(a_lo, a_hi + 1):
        c = codes[p]
        ca = cnt_a[c]
        if ca > 0:
            cb = cnt_b[c]
            if cb > 0:
                u = ca * nb
                v = cb * na
                s += u if u < v else v
            cnt_a[c] = 0  # visit each code once
    return s


@njit(cache=True, nogil=True)
def split_scan(codes, m, universe, lo, hi, t_lo, t_hi, stride, weight, out):
    """Accumulate weighted per-split frequency differences for one word length.

    The series slice [lo, hi) is cut at every t in [t_lo, t_hi] with
    (t - t_lo) % stride == 0 into left [lo, t) and right [t, hi);
    out[(t - t_lo) // stride] += weight * sum_B |nu_left - nu_right|.

    The left side only gains windows as t grows and the right side only loses
    them, so counts are maintained incrementally and the sum runs over the
    codes present on both sides (everything else contributes min(..) = 0).
    """
    last = hi - m        # largest window start position inside [lo, hi)
    first = lo + m       # smallest t giving the left side a window
    # splits where exactly one side has windows score 1, neither side 0
    for t in range(t_lo, min(t_hi, first - 1) + 1):
        if (t - t_lo) % stride == 0 and t <= last:
            out[(t - t_lo) // stride] += weight
    for t in range(max(t_lo, last + 1), t_hi + 1):
        if (t - t_lo) % stride == 0 and t >= first:
            out[(t - t_lo) // stride] += weight

    t_start = max(t_lo, first)
    t_end = min(t_hi, last)
    if t_start > t_end:
        return
    cnt_l = np.zeros(universe, np.int64)
    cnt_r = np.zeros(universe, np.int64)
    in_shared = np.zeros(universe, np.uint8)
    shared = np.empty(universe, np.int64)
    n_shared = 0
    for p in range(lo, t_start - m + 1):
        cnt_l[codes[p]] += 1
    for p in range(t_start, last + 1):
        cnt_r[codes[p]] += 1
    for p in range(lo, t_start - m + 1):
        c = codes[p]
        if cnt_r[c] > 0 and in_shared[c] == 0:
            in_shared[c] = 1
            shared[n_shared] = c
            n_shared += 1
    nl = np.int64(t_start - m + 1 - lo)
    nr = np.int64(last - t_start + 1)
    for t in range(t_start, t_end + 1):
        if t > t_start:
            c = codes[t - m]   # window x[t-m .. t) joins the left slice
            cnt_l[c] += 1
            if cnt_l[c] == 1 and cnt_r[c] > 0 and in_shared[c] == 0:
                in_shared[c] = 1
                shared[n_shared] = c
                n_shared += 1
            c = codes[t - 1]   # window x[t-1 .. t-1+m) leaves the right slice
            cnt_r[c] -= 1
            if cnt_r[c] == 0 and in_shared[c] == 1:
                in_shared[c] = 0
            nl += 1
            nr -= 1
        if (t - t_lo) % stride != 0:
            continue
        s = np.int64(0)
        keep = 0
        for i in range(n_shared):
            c = shared[i]
            if in_shared[c] == 1:
                u = cnt_l[c] * nr
                v = cnt_r[c] * nl
                s += u if u < v else v
                shared[keep] = c  # drop stale entries as we pass
                keep += 1
        n_shared = keep
        out[(t - t_lo) // stride] += weight * (2.0 - 2.0 * s / (nl * nr))
