"""Changepoint estimators built on the pattern-frequency distance.

The score of a split is the distance between the samples on its two sides.
A segment grid provides coarse candidates, a windowed scan refines each one,
and farthest-point clustering of the induced segments discards candidates
that do not separate distinct processes.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._codes import SeriesCodes
from .distance import DistanceParams, empirical_distance, resolve_params
from .validation import ParameterError, check_fraction, check_int, check_series

# split scans evaluate at most this many positions before refining
SCAN_BUDGET = 2000


@dataclass(frozen=True)
class Candidate:
    """One changepoint estimate; samples [0, index) precede the change."""

    index: int
    score: float


@dataclass(frozen=True)
class CandidateList:
    """Scored changepoint candidates, strongest first."""

    candidates: tuple[Candidate, ...]
    alpha: float
    n: int

    def __post_init__(self) -> None:
        for c in self.candidates:
            if not 0 < c.index < self.n:
                raise ParameterError(f"candidate index {c.index} outside (0, {self.n})")
        scores = [c.score for c in self.candidates]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ParameterError("candidate scores must be non-increasing")

    @property
    def indices(self) -> list[int]:
        return [c.index for c in self.candidates]

    @property
    def scores(self) -> list[float]:
        return [c.score for c in self.candidates]

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)


@dataclass(frozen=True)
class Segmentation:
    """Strictly increasing boundaries 0 = b_0 < ... < b_K = n."""

    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        b = self.boundaries
        if len(b) < 2 or b[0] != 0:
            raise ParameterError("boundaries must start at 0 and end at n")
        if any(u >= v for u, v in zip(b, b[1:])):
            raise ParameterError("boundaries must be strictly increasing")

    @property
    def segment_count(self) -> int:
        return len(self.boundaries) - 1

    def slices(self) -> list[tuple[int, int]]:
        b = self.boundaries
        return list(zip(b[:-1], b[1:]))


@dataclass(frozen=True)
class ClusterAssignment:
    """1-based cluster labels per segment plus the center segment indices."""

    labels: tuple[int, ...]
    centers: tuple[int, ...]


def delta(x, a: int, b: int, params: DistanceParams | None = None) -> float:
    """Distance between the two halves of x[a:b] (midpoint floored)."""
    xa = check_series(x)
    a = check_int(a, "a", minimum=0)
    b = check_int(b, "b", minimum=0)
    if not a < b <= xa.size:
        raise ParameterError(f"need 0 <= a < b <= {xa.size}, got ({a}, {b})")
    if b - a < 2:
        raise ParameterError("segment shorter than 2 samples has no halves")
    mid = (a + b) // 2
    return empirical_distance(xa[a:mid], xa[mid:b], params)


def _scan_argmax(codes: SeriesCodes, lo: int, hi: int, t_lo: int, t_hi: int,
                 scan_stride: int | None) -> int:
    """Best split of [lo, hi) over t in [t_lo, t_hi], ties to the smallest t."""
    if scan_stride is not None:
        stride = check_int(scan_stride, "scan_stride", minimum=1)
    else:
        stride = max(1, math.ceil((t_hi - t_lo + 1) / SCAN_BUDGET))
    scores = codes.split_scores(lo, hi, t_lo, t_hi, stride)
    pick = int(np.argmax(scores))  # first occurrence = smallest t
    t_best = t_lo + stride * pick
    if stride == 1:
        return t_best
    # rescan the neighborhood of the coarse winner at full resolution
    v_best = float(scores[pick])
    r_lo = max(t_lo, t_best - stride + 1)
    r_hi = min(t_hi, t_best + stride - 1)
    fine = codes.split_scores(lo, hi, r_lo, r_hi, 1)
    pick = int(np.argmax(fine))
    t_fine = r_lo + pick
    v_fine = float(fine[pick])
    if v_fine > v_best or (v_fine == v_best and t_fine < t_best):
        return t_fine
    return t_best


def phi(x, a: int, b: int, alpha: float,
        params: DistanceParams | None = None, *,
        scan_stride: int | None = None) -> int:
    """Single-change estimate in [a, b] with alpha-extended comparison windows.

    Each split t is scored against samples x[a - ceil(n*alpha) : t] and
    x[t : b + floor(n*alpha)], clamped to the series; the best-scoring t is
    returned, ties going to the smallest.
    """
    xa = check_series(x)
    n = xa.size
    alpha = check_fraction(alpha, "alpha")
    a = check_int(a, "a", minimum=0)
    b = check_int(b, "b", minimum=0)
    if a > b or b > n:
        raise ParameterError(f"need 0 <= a <= b <= {n}, got ({a}, {b})")
    lo = max(0, a - math.ceil(n * alpha))
    hi = min(n, b + math.floor(n * alpha))
    if a <= lo or b >= hi:
        raise ParameterError(
            "scan range leaves one side of a split empty; move [a, b] away "
            "from the series ends or increase alpha")
    resolved = resolve_params(params, xa)
    codes = SeriesCodes(xa[lo:hi], resolved)
    return lo + _scan_argmax(codes, 0, hi - lo, a - lo, b - lo, scan_stride)


def _grid(n: int, alpha: float) -> list[tuple[int, int]]:
    g = math.floor(alpha * n / 3)
    if g < 2:
        raise ParameterError(
            f"sample too short for the segment grid: floor(alpha*n/3) = {g} < 2")
    count = n // g
    if count < 3:
        raise ParameterError("segment grid needs at least three segments")
    segs = [(j * g, (j + 1) * g) for j in range(count)]
    segs[-1] = (segs[-1][0], n)  # remainder joins the last segment
    return segs


def _select(segs: list[tuple[int, int]], scores: list[float],
            n: int, alpha: float) -> list[int]:
    # doubled midpoints keep the exclusion test in integers
    radius2 = 2 * math.ceil(n * alpha / 2)
    mids2 = [s + e for s, e in segs]
    available = [True] * len(segs)
    available[0] = available[-1] = False
    order: list[int] = []
    while True:
        best = -1
        for i in range(1, len(segs) - 1):
            if available[i] and (best < 0 or scores[i] > scores[best]):
                best = i
        if best < 0:
            return order
        order.append(best)
        for i in range(len(segs)):
            if available[i] and abs(mids2[i] - mids2[best]) <= radius2:
                available[i] = False


def _list_pipeline(codes: SeriesCodes, alpha: float, threads: int,
                   scan_stride: int | None) -> CandidateList:
    n = codes.n
    segs = _grid(n, alpha)
    middle = list(range(1, len(segs) - 1))

    def seg_score(i: int) -> float:
        s, e = segs[i]
        mid = (s + e) // 2
        return codes.pair_distance(s, mid, mid, e)

    def run(fn, items):
        if threads == 1:
            return [fn(i) for i in items]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))  # order keyed by item

    scores = [0.0] * len(segs)
    for i, v in zip(middle, run(seg_score, middle)):
        scores[i] = v

    order = _select(segs, scores, n, alpha)
    ext_l = math.ceil(n * alpha)
    ext_r = math.floor(n * alpha)

    def locate(i: int) -> int:
        s, e = segs[i]
        lo = max(0, s - ext_l)
        hi = min(n, e + ext_r)
        return _scan_argmax(codes, lo, hi, s, e, scan_stride)

    spots = run(locate, order)
    cands = tuple(Candidate(int(t), float(scores[i]))
                  for t, i in zip(spots, order))
    return CandidateList(cands, alpha, n)


def list_estimator(x, min_distance: float,
                   params: DistanceParams | None = None, *,
                   threads: int = 1,
                   scan_stride: int | None = None) -> CandidateList:
    """Scored changepoint candidates from the segment grid.

    The series is cut into segments of floor(min_distance*n/3) samples.
    Interior segments are scored by the distance between their halves and
    picked greedily, each pick excluding segments whose midpoints lie within
    ceil(n*min_distance/2) of its own; every picked segment is then scanned
    for its best split. Candidates come back strongest first.
    """
    xa = check_series(x)
    alpha = check_fraction(min_distance, "min_distance")
    threads = check_int(threads, "threads", minimum=1)
    if scan_stride is not None:
        check_int(scan_stride, "scan_stride", minimum=1)
    resolved = resolve_params(params, xa)
    codes = SeriesCodes(xa, resolved)
    return _list_pipeline(codes, alpha, threads, scan_stride)


def _cluster(codes: SeriesCodes, seg: Segmentation, m: int) -> ClusterAssignment:
    slices = seg.slices()
    k = len(slices)
    if m > k:
        raise ParameterError(f"process_count {m} exceeds the {k} segments formed")
    dist = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d = codes.pair_distance(slices[i][0], slices[i][1],
                                    slices[j][0], slices[j][1])
            dist[i, j] = dist[j, i] = d

    centers = [0]
    while len(centers) < m:
        best, best_d = -1, -1.0
        for i in range(k):
            if i in centers:
                continue
            dmin = min(dist[i][c] for c in centers)
            if dmin > best_d:  # ties go to the leftmost segment
                best, best_d = i, dmin
        centers.append(best)

    labels = [0] * k
    for i in range(k):
        if i in centers:
            labels[i] = centers.index(i) + 1
            continue
        best, best_d = 0, math.inf
        for ci, c in enumerate(centers):
            if dist[i][c] < best_d:  # ties go to the lowest cluster id
                best, best_d = ci + 1, dist[i][c]
        labels[i] = best
    return ClusterAssignment(tuple(labels), tuple(centers))


def cluster_segments(x, seg: Segmentation, process_count: int,
                     params: DistanceParams | None = None) -> ClusterAssignment:
    """Group the segments of x into process_count clusters.

    The first segment seeds the clustering; each further center is the
    segment farthest (in minimum distance) from the centers chosen so far,
    and the rest join their nearest center.
    """
    xa = check_series(x)
    if not isinstance(seg, Segmentation):
        raise ParameterError("seg must be a Segmentation")
    if seg.boundaries[-1] != xa.size:
        raise ParameterError("segmentation does not cover the series")
    m = check_int(process_count, "process_count", minimum=1)
    resolved = resolve_params(params, xa)
    codes = SeriesCodes(xa, resolved)
    return _cluster(codes, seg, m)


def find_changepoints(x, min_distance: float, process_count: int,
                      params: DistanceParams | None = None, *,
                      threads: int = 1,
                      scan_stride: int | None = None) -> list[int]:
    """Changepoint estimates assuming process_count distinct processes.

    Candidates from list_estimator cut the series into segments; segments
    are clustered into process_count groups, and every candidate whose two
    neighboring segments land in the same cluster is dropped. The survivors
    come back in increasing order.
    """
    xa = check_series(x)
    alpha = check_fraction(min_distance, "min_distance")
    m = check_int(process_count, "process_count", minimum=1)
    threads = check_int(threads, "threads", minimum=1)
    if scan_stride is not None:
        check_int(scan_stride, "scan_stride", minimum=1)
    resolved = resolve_params(params, xa)
    codes = SeriesCodes(xa, resolved)
    clist = _list_pipeline(codes, alpha, threads, scan_stride)
    cand = sorted({c.index for c in clist.candidates})
    seg = Segmentation((0, *cand, xa.size))
    labels = _cluster(codes, seg, m).labels
    return [c for i, c in enumerate(cand) if labels[i] != labels[i + 1]]


class ListEstimator(BaseEstimator):
    """Scikit-learn style wrapper around list_estimator.

    fit(X) computes the candidate list for a 1-D series (or single-column
    matrix); predict() returns the candidate indices, strongest first.
    """

    def __init__(self, min_distance: float = 0.05, mode: str | None = None,
                 alphabet_size: int | None = None, m_max: int | None = None,
                 l_max: int | None = None,
                 value_range: tuple[float, float] | None = None,
                 threads: int = 1, scan_stride: int | None = None):
        self.min_distance = min_distance
        self.mode = mode
        self.alphabet_size = alphabet_size
        self.m_max = m_max
        self.l_max = l_max
        self.value_range = value_range
        self.threads = threads
        self.scan_stride = scan_stride

    def _distance_params(self) -> DistanceParams:
        return DistanceParams(mode=self.mode, alphabet_size=self.alphabet_size,
                              m_max=self.m_max, l_max=self.l_max,
                              value_range=self.value_range)

    @staticmethod
    def _flatten(X) -> np.ndarray:
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim == 2 and arr.shape[1] == 1:
            arr = arr[:, 0]
        return arr

    def fit(self, X, y=None):
        self.candidates_ = list_estimator(
            self._flatten(X), self.min_distance, self._distance_params(),
            threads=self.threads, scan_stride=self.scan_stride)
        return self

    def predict(self, X=None) -> np.ndarray:
        if not hasattr(self, "candidates_"):
            raise ParameterError("estimator is not fitted; call fit first")
        return np.asarray(self.candidates_.indices, dtype=np.int64)


class ChangepointEstimator(ListEstimator):
    """Scikit-learn style wrapper around find_changepoints.

    Requires the number of distinct processes; predict() returns the
    estimated changepoints in increasing order.
    """

    def __init__(self, process_count: int = 2, min_distance: float = 0.05,
                 mode: str | None = None, alphabet_size: int | None = None,
                 m_max: int | None = None, l_max: int | None = None,
                 value_range: tuple[float, float] | None = None,
                 threads: int = 1, scan_stride: int | None = None):
        super().__init__(min_distance=min_distance, mode=mode,
                         alphabet_size=alphabet_size, m_max=m_max,
                         l_max=l_max, value_range=value_range,
                         threads=threads, scan_stride=scan_stride)
        self.process_count = process_count

    def fit(self, X, y=None):
        self.changepoints_ = find_changepoints(
            self._flatten(X), self.min_distance, self.process_count,
            self._distance_params(), threads=self.threads,
            scan_stride=self.scan_stride)
        return self

    def predict(self, X=None) -> np.ndarray:
        if not hasattr(self, "changepoints_"):
            raise ParameterError("estimator is not fitted; call fit first")
        return np.asarray(self.changepoints_, dtype=np.int64)
