"""Seeded generators for piecewise-stationary test samples.

Includes i.i.d. Bernoulli, the thresholded irrational-rotation process (a
stationary ergodic binary process with long-range dependence), its
real-valued hidden variant, and piecewise composition with ground-truth
changepoints. All randomness flows through numpy SeedSequence so that every
sample is reproducible byte-for-byte from (spec, seed).
"""
from __future__ import annotations

import json
import numbers
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .validation import ParameterError, check_fraction, check_int, check_series


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _check_probability(p, name: str) -> float:
    if not isinstance(p, numbers.Real) or isinstance(p, bool):
        raise ParameterError(f"{name} must be a real number, got {p!r}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def _check_interval(value, name: str) -> tuple[float, float]:
    lo, hi = float(value[0]), float(value[1])
    if not lo < hi:
        raise ParameterError(f"{name} must be an interval (lo, hi) with lo < hi")
    return lo, hi


def gen_bernoulli(p: float, length: int, seed=None) -> np.ndarray:
    """I.i.d. Bernoulli(p) sample of the given length."""
    p = _check_probability(p, "p")
    length = check_int(length, "length", minimum=1)
    rng = np.random.default_rng(_seed_sequence(seed))
    return rng.binomial(1, p, size=length).astype(np.float64)


def _rotation_orbit(beta: float, length: int, start: float) -> np.ndarray:
    # closed form of the recursion R_i = frac(R_{i-1} + beta): no drift
    # accumulates over long samples
    steps = np.arange(1, length + 1, dtype=np.float64)
    return np.mod(start + steps * beta, 1.0)


def _check_start(start) -> float:
    start = float(start)
    if not 0.0 <= start < 1.0:
        raise ParameterError(f"start must lie in [0, 1), got {start!r}")
    return start


def gen_irrational_rotation(beta: float, length: int, seed=None, *,
                            start: float | None = None) -> np.ndarray:
    """Binary sample from the thresholded rotation orbit.

    The orbit starts at a seeded uniform draw (the starting point itself is
    not emitted) and advances by beta modulo 1; emitted values are the
    indicators of the orbit reaching [0.5, 1). The keyword start pins the
    starting point for tests.
    """
    beta = check_fraction(beta, "beta")
    length = check_int(length, "length", minimum=1)
    if start is None:
        start = float(np.random.default_rng(_seed_sequence(seed)).random())
    else:
        start = _check_start(start)
    orbit = _rotation_orbit(beta, length, start)
    return (orbit >= 0.5).astype(np.float64)


def gen_hidden_rotation(beta: float, length: int, seed=None, *,
                        u_range: tuple[float, float] = (0.0, 1.0),
                        v_range: tuple[float, float] = (0.9, 1.9),
                        start: float | None = None,
                        u: np.ndarray | None = None,
                        v: np.ndarray | None = None) -> np.ndarray:
    """Real-valued sample driven by a hidden rotation indicator.

    Each output is U_i where the hidden binary sample is 0 and V_i where it
    is 1, with U uniform on u_range and V uniform on v_range. The rotation
    start and the two uniform streams derive from independent substreams of
    the seed; start/u/v keywords force them for tests.
    """
    beta = check_fraction(beta, "beta")
    length = check_int(length, "length", minimum=1)
    u_range = _check_interval(u_range, "u_range")
    v_range = _check_interval(v_range, "v_range")
    s_start, s_u, s_v = _seed_sequence(seed).spawn(3)
    if start is None:
        start = float(np.random.default_rng(s_start).random())
    else:
        start = _check_start(start)
    y = gen_irrational_rotation(beta, length, start=start)
    if u is None:
        u = np.random.default_rng(s_u).uniform(*u_range, size=length)
    else:
        u = check_series(u, "u")
    if v is None:
        v = np.random.default_rng(s_v).uniform(*v_range, size=length)
    else:
        v = check_series(v, "v")
    if u.size != length or v.size != length:
        raise ParameterError("forced u/v must have exactly `length` values")
    return u * (1.0 - y) + v * y


def running_mean(x, window: int) -> np.ndarray:
    """Mean over each length-`window` slice; output has n - window + 1 values."""
    xa = check_series(x)
    window = check_int(window, "window", minimum=1)
    if window > xa.size:
        raise ParameterError(f"window {window} exceeds sample length {xa.size}")
    return sliding_window_view(xa, window).mean(axis=1)


@dataclass(frozen=True)
class BernoulliIID:
    """I.i.d. Bernoulli process with success probability p."""

    p: float
    kind = "bernoulli"

    def __post_init__(self) -> None:
        _check_probability(self.p, "p")

    def sample(self, length: int, seed) -> np.ndarray:
        return gen_bernoulli(self.p, length, seed)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p}


@dataclass(frozen=True)
class IrrationalRotation:
    """Thresholded rotation orbit with shift beta (intended irrational)."""

    beta: float
    kind = "irrational_rotation"

    def __post_init__(self) -> None:
        check_fraction(self.beta, "beta")

    def sample(self, length: int, seed) -> np.ndarray:
        return gen_irrational_rotation(self.beta, length, seed)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "beta": self.beta}


@dataclass(frozen=True)
class HiddenIrrationalRotation:
    """Hidden-rotation mixture of two uniform ranges."""

    beta: float
    u_range: tuple[float, float] = (0.0, 1.0)
    v_range: tuple[float, float] = (0.9, 1.9)
    kind = "hidden_irrational_rotation"

    def __post_init__(self) -> None:
        check_fraction(self.beta, "beta")
        _check_interval(self.u_range, "u_range")
        _check_interval(self.v_range, "v_range")

    def sample(self, length: int, seed) -> np.ndarray:
        return gen_hidden_rotation(self.beta, length, seed,
                                   u_range=self.u_range, v_range=self.v_range)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "beta": self.beta,
                "u_range": list(self.u_range), "v_range": list(self.v_range)}


_PROCESS_KINDS = {
    "bernoulli": BernoulliIID,
    "irrational_rotation": IrrationalRotation,
    "hidden_irrational_rotation": HiddenIrrationalRotation,
}


def process_from_json_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "bernoulli":
        return BernoulliIID(p=doc["p"])
    if kind == "irrational_rotation":
        return IrrationalRotation(beta=doc["beta"])
    if kind == "hidden_irrational_rotation":
        proc = HiddenIrrationalRotation(
            beta=doc["beta"],
            u_range=tuple(doc.get("u_range", (0.0, 1.0))),
            v_range=tuple(doc.get("v_range", (0.9, 1.9))))
        return proc
    raise ParameterError(f"unknown process kind {kind!r}")


@dataclass(frozen=True)
class PiecewiseSpec:
    """Ordered segments, each tied to a named generating process.

    Consecutive segments must use different process ids; this is what makes
    every internal boundary a changepoint.
    """

    segments: tuple[tuple[int, str], ...]
    processes: dict

    def __post_init__(self) -> None:
        if not self.segments:
            raise ParameterError("spec needs at least one segment")
        for length, proc in self.segments:
            check_int(length, "segment length", minimum=1)
            if proc not in self.processes:
                raise ParameterError(f"segment references unknown process {proc!r}")
        ids = [proc for _, proc in self.segments]
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise ParameterError(
                    f"consecutive segments share process {a!r}; boundaries "
                    "must separate different processes")

    @property
    def n(self) -> int:
        return sum(length for length, _ in self.segments)

    @property
    def changepoints(self) -> list[int]:
        taus, total = [], 0
        for length, _ in self.segments[:-1]:
            total += length
            taus.append(total)
        return taus

    @property
    def process_count(self) -> int:
        return len({proc for _, proc in self.segments})

    @property
    def min_segment_fraction(self) -> float:
        return min(length for length, _ in self.segments) / self.n

    def to_json(self) -> str:
        return json.dumps({
            "segments": [{"len": length, "proc": proc}
                         for length, proc in self.segments],
            "processes": {pid: proc.to_json_dict()
                          for pid, proc in self.processes.items()},
        })

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseSpec":
        try:
            doc = json.loads(text)
            segments = tuple((seg["len"], seg["proc"]) for seg in doc["segments"])
            processes = {pid: process_from_json_dict(p)
                         for pid, p in doc["processes"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed piecewise spec: {exc}") from exc
        return cls(segments, processes)


def gen_piecewise(spec: PiecewiseSpec, seed=None) -> tuple[np.ndarray, list[int]]:
    """Sample the spec and return (series, true changepoints).

    Every segment draws from an independent substream, including segments
    that share a process id.
    """
    if not isinstance(spec, PiecewiseSpec):
        raise ParameterError("spec must be a PiecewiseSpec")
    children = _seed_sequence(seed).spawn(len(spec.segments))
    parts = [spec.processes[proc].sample(length, child)
             for (length, proc), child in zip(spec.segments, children)]
    return np.concatenate(parts), spec.changepoints
