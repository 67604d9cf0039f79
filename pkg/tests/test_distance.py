"""Distance module tests against a literal enumeration oracle."""
from __future__ import annotations

import itertools
import json
import math

import numpy as np
import pytest

from chest.distance import (
    MAX_QUANT_DEPTH,
    MAX_WORD_LEN,
    DistanceParams,
    FrequencyTable,
    empirical_distance,
    empirical_frequencies,
    quantize,
)
from chest.validation import ParameterError


# ---------------------------------------------------------------------------
# Oracle: dict-based counting over the FULL k**m pattern space, accumulated
# with the literal formula. Independent of the library's radix encoding.
# ---------------------------------------------------------------------------

def _oracle_term(x, y, m, alphabet):
    tx = max(0, len(x) - m + 1)
    ty = max(0, len(y) - m + 1)
    cx = {}
    cy = {}
    for i in range(tx):
        pat = tuple(x[i:i + m])
        cx[pat] = cx.get(pat, 0) + 1
    for i in range(ty):
        pat = tuple(y[i:i + m])
        cy[pat] = cy.get(pat, 0) + 1
    total = 0.0
    for pat in itertools.product(range(alphabet), repeat=m):
        fx = cx.get(pat, 0) / tx if tx else 0.0
        fy = cy.get(pat, 0) / ty if ty else 0.0
        total += abs(fx - fy)
    return total


def oracle_discrete(x, y, m_max, alphabet):
    return sum(2.0 ** -m * _oracle_term(list(x), list(y), m, alphabet)
               for m in range(1, m_max + 1))


def _oracle_cells(values, depth, lo, hi):
    cells = []
    for v in values:
        c = math.floor((v - lo) / (hi - lo) * (1 << depth))
        cells.append(min(max(c, 0), (1 << depth) - 1))
    return cells


def oracle_real(x, y, m_max, l_max, value_range=None):
    lo, hi = value_range if value_range else (min(*x, *y), max(*x, *y))
    if lo == hi:
        hi = lo + 1.0
    total = 0.0
    for depth in range(1, l_max + 1):
        cx = _oracle_cells(x, depth, lo, hi)
        cy = _oracle_cells(y, depth, lo, hi)
        for m in range(1, m_max + 1):
            total += 2.0 ** -m * 2.0 ** -depth * _oracle_term(cx, cy, m, 1 << depth)
    return total


# ---------------------------------------------------------------------------
# quantize
# ---------------------------------------------------------------------------

def test_quantize_depth_one():
    assert quantize([0.1, 0.5, 0.99], 1, (0.0, 1.0)).tolist() == [0, 1, 1]


def test_quantize_depth_two():
    assert quantize([0.0, 0.25, 0.5, 0.75], 2, (0.0, 1.0)).tolist() == [0, 1, 2, 3]


def test_quantize_clamps_out_of_range():
    assert quantize([-1.0, 2.0], 1, (0.0, 1.0)).tolist() == [0, 1]


def test_quantize_monotone_random():
    rng = np.random.default_rng(7)
    v = np.sort(rng.uniform(-3, 3, size=500))
    for depth in (1, 3, 8):
        cells = quantize(v, depth, (-2.0, 2.0))
        assert np.all(np.diff(cells) >= 0)
        assert cells.min() >= 0 and cells.max() < (1 << depth)


def test_quantize_bad_range():
    with pytest.raises(ParameterError):
        quantize([0.5], 1, (1.0, 1.0))
    with pytest.raises(ParameterError):
        quantize([0.5], 1, (2.0, 1.0))


def test_quantize_bad_depth():
    with pytest.raises(ParameterError):
        quantize([0.5], 0, (0.0, 1.0))
    with pytest.raises(ParameterError):
        quantize([0.5], MAX_QUANT_DEPTH + 1, (0.0, 1.0))


# ---------------------------------------------------------------------------
# empirical_frequencies
# ---------------------------------------------------------------------------

def test_frequencies_single_symbols():
    t = empirical_frequencies([0, 1, 0, 1], 1)
    assert t.window_total == 4
    assert dict(t.counts) == {(0,): 2, (1,): 2}


def test_frequencies_pairs():
    t = empirical_frequencies([0, 1, 0, 1], 2)
    assert t.window_total == 3
    assert dict(t.counts) == {(0, 1): 2, (1, 0): 1}


def test_frequencies_real_mode_cells():
    t = empirical_frequencies([0.1, 0.9, 0.2, 0.8], 2, depth=1,
                              params=DistanceParams(mode="real", value_range=(0.0, 1.0)))
    assert t.window_total == 3
    assert dict(t.counts) == {(0, 1): 2, (1, 0): 1}
    assert t.quant_depth == 1


def test_frequencies_short_sample_is_empty():
    t = empirical_frequencies([1.0, 0.0], 5)
    assert t.window_total == 0
    assert dict(t.counts) == {}


def test_frequencies_sum_to_total_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 40))
        m = int(rng.integers(1, 6))
        x = rng.integers(0, 3, size=n).astype(float)
        t = empirical_frequencies(x, m)
        assert sum(t.counts.values()) == t.window_total == max(0, n - m + 1)


def test_frequency_table_json_round_trip():
    t = empirical_frequencies([0, 1, 0, 1], 2)
    payload = json.loads(t.to_json())
    assert payload["counts"] == {"0 1": 2, "1 0": 1}
    back = FrequencyTable.from_json(t.to_json())
    assert back == t


def test_frequency_table_rejects_bad_total():
    with pytest.raises(ParameterError):
        FrequencyTable(1, None, {(0,): 2}, 3)


# ---------------------------------------------------------------------------
# empirical_distance: frozen worked examples
# ---------------------------------------------------------------------------

def test_distance_worked_example():
    # by hand: m=1 term 0.5*(0.5+0.5); m=2 term 0.25*(2/3 + 1/3 + 1)
    d = empirical_distance([0, 1, 0, 1], [1, 1, 1, 1],
                           DistanceParams(mode="discrete", alphabet_size=2, m_max=2))
    assert d == pytest.approx(1.0, abs=1e-12)


def test_distance_opposite_constants():
    d = empirical_distance([0, 0], [1, 1],
                           DistanceParams(mode="discrete", alphabet_size=2, m_max=1))
    assert d == pytest.approx(1.0, abs=1e-12)


def test_distance_identical_is_zero():
    rng = np.random.default_rng(3)
    x = rng.integers(0, 2, size=200).astype(float)
    assert empirical_distance(x, x.copy()) == 0.0
    y = rng.normal(size=130)
    assert empirical_distance(y, y.copy()) == 0.0


def test_distance_mode_mismatch():
    with pytest.raises(ParameterError):
        empirical_distance([0.5, 0.25], [0.1, 0.9], DistanceParams(mode="discrete"))
    with pytest.raises(ParameterError):
        empirical_distance([0, 1, 2], [0, 1], DistanceParams(alphabet_size=2))


# ---------------------------------------------------------------------------
# oracle equivalence (small scale; the exhaustive sweep lives in acceptance)
# ---------------------------------------------------------------------------

def test_oracle_equivalence_binary_random():
    rng = np.random.default_rng(17)
    params = DistanceParams(mode="discrete", alphabet_size=2, m_max=3)
    for _ in range(200):
        nx = int(rng.integers(1, 9))
        ny = int(rng.integers(1, 9))
        x = rng.integers(0, 2, size=nx).astype(float)
        y = rng.integers(0, 2, size=ny).astype(float)
        want = oracle_discrete(x.astype(int), y.astype(int), 3, 2)
        got = empirical_distance(x, y, params)
        assert got == pytest.approx(want, abs=1e-12)


def test_oracle_equivalence_ternary_random():
    rng = np.random.default_rng(23)
    params = DistanceParams(mode="discrete", alphabet_size=3, m_max=2)
    for _ in range(100):
        x = rng.integers(0, 3, size=int(rng.integers(2, 12))).astype(float)
        y = rng.integers(0, 3, size=int(rng.integers(2, 12))).astype(float)
        want = oracle_discrete(x.astype(int), y.astype(int), 2, 3)
        got = empirical_distance(x, y, params)
        assert got == pytest.approx(want, abs=1e-12)


def test_oracle_equivalence_real_mode():
    rng = np.random.default_rng(29)
    params = DistanceParams(mode="real", m_max=2, l_max=3)
    for _ in range(60):
        x = rng.uniform(-1, 2, size=int(rng.integers(2, 15)))
        y = rng.uniform(-1, 2, size=int(rng.integers(2, 15)))
        want = oracle_real(list(x), list(y), 2, 3)
        got = empirical_distance(x, y, params)
        assert got == pytest.approx(want, abs=1e-12)


# ---------------------------------------------------------------------------
# metric axioms on random pairs
# ---------------------------------------------------------------------------

def _random_triple(rng, kind):
    n = int(rng.integers(5, 80))
    if kind == "binary":
        make = lambda: rng.integers(0, 2, size=n).astype(float)  # noqa: E731
    else:
        make = lambda: rng.normal(size=n)  # noqa: E731
    return make(), make(), make()


@pytest.mark.parametrize("kind", ["binary", "real"])
def test_metric_axioms_random(kind):
    rng = np.random.default_rng(31)
    params = DistanceParams(value_range=(-4.0, 4.0)) if kind == "real" else None
    for _ in range(60):
        x, y, z = _random_triple(rng, kind)
        dxy = empirical_distance(x, y, params)
        dyx = empirical_distance(y, x, params)
        dxz = empirical_distance(x, z, params)
        dyz = empirical_distance(y, z, params)
        assert dxy == dyx
        assert 0.0 <= dxy <= 2.0
        assert dxz <= dxy + dyz + 1e-12
        assert empirical_distance(x, x, params) == 0.0


# ---------------------------------------------------------------------------
# statistical behavior at scale
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", ["discrete", "real"])
def test_same_process_distance_small(mode):
    rng = np.random.default_rng(101)
    x = rng.binomial(1, 0.5, size=10_000).astype(float)
    y = rng.binomial(1, 0.5, size=10_000).astype(float)
    params = DistanceParams(mode=mode, m_max=10, l_max=10)
    assert empirical_distance(x, y, params) <= 0.05


@pytest.mark.parametrize("mode", ["discrete", "real"])
def test_different_process_distance_large(mode):
    rng = np.random.default_rng(103)
    x = rng.binomial(1, 0.2, size=10_000).astype(float)
    y = rng.binomial(1, 0.7, size=10_000).astype(float)
    params = DistanceParams(mode=mode, m_max=10, l_max=10)
    assert empirical_distance(x, y, params) >= 0.3


# ---------------------------------------------------------------------------
# parameter validation
# ---------------------------------------------------------------------------

def test_params_caps():
    with pytest.raises(ParameterError):
        DistanceParams(m_max=MAX_WORD_LEN + 1)
    with pytest.raises(ParameterError):
        DistanceParams(l_max=MAX_QUANT_DEPTH + 1)
    with pytest.raises(ParameterError):
        DistanceParams(mode="fuzzy")
    with pytest.raises(ParameterError):
        DistanceParams(alphabet_size=1)
    with pytest.raises(ParameterError):
        DistanceParams(value_range=(1.0, 0.0))


def test_rejects_bad_series():
    with pytest.raises(ParameterError):
        empirical_distance([], [1.0])
    with pytest.raises(ParameterError):
        empirical_distance([1.0, np.nan], [1.0])
    with pytest.raises(ParameterError):
        empirical_distance([[1.0, 2.0]], [1.0])


def test_weight_override():
    # uniform weights over two word lengths double the default m=2 share
    params = DistanceParams(mode="discrete", alphabet_size=2, m_max=1,
                            weight=lambda j: 1.0)
    d = empirical_distance([0, 0], [1, 1], params)
    assert d == pytest.approx(2.0, abs=1e-12)


def test_bad_weight_rejected():
    params = DistanceParams(mode="discrete", alphabet_size=2, m_max=2,
                            weight=lambda j: -1.0)
    with pytest.raises(ParameterError):
        empirical_distance([0, 1], [1, 0], params)
