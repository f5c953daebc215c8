import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gnpham.bounds import chernoff
from gnpham.graph import complete_graph
from gnpham.random_models import (
    EdgeOrdering,
    NonMonotoneError,
    derive_rng,
    derive_seed,
    format_ordering,
    hitting_time,
    hitting_times,
    parse_ordering,
    prefix_graph,
    sample_gnp,
    sample_process,
)


def test_gnp_extremes():
    assert sample_gnp(10, 0.0, 1).m == 0
    assert sample_gnp(10, 1.0, 1) == complete_graph(10)


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(ValueError):
        sample_gnp(5, p, 0)


@given(st.integers(1, 30), st.floats(0, 1), st.integers(0, 2**32))
def test_gnp_deterministic(n, p, seed):
    assert sample_gnp(n, p, seed) == sample_gnp(n, p, seed)


def test_gnp_edge_count_window():
    mu = 2475
    window = 3 * math.sqrt(mu)
    inside = sum(abs(sample_gnp(100, 0.5, s).m - mu) <= window for s in range(1000))
    assert inside >= 990
    # two-sided Chernoff with delta = window / mu
    delta = window / mu
    bound = chernoff(4950, 0.5, delta, 1) + chernoff(4950, 0.5, delta, 2)
    assert 1 - inside / 1000 <= bound


@pytest.mark.parametrize("p", [0.02, 0.3])
def test_gnp_both_samplers_unbiased(p):
    # geometric skipping below 0.1, Bernoulli sweep above
    n, reps = 40, 300
    total = sum(sample_gnp(n, p, derive_rng(3, "gnp", i)).m for i in range(reps))
    N = n * (n - 1) // 2
    sd = math.sqrt(reps * N * p * (1 - p))
    assert abs(total - reps * N * p) < 5 * sd


def test_gnp_pairs_uniform():
    counts = np.zeros((6, 6))
    for s in range(2000):
        for u, v in sample_gnp(6, 0.05, s).edges:
            counts[u, v] += 1
    vals = counts[np.triu_indices(6, 1)]
    assert vals.min() > 60 and vals.max() < 145


def test_process_examples():
    o = sample_process(3, 5)
    assert len(o) == 3 and set(o.order) == {(0, 1), (0, 2), (1, 2)}
    assert sample_process(7, 11) == sample_process(7, 11)


def test_process_uniform_n3():
    freq = Counter(sample_process(3, derive_rng(0, "perm", i)).order for i in range(6000))
    assert len(freq) == 6
    for c in freq.values():
        assert abs(c / 6000 - 1 / 6) <= 0.03


def test_prefix_graph():
    o = EdgeOrdering(4, ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)))
    assert prefix_graph(o, 0).m == 0
    assert prefix_graph(o, 6) == complete_graph(4)
    assert set(prefix_graph(o, 4).edges) == {(0, 1), (2, 3), (0, 2), (1, 3)}
    with pytest.raises(IndexError):
        prefix_graph(o, 7)


def test_ordering_validation():
    with pytest.raises(ValueError):
        EdgeOrdering(3, ((0, 1), (0, 1), (1, 2)))


def test_hitting_n3():
    o = sample_process(3, 0)
    assert hitting_time(o, "D2") == hitting_time(o, "HAM") == 3


def test_hitting_sentinel_and_nonmonotone():
    o = sample_process(5, 1)
    assert hitting_time(o, "PM") == 11  # odd n never has a perfect matching
    flip = lambda G: G.m in (5, 10)  # true at 5, false at the audit probe 8
    with pytest.raises(NonMonotoneError):
        hitting_time(o, "custom", decide=flip)


@given(st.integers(4, 9), st.integers(0, 2**32))
def test_hitting_time_is_minimal(n, seed):
    o = sample_process(n, seed)
    taus = hitting_times(o)
    assert taus["D1"] <= taus["PM"] or n % 2
    assert taus["D2"] <= taus["HAM"]
    assert taus["D1"] <= taus["CONN"]
    tau = taus["CONN"]
    from gnpham.graph import is_connected

    assert is_connected(prefix_graph(o, tau)) and not is_connected(prefix_graph(o, tau - 1))


def test_ordering_roundtrip():
    o = sample_process(6, 2)
    assert parse_ordering(format_ordering(o)) == o


def test_derived_seeds_distinct():
    seeds = {derive_seed(1, "x", i) for i in range(200)}
    assert len(seeds) == 200
    assert derive_seed(1, "x", 0) != derive_seed(1, "y", 0)


@pytest.mark.parametrize("p", [1e-300, 5.9e-146, 1e-20])
def test_gnp_tiny_p_is_empty(p):
    assert sample_gnp(2, p, 0).m == 0
    assert sample_gnp(30, p, 1).m == 0
