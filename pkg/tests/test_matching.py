import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from gnpham.experiments import staple_corpus
from gnpham.graph import (
    build_graph,
    complete_graph,
    cycle_graph,
    min_degree,
    petersen_graph,
    star_graph,
)
from gnpham.matching import (
    Matching,
    absorb_staples,
    find_staple,
    max_matching,
    solve_pm,
    verify_perfect_matching,
)
from gnpham.oracles import brute_matching, enumerate_staples
from gnpham.posa import HostView
from gnpham.random_models import derive_rng, sample_gnp
from gnpham.skeleton import build_skeleton, regime_params


def test_max_matching_examples():
    assert max_matching(cycle_graph(6)).size == 3 and max_matching(cycle_graph(6)).is_perfect
    assert max_matching(star_graph(4)).size == 1
    M = max_matching(petersen_graph())
    assert M.size == 5 and verify_perfect_matching(petersen_graph(), M)


@given(graphs(min_n=1, max_n=12))
def test_max_matching_vs_brute(G):
    M = max_matching(G)
    assert M.size == brute_matching(G)
    assert all(G.has_edge(u, v) for u, v in M.edges)


def test_max_matching_500_random():
    for i in range(500):
        rng = derive_rng(31, "mm", i)
        G = sample_gnp(int(rng.integers(1, 13)), float(rng.uniform(0.05, 0.7)), rng)
        assert max_matching(G).size == brute_matching(G)


def test_matching_validation():
    with pytest.raises(ValueError):
        Matching(4, ((0, 1), (1, 2)), (3,))
    with pytest.raises(ValueError):
        Matching(4, ((0, 1),), ())


def test_find_staple_examples():
    gamma = build_graph(4, [(0, 1), (1, 2)])
    G = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert find_staple(gamma, G) == (2, 3)
    G = build_graph(4, [(0, 1), (1, 2), (0, 2)])
    assert find_staple(gamma, G) is None


@given(graphs(min_n=2, max_n=10), st.integers(0, 1000))
def test_find_staple_is_a_staple(G, seed):
    gamma = build_skeleton(G, (), 2, seed).graph if G.m else G
    e = find_staple(gamma, G)
    nu = brute_matching(gamma)
    if e is None:
        assert all(
            brute_matching(build_graph(G.n, gamma.edges + (f,))) == nu
            for f in G.edges if not gamma.has_edge(*f)
        ) or 2 * nu == G.n
    else:
        assert G.has_edge(*e) and not gamma.has_edge(*e)
        assert brute_matching(build_graph(G.n, gamma.edges + (e,))) == nu + 1


@pytest.mark.parametrize("k", [2, 3])
def test_staple_count_on_corpus(k):
    corpus = staple_corpus(k, seed=5, limit=30)
    assert corpus
    for G in corpus:
        assert G.n % 2 == 0
        assert len(enumerate_staples(G)) >= k * (k + 1) // 2


def test_absorb_examples():
    K = complete_graph(8)
    cert = absorb_staples(build_skeleton(K, (), 2, 3), K)
    assert cert.kind == "perfect" and verify_perfect_matching(K, cert.matching)
    assert absorb_staples(complete_graph(7), complete_graph(7)).reason == "parity"


@pytest.mark.parametrize("i", range(40))
def test_staple_steps_raise_nu_by_one(i):
    rng = derive_rng(33, "stp", i)
    G = sample_gnp(12, float(rng.uniform(0.2, 0.6)), rng)
    if min_degree(G) == 0:
        return
    sk = build_skeleton(G, (), 2, i)
    cert = absorb_staples(sk, G)
    H = HostView(sk)
    prev = max_matching(H).size
    for step in cert.trace:
        H.add_edge(*step["edge"])
        cur = max_matching(H).size
        assert cur == prev + 1
        prev = cur
    assert len(cert.trace) <= 6


def test_solve_pm_examples():
    G = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert solve_pm(G).kind == "none"
    for n in (2, 6, 10):
        assert solve_pm(complete_graph(n)).kind == "perfect"
    assert solve_pm(complete_graph(9)).reason == "parity"


@pytest.mark.parametrize("i", range(50))
def test_solve_pm_matches_nu_n14(i):
    G = sample_gnp(14, 0.5 if i % 2 else 0.15, derive_rng(35, "pm14", i))
    cert = solve_pm(G, seed=i)
    assert (cert.kind == "perfect") == (2 * max_matching(G).size == 14)
    if cert.kind == "perfect":
        assert verify_perfect_matching(G, cert.matching)
        assert min_degree(G) >= 1


def test_very_dense_matching_routes():
    G = sample_gnp(20, 0.6, 4)
    prm = regime_params(20, 0.6, {"regime": "very_dense"})
    direct = solve_pm(G, prm)
    via = solve_pm(G, prm, via_hamilton_path=True)
    assert direct.kind == via.kind == "perfect"
    assert "direct-max-matching" in direct.fallbacks_used and "hamilton-path" in via.fallbacks_used
    assert verify_perfect_matching(G, via.matching)


def test_certificate_json():
    cert = solve_pm(cycle_graph(4))
    out = cert.to_json()
    assert out["kind"] == "perfect" and len(out["witness"]) == 2
