import math

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from gnpham.experiments import posa_corpus
from gnpham.graph import (
    build_graph,
    complete_graph,
    cycle_graph,
    min_degree,
    path_graph,
    petersen_graph,
    star_graph,
)
from gnpham.oracles import enumerate_boosters, exact_hamiltonicity, exact_longest_path
from gnpham.posa import (
    HostView,
    absorb_boosters,
    booster_candidates,
    extend_or_close,
    hamilton_path_between,
    is_path,
    rotation_closure,
    solve_hamilton,
    verify_hamilton_cycle,
    verify_hamilton_path,
)
from gnpham.random_models import derive_rng, sample_gnp
from gnpham.skeleton import build_skeleton, regime_params


def brute_closure(G, path):
    """Free ends reachable by repeated rotations, by search over whole paths."""
    seen = {tuple(path)}
    frontier = [list(path)]
    while frontier:
        p = frontier.pop()
        end = p[-1]
        for i in range(len(p) - 2):
            if G.has_edge(end, p[i]):
                q = tuple(p[: i + 1] + p[i + 1:][::-1])
                if q not in seen:
                    seen.add(q)
                    frontier.append(list(q))
    return {q[-1] for q in seen}


def test_single_rotation():
    G = build_graph(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    cl = rotation_closure(G, [0, 1, 2, 3], 0)
    assert set(cl.reachable_ends) == {3, 2}
    assert cl.witness(2) == cl.replay(2) == [0, 1, 3, 2]


def test_closure_complete_graph():
    cl = rotation_closure(complete_graph(5), [0, 1, 2, 3, 4], 0)
    assert set(cl.reachable_ends) == {1, 2, 3, 4} == brute_closure(complete_graph(5), [0, 1, 2, 3, 4])


def test_closure_dead_end():
    G = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert rotation_closure(G, [0, 1, 2, 3, 4], 0).reachable_ends == [4]


@given(graphs(min_n=3, max_n=8), st.data())
def test_closure_matches_bruteforce(G, data):
    if G.m == 0:
        return
    L, path = exact_longest_path(G)
    cl = rotation_closure(G, path, path[0])
    # one witness per end: a sub-closure of the full path-state search
    assert set(cl.reachable_ends) <= brute_closure(G, path)
    for end in cl.reachable_ends:
        w = cl.replay(end)
        assert w == cl.witness(end)
        assert is_path(G, w) and w[0] == path[0] and w[-1] == end and set(w) == set(path)


def test_extend_examples():
    assert extend_or_close(cycle_graph(6), list(range(6))).kind == "cycle"
    G = build_graph(5, [(0, 1), (1, 2), (2, 3), (2, 4)])
    res = extend_or_close(G, [0, 1, 2])
    assert res.kind == "extended" and len(res.path) == 4
    res = extend_or_close(star_graph(4), [1, 0, 2])
    assert res.kind == "stuck"
    assert res.closure.first.reachable_ends == [2]
    assert res.closure.second[2].reachable_ends == [1]


def test_disconnected_cycle_break_is_stuck():
    G = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    res = extend_or_close(G, [0, 1, 2])
    assert res.kind == "stuck" and "disconnected" in res.diagnostic


def test_booster_candidates_p4():
    res = extend_or_close(path_graph(4), [0, 1, 2, 3])
    cands = booster_candidates(path_graph(4), res.closure)
    assert (0, 3) in cands and (0, 2) not in cands


@given(graphs(min_n=3, max_n=9))
def test_booster_candidates_sound(G):
    if min_degree(G) == 0 or exact_hamiltonicity(G)[0]:
        return
    L, path = exact_longest_path(G)
    res = extend_or_close(G, path)
    assert res.kind == "stuck"
    if res.closure is None:
        assert "disconnected" in res.diagnostic
        return
    exact = enumerate_boosters(G)
    for pair, cand in booster_candidates(G, res.closure).items():
        assert pair in exact
        H = build_graph(G.n, G.edges + (pair,))
        assert exact_hamiltonicity(H)[0] or exact_longest_path(H)[0] > L
        assert is_path(H, cand.witness)


@pytest.mark.parametrize("k", [2, 3])
def test_posa_count_on_corpus(k):
    corpus = posa_corpus(k, seed=5, limit=15)
    if k == 2:
        assert corpus  # no non-Hamiltonian (3,2)-expander turned up on <= 12 vertices
    for G in corpus:
        assert len(enumerate_boosters(G)) >= math.ceil((k + 1) ** 2 / 2)
        L, path = exact_longest_path(G)
        res = extend_or_close(G, path)
        assert set(booster_candidates(G, res.closure)) <= enumerate_boosters(G)


def test_absorb_examples():
    K = complete_graph(10)
    cert = absorb_boosters(build_skeleton(K, (), 3, 4), K)
    assert cert.kind == "cycle" and verify_hamilton_cycle(K, cert.witness)
    C = cycle_graph(9)
    cert = absorb_boosters(C, C)
    assert cert.kind == "cycle" and cert.trace == []
    G = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    assert absorb_boosters(G, G).kind != "cycle"
    assert solve_hamilton(G).kind == "none"


@pytest.mark.parametrize("i", range(25))
def test_absorption_trace_bound(i):
    rng = derive_rng(13, "trace", i)
    n = int(rng.integers(12, 40))
    p = (math.log(n) + math.log(math.log(n)) + 3) / n
    G = sample_gnp(n, p, rng)
    if min_degree(G) < 2:
        return
    sk = build_skeleton(G, (), 3, i)
    cert = absorb_boosters(sk, G)
    if cert.kind == "cycle":
        assert len(cert.trace) <= n
        assert len(set(sk.edges) | {tuple(t["edge"]) for t in cert.trace}) <= len(sk.edges) + n
        assert verify_hamilton_cycle(G, cert.witness)
        for t in cert.trace:
            assert G.has_edge(*t["edge"]) and tuple(t["edge"]) not in sk.edges


def test_path_between_examples():
    K = complete_graph(4)
    for u in range(4):
        for v in range(4):
            if u != v:
                r = hamilton_path_between(K, u, v)
                assert r.kind == "path" and verify_hamilton_path(K, r.path, u, v)
    C = cycle_graph(4)
    assert hamilton_path_between(C, 0, 1).path == [0, 3, 2, 1]
    assert hamilton_path_between(C, 0, 2).kind == "none"


def test_path_between_unknown_without_exact():
    r = hamilton_path_between(cycle_graph(4), 0, 2, budget=2, exact_limit=None)
    assert r.kind == "unknown"


def test_solve_examples():
    assert solve_hamilton(star_graph(5)).kind == "none"
    assert solve_hamilton(path_graph(7)).reason == "min-degree"
    cert = solve_hamilton(petersen_graph())
    assert cert.kind == "none" and "exact" in cert.fallbacks_used


@pytest.mark.parametrize("i", range(60))
def test_solve_matches_exact_n14(i):
    rng = derive_rng(17, "solve14", i)
    p = [0.2, 0.3, 0.4, 0.6][i % 4]
    G = sample_gnp(14, p, rng)
    cert = solve_hamilton(G, seed=i)
    assert (cert.kind == "cycle") == exact_hamiltonicity(G)[0]
    if cert.kind == "cycle":
        assert verify_hamilton_cycle(G, cert.witness)


def test_pipeline_mode_never_claims_none_without_proof():
    G = petersen_graph()
    assert solve_hamilton(G, mode="pipeline").kind == "unknown"
    assert solve_hamilton(G, mode="exact").kind == "none"


def test_very_dense_route():
    G = sample_gnp(30, 0.7, 3)
    prm = regime_params(30, 0.7, {"regime": "very_dense"})
    cert = solve_hamilton(G, prm, mode="pipeline")
    assert cert.kind == "cycle" and "vertex-deletion" in cert.fallbacks_used
    assert verify_hamilton_cycle(G, cert.witness)


def test_above_exact_limit_is_unknown():
    G = petersen_graph()
    prm = regime_params(10, 0.33, {"exact_limit": 8})
    cert = solve_hamilton(G, prm)
    assert cert.kind == "unknown" and "exact limit" in cert.reason


def test_hostview_overlay_does_not_mutate():
    G = path_graph(4)
    H = HostView(G)
    H.add_edge(0, 3)
    assert H.has_edge(0, 3) and not G.has_edge(0, 3)
