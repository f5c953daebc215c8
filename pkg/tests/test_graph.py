import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from gnpham.graph import (
    GraphError,
    bfs_distance,
    build_graph,
    complete_graph,
    components,
    cycle_graph,
    degree_profile,
    edge_counts,
    external_neighborhood,
    format_edge_list,
    induced_subgraph,
    is_connected,
    parse_edge_list,
    path_graph,
    read_edge_list,
    star_graph,
    write_edge_list,
)


def test_triangle():
    G = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert degree_profile(G) == (2, 2, [2, 2, 2])


def test_empty_graph():
    assert degree_profile(build_graph(4, []))[:2] == (0, 0)


@pytest.mark.parametrize("edges, fragment", [
    ([(1, 0), (0, 1)], "duplicate"),
    ([(2, 2)], "self-loop"),
    ([(0, 4)], "out of range"),
])
def test_build_rejects(edges, fragment):
    with pytest.raises(GraphError, match=fragment):
        build_graph(4, edges)


def test_edges_canonical():
    G = build_graph(4, [(3, 2), (1, 0), (2, 0)])
    assert G.edges == ((0, 1), (0, 2), (2, 3))


def test_external_neighborhood_examples(c8):
    assert external_neighborhood(complete_graph(4), [0]) == (1, 2, 3)
    assert external_neighborhood(path_graph(5), [0]) == (1,)
    assert external_neighborhood(c8, [0, 1]) == (2, 7)
    with pytest.raises(GraphError):
        external_neighborhood(c8, [8])


def test_edge_counts_examples():
    assert edge_counts(cycle_graph(4), range(4)) == 4
    assert edge_counts(complete_graph(4), [0, 1], [2, 3]) == 4
    assert edge_counts(build_graph(5, []), [0, 3]) == 0
    with pytest.raises(ValueError):
        edge_counts(complete_graph(4), [0, 1], [1, 2])


def test_degree_profile_examples():
    assert degree_profile(complete_graph(5)) == (4, 4, [4] * 5)
    assert degree_profile(star_graph(4)) == (1, 3, [3, 1, 1, 1])
    assert degree_profile(build_graph(1, [])) == (0, 0, [0])


def test_bfs_examples(c8):
    assert bfs_distance(c8, 0, 4) == 4
    assert bfs_distance(build_graph(4, [(0, 1), (2, 3)]), 0, 3) is None
    assert bfs_distance(c8, 5, 5) == 0


@given(graphs(min_n=2), st.data())
def test_edge_count_additivity(G, data):
    order = data.draw(st.permutations(range(G.n)))
    cut = data.draw(st.integers(0, G.n))
    cut2 = data.draw(st.integers(cut, G.n))
    U, W = order[:cut], order[cut:cut2]
    both = set(U) | set(W)
    direct = sum(1 for u, v in G.edges if u in both and v in both)
    assert direct == edge_counts(G, U) + edge_counts(G, W) + edge_counts(G, U, W)


@given(graphs(min_n=1), st.data())
def test_neighbourhood_bounds(G, data):
    U = data.draw(st.sets(st.integers(0, G.n - 1)))
    N = external_neighborhood(G, U)
    assert not set(N) & U
    assert len(N) <= sum(G.degree(u) for u in U)
    assert list(N) == sorted(N)


@given(graphs())
def test_degree_sum(G):
    assert sum(degree_profile(G)[2]) == 2 * G.m


@given(graphs(min_n=1, max_n=8))
def test_bfs_metric(G):
    for u, v in itertools.product(range(G.n), repeat=2):
        duv = bfs_distance(G, u, v)
        assert duv == bfs_distance(G, v, u)
        if duv is None:
            continue
        for w in range(G.n):
            dvw = bfs_distance(G, v, w)
            if dvw is not None:
                assert bfs_distance(G, u, w) <= duv + dvw


@given(graphs())
def test_symmetric_adjacency(G):
    for u in range(G.n):
        for v in G.adjacency[u]:
            assert u in G.adjacency[v]


@given(graphs())
def test_edge_list_roundtrip(G):
    text = format_edge_list(G, ["a comment"])
    assert parse_edge_list(text) == G
    lines = text.splitlines()
    assert lines[1] == f"{G.n} {G.m}"
    assert "\r" not in text


def test_edge_list_file(tmp_path):
    G = cycle_graph(5)
    path = tmp_path / "g.txt"
    write_edge_list(G, path)
    assert path.read_bytes() == b"5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n"
    assert read_edge_list(path) == G


@pytest.mark.parametrize("text", [
    "3 2\n0 1\n",            # fewer lines than m
    "3 2\n1 2\n0 1\n",        # unsorted
    "3 1\n# late comment\n0 1\n",
    "3 1\n1 0\n",             # u > v
])
def test_edge_list_rejects(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_components_and_induced():
    G = build_graph(5, [(0, 1), (3, 4)])
    assert components(G) == [(0, 1), (2,), (3, 4)]
    assert not is_connected(G)
    H, back = induced_subgraph(G, [1, 3, 4])
    assert back == [1, 3, 4] and H.edges == ((1, 2),)
