"""Immutable simple undirected graphs on vertices 0..n-1.

Everything downstream (properties, skeletons, rotation machinery, oracles)
is written against the small set of primitives here: external
neighbourhoods, spanned/crossing edge counts, degree profiles and BFS
distances. Adjacency is also kept as integer bitmasks so subset enumeration
can work with ``int`` operations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graph input (bad vertex ids, loops, duplicates)."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with canonical edge list.

    Construct through :func:`build_graph`; the constructor assumes the edge
    list is already validated and canonical.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    masks: tuple[int, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.masks[u] >> v & 1)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        """Return a new graph with ``extra`` edges added (must be non-edges)."""
        return build_graph(self.n, list(self.edges) + list(extra))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Validate and canonicalize an edge list into a :class:`Graph`.

    Each pair is normalized to ``(min, max)``. Out-of-range ids, self-loops
    and duplicates (after normalization) raise :class:`GraphError` naming
    the offending pair.
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    seen: set[Edge] = set()
    for pair in edges:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range in edge ({u}, {v}) for n={n}")
        if u == v:
            raise GraphError(f"self-loop ({u}, {v})")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise GraphError(f"duplicate edge ({pair[0]}, {pair[1]})")
        seen.add(e)
    canon = tuple(sorted(seen))
    nbrs: list[list[int]] = [[] for _ in range(n)]
    masks = [0] * n
    for u, v in canon:
        nbrs[u].append(v)
        nbrs[v].append(u)
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    adjacency = tuple(tuple(sorted(a)) for a in nbrs)
    return Graph(n, canon, adjacency, tuple(masks))


def _check_vertices(G: Graph, vs: Iterable[int]) -> list[int]:
    out = []
    for v in vs:
        if not 0 <= v < G.n:
            raise GraphError(f"vertex id {v} out of range for n={G.n}")
        out.append(v)
    return out


def vertex_set(G: Graph, vs: Iterable[int]) -> tuple[int, ...]:
    """Sorted, de-duplicated, range-checked vertex tuple."""
    return tuple(sorted(set(_check_vertices(G, vs))))


def to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def neighborhood_mask(G: Graph, mask: int) -> int:
    """Bitmask of N_G(U) for U given as a bitmask."""
    acc = 0
    m = mask
    masks = G.masks
    while m:
        low = m & -m
        acc |= masks[low.bit_length() - 1]
        m ^= low
    return acc & ~mask


def external_neighborhood(G: Graph, U: Iterable[int]) -> tuple[int, ...]:
    """Vertices outside U with at least one neighbour in U."""
    U = vertex_set(G, U)
    return from_mask(neighborhood_mask(G, to_mask(U)))


def edge_counts(G: Graph, U: Iterable[int], W: Optional[Iterable[int]] = None) -> int:
    """e(U) when W is None, otherwise e(U, W) for disjoint U, W."""
    U = vertex_set(G, U)
    umask = to_mask(U)
    if W is None:
        return sum((G.masks[u] & umask).bit_count() for u in U) // 2
    W = vertex_set(G, W)
    wmask = to_mask(W)
    if umask & wmask:
        raise GraphError(f"U and W overlap on {from_mask(umask & wmask)}")
    return sum((G.masks[u] & wmask).bit_count() for u in U)


def degree_profile(G: Graph) -> tuple[int, int, list[int]]:
    """(min degree, max degree, degree list). Empty graph on 0 vertices gives (0, 0, [])."""
    degrees = [len(a) for a in G.adjacency]
    if not degrees:
        return 0, 0, degrees
    return min(degrees), max(degrees), degrees


def min_degree(G: Graph) -> int:
    return min((len(a) for a in G.adjacency), default=0)


def bfs_distance(G: Graph, u: int, v: int) -> Optional[int]:
    """Shortest-path length from u to v, or None when unreachable."""
    _check_vertices(G, (u, v))
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in G.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                queue.append(y)
    return None


def bfs_layers(G: Graph, source: int, limit: Optional[int] = None) -> dict[int, int]:
    """Distances from ``source`` to every vertex within ``limit`` hops."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if limit is not None and dist[x] >= limit:
            continue
        for y in G.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def components(G: Graph) -> list[tuple[int, ...]]:
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in G.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(G: Graph) -> bool:
    return G.n <= 1 or len(components(G)) == 1


def induced_subgraph(G: Graph, keep: Sequence[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced on ``keep``, relabelled to 0..len(keep)-1.

    Returns the graph and the list mapping new ids back to old ids.
    """
    keep = list(keep)
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in G.edges if u in index and v in index]
    return build_graph(len(keep), edges), keep


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Graph:
    """Star on n vertices with centre 0."""
    return build_graph(n, [(0, i) for i in range(1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


# -- edge-list text format ---------------------------------------------------

def format_edge_list(G: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` / ``u v`` edge-list format.

    Comment lines (``#``) are only allowed before the header. Edges must be
    canonical (u < v) and strictly ascending.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        i += 1
    if i == len(lines):
        raise GraphError("missing 'n m' header")
    try:
        n, m = (int(t) for t in lines[i].split())
    except ValueError:
        raise GraphError(f"bad header line: {lines[i]!r}") from None
    body = lines[i + 1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges, found {len(body)} lines")
    edges: list[Edge] = []
    for line in body:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise GraphError(f"edge ({u}, {v}) not in canonical u < v form")
        if edges and (u, v) <= edges[-1]:
            raise GraphError(f"edge ({u}, {v}) out of order or duplicated")
        edges.append((u, v))
    return build_graph(n, edges)


def read_edge_list(path: Union[str, Path]) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(G: Graph, path: Union[str, Path], comments: Sequence[str] = ()) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_edge_list(G, comments))
