"""Maximum matchings, staples and the perfect-matching pipeline."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

from .graph import Edge, Graph, induced_subgraph, min_degree
from .posa import HostView, hamilton_path_from
from .random_models import derive_seed
from .skeleton import RegimeParams, Skeleton, params_for_graph, skeleton_for


@dataclass(frozen=True)
class Matching:
    n: int
    edges: tuple[Edge, ...]
    exposed: tuple[int, ...]

    def __post_init__(self):
        touched = [v for e in self.edges for v in e]
        if len(set(touched)) != len(touched):
            raise ValueError("matching edges are not pairwise disjoint")
        if 2 * len(self.edges) + len(self.exposed) != self.n:
            raise ValueError("exposed set inconsistent with matching size")

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def is_perfect(self) -> bool:
        return not self.exposed


def _from_mate(mate: Sequence[int]) -> Matching:
    n = len(mate)
    edges = tuple(sorted((v, mate[v]) for v in range(n) if mate[v] > v))
    exposed = tuple(v for v in range(n) if mate[v] < 0)
    return Matching(n, edges, exposed)


def _adjacency(G) -> list[Sequence[int]]:
    if isinstance(G, HostView):
        return [sorted(a) for a in G.adj]
    if isinstance(G, Skeleton):
        G = G.graph
    return [list(a) for a in G.adjacency]


def max_matching(G: Union[Graph, HostView, Skeleton], initial: Optional[Matching] = None) -> Matching:
    """Maximum cardinality matching (Edmonds' blossom algorithm, O(n^3))."""
    adj = _adjacency(G)
    n = len(adj)
    mate = [-1] * n
    if initial is not None:
        for u, v in initial.edges:
            mate[u], mate[v] = v, u
    else:
        for v in range(n):
            if mate[v] < 0:
                for u in adj[v]:
                    if mate[u] < 0:
                        mate[v], mate[u] = u, v
                        break

    def find_path(root: int) -> int:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if mate[a] < 0:
                    break
                a = parent[mate[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[mate[b]]

        def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[mate[v]]] = True
                parent[v] = child
                child = mate[v]
                v = parent[mate[v]]

        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] >= 0 and parent[mate[to]] >= 0):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] < 0:
                    parent[to] = v
                    if mate[to] < 0:
                        return augment(to, parent)
                    used[mate[to]] = True
                    q.append(mate[to])
        return -1

    def augment(v: int, parent: list[int]) -> int:
        while v >= 0:
            pv = parent[v]
            ppv = mate[pv]
            mate[v], mate[pv] = pv, v
            v = ppv
        return 1

    for v in range(n):
        if mate[v] < 0:
            find_path(v)
    return _from_mate(mate)


def verify_perfect_matching(G: Graph, matching: Matching) -> bool:
    seen = set()
    for u, v in matching.edges:
        if not G.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return len(seen) == G.n


def find_staple(gamma: Union[Graph, HostView, Skeleton], G: Graph) -> Optional[Edge]:
    """An edge of G outside gamma whose addition raises the matching number.

    Candidates with both ends exposed by the current maximum matching come
    first (they are staples outright), then one exposed end, then the rest;
    lexicographic within each tier.
    """
    H = gamma if isinstance(gamma, HostView) else HostView(gamma)
    M = max_matching(H)
    exposed = set(M.exposed)
    if not exposed:
        return None
    tiers: list[list[Edge]] = [[], [], []]
    for u, v in G.edges:
        if H.has_edge(u, v):
            continue
        tiers[2 - (u in exposed) - (v in exposed)].append((u, v))
    if tiers[0]:
        return tiers[0][0]
    for u, v in tiers[1] + tiers[2]:
        trial = HostView(H)
        trial.add_edge(u, v)
        if max_matching(trial, M).size > M.size:
            return (u, v)
    return None


@dataclass
class PMCertificate:
    kind: str  # "perfect" | "none" | "unknown"
    matching: Optional[Matching] = None
    trace: list[dict[str, Any]] = field(default_factory=list)
    regime: Optional[str] = None
    seeds: list[int] = field(default_factory=list)
    fallbacks_used: list[str] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "witness": [list(e) for e in self.matching.edges] if self.matching else [],
            "trace": self.trace,
            "regime": self.regime,
            "seeds": self.seeds,
            "fallbacks_used": self.fallbacks_used,
            "reason": self.reason,
        }


def absorb_staples(skeleton: Union[Skeleton, Graph], G: Graph, budget: Optional[int] = None) -> PMCertificate:
    """Add staples from G to the skeleton until it has a perfect matching."""
    n = G.n
    if n % 2:
        return PMCertificate("none", reason="parity")
    if budget is None:
        budget = n // 2 + 1
    H = HostView(skeleton)
    trace: list[dict[str, Any]] = []
    while True:
        M = max_matching(H)
        if M.is_perfect:
            if not verify_perfect_matching(G, M):
                raise AssertionError("staple absorption produced an invalid perfect matching")
            return PMCertificate("perfect", M, trace)
        if len(trace) >= budget:
            return PMCertificate("unknown", M, trace, reason="staple budget exhausted")
        staple = find_staple(H, G)
        if staple is None:
            return PMCertificate("unknown", M, trace, reason="no staple in E(G)")
        H.add_edge(*staple)
        trace.append({"step": len(trace), "edge": list(staple), "matching_size": M.size})


def _matching_via_hamilton_path(G: Graph, seed: int) -> Optional[Matching]:
    """Perfect matching from a Hamilton path that starts at a minimum-degree vertex."""
    v = min(range(G.n), key=lambda x: (len(G.adjacency[x]), x))
    keep = [x for x in range(G.n) if x != v]
    Gp, back = induced_subgraph(G, keep)
    fwd = {old: new for new, old in enumerate(back)}
    for i, u in enumerate(G.adjacency[v][:4]):
        p = hamilton_path_from(Gp, fwd[u], budget=2, seed=derive_seed(seed, "pm-path", i))
        if p is not None:
            full = [v] + [back[x] for x in p]
            edges = [(full[j], full[j + 1]) for j in range(0, G.n, 2)]
            return Matching(G.n, tuple(sorted((min(a, b), max(a, b)) for a, b in edges)), ())
    return None


def solve_pm(
    G: Graph,
    params: Optional[RegimeParams] = None,
    mode: str = "auto",
    seed: int = 0,
    via_hamilton_path: bool = False,
) -> PMCertificate:
    """Decide whether G has a perfect matching, with certificate.

    Sparse and dense regimes go through skeleton + staple absorption; the
    very dense regime runs the exact matching directly (or, with
    ``via_hamilton_path``, takes every other edge of a Hamilton path).
    ``auto`` and ``exact`` fall back to the exact maximum matching of G.
    """
    if mode not in ("auto", "pipeline", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    n = G.n
    regime = params.regime if params else None
    if n % 2:
        return PMCertificate("none", regime=regime, reason="parity")
    if n and min_degree(G) == 0:
        return PMCertificate("none", regime=regime, reason="isolated vertex")
    if n == 0:
        return PMCertificate("perfect", Matching(0, (), ()), regime=regime)
    if params is None and n >= 3:
        params = params_for_graph(G)
        regime = params.regime
    cert = PMCertificate("unknown", regime=regime)
    if mode != "exact" and params is not None:
        if params.regime == "very_dense":
            M = _matching_via_hamilton_path(G, seed) if via_hamilton_path else None
            cert.fallbacks_used.append("hamilton-path" if via_hamilton_path else "direct-max-matching")
            if M is None:
                M = max_matching(G)
            if M.is_perfect:
                cert.kind, cert.matching = "perfect", M
            else:
                cert.kind, cert.matching, cert.reason = "none", M, "exact max matching"
            return _checked(G, cert)
        s = derive_seed(seed, "skeleton-pm", 0)
        cert.seeds.append(s)
        res = absorb_staples(skeleton_for(G, params, s), G)
        if res.kind == "perfect":
            cert.kind, cert.matching, cert.trace = "perfect", res.matching, res.trace
            return _checked(G, cert)
        cert.trace = res.trace
        if mode == "pipeline":
            cert.reason = res.reason
            return cert
    cert.fallbacks_used.append("exact")
    M = max_matching(G)
    cert.matching = M
    if M.is_perfect:
        cert.kind = "perfect"
    else:
        cert.kind, cert.reason = "none", "exact max matching"
    return _checked(G, cert)


def _checked(G: Graph, cert: PMCertificate) -> PMCertificate:
    if cert.kind == "perfect" and not verify_perfect_matching(G, cert.matching):
        raise AssertionError("perfect-matching certificate failed verification")
    return cert
