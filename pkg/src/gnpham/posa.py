"""Rotation-extension (Posa) machinery and the Hamilton cycle pipeline.

Terminology used throughout:

* a *rotation* of a path x0 .. xl with fixed end x0 uses an edge (xl, xi)
  to produce x0 .. xi xl x(l-1) .. x(i+1); the new free end is x(i+1);
* a *closure* is the set of free ends reachable by repeated rotations,
  each with a witness path;
* a *booster candidate* is a non-edge (x, y) such that some rotated path
  runs from x to y (adding it closes a cycle on the path's vertex set), or
  x is a reachable end and y lies off the path (adding it extends the path).
  Either way the witness yields a strictly longer path or a Hamilton cycle.

The host graph during absorption is a :class:`HostView`: the skeleton's
adjacency plus an overlay of absorbed boosters. The base :class:`Graph`
objects are never mutated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

from .graph import Edge, Graph, induced_subgraph, min_degree
from .random_models import Seed, as_rng, derive_seed
from .skeleton import RegimeParams, Skeleton, params_for_graph, skeleton_for


class HostView:
    """Mutable adjacency-set view: base edges plus an overlay of added edges."""

    def __init__(self, base: Union[Graph, Skeleton, "HostView"]):
        if isinstance(base, HostView):
            self.n = base.n
            self.adj = [set(a) for a in base.adj]
            self.overlay = list(base.overlay)
            return
        g = base.graph if isinstance(base, Skeleton) else base
        self.n = g.n
        self.adj = [set(a) for a in g.adjacency]
        self.overlay: list[Edge] = []

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def add_edge(self, u: int, v: int) -> None:
        if v in self.adj[u] or u == v:
            raise ValueError(f"({u}, {v}) is already an edge or a loop")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.overlay.append((min(u, v), max(u, v)))

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2


def _view(H) -> HostView:
    return H if isinstance(H, HostView) else HostView(H)


def _rotate(path: Sequence[int], i: int) -> list[int]:
    """Rotate on the edge (path[-1], path[i])."""
    return list(path[: i + 1]) + list(reversed(path[i + 1:]))


def is_path(H, path: Sequence[int]) -> bool:
    H = _view(H)
    return len(set(path)) == len(path) and all(
        H.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1)
    )


@dataclass
class PathState:
    vertices: list[int]
    overlay_edges: list[Edge] = field(default_factory=list)

    @property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass
class RotationClosure:
    """Free ends reachable from ``root`` (which starts at ``fixed_end``).

    ``parent[end] = (previous end, pivot vertex)``; the root's own end maps
    to None. ``replay(end)`` rebuilds the witness from those records alone.
    """

    fixed_end: int
    root: tuple[int, ...]
    parent: dict[int, Optional[tuple[int, int]]]
    order: list[int]
    truncated: bool = False
    _paths: dict[int, tuple[int, ...]] = field(default_factory=dict, repr=False)

    @property
    def reachable_ends(self) -> list[int]:
        return list(self.order)

    def witness(self, end: int) -> list[int]:
        return list(self._paths[end])

    def replay(self, end: int) -> list[int]:
        chain = []
        e = end
        while self.parent[e] is not None:
            chain.append(self.parent[e])
            e = self.parent[e][0]
        path = list(self.root)
        for prev_end, pivot in reversed(chain):
            if path[-1] != prev_end:
                raise AssertionError("inconsistent rotation record")
            path = _rotate(path, path.index(pivot))
        return path


def rotation_closure(H, path: Sequence[int], fixed_end: int, cap: Optional[int] = None) -> RotationClosure:
    """Breadth-first closure of the free end under elementary rotations."""
    H = _view(H)
    path = list(path)
    if path[0] != fixed_end:
        if path[-1] != fixed_end:
            raise ValueError(f"{fixed_end} is not an endpoint of the path")
        path.reverse()
    if cap is None:
        cap = max(16, H.n * H.n)
    root = tuple(path)
    free = root[-1]
    parent: dict[int, Optional[tuple[int, int]]] = {free: None}
    paths = {free: root}
    order = [free]
    queue = deque([free])
    events = 0
    truncated = False
    while queue:
        end = queue.popleft()
        cur = paths[end]
        pos = {v: i for i, v in enumerate(cur)}
        last = len(cur) - 1
        for x in sorted(H.adj[end]):
            i = pos.get(x)
            if i is None or i == last - 1:
                continue
            events += 1
            new_end = cur[i + 1]
            if new_end in parent:
                continue
            parent[new_end] = (end, x)
            paths[new_end] = cur[: i + 1] + cur[i + 1:][::-1]
            order.append(new_end)
            queue.append(new_end)
        if events > cap:
            truncated = True
            break
    return RotationClosure(fixed_end, root, parent, order, truncated, paths)


@dataclass
class TwoSidedClosure:
    """First-level closure from one end, then a closure from every reached end."""

    path: tuple[int, ...]
    first: RotationClosure
    second: dict[int, RotationClosure]


@dataclass
class StepResult:
    kind: str  # "extended" | "restarted" | "cycle" | "stuck"
    path: list[int]
    closure: Optional[TwoSidedClosure] = None
    diagnostic: str = ""


def _off_path_neighbor(H: HostView, v: int, on_path: set[int]) -> Optional[int]:
    outside = H.adj[v] - on_path
    return min(outside) if outside else None


def _handle_cycle(H: HostView, cyc: list[int]) -> StepResult:
    if len(cyc) == H.n:
        return StepResult("cycle", cyc)
    on = set(cyc)
    for i, c in enumerate(cyc):
        w = _off_path_neighbor(H, c, on)
        if w is not None:
            return StepResult("restarted", [w] + cyc[i:] + cyc[:i])
    return StepResult("stuck", cyc, diagnostic="host disconnected: cycle has no outside neighbour")


def extend_or_close(H, path: Sequence[int], cap: Optional[int] = None) -> StepResult:
    """One step of rotation-extension on a valid path."""
    H = _view(H)
    path = list(path)
    on = set(path)
    for end, other in ((path[-1], False), (path[0], True)):
        w = _off_path_neighbor(H, end, on)
        if w is not None:
            return StepResult("extended", (list(reversed(path)) if other else path) + [w])
    if len(path) >= 3 and H.has_edge(path[0], path[-1]):
        return _handle_cycle(H, path)

    first = rotation_closure(H, path, path[0], cap)
    for x in first.order:
        w = _off_path_neighbor(H, x, on)
        if w is not None:
            return StepResult("extended", first.witness(x) + [w])
    for x in first.order:
        if len(path) >= 3 and H.has_edge(x, path[0]):
            return _handle_cycle(H, first.witness(x))
    second: dict[int, RotationClosure] = {}
    for x in first.order:
        sc = rotation_closure(H, first.witness(x), x, cap)
        second[x] = sc
        for y in sc.order:
            w = _off_path_neighbor(H, y, on)
            if w is not None:
                return StepResult("extended", sc.witness(y) + [w])
            if len(path) >= 3 and H.has_edge(x, y):
                return _handle_cycle(H, sc.witness(y))
    return StepResult("stuck", path, TwoSidedClosure(tuple(path), first, second))


@dataclass(frozen=True)
class BoosterCandidate:
    pair: Edge
    witness: tuple[int, ...]  # path with the pair's endpoints at its ends
    closes: bool  # True: closes a cycle on the path; False: extends the path


def booster_candidates(H, closure: TwoSidedClosure) -> dict[Edge, BoosterCandidate]:
    """Non-edges of H whose addition certifiably improves the stuck path.

    Closing pairs need the path to be spanning, or an outside vertex adjacent
    to the path's vertex set, for the resulting cycle to be broken into a
    longer path; pairs failing that are not emitted.
    """
    H = _view(H)
    on = set(closure.path)
    outside = [v for v in range(H.n) if v not in on]
    spanning = not outside
    attachable = spanning or any(H.adj[v] & on for v in outside)
    out: dict[Edge, BoosterCandidate] = {}

    def offer(cand: BoosterCandidate) -> None:
        if cand.pair not in out:
            out[cand.pair] = cand

    # (end, witness path ending there); the fixed side shows up as a second-level end
    ends_with_paths: list[tuple[int, list[int]]] = []
    for x in closure.first.order:
        ends_with_paths.append((x, closure.first.witness(x)))
        sc = closure.second.get(x)
        if sc is None:
            continue
        for y in sc.order:
            wy = sc.witness(y)  # runs x .. y
            ends_with_paths.append((y, wy))
            if y != x and not H.has_edge(x, y) and attachable and len(wy) >= 3:
                offer(BoosterCandidate((min(x, y), max(x, y)), tuple(wy), True))
    for end, wpath in ends_with_paths:
        if wpath[-1] != end:
            continue
        for w in outside:
            if not H.has_edge(end, w):
                offer(BoosterCandidate((min(end, w), max(end, w)), tuple(wpath) + (w,), False))
    return out


def apply_booster(H, cand: BoosterCandidate) -> StepResult:
    """Add ``cand.pair`` to H and return the improved path or cycle."""
    H = _view(H)
    u, v = cand.pair
    if not H.has_edge(u, v):
        H.add_edge(u, v)
    path = list(cand.witness)
    if not is_path(H, path):
        raise AssertionError(f"booster witness is not a path in the host: {cand}")
    if cand.closes:
        if not H.has_edge(path[0], path[-1]):
            raise AssertionError("closing booster does not join the witness ends")
        return _handle_cycle(H, path)
    return StepResult("extended", path)


def verify_hamilton_cycle(G: Graph, cycle: Sequence[int]) -> bool:
    n = G.n
    return (
        n >= 3 and len(cycle) == n and len(set(cycle)) == n
        and all(0 <= v < n for v in cycle)
        and all(G.has_edge(cycle[i], cycle[(i + 1) % n]) for i in range(n))
    )


def verify_hamilton_path(G: Graph, path: Sequence[int], u: Optional[int] = None, v: Optional[int] = None) -> bool:
    n = G.n
    if len(path) != n or len(set(path)) != n or not all(0 <= x < n for x in path):
        return False
    if u is not None and path[0] != u or v is not None and path[-1] != v:
        return False
    return all(G.has_edge(path[i], path[i + 1]) for i in range(n - 1))


@dataclass
class HamCertificate:
    kind: str  # "cycle" | "path" | "none" | "unknown"
    witness: list[int] = field(default_factory=list)
    trace: list[dict[str, Any]] = field(default_factory=list)
    regime: Optional[str] = None
    seeds: list[int] = field(default_factory=list)
    fallbacks_used: list[str] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "witness": list(self.witness),
            "trace": self.trace,
            "regime": self.regime,
            "seeds": self.seeds,
            "fallbacks_used": self.fallbacks_used,
            "reason": self.reason,
        }


def _grow(H: HostView, path: list[int], cap: Optional[int]) -> StepResult:
    res = StepResult("extended", path)
    while res.kind in ("extended", "restarted"):
        res = extend_or_close(H, res.path, cap)
    return res


def absorb_boosters(
    skeleton: Union[Skeleton, Graph],
    G: Graph,
    budget: Optional[int] = None,
    start: int = 0,
    cap: Optional[int] = None,
) -> HamCertificate:
    """Grow a maximal path in skeleton + overlay; when stuck, absorb a booster from G.

    Among candidates that are edges of G the lexicographically smallest pair
    is absorbed. Returns kind="cycle" (verified against G) or "unknown".
    """
    n = G.n
    if budget is None:
        budget = 2 * n
    if n < 3 or min_degree(G) < 2:
        return HamCertificate("unknown", reason="host cannot be Hamiltonian")
    H = HostView(skeleton)
    trace: list[dict[str, Any]] = []
    stuck_paths: list[list[int]] = []
    res = _grow(H, [start], cap)
    while True:
        if res.kind == "cycle":
            if not verify_hamilton_cycle(G, res.path):
                raise AssertionError("absorption produced an invalid Hamilton cycle")
            return HamCertificate("cycle", res.path, trace)
        stuck_paths.append(res.path)
        if len(trace) >= budget:
            return HamCertificate("unknown", res.path, trace, reason="booster budget exhausted")
        chosen = _pick_booster(H, G, res, stuck_paths, cap)
        if chosen is None:
            reason = res.diagnostic or "no booster candidate is an edge of G"
            return HamCertificate("unknown", res.path, trace, reason=reason)
        trace.append({"step": len(trace), "edge": list(chosen.pair), "path_length": len(res.path)})
        res = apply_booster(H, chosen)
        if res.kind != "cycle":
            res = _grow(H, res.path, cap)


def _pick_booster(H: HostView, G: Graph, res: StepResult, stuck_paths, cap) -> Optional[BoosterCandidate]:
    def usable(cl: TwoSidedClosure):
        cands = booster_candidates(H, cl)
        return [c for p, c in sorted(cands.items()) if G.has_edge(*p)]

    if res.closure is not None:
        found = usable(res.closure)
        if found:
            return found[0]
    # widen: other stuck paths of the same length, re-closed in the current host
    length = len(res.path)
    for old in stuck_paths[:-1]:
        if len(old) != length or not is_path(H, old):
            continue
        first = rotation_closure(H, old, old[0], cap)
        second = {x: rotation_closure(H, first.witness(x), x, cap) for x in first.order}
        found = usable(TwoSidedClosure(tuple(old), first, second))
        if found:
            return found[0]
    # the stuck path may be a non-spanning cycle in a disconnected host
    if res.closure is None:
        p = res.path
        first = rotation_closure(H, p, p[0], cap)
        second = {x: rotation_closure(H, first.witness(x), x, cap) for x in first.order}
        found = usable(TwoSidedClosure(tuple(p), first, second))
        if found:
            return found[0]
    return None


# -- fixed-endpoint Hamilton paths ----------------------------------------------

@dataclass
class PathResult:
    kind: str  # "path" | "none" | "unknown"
    path: list[int] = field(default_factory=list)
    provenance: str = ""


def _pinned_attempt(H: HostView, u: int, v: Optional[int], rng: np.random.Generator, cap) -> Optional[list[int]]:
    """Rotation-extension with u pinned; v (if given) is appended last."""
    n = H.n
    path = [u]
    target = n - 1 if v is not None else n
    while True:
        on = set(path)
        if v is not None:
            on.add(v)
        if len(path) == target:
            break
        nxt = sorted(H.adj[path[-1]] - on)
        if nxt:
            path.append(nxt[int(rng.integers(len(nxt)))])
            continue
        cl = rotation_closure(H, path, u, cap)
        moved = False
        ends = list(cl.order)
        rng.shuffle(ends)
        for x in ends:
            outs = sorted(H.adj[x] - on)
            if outs:
                path = cl.witness(x) + [outs[int(rng.integers(len(outs)))]]
                moved = True
                break
        if not moved:
            return None
    if v is None:
        return path
    if path[-1] in H.adj[v]:
        return path + [v]
    cl = rotation_closure(H, path, u, cap)
    for x in cl.order:
        if x in H.adj[v]:
            return cl.witness(x) + [v]
    return None


def hamilton_path_between(
    H: Graph, u: int, v: int, budget: int = 8, seed: Seed = 0,
    exact_limit: Optional[int] = 22, cap: Optional[int] = None,
) -> PathResult:
    """Hamilton path from u to v: randomized pinned rotation-extension, then exact DP.

    ``budget`` is the number of randomized attempts. ``exact_limit=None``
    disables the exact fallback.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    view = HostView(H)
    rng = as_rng(seed)
    if H.n == 2:
        return PathResult("path", [u, v], "direct") if H.has_edge(u, v) else PathResult("none", [], "exact")
    for _ in range(budget):
        p = _pinned_attempt(view, u, v, rng, cap)
        if p is not None:
            if not verify_hamilton_path(H, p, u, v):
                raise AssertionError("pinned rotation-extension produced an invalid path")
            return PathResult("path", p, "rotation-extension")
    if exact_limit is not None and H.n <= exact_limit:
        from .oracles import exact_hamilton_path

        p = exact_hamilton_path(H, u, v)
        if p is None:
            return PathResult("none", [], "exact")
        return PathResult("path", p, "exact")
    return PathResult("unknown", [], "budget exhausted")


def hamilton_path_from(H: Graph, u: int, budget: int = 8, seed: Seed = 0, cap=None) -> Optional[list[int]]:
    """Some Hamilton path starting at u, by pinned rotation-extension (heuristic)."""
    view = HostView(H)
    rng = as_rng(seed)
    for _ in range(budget):
        p = _pinned_attempt(view, u, None, rng, cap)
        if p is not None and verify_hamilton_path(H, p, u):
            return p
    return None


# -- the full solver ---------------------------------------------------------------

SKELETON_REDRAWS = 5
VERY_DENSE_PAIR_CAP = 6


def _very_dense_route(G: Graph, seed: int) -> Optional[list[int]]:
    """Delete a minimum-degree vertex v; join a Hamilton path between two of its neighbours through v."""
    v = min(range(G.n), key=lambda x: (len(G.adjacency[x]), x))
    keep = [x for x in range(G.n) if x != v]
    Gp, back = induced_subgraph(G, keep)
    fwd = {old: new for new, old in enumerate(back)}
    nb = list(G.adjacency[v])
    tried = 0
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if tried >= VERY_DENSE_PAIR_CAP:
                return None
            tried += 1
            res = hamilton_path_between(Gp, fwd[nb[i]], fwd[nb[j]], budget=2,
                                        seed=derive_seed(seed, "vdense", tried), exact_limit=None)
            if res.kind == "path":
                return [v] + [back[x] for x in res.path]
    return None


def solve_hamilton(
    G: Graph,
    params: Optional[RegimeParams] = None,
    mode: str = "auto",
    seed: int = 0,
    budget: Optional[int] = None,
) -> HamCertificate:
    """Decide Hamiltonicity of G with a certificate.

    ``pipeline`` runs only the constructive route (may return unknown),
    ``exact`` only the subset-DP oracle, ``auto`` the pipeline with the
    oracle as last resort for n <= params.exact_limit.
    """
    if mode not in ("auto", "pipeline", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    n = G.n
    if n < 3 or min_degree(G) < 2:
        return HamCertificate("none", reason="min-degree", regime=params.regime if params else None)
    if params is None:
        params = params_for_graph(G)
    cert = HamCertificate("unknown", regime=params.regime)
    if mode != "exact":
        cycle = None
        if params.regime == "very_dense":
            cycle = _very_dense_route(G, seed)
            cert.fallbacks_used.append("vertex-deletion")
        attempt = 0
        while cycle is None and attempt < SKELETON_REDRAWS:
            s = derive_seed(seed, "skeleton", attempt)
            cert.seeds.append(s)
            res = absorb_boosters(skeleton_for(G, params, s), G, budget)
            attempt += 1
            if res.kind == "cycle":
                cycle, cert.trace = res.witness, res.trace
        if attempt > 1:
            cert.fallbacks_used.append(f"skeleton-redraws:{attempt - 1}")
        if cycle is None:
            cert.fallbacks_used.append("host=G")
            res = absorb_boosters(G, G, budget)
            if res.kind == "cycle":
                cycle = res.witness
        if cycle is not None:
            if not verify_hamilton_cycle(G, cycle):
                raise AssertionError("solver produced an invalid Hamilton cycle")
            cert.kind, cert.witness = "cycle", list(cycle)
            return cert
        if mode == "pipeline":
            cert.reason = "pipeline exhausted"
            return cert
    if n > params.exact_limit:
        cert.reason = f"n={n} above exact limit {params.exact_limit}"
        return cert
    from .oracles import OracleBudget, exact_hamiltonicity

    cert.fallbacks_used.append("exact")
    ok, cyc = exact_hamiltonicity(G, OracleBudget(max_n_dp=max(params.exact_limit, 1)))
    if ok:
        if not verify_hamilton_cycle(G, cyc):
            raise AssertionError("exact oracle produced an invalid Hamilton cycle")
        cert.kind, cert.witness = "cycle", cyc
    else:
        cert.kind, cert.reason = "none", "exact oracle"
    return cert
