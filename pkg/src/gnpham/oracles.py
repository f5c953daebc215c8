"""Exponential-time ground truth for small graphs.

The subset dynamic programs keep ``dp[mask]`` = bitmask of vertices at which
a path covering exactly ``mask`` can end. Masks are processed in popcount
layers and each layer is advanced with numpy in one pass per vertex, so a
full table over 2^n masks costs about n * 2^n element operations.

Nothing in the solving pipeline imports this module implicitly; callers
opt in, and every routine refuses inputs beyond its :class:`OracleBudget`.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .graph import Graph, build_graph, components, from_mask, is_connected, min_degree


class OracleBudgetError(RuntimeError):
    """Input exceeds what an exact oracle is allowed to attempt."""


@dataclass(frozen=True)
class OracleBudget:
    max_n_dp: int = 22
    max_n_enum: int = 6
    max_n_brute: int = 12
    time_cap: Optional[float] = None


DEFAULT_BUDGET = OracleBudget()


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise OracleBudgetError(f"{what}: n={n} exceeds oracle limit {limit}")


@lru_cache(maxsize=None)
def _layers(n: int) -> tuple[np.ndarray, ...]:
    """All masks on n bits grouped by popcount (index = popcount)."""
    masks = np.arange(1 << n, dtype=np.int64)
    counts = np.bitwise_count(masks)
    order = np.argsort(counts, kind="stable")
    bounds = np.searchsorted(counts[order], np.arange(n + 2))
    return tuple(masks[order[bounds[k]:bounds[k + 1]]] for k in range(n + 1))


def _path_table(G: Graph, start: Optional[int], budget: OracleBudget) -> np.ndarray:
    n = G.n
    _guard(n, budget.max_n_dp, "path DP")
    t0 = time.monotonic()
    dp = np.zeros(1 << n, dtype=np.int64)
    if start is None:
        for v in range(n):
            dp[1 << v] = 1 << v
    else:
        dp[1 << start] = 1 << start
    adj = [np.int64(m) for m in G.masks]
    layers = _layers(n)
    for k in range(1, n):
        cur = layers[k]
        if start is not None:
            cur = cur[(cur >> start) & 1 == 1]
        vals = dp[cur]
        live = vals != 0
        if not live.any():
            break
        cur, vals = cur[live], vals[live]
        for u in range(n):
            bit = np.int64(1 << u)
            sel = ((cur & bit) == 0) & ((vals & adj[u]) != 0)
            if sel.any():
                dp[cur[sel] | bit] |= bit
        if budget.time_cap is not None and time.monotonic() - t0 > budget.time_cap:
            raise OracleBudgetError(f"path DP exceeded time cap {budget.time_cap}s")
    return dp


def _walk_back(G: Graph, dp: np.ndarray, mask: int, end: int) -> list[int]:
    """Reconstruct a path covering ``mask`` and ending at ``end``."""
    path = [end]
    while mask & (mask - 1):
        mask ^= 1 << end
        prev_ends = int(dp[mask]) & G.masks[end]
        end = (prev_ends & -prev_ends).bit_length() - 1
        path.append(end)
    path.reverse()
    return path


def _quick_non_hamiltonian(G: Graph) -> bool:
    if G.n < 3 or min_degree(G) < 2 or not is_connected(G):
        return True
    # a vertex with three or more degree-2 neighbours cannot be on a Hamilton cycle
    for v in range(G.n):
        if sum(1 for u in G.adjacency[v] if len(G.adjacency[u]) == 2) > 2:
            return True
    return False


def exact_hamiltonicity(
    G: Graph, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[bool, Optional[list[int]]]:
    """Decide Hamiltonicity exactly; returns (verdict, cycle or None).

    Graphs on fewer than 3 vertices are non-Hamiltonian by convention.
    """
    if _quick_non_hamiltonian(G):
        return False, None
    _guard(G.n, budget.max_n_dp, "exact_hamiltonicity")
    start = min(range(G.n), key=lambda v: (len(G.adjacency[v]), v))
    dp = _path_table(G, start, budget)
    full = (1 << G.n) - 1
    closing = int(dp[full]) & G.masks[start]
    if not closing:
        return False, None
    end = (closing & -closing).bit_length() - 1
    return True, _walk_back(G, dp, full, end)


def exact_longest_path(G: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[int, list[int]]:
    """Maximum number of vertices on a simple path, with a witness path."""
    if G.n == 0:
        return 0, []
    dp = _path_table(G, None, budget)
    nz = np.flatnonzero(dp)
    sizes = np.bitwise_count(nz)
    best = int(nz[np.argmax(sizes)])
    ends = int(dp[best])
    end = (ends & -ends).bit_length() - 1
    return best.bit_count(), _walk_back(G, dp, best, end)


def exact_hamilton_path(
    G: Graph, u: int, v: Optional[int] = None, budget: OracleBudget = DEFAULT_BUDGET
) -> Optional[list[int]]:
    """A Hamilton path starting at u (and ending at v when given), or None."""
    if G.n == 1:
        return [u] if v in (None, u) else None
    if v == u:
        return None
    dp = _path_table(G, u, budget)
    full = (1 << G.n) - 1
    ends = int(dp[full])
    if v is not None:
        ends &= 1 << v
    if not ends:
        return None
    end = (ends & -ends).bit_length() - 1
    return _walk_back(G, dp, full, end)


def naive_longest_path(G: Graph) -> int:
    """Longest simple path by exhaustive DFS; independent of the subset DP."""
    best = min(G.n, 1)

    def dfs(v: int, seen: int, length: int) -> None:
        nonlocal best
        best = max(best, length)
        for w in G.adjacency[v]:
            if not seen >> w & 1:
                dfs(w, seen | 1 << w, length + 1)

    for s in range(G.n):
        dfs(s, 1 << s, 1)
    return best


def naive_hamiltonicity(G: Graph) -> bool:
    """Permutation search with vertex 0 fixed first."""
    n = G.n
    if n < 3:
        return False
    for perm in itertools.permutations(range(1, n)):
        cyc = (0,) + perm
        if all(G.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            return True
    return False


def _non_edges(G: Graph):
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if not G.masks[u] >> v & 1:
                yield u, v


def enumerate_boosters(G: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> set[tuple[int, int]]:
    """All non-edges whose addition gives a Hamilton cycle or a longer longest path.

    A Hamiltonian graph has no boosters (empty set).
    """
    _guard(G.n, budget.max_n_dp, "enumerate_boosters")
    if exact_hamiltonicity(G, budget)[0]:
        return set()
    L, _ = exact_longest_path(G, budget)
    out = set()
    for u, v in _non_edges(G):
        H = G.with_edges([(u, v)])
        if L < G.n:
            if exact_longest_path(H, budget)[0] > L:
                out.add((u, v))
        elif exact_hamiltonicity(H, budget)[0]:
            out.add((u, v))
    return out


def _matching_table(G: Graph) -> Callable[[int], int]:
    masks = G.masks

    @lru_cache(maxsize=None)
    def nu(mask: int) -> int:
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        best = nu(rest)
        cand = masks[v] & rest
        while cand:
            low = cand & -cand
            best = max(best, 1 + nu(rest ^ low))
            cand ^= low
        return best

    return nu


def brute_matching(G: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Maximum matching size by memoized exhaustive recursion."""
    _guard(G.n, budget.max_n_brute, "brute_matching")
    return _matching_table(G)((1 << G.n) - 1)


def enumerate_staples(G: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> set[tuple[int, int]]:
    """All non-edges uv with nu(G + uv) > nu(G).

    Uses nu(G + uv) = max(nu(G), 1 + nu(G - u - v)). A graph that already
    has a perfect matching has no staples.
    """
    _guard(G.n, budget.max_n_brute, "enumerate_staples")
    nu = _matching_table(G)
    full = (1 << G.n) - 1
    base = nu(full)
    if 2 * base == G.n:
        return set()
    return {(u, v) for u, v in _non_edges(G) if nu(full ^ (1 << u) ^ (1 << v)) == base}


def brute_vertex_connectivity(G: Graph) -> int:
    """Smallest vertex set whose removal disconnects G (n-1 for complete graphs)."""
    n = G.n
    for size in range(n - 1):
        for cut in itertools.combinations(range(n), size):
            rest = [v for v in range(n) if v not in cut]
            sub = build_graph(len(rest), [
                (rest.index(a), rest.index(b)) for a, b in G.edges if a in rest and b in rest
            ])
            if len(components(sub)) > 1:
                return size
    return n - 1


def brute_independence_number(G: Graph) -> int:
    n = G.n
    best = 0
    for mask in range(1 << n):
        c = mask.bit_count()
        if c <= best:
            continue
        if all(not (G.masks[v] & mask) for v in from_mask(mask)):
            best = c
    return best


# -- tiny-n probabilities -----------------------------------------------------

_count_cache: dict[tuple[int, Callable], list[int]] = {}


def _satisfying_counts(n: int, predicate: Callable[[Graph], bool]) -> list[int]:
    key = (n, predicate)
    if key not in _count_cache:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        counts = [0] * (len(pairs) + 1)
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in from_mask(mask)]
            if predicate(build_graph(n, edges)):
                counts[len(edges)] += 1
        _count_cache[key] = counts
    return _count_cache[key]


def exact_gnp_probability(
    n: int, p: float, predicate: Callable[[Graph], bool], budget: OracleBudget = DEFAULT_BUDGET
) -> float:
    """Pr(G(n,p) satisfies predicate) by enumerating all labelled graphs."""
    _guard(n, budget.max_n_enum, "exact_gnp_probability")
    counts = _satisfying_counts(n, predicate)
    N = len(counts) - 1
    return math.fsum(c * p**m * (1.0 - p) ** (N - m) for m, c in enumerate(counts) if c)


def _log_pmf(n: int, p: float, j: int) -> float:
    return (
        math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
        + j * math.log(p) + (n - j) * math.log1p(-p)
    )


def _degenerate(p: float, j_lo: int, j_hi: int, n: int) -> Optional[float]:
    if p == 0.0:
        return 1.0 if j_lo <= 0 <= j_hi else 0.0
    if p == 1.0:
        return 1.0 if j_lo <= n <= j_hi else 0.0
    return None


def binomial_range_exact(n: int, p: float, j_lo: int, j_hi: int) -> float:
    """Pr(j_lo <= X <= j_hi) for X ~ Bin(n, p), summed exactly with fsum."""
    j_lo, j_hi = max(j_lo, 0), min(j_hi, n)
    if j_lo > j_hi:
        return 0.0
    d = _degenerate(p, j_lo, j_hi, n)
    if d is not None:
        return d
    terms = [_log_pmf(n, p, j) for j in range(j_lo, j_hi + 1)]
    top = max(terms)
    return min(1.0, math.exp(top) * math.fsum(math.exp(t - top) for t in terms))


def binomial_tail_exact(n: int, p: float, k: int) -> float:
    """Pr(X >= k)."""
    return binomial_range_exact(n, p, k, n)


def binomial_cdf_exact(n: int, p: float, k: int) -> float:
    """Pr(X <= k)."""
    return binomial_range_exact(n, p, 0, k)
