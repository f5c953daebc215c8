"""G(n, p) sampling, the random graph process and hitting times.

Seed discipline: every random draw in the package comes from
:func:`derive_rng`, which mixes ``(master seed, purpose tag, indices...)``
through :class:`numpy.random.SeedSequence`. The tag is hashed with CRC-32 so
the mapping is stable across processes and Python versions. A sample's
stream depends only on its own index, never on which worker drew it.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from .graph import Edge, Graph, GraphError, build_graph, is_connected, min_degree

Seed = Union[int, np.random.Generator]

GEOMETRIC_CROSSOVER = 0.1


def derive_rng(master: int, tag: str, *index: int) -> np.random.Generator:
    """Independent generator for ``(master, tag, *index)``."""
    words = [int(master) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(tag.encode())]
    words.extend(int(i) for i in index)
    return np.random.default_rng(np.random.SeedSequence(words))


def derive_seed(master: int, tag: str, *index: int) -> int:
    """A 63-bit integer seed drawn from the derived stream."""
    return int(derive_rng(master, tag, *index).integers(0, 2**63 - 1))


def as_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def sample_gnp(n: int, p: float, seed: Seed) -> Graph:
    """Sample G(n, p): each of the C(n,2) pairs present independently w.p. p.

    Small p uses geometric skipping over the lexicographic pair order
    (expected O(pN) work); otherwise a dense Bernoulli sweep.
    """
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = as_rng(seed)
    N = n_pairs(n)
    rows, cols = _pairs(n)
    if p == 0.0 or N == 0:
        idx = np.empty(0, dtype=np.int64)
    elif p == 1.0:
        idx = np.arange(N)
    elif p < GEOMETRIC_CROSSOVER:
        chunks = []
        pos = -1
        mean = N * p
        batch = int(mean + 5 * math.sqrt(mean) + 16)
        while True:
            # p near 0 can overflow int64 draws; anything past N ends the walk anyway
            gaps = rng.geometric(p, size=batch)
            gaps[(gaps <= 0) | (gaps > N)] = N + 1
            steps = pos + np.cumsum(gaps)
            inside = steps[steps < N]
            chunks.append(inside)
            if len(inside) < batch:
                break
            pos = int(steps[-1])
        idx = np.concatenate(chunks)
    else:
        idx = np.flatnonzero(rng.random(N) < p)
    edges = list(zip(rows[idx].tolist(), cols[idx].tolist()))
    return build_graph(n, edges)


@dataclass(frozen=True)
class EdgeOrdering:
    """A permutation of all pairs of K_n; position i is the i-th edge added."""

    n: int
    order: tuple[Edge, ...]

    def __post_init__(self):
        if len(self.order) != n_pairs(self.n) or len(set(self.order)) != len(self.order):
            raise GraphError("ordering must list every pair of K_n exactly once")
        for u, v in self.order:
            if not 0 <= u < v < self.n:
                raise GraphError(f"non-canonical pair ({u}, {v}) in ordering")

    def __len__(self) -> int:
        return len(self.order)


def sample_process(n: int, seed: Seed) -> EdgeOrdering:
    """Uniformly random ordering of the edges of K_n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    rng = as_rng(seed)
    rows, cols = _pairs(n)
    perm = rng.permutation(n_pairs(n))
    return EdgeOrdering(n, tuple(zip(rows[perm].tolist(), cols[perm].tolist())))


def prefix_graph(ordering: EdgeOrdering, i: int) -> Graph:
    """G_i: the graph on the first i edges of the ordering."""
    if not 0 <= i <= len(ordering):
        raise IndexError(f"prefix index {i} outside [0, {len(ordering)}]")
    return build_graph(ordering.n, ordering.order[:i])


# -- hitting times ------------------------------------------------------------

class NonMonotoneError(RuntimeError):
    """A predicate passed to :func:`hitting_time` was caught flipping back to false."""


def _has_pm(G: Graph) -> bool:
    from .matching import max_matching

    return G.n % 2 == 0 and len(max_matching(G).edges) * 2 == G.n


def _is_ham(G: Graph) -> bool:
    from .oracles import exact_hamiltonicity

    return exact_hamiltonicity(G)[0]


PROPERTIES: dict[str, Callable[[Graph], bool]] = {
    "D1": lambda G: min_degree(G) >= 1,
    "D2": lambda G: min_degree(G) >= 2,
    "CONN": is_connected,
    "PM": _has_pm,
    "HAM": _is_ham,
}


def hitting_time(
    ordering: EdgeOrdering,
    prop: str,
    decide: Optional[Callable[[Graph], bool]] = None,
    audit: bool = True,
) -> int:
    """Smallest i with G_i in the (monotone increasing) property.

    Found by bisection over i. Returns ``len(ordering) + 1`` when even K_n
    fails. With ``audit`` two extra probes on either side of the answer are
    checked; an inconsistent verdict raises :class:`NonMonotoneError`.
    """
    if decide is None:
        try:
            decide = PROPERTIES[prop]
        except KeyError:
            raise ValueError(f"unknown property id {prop!r}") from None
    N = len(ordering)
    cache: dict[int, bool] = {}

    def at(i: int) -> bool:
        if i not in cache:
            cache[i] = bool(decide(prefix_graph(ordering, i)))
        return cache[i]

    if not at(N):
        return N + 1
    if at(0):
        tau = 0
    else:
        lo, hi = 0, N  # at(lo) false, at(hi) true
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if at(mid):
                hi = mid
            else:
                lo = mid
        tau = hi
    if audit:
        for j in {tau // 2, (tau + N + 1) // 2}:
            if 0 <= j <= N and at(j) != (j >= tau):
                raise NonMonotoneError(
                    f"{prop}: decide({j}) = {at(j)} inconsistent with hitting time {tau}"
                )
    return tau


def hitting_times(ordering: EdgeOrdering, props=("D1", "D2", "CONN", "PM", "HAM")) -> dict[str, int]:
    return {p: hitting_time(ordering, p) for p in props}


# -- process replay format ----------------------------------------------------

def format_ordering(ordering: EdgeOrdering) -> str:
    lines = [str(ordering.n)] + [f"{u} {v}" for u, v in ordering.order]
    return "\n".join(lines) + "\n"


def parse_ordering(text: str) -> EdgeOrdering:
    lines = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    n = int(lines[0])
    order = tuple(tuple(int(t) for t in ln.split()) for ln in lines[1:])
    return EdgeOrdering(n, order)


def read_ordering(path: Union[str, Path]) -> EdgeOrdering:
    return parse_ordering(Path(path).read_text())
