"""Checkers for the P, Q and R property families, expansion, kappa and alpha.

Subset-quantified properties over pairs (U, W) are reduced to an
enumeration over U alone: once U is fixed, the extremal W of a given size
is obtained by sorting the outside vertices by how many neighbours they
have in U. This is exact, and it is what keeps ``mode="exact"`` affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import networkx as nx
import numpy as np

from .graph import (
    Graph,
    bfs_layers,
    degree_profile,
    from_mask,
    neighborhood_mask,
    to_mask,
)
from .random_models import Seed, as_rng
from .skeleton import SPARSE_P_FACTOR, VERY_DENSE_P, RegimeParams

HOLDS, VIOLATED, UNKNOWN = "holds", "violated", "unknown"

DEFAULT_SUBSET_BUDGET = 20_000_000
DEFAULT_TRIALS = 100_000
DEFAULT_ALPHA_LIMIT = 60


@dataclass
class PropertyReport:
    label: str
    verdict: str
    mode: str = "exact"
    witness: Optional[dict[str, Any]] = None
    trials: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"label": self.label, "verdict": self.verdict, "mode": self.mode}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.trials is not None:
            out["trials"] = self.trials
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass(frozen=True)
class SmallSet:
    threshold: float
    members: tuple[int, ...]


def small_vertices(G: Graph, threshold: float) -> SmallSet:
    """Vertices of degree at most ``threshold``."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    return SmallSet(threshold, tuple(v for v in range(G.n) if len(G.adjacency[v]) <= threshold))


# -- U-only reductions ---------------------------------------------------------

def _outside_counts(G: Graph, umask: int) -> list[tuple[int, int]]:
    """(|N(x) & U|, x) for every x outside U."""
    return [((G.masks[x] & umask).bit_count(), x) for x in range(G.n) if not umask >> x & 1]


def _spanned(G: Graph, umask: int) -> int:
    return sum((G.masks[u] & umask).bit_count() for u in from_mask(umask)) // 2


def _min_cross(G: Graph, umask: int, w: int) -> tuple[int, tuple[int, ...]]:
    counts = sorted(_outside_counts(G, umask))[:w]
    return sum(c for c, _ in counts), tuple(sorted(x for _, x in counts))


def _max_cross(G: Graph, umask: int, w: int) -> tuple[int, tuple[int, ...]]:
    counts = sorted(_outside_counts(G, umask), key=lambda t: (-t[0], t[1]))[:w]
    return sum(c for c, _ in counts), tuple(sorted(x for _, x in counts))


class _Family:
    """A subset-quantified property: sizes of U to scan and a per-U test.

    ``test(umask)`` returns None when U is fine, else a witness dict.
    """

    def __init__(self, label: str, sizes: list[int], test, note: str = ""):
        self.label, self.sizes, self.test, self.note = label, sizes, test, note


def _combos_masks(n: int, k: int):
    """Masks of all k-subsets of range(n) in lexicographic order."""
    idx = list(range(k))
    while True:
        yield to_mask(idx)
        i = k - 1
        while i >= 0 and idx[i] == n - k + i:
            i -= 1
        if i < 0:
            return
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1


def _random_subset(G: Graph, k: int, rng: np.random.Generator) -> int:
    """Random k-set, half the time grown from a low-degree seed through neighbourhoods."""
    n = G.n
    if rng.random() < 0.5:
        return to_mask(rng.choice(n, size=k, replace=False).tolist())
    deg = np.array([len(a) for a in G.adjacency], dtype=float)
    w = 1.0 / (deg + 1.0)
    mask = 1 << int(rng.choice(n, p=w / w.sum()))
    while mask.bit_count() < k:
        frontier = from_mask(neighborhood_mask(G, mask))
        if frontier and rng.random() < 0.8:
            mask |= 1 << int(frontier[rng.integers(len(frontier))])
        else:
            rest = [v for v in range(n) if not mask >> v & 1]
            mask |= 1 << int(rest[rng.integers(len(rest))])
    return mask


def _run_family(
    G: Graph, fam: _Family, mode: str, budget: int, trials: int, rng: np.random.Generator
) -> PropertyReport:
    sizes = [k for k in fam.sizes if 1 <= k <= G.n]
    if not sizes:
        rep = PropertyReport(fam.label, HOLDS, "exact")
        rep.notes.append("vacuous: quantifier range empty after rounding")
        if fam.note:
            rep.notes.append(fam.note)
        return rep
    total = sum(math.comb(G.n, k) for k in sizes)
    if mode == "exact" and total <= budget:
        for k in sizes:
            for umask in _combos_masks(G.n, k):
                wit = fam.test(umask)
                if wit is not None:
                    return PropertyReport(fam.label, VIOLATED, "exact", wit, notes=[fam.note] if fam.note else [])
        return PropertyReport(fam.label, HOLDS, "exact", notes=[fam.note] if fam.note else [])
    notes = [fam.note] if fam.note else []
    if mode == "exact":
        notes.append(f"{total} subsets exceed budget {budget}; randomized refutation used")
    for _ in range(trials):
        k = sizes[int(rng.integers(len(sizes)))]
        wit = fam.test(_random_subset(G, k, rng))
        if wit is not None:
            return PropertyReport(fam.label, VIOLATED, "randomized", wit, trials, notes)
    return PropertyReport(fam.label, UNKNOWN, "randomized", None, trials, notes)


def _cross_min_family(G: Graph, label: str, size: float, target: float) -> _Family:
    s = math.floor(size)
    sizes = [s] if s >= 1 and 2 * s <= G.n else []

    def test(umask: int):
        val, W = _min_cross(G, umask, s)
        if val < target:
            return {"U": list(from_mask(umask)), "W": list(W), "e_UW": val, "required": target}
        return None

    return _Family(label, sizes, test, f"|U|=|W|={s}")


def _p4_family(G: Graph, params: RegimeParams) -> _Family:
    s = math.floor(params.sparse_set_size)
    L = params.log_n ** 0.75
    # e(U) <= C(k,2) < k L whenever (k-1)/2 < L, so those sizes cannot fail
    sizes = [k for k in range(1, s + 1) if (k - 1) / 2 >= L]

    def test(umask: int):
        k = umask.bit_count()
        e = _spanned(G, umask)
        if e >= k * L:
            return {"U": list(from_mask(umask)), "e_U": e, "bound": k * L}
        return None

    return _Family("P4", sizes, test, f"|U|<={s}")


def _p5_family(G: Graph, params: RegimeParams) -> _Family:
    s = math.floor(params.sparse_set_size)
    f = params.log_n ** 0.25
    d0 = params.small_threshold

    def test(umask: int):
        k = umask.bit_count()
        w = min(math.floor(k * f), G.n - k)
        if w < 1:
            return None
        val, W = _max_cross(G, umask, w)
        if val >= d0 * k / 2:
            return {"U": list(from_mask(umask)), "W": list(W), "e_UW": val, "bound": d0 * k / 2}
        return None

    return _Family("P5", list(range(1, s + 1)), test, f"|U|<={s}")


def _q4_family(G: Graph, params: RegimeParams) -> _Family:
    t0 = params.small_threshold
    lo = max(1, math.ceil(t0 / 3 - 1))
    hi = math.floor(params.dense_set_size)
    sizes = [k for k in range(lo, hi + 1) if 3 * k + 3 <= G.n]

    def test(umask: int):
        k = umask.bit_count()
        val, W = _max_cross(G, umask, 2 * k + 3)
        total = val + _spanned(G, umask)
        if total >= t0 * k:
            return {"U": list(from_mask(umask)), "W": list(W), "e_UW_plus_e_U": total, "bound": t0 * k}
        return None

    return _Family("Q4", sizes, test, f"{lo}<=|U|<={hi}")


# -- individual polynomial checks ---------------------------------------------

def _min_degree_report(G: Graph, label: str) -> PropertyReport:
    lo, _, degs = degree_profile(G)
    if G.n and lo < 2:
        v = degs.index(lo)
        return PropertyReport(label, VIOLATED, witness={"vertex": v, "degree": lo})
    return PropertyReport(label, HOLDS)


def _max_degree_report(G: Graph, label: str, cap: float) -> PropertyReport:
    _, hi, degs = degree_profile(G)
    if hi > cap:
        return PropertyReport(label, VIOLATED, witness={"vertex": degs.index(hi), "degree": hi, "cap": cap})
    return PropertyReport(label, HOLDS)


def _small_count_report(G: Graph, label: str, threshold: float, cap: float) -> PropertyReport:
    small = small_vertices(G, threshold).members
    if len(small) > cap:
        return PropertyReport(label, VIOLATED, witness={"small": list(small), "cap": cap})
    return PropertyReport(label, HOLDS)


def _small_distance_report(G: Graph, label: str, threshold: float, limit: int = 4) -> PropertyReport:
    small = small_vertices(G, threshold).members
    small_set = set(small)
    for u in small:
        dist = bfs_layers(G, u, limit)
        close = sorted(v for v, d in dist.items() if v > u and v in small_set)
        if close:
            v = close[0]
            return PropertyReport(label, VIOLATED, witness={"pair": [u, v], "distance": dist[v]})
    return PropertyReport(label, HOLDS)


# -- public API -----------------------------------------------------------------

SUITES = {"very_sparse": "P", "sparse": "P", "dense": "Q", "very_dense": "R"}


def check_suite(
    G: Graph,
    params: RegimeParams,
    mode: str = "exact",
    trials: int = DEFAULT_TRIALS,
    seed: Seed = 0,
    budget: int = DEFAULT_SUBSET_BUDGET,
    suite: Optional[str] = None,
    alpha_limit: int = DEFAULT_ALPHA_LIMIT,
) -> list[PropertyReport]:
    """One report per property of the suite that fits ``params.regime``.

    P7 and Q5 (booster existence over all expanding subgraphs) are not
    checked here; the absorption loop exercises them constructively.
    """
    if mode not in ("exact", "randomized"):
        raise ValueError(f"mode must be 'exact' or 'randomized', got {mode!r}")
    rng = as_rng(seed)
    suite = suite or SUITES[params.regime]
    n, p = G.n, params.p
    warning = None
    if suite == "Q" and not (SPARSE_P_FACTOR * math.log(n) / n <= p <= VERY_DENSE_P):
        warning = "Q-suite requested outside 100 ln n / n <= p <= 0.01"
    elif suite == "R" and p < VERY_DENSE_P:
        warning = "R-suite requested with p < 0.01"
    elif suite == "P" and p > SPARSE_P_FACTOR * math.log(n) / n:
        warning = "P-suite requested with p > 100 ln n / n"
    thr = params.small_threshold
    reports: list[PropertyReport] = []
    run = lambda fam: _run_family(G, fam, mode, budget, trials, rng)
    if suite == "P":
        reports += [
            _min_degree_report(G, "P0"),
            _max_degree_report(G, "P1", params.max_degree_cap),
            _small_count_report(G, "P2", thr, n ** 0.3),
            _small_distance_report(G, "P3", thr),
            run(_p4_family(G, params)),
            run(_p5_family(G, params)),
            run(_cross_min_family(G, "P6", params.sparse_set_size, n / 2)),
        ]
    elif suite == "Q":
        reports += [
            _min_degree_report(G, "Q0"),
            _max_degree_report(G, "Q1", 7 * n * p),
            _small_count_report(G, "Q2", thr, 1),
            run(_cross_min_family(G, "Q3", params.dense_set_size, 1e-27 * n * n * p)),
            run(_q4_family(G, params)),
        ]
    elif suite == "R":
        reports += [
            _min_degree_report(G, "R0"),
            _small_count_report(G, "R1", params.vdense_low_degree, 1),
            run(_cross_min_family(G, "R2", params.vdense_cut_size, 1)),
            _r3_report(G, params.vdense_alpha_cap, alpha_limit),
        ]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    if warning:
        for r in reports:
            r.notes.append(warning)
    return reports


def _r3_report(G: Graph, cap: float, alpha_limit: int) -> PropertyReport:
    value, exact, witness = independence_number(G, alpha_limit)
    if value > cap:
        mode = "exact" if exact else "greedy"
        return PropertyReport("R3", VIOLATED, mode, {"independent_set": list(witness), "cap": cap})
    if exact:
        return PropertyReport("R3", HOLDS, "exact", notes=[f"alpha={value}"])
    return PropertyReport("R3", UNKNOWN, "greedy", notes=[f"greedy lower bound {value}"])


def is_expander(
    G: Graph,
    k: int,
    alpha: float,
    mode: str = "exact",
    trials: int = DEFAULT_TRIALS,
    seed: Seed = 0,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> PropertyReport:
    """Check |N(W)| >= alpha |W| for all |W| <= k.

    Exact mode scans sizes in increasing order and subsets in lexicographic
    order, so the reported witness is the first violating set in that order.
    """
    k = min(k, G.n)
    label = f"({k},{alpha:g})-expander"
    total = sum(math.comb(G.n, j) for j in range(1, k + 1))
    notes = []
    if mode == "exact" and total <= budget:
        masks = G.masks
        for size in range(1, k + 1):
            need = alpha * size
            for wmask in _combos_masks(G.n, size):
                acc = 0
                m = wmask
                while m:
                    low = m & -m
                    acc |= masks[low.bit_length() - 1]
                    m ^= low
                got = (acc & ~wmask).bit_count()
                if got < need:
                    return PropertyReport(label, VIOLATED, "exact",
                                          {"W": list(from_mask(wmask)), "neighbourhood": got})
        return PropertyReport(label, HOLDS, "exact")
    if mode == "exact":
        notes.append(f"{total} subsets exceed budget {budget}; randomized refutation used")
    rng = as_rng(seed)
    for _ in range(trials):
        size = int(rng.integers(1, k + 1))
        wmask = _random_subset(G, size, rng)
        got = neighborhood_mask(G, wmask).bit_count()
        if got < alpha * size:
            return PropertyReport(label, VIOLATED, "randomized",
                                  {"W": list(from_mask(wmask)), "neighbourhood": got}, trials, notes)
    return PropertyReport(label, UNKNOWN, "randomized", None, trials, notes)


def vertex_connectivity(G: Graph) -> int:
    """kappa(G) through max-flow minimum vertex cuts; K_n gives n - 1."""
    if G.n < 2:
        raise ValueError("vertex connectivity needs n >= 2")
    if G.m == G.n * (G.n - 1) // 2:
        return G.n - 1
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return nx.node_connectivity(H)


def independence_number(G: Graph, exact_limit: int = DEFAULT_ALPHA_LIMIT):
    """(alpha, exact, witness). Above ``exact_limit`` a greedy lower bound."""
    masks = G.masks
    if G.n > exact_limit:
        cand = (1 << G.n) - 1
        chosen = 0
        while cand:
            v = min(from_mask(cand), key=lambda x: ((masks[x] & cand).bit_count(), x))
            chosen |= 1 << v
            cand &= ~(masks[v] | 1 << v)
        return chosen.bit_count(), False, from_mask(chosen)

    best = [0, 0]

    def search(cand: int, chosen: int, size: int) -> None:
        if size + cand.bit_count() <= best[0]:
            return
        if not cand:
            best[0], best[1] = size, chosen
            return
        v, dv = -1, -1
        m = cand
        while m:
            low = m & -m
            x = low.bit_length() - 1
            d = (masks[x] & cand).bit_count()
            if d > dv:
                v, dv = x, d
            m ^= low
        if dv == 0:
            best[0], best[1] = size + cand.bit_count(), chosen | cand
            return
        search(cand & ~(masks[v] | 1 << v), chosen | 1 << v, size + 1)
        search(cand & ~(1 << v), chosen, size)

    search((1 << G.n) - 1, 0, 0)
    return best[0], True, from_mask(best[1])
