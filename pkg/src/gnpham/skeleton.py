"""Regime selection and the random sparse skeleton subgraph.

The asymptotic constants (d0 = 0.001 ln n, t0 = 0.002 np, ...) are kept
verbatim in :class:`RegimeParams`. At any feasible n the literal d0 is below
1, so by default the skeleton runs in *practical* mode: every vertex keeps
``max(3, ceil(0.3 ln n))`` uniformly chosen incident edges, and vertices of
at most that degree keep all of theirs. ``mode="paper"`` uses the literal
thresholds instead.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

import numpy as np

from .graph import Edge, Graph, build_graph
from .random_models import Seed, as_rng

REGIMES = ("very_sparse", "sparse", "dense", "very_dense")

# constants as they appear in the proofs
D0_FACTOR = 0.001
T0_FACTOR = 0.002
SPARSE_MAX_DEGREE = 800.0
DENSE_MAX_DEGREE = 7.0
SPARSE_SMALL_EXPONENT = 0.3
DENSE_SET_FRACTION = 1e-13
DENSE_CROSS_FRACTION = 1e-27
SPARSE_P_FACTOR = 100.0
VERY_DENSE_P = 0.01


@dataclass(frozen=True)
class RegimeParams:
    n: int
    p: float
    omega: float
    regime: str
    mode: str
    d0: float
    t0: float
    skeleton_out_degree: int
    small_threshold: float
    max_degree_cap: float
    small_set_cap: float
    omega_min: float = 1.0
    exact_limit: int = 22
    notes: tuple[str, ...] = field(default=())

    # subset sizes and factors used by the property checkers
    @property
    def log_n(self) -> float:
        return math.log(self.n)

    @property
    def sparse_set_size(self) -> float:
        return self.n / math.sqrt(self.log_n)

    @property
    def dense_set_size(self) -> float:
        return DENSE_SET_FRACTION * self.n

    @property
    def vdense_low_degree(self) -> float:
        return self.n * self.p / 10

    @property
    def vdense_cut_size(self) -> float:
        return self.n * self.p / 30

    @property
    def vdense_alpha_cap(self) -> float:
        return self.n * self.p / 40

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["notes"] = list(self.notes)
        d.update(
            sparse_set_size=self.sparse_set_size,
            dense_set_size=self.dense_set_size,
            vdense_low_degree=self.vdense_low_degree,
            vdense_cut_size=self.vdense_cut_size,
            vdense_alpha_cap=self.vdense_alpha_cap,
        )
        return d


def practical_out_degree(n: int) -> int:
    return max(3, math.ceil(0.3 * math.log(n)))


def classify(n: int, p: float, omega: float, omega_min: float = 1.0) -> str:
    if omega < omega_min:
        return "very_sparse"
    if p <= SPARSE_P_FACTOR * math.log(n) / n:
        return "sparse"
    if p <= VERY_DENSE_P:
        return "dense"
    return "very_dense"


def regime_params(n: int, p: float, overrides: Optional[Mapping[str, Any]] = None) -> RegimeParams:
    """Assign the regime for (n, p) and compute every threshold in force.

    ``overrides`` may set ``mode`` ("practical" | "paper"), ``omega_min``,
    ``regime``, ``skeleton_out_degree``, ``small_threshold`` or
    ``exact_limit``.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    ov = dict(overrides or {})
    mode = ov.pop("mode", "practical")
    if mode not in ("practical", "paper"):
        raise ValueError(f"unknown mode {mode!r}")
    omega_min = float(ov.pop("omega_min", 1.0))
    ln = math.log(n)
    omega = n * p - ln - math.log(ln)
    regime = ov.pop("regime", None) or classify(n, p, omega, omega_min)
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    d0 = D0_FACTOR * ln
    t0 = T0_FACTOR * n * p
    notes = []
    if regime == "dense":
        max_cap, small_cap, literal = DENSE_MAX_DEGREE * n * p, 1.0, t0
    elif regime == "very_dense":
        max_cap, small_cap, literal = math.inf, 1.0, n * p / 10
    else:
        max_cap, small_cap, literal = SPARSE_MAX_DEGREE * ln, n**SPARSE_SMALL_EXPONENT, d0
    if mode == "practical":
        out_degree = practical_out_degree(n)
        small_threshold = float(out_degree)
    else:
        out_degree = max(2, math.ceil(literal))
        small_threshold = literal
        if literal < 1:
            notes.append(f"literal small-degree threshold {literal:.4g} < 1")
    out_degree = int(ov.pop("skeleton_out_degree", out_degree))
    small_threshold = float(ov.pop("small_threshold", small_threshold))
    exact_limit = int(ov.pop("exact_limit", 22))
    if ov:
        raise ValueError(f"unknown overrides: {sorted(ov)}")
    return RegimeParams(
        n=n, p=p, omega=omega, regime=regime, mode=mode, d0=d0, t0=t0,
        skeleton_out_degree=out_degree, small_threshold=small_threshold,
        max_degree_cap=max_cap, small_set_cap=small_cap, omega_min=omega_min,
        exact_limit=exact_limit, notes=tuple(notes),
    )


def params_for_graph(G: Graph, overrides: Optional[Mapping[str, Any]] = None) -> RegimeParams:
    """Regime parameters using the empirical edge density of G as p."""
    p = G.m / (G.n * (G.n - 1) / 2)
    return regime_params(G.n, p, overrides)


@dataclass(frozen=True)
class Skeleton:
    base: Graph
    edges: tuple[Edge, ...]
    out_choice: tuple[tuple[Edge, ...], ...]
    out_degree: int
    small: tuple[int, ...]
    # vertices outside SMALL whose degree fell below out_degree
    flagged: tuple[int, ...] = ()

    @property
    def graph(self) -> Graph:
        g = self.__dict__.get("_graph")
        if g is None:
            g = build_graph(self.base.n, self.edges)
            object.__setattr__(self, "_graph", g)
        return g


def build_skeleton(G: Graph, small: Iterable[int], out_degree: int, seed: Seed) -> Skeleton:
    """Union of per-vertex edge choices E_v.

    SMALL vertices keep every incident edge; any other vertex keeps a
    uniformly random ``out_degree``-subset of its incident edges (all of
    them, flagged, if it has fewer).
    """
    if out_degree < 2:
        raise ValueError(f"out_degree must be >= 2, got {out_degree}")
    members = getattr(small, "members", small)
    small_set = frozenset(members)
    rng = as_rng(seed)
    chosen: set[Edge] = set()
    per_vertex = []
    flagged = []
    for v in range(G.n):
        inc = [(v, u) if v < u else (u, v) for u in G.adjacency[v]]
        if v in small_set or len(inc) <= out_degree:
            if v not in small_set and len(inc) < out_degree:
                flagged.append(v)
            ev = inc
        else:
            pick = np.sort(rng.choice(len(inc), size=out_degree, replace=False))
            ev = [inc[i] for i in pick]
        per_vertex.append(tuple(ev))
        chosen.update(ev)
    return Skeleton(
        base=G,
        edges=tuple(sorted(chosen)),
        out_choice=tuple(per_vertex),
        out_degree=out_degree,
        small=tuple(sorted(small_set)),
        flagged=tuple(flagged),
    )


def skeleton_for(G: Graph, params: RegimeParams, seed: Seed) -> Skeleton:
    """Skeleton with the SMALL threshold and out-degree from ``params``."""
    from .properties import small_vertices

    small = small_vertices(G, params.small_threshold)
    return build_skeleton(G, small.members, params.skeleton_out_degree, seed)
