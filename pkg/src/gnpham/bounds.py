"""Finite-n evaluators for the binomial and union-bound inequalities.

Powers are evaluated in log space (``log1p`` for ``log(1-p)``) so that
quantities like ``(1-p)^n`` at n = 10^6 do not underflow before they are
combined. Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional


def _exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


def log_comb(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


class CoeffBounds(NamedTuple):
    upper_on_C: float
    upper_on_ratio: float


def binom_coeff_bounds(n: int, k: int, l: int) -> CoeffBounds:
    """(en/k)^k bounding C(n,k) and e^{-lk/n} bounding C(n-l,k)/C(n,k)."""
    if not 1 <= l <= k <= n:
        raise ValueError(f"need 1 <= l <= k <= n, got n={n}, k={k}, l={l}")
    return CoeffBounds(_exp(k * (1.0 + math.log(n / k))), math.exp(-l * k / n))


class TailBounds(NamedTuple):
    tail_upper: float
    point_upper: float


def binom_tail_bounds(n: int, p: float, k: int) -> TailBounds:
    """Upper bounds on Pr(X >= k) and Pr(X = k) for X ~ Bin(n, p)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    log_tail = k * (1.0 + math.log(n * p / k))
    log_point = k * (1.0 + math.log(n * p / (k * (1.0 - p)))) - n * p
    return TailBounds(_exp(log_tail), _exp(log_point))


def chernoff(n: int, p: float, delta: float, variant: int) -> float:
    """Chernoff upper bounds for X ~ Bin(n, p), mu = np.

    variant 1: Pr(X < (1-delta) mu) <= exp(-delta^2 mu / 2), delta > 0
    variant 2: Pr(X > (1+delta) mu) <= exp(-delta^2 mu / 3), 0 < delta < 1
    variant 3: Pr(X > (1+delta) mu) <= exp(-delta mu / 3),   delta > 0
    """
    mu = n * p
    if variant == 1:
        if not delta > 0:
            raise ValueError("variant 1 needs delta > 0")
        return math.exp(-delta * delta * mu / 2.0)
    if variant == 2:
        if not 0 < delta < 1:
            raise ValueError("variant 2 needs 0 < delta < 1")
        return math.exp(-delta * delta * mu / 3.0)
    if variant == 3:
        if not delta > 0:
            raise ValueError("variant 3 needs delta > 0")
        return math.exp(-delta * mu / 3.0)
    raise ValueError(f"unknown Chernoff variant {variant}")


@dataclass(frozen=True)
class ProbabilitySandwich:
    """Bracket [lower, upper] around a probability, clamped to [0, 1]."""

    lower: float
    upper: float
    exact: Optional[float] = None
    log_first_term: float = -math.inf

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    def brackets(self, value: float, tol: float = 1e-12) -> bool:
        return self.lower - tol <= value <= self.upper + tol


def _log_vertex_event(n: int, p: float, threshold: int) -> float:
    """log Pr(d(v) < threshold) for d(v) ~ Bin(n-1, p)."""
    lq = math.log1p(-p)
    if threshold == 1:
        return (n - 1) * lq
    # (1-p)^{n-1} + (n-1) p (1-p)^{n-2}
    return (n - 2) * lq + math.log((1.0 - p) + (n - 1) * p)


def _log_pair_event(n: int, p: float, threshold: int) -> float:
    """log of an upper bound on Pr(A_u and A_v)."""
    lq = math.log1p(-p)
    if threshold == 1:
        # both isolated: 2(n-1) - 1 distinct pairs must be absent
        return (2 * n - 3) * lq
    m = 2 * n - 4
    inner = (1.0 - p) ** 2 + m * p * (1.0 - p) + (m * (m - 1) / 2.0) * p * p
    return (2 * n - 6) * lq + math.log(inner)


def min_degree_prob_sandwich(n: int, p: float, threshold: int = 2) -> ProbabilitySandwich:
    """Union (upper) and Bonferroni (lower) bounds on Pr(min degree < threshold).

    threshold 2 brackets Pr(delta < 2); threshold 1 brackets Pr(delta = 0).
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    if threshold not in (1, 2):
        raise ValueError(f"threshold must be 1 or 2, got {threshold}")
    log_first = math.log(n) + _log_vertex_event(n, p, threshold)
    first = _exp(log_first)
    pairs = _exp(log_comb(n, 2) + _log_pair_event(n, p, threshold))
    return ProbabilitySandwich(
        lower=min(1.0, max(0.0, first - pairs)),
        upper=min(1.0, first),
        log_first_term=log_first,
    )


# -- union-bound predictions for individual properties -----------------------

def max_degree_violation_bound(n: int, p: float, cap: float) -> float:
    """n * Pr(Bin(n-1, p) >= cap) bounded through the (enp/k)^k tail estimate."""
    k = max(1, math.ceil(cap))
    if k > n - 1:
        return 0.0
    return min(1.0, n * binom_tail_bounds(n - 1, p, k).tail_upper)


def no_crossing_edge_bound(n: int, p: float, size: int) -> float:
    """Union bound on two disjoint ``size``-sets with no edge between them."""
    if size < 1 or 2 * size > n:
        return 0.0
    log_b = 2 * log_comb(n, size) + size * size * math.log1p(-p)
    return min(1.0, _exp(log_b))


def independent_set_bound(n: int, p: float, size: int) -> float:
    """Union bound on an independent set of the given size."""
    if size < 2 or size > n:
        return 1.0 if size <= 1 else 0.0
    log_b = log_comb(n, size) + (size * (size - 1) / 2) * math.log1p(-p)
    return min(1.0, _exp(log_b))
