"""Seeded Monte Carlo experiments: probability ratios, hitting times, audits.

Every sample draws its randomness from ``derive_rng(master, kind, n, j, i)``
(j = index of p in the configured list, i = sample index), and results are
aggregated in sample order, so outputs do not depend on ``workers``.
Per-sample logical implications are asserted as they are produced; a
breach raises :class:`InvariantBreach`.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence

from .bounds import (
    chernoff,
    binom_coeff_bounds,
    binom_tail_bounds,
    independent_set_bound,
    max_degree_violation_bound,
    min_degree_prob_sandwich,
    no_crossing_edge_bound,
)
from .graph import (
    Graph,
    build_graph,
    complete_bipartite,
    is_connected,
    min_degree,
    petersen_graph,
)
from .matching import max_matching, solve_pm, verify_perfect_matching
from .oracles import (
    binomial_cdf_exact,
    binomial_tail_exact,
    brute_matching,
    enumerate_boosters,
    enumerate_staples,
    exact_gnp_probability,
    exact_hamiltonicity,
    exact_longest_path,
    naive_hamiltonicity,
    naive_longest_path,
)
from .posa import solve_hamilton, verify_hamilton_cycle
from .properties import check_suite, is_expander
from .random_models import derive_rng, derive_seed, hitting_time, sample_gnp, sample_process
from .skeleton import regime_params

SCHEMA_VERSION = 1
KINDS = ("ratio_ham", "ratio_pm", "hitting", "props_audit", "oracle_check")


class InvariantBreach(RuntimeError):
    """A per-sample logical implication failed (a correctness bug)."""


@dataclass
class ExperimentConfig:
    kind: str
    n: list[int]
    p: Optional[list[float]] = None
    offsets: Optional[list[float]] = None
    samples: int = 100
    seed: int = 0
    workers: int = 1
    out: Optional[str] = None
    mode: str = "auto"
    overrides: dict[str, Any] = field(default_factory=dict)
    check_mode: str = "exact"
    trials: int = 2000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.kind != "hitting" and self.kind != "oracle_check" and not (self.p or self.offsets):
            raise ValueError("give p values or threshold offsets")

    def points(self, n: int) -> list[tuple[Optional[float], float]]:
        """(offset c or None, p) pairs for this n."""
        if self.offsets:
            ln = math.log(n)
            return [(c, min(1.0, max(0.0, (ln + math.log(ln) + c) / n))) for c in self.offsets]
        return [(None, float(p)) for p in (self.p or [])]


def wilson(successes: int, trials: int, alpha: float = 0.05) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    from statsmodels.stats.proportion import proportion_confint

    lo, hi = proportion_confint(successes, trials, alpha=alpha, method="wilson")
    return float(lo), float(hi)


def _pmap(fn: Callable, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.6g}"
    if x is None:
        return ""
    return str(x)


def write_csv(path: Optional[str], kind: str, cfg: ExperimentConfig, rows: list[dict],
              comments: Iterable[str] = ()) -> str:
    """Render rows as CSV with a '#'-comment header; write to ``path`` if given."""
    buf = io.StringIO()
    buf.write(f"# gnpham {kind} schema={SCHEMA_VERSION}\n")
    buf.write(f"# config: {json.dumps(asdict(cfg), sort_keys=True)}\n")
    buf.write(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        cols = list(rows[0])
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in cols])
    text = buf.getvalue()
    if path:
        Path(path).write_text(text)
    return text


def csv_body(text: str) -> str:
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))


# -- ratio experiments -------------------------------------------------------------

@dataclass
class RatioRow:
    n: int
    p: float
    c: Optional[float]
    regime: str
    samples: int
    count_not: int
    count_lowdeg: int
    count_unknown: int
    ratio_point: float
    ratio_wilson_lo: float
    ratio_wilson_hi: float
    sandwich_lower: Optional[float]
    sandwich_upper: Optional[float]
    wall_time: float = 0.0

    def as_row(self, kind: str) -> dict[str, Any]:
        d = asdict(self)
        d.pop("wall_time")
        label = "count_not_ham" if kind == "ratio_ham" else "count_no_pm"
        return {(label if k == "count_not" else k): v for k, v in d.items()}


def _ratio_sample(task) -> tuple[bool, str]:
    kind, n, p, j, i, master, mode, overrides = task
    G = sample_gnp(n, p, derive_rng(master, kind, n, j, i))
    solve_seed = derive_seed(master, kind + ":solve", n, j, i)
    params = regime_params(n, p, overrides) if n >= 3 else None
    if kind == "ratio_ham":
        low = min_degree(G) < 2
        cert = solve_hamilton(G, params, mode=mode, seed=solve_seed) if n >= 3 else None
        verdict = "no" if cert is None or cert.kind == "none" else ("yes" if cert.kind == "cycle" else "unknown")
        if verdict == "yes" and (low or not verify_hamilton_cycle(G, cert.witness)):
            raise InvariantBreach(f"n={n} p={p} sample {i}: cycle certificate with min degree < 2 or invalid")
    else:
        low = min_degree(G) == 0
        cert = solve_pm(G, params, mode=mode, seed=solve_seed)
        verdict = {"perfect": "yes", "none": "no"}.get(cert.kind, "unknown")
        if verdict == "yes" and (low or not verify_perfect_matching(G, cert.matching)):
            raise InvariantBreach(f"n={n} p={p} sample {i}: perfect matching with isolated vertex or invalid")
    if low and verdict == "unknown":
        raise InvariantBreach(f"n={n} p={p} sample {i}: solver undecided on a low-degree sample")
    return low, verdict


def _ratio_bracket(count_not: int, lowdeg: int, unknown: int) -> tuple[float, float, float]:
    """Point ratio and Wilson bracket via the fraction lowdeg / not among non-property samples."""
    if count_not == 0 and unknown == 0:
        return math.nan, math.nan, math.nan
    point = count_not / lowdeg if lowdeg else math.inf
    f_lo, f_hi = wilson(lowdeg, count_not)
    lo = 1.0 / f_hi if f_hi > 0 else math.inf
    g_lo, _ = wilson(lowdeg, count_not + unknown)
    hi = 1.0 / g_lo if g_lo > 0 else math.inf
    return point, lo, hi


def ratio_experiment(cfg: ExperimentConfig) -> tuple[list[RatioRow], str]:
    """Estimate Pr(no property) / Pr(low degree) for every (n, p) point."""
    if cfg.kind not in ("ratio_ham", "ratio_pm"):
        raise ValueError("ratio_experiment needs kind ratio_ham or ratio_pm")
    threshold = 2 if cfg.kind == "ratio_ham" else 1
    rows, comments = [], []
    for n in cfg.n:
        for j, (c, p) in enumerate(cfg.points(n)):
            t0 = time.perf_counter()
            tasks = [(cfg.kind, n, p, j, i, cfg.seed, cfg.mode, cfg.overrides) for i in range(cfg.samples)]
            results = _pmap(_ratio_sample, tasks, cfg.workers)
            low = sum(1 for lo, _ in results if lo)
            no = sum(1 for _, v in results if v == "no")
            unk = sum(1 for _, v in results if v == "unknown")
            if low > no + unk:
                raise InvariantBreach(f"n={n} p={p}: low-degree count {low} exceeds non-property count")
            point, lo, hi = _ratio_bracket(no, low, unk)
            sw_lo = sw_hi = None
            if n >= 3 and 0 < p < 1:
                sw = min_degree_prob_sandwich(n, p, threshold)
                sw_lo, sw_hi = sw.lower, sw.upper
            regime = regime_params(n, p, cfg.overrides).regime if n >= 3 else "degenerate"
            wall = time.perf_counter() - t0
            rows.append(RatioRow(n, p, c, regime, cfg.samples, no, low, unk, point, lo, hi, sw_lo, sw_hi, wall))
            comments.append(f"wall_time n={n} p={p:.6g}: {wall:.3f}s")
    text = write_csv(cfg.out, cfg.kind, cfg, [r.as_row(cfg.kind) for r in rows], comments)
    return rows, text


# -- hitting times -----------------------------------------------------------------

HIT_PROPS = ("D1", "D2", "CONN", "PM", "HAM")


def _hitting_sample(task) -> dict[str, int]:
    n, i, master = task
    order = sample_process(n, derive_rng(master, "hitting", n, i))
    taus = {prop: hitting_time(order, prop) for prop in HIT_PROPS}
    if taus["D2"] > taus["HAM"] or taus["D1"] > taus["PM"] or taus["D1"] > taus["CONN"]:
        raise InvariantBreach(f"n={n} ordering {i}: hitting-time order violated {taus}")
    return taus


@dataclass
class HittingSummary:
    n: int
    samples: int
    eq_d2_ham: int
    eq_d2_ham_lo: float
    eq_d2_ham_hi: float
    eq_d1_pm: int
    eq_d1_pm_lo: float
    eq_d1_pm_hi: float


def hitting_experiment(cfg: ExperimentConfig) -> tuple[list[dict], list[HittingSummary], str]:
    """Sample random graph processes and record hitting times of D1, D2, CONN, PM, HAM."""
    rows, summaries, comments = [], [], []
    for n in cfg.n:
        t0 = time.perf_counter()
        results = _pmap(_hitting_sample, [(n, i, cfg.seed) for i in range(cfg.samples)], cfg.workers)
        for i, taus in enumerate(results):
            rows.append({"n": n, "sample": i, **{f"tau_{k}": v for k, v in taus.items()}})
        e1 = sum(1 for t in results if t["D2"] == t["HAM"])
        e2 = sum(1 for t in results if t["D1"] == t["PM"])
        summaries.append(HittingSummary(n, cfg.samples, e1, *wilson(e1, cfg.samples), e2, *wilson(e2, cfg.samples)))
        comments.append(f"wall_time n={n}: {time.perf_counter() - t0:.3f}s")
    for s in summaries:
        comments.append("summary " + json.dumps(asdict(s)))
    text = write_csv(cfg.out, "hitting", cfg, rows, comments)
    return rows, summaries, text


# -- property audit ----------------------------------------------------------------

def _audit_sample(task) -> list[tuple[str, str]]:
    n, p, j, i, master, check_mode, trials, overrides = task
    G = sample_gnp(n, p, derive_rng(master, "props", n, j, i))
    params = regime_params(n, p, overrides)
    reps = check_suite(G, params, mode=check_mode, trials=trials, seed=derive_seed(master, "props:check", n, j, i))
    return [(r.label, r.verdict) for r in reps]


def _predicted(label: str, n: int, p: float, params) -> tuple[Optional[float], Optional[float], Optional[float]]:
    """(lower, upper, exact) predictions for a property's violation probability, when known."""
    exact = None
    if label in ("P0", "Q0", "R0"):
        if n <= 6:
            exact = exact_gnp_probability(n, p, _low_degree_2)
        if 0 < p < 1:
            sw = min_degree_prob_sandwich(n, p, 2)
            return sw.lower, sw.upper, exact
        return None, None, exact
    if not 0 < p < 1:
        return None, None, None
    if label == "P1":
        return 0.0, max_degree_violation_bound(n, p, params.max_degree_cap), None
    if label == "Q1":
        return 0.0, min(1.0, n * chernoff(n - 1, p, 6.0, 3)), None
    if label == "R2":
        return 0.0, no_crossing_edge_bound(n, p, math.floor(params.vdense_cut_size)), None
    if label == "R3":
        return 0.0, independent_set_bound(n, p, math.floor(params.vdense_alpha_cap) + 1), None
    return None, None, None


def _low_degree_2(G: Graph) -> bool:
    return min_degree(G) < 2


def _low_degree_1(G: Graph) -> bool:
    return min_degree(G) < 1


def props_audit(cfg: ExperimentConfig) -> tuple[list[dict], str]:
    rows = []
    for n in cfg.n:
        for j, (c, p) in enumerate(cfg.points(n)):
            params = regime_params(n, p, cfg.overrides)
            tasks = [(n, p, j, i, cfg.seed, cfg.check_mode, cfg.trials, cfg.overrides) for i in range(cfg.samples)]
            results = _pmap(_audit_sample, tasks, cfg.workers)
            labels = [lab for lab, _ in results[0]]
            for idx, lab in enumerate(labels):
                viol = sum(1 for r in results if r[idx][1] == "violated")
                unk = sum(1 for r in results if r[idx][1] == "unknown")
                lo, hi = wilson(viol, cfg.samples)
                pl, pu, ex = _predicted(lab, n, p, params)
                rows.append({
                    "n": n, "p": p, "c": c, "regime": params.regime, "label": lab,
                    "samples": cfg.samples, "violations": viol, "unknown": unk,
                    "freq": viol / cfg.samples, "wilson_lo": lo, "wilson_hi": hi,
                    "pred_lower": pl, "pred_upper": pu, "exact": ex,
                })
    return rows, write_csv(cfg.out, "props_audit", cfg, rows)


# -- lemma corpora -----------------------------------------------------------------

def _random_bipartite(a: int, b: int, q: float, rng) -> Graph:
    edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < q]
    return build_graph(a + b, edges)


def _tough_obstruction(s: int, parts: Sequence[int], q: float, rng) -> Graph:
    """Separator of size s whose removal leaves len(parts) cliques."""
    n = s + sum(parts)
    edges = [(i, j) for i in range(s) for j in range(i + 1, s) if rng.random() < q]
    start = s
    for size in parts:
        block = list(range(start, start + size))
        edges += [(u, v) for x, u in enumerate(block) for v in block[x + 1:]]
        edges += [(i, u) for i in range(s) for u in block if rng.random() < q]
        start += size
    return build_graph(n, edges)


def candidate_graphs(seed: int, count: int, n_max: int = 12, even_only: bool = False) -> Iterable[Graph]:
    """Small graphs biased toward non-Hamiltonian / matching-deficient expanders."""
    fixed = [petersen_graph()] + [complete_bipartite(a, b) for a in range(2, 7) for b in (a + 1, a + 2) if a + b <= n_max]
    for G in fixed:
        if not (even_only and G.n % 2):
            yield G
    rng = derive_rng(seed, "corpus")
    for t in range(count):
        choice = t % 4
        if choice == 0:
            n = int(rng.integers(6, n_max + 1))
            G = sample_gnp(n, float(rng.uniform(0.25, 0.7)), rng)
        elif choice == 1:
            a = int(rng.integers(2, (n_max - 1) // 2 + 1))
            b = a + int(rng.integers(1, 3))
            if a + b > n_max:
                b = n_max - a
            G = _random_bipartite(a, b, float(rng.uniform(0.6, 1.0)), rng)
        elif choice == 2:
            s = int(rng.integers(1, 4))
            k = s + 1 + int(rng.integers(0, 2))
            parts = [int(rng.integers(1, 4)) for _ in range(k)]
            if s + sum(parts) > n_max:
                continue
            G = _tough_obstruction(s, parts, float(rng.uniform(0.5, 1.0)), rng)
        else:
            # Petersen-like: a 3-regular-ish random graph plus a few chords
            n = int(rng.integers(8, n_max + 1))
            G = sample_gnp(n, 3.5 / (n - 1), rng)
        if even_only and G.n % 2:
            continue
        yield G


def posa_corpus(k: int, seed: int = 0, count: int = 4000, n_max: int = 12, limit: int = 60) -> list[Graph]:
    """Connected, non-Hamiltonian, exactly verified (k,2)-expanders."""
    out, seen = [], set()
    for G in candidate_graphs(seed, count, n_max):
        if G in seen or G.n < 3 or min_degree(G) < 2 or not is_connected(G):
            continue
        seen.add(G)
        if exact_hamiltonicity(G)[0]:
            continue
        if is_expander(G, k, 2, "exact").verdict == "holds":
            out.append(G)
            if len(out) >= limit:
                break
    return out


def staple_corpus(k: int, seed: int = 0, count: int = 4000, n_max: int = 12, limit: int = 60) -> list[Graph]:
    """Even-order graphs without a perfect matching that are exact (k,1)-expanders."""
    out, seen = [], set()
    for G in candidate_graphs(seed + 1, count, n_max, even_only=True):
        if G in seen or min_degree(G) < 1:
            continue
        seen.add(G)
        if 2 * brute_matching(G) == G.n:
            continue
        if is_expander(G, k, 1, "exact").verdict == "holds":
            out.append(G)
            if len(out) >= limit:
                break
    return out


@dataclass
class CheckResult:
    name: str
    checked: int
    breaches: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.breaches == 0


def oracle_check(cfg: Optional[ExperimentConfig] = None, samples: int = 200, seed: int = 0) -> list[CheckResult]:
    """Cross-oracle agreement and lemma-bound verification on small instances."""
    if cfg is not None:
        samples, seed = cfg.samples, cfg.seed
    results = []

    def rand_graph(tag: str, i: int, lo: int, hi: int) -> Graph:
        rng = derive_rng(seed, tag, i)
        n = int(rng.integers(lo, hi + 1))
        return sample_gnp(n, float(rng.uniform(0.1, 0.6)), rng)

    bad = sum(max_matching(G).size != brute_matching(G) for G in (rand_graph("om", i, 2, 12) for i in range(samples)))
    results.append(CheckResult("max_matching == brute_matching", samples, bad))

    bad = 0
    for i in range(samples):
        G = rand_graph("olp", i, 1, 9)
        L, w = exact_longest_path(G)
        bad += L != naive_longest_path(G) or len(w) != L
    results.append(CheckResult("DP longest path == DFS search", samples, bad))

    bad = 0
    for i in range(samples):
        G = rand_graph("oham", i, 3, 8)
        bad += exact_hamiltonicity(G)[0] != naive_hamiltonicity(G)
    results.append(CheckResult("DP Hamiltonicity == permutation search", samples, bad))

    bad = 0
    for i in range(samples):
        G = rand_graph("osolve", i, 6, 14)
        c = solve_hamilton(G, seed=i)
        bad += (c.kind == "cycle") != exact_hamiltonicity(G)[0]
    results.append(CheckResult("solve_hamilton(auto) == exact", samples, bad))

    for k in (2, 3):
        corpus = posa_corpus(k, seed, limit=20)
        bad = sum(len(enumerate_boosters(G)) < math.ceil((k + 1) ** 2 / 2) for G in corpus)
        results.append(CheckResult(f"booster count >= (k+1)^2/2, k={k}", len(corpus), bad))
        corpus = staple_corpus(k, seed, limit=20)
        bad = sum(len(enumerate_staples(G)) < math.comb(k + 1, 2) for G in corpus)
        results.append(CheckResult(f"staple count >= C(k+1,2), k={k}", len(corpus), bad))

    bad = checked = 0
    for n in range(3, 6):
        for p in (0.2, 0.5, 0.8):
            for thr, pred in ((2, _low_degree_2), (1, _low_degree_1)):
                checked += 1
                bad += not min_degree_prob_sandwich(n, p, thr).brackets(exact_gnp_probability(n, p, pred))
    results.append(CheckResult("min-degree sandwich brackets exact", checked, bad))

    checked, bad = tail_bound_grid()
    results.append(CheckResult("tail bounds dominate exact values", checked, bad))
    return results


def _count_below(x: float) -> int:
    """Largest integer strictly below x (robust to float noise at integers)."""
    r = round(x)
    return r - 1 if abs(x - r) < 1e-9 else math.floor(x)


def _count_above(x: float) -> int:
    r = round(x)
    return r + 1 if abs(x - r) < 1e-9 else math.floor(x) + 1


def tail_bound_grid(n_max: int = 30, ps=(0.1, 0.3, 0.5, 0.9), deltas=(0.1, 0.5, 1.0)) -> tuple[int, int]:
    """(checks, violations) of every bound against exact values over the grid."""
    checked = bad = 0
    tol = 1e-12
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            for l in range(1, k + 1):
                cb = binom_coeff_bounds(n, k, l)
                checked += 2
                bad += math.comb(n, k) > cb.upper_on_C * (1 + tol)
                bad += math.comb(n - l, k) / math.comb(n, k) > cb.upper_on_ratio * (1 + tol)
        for p in ps:
            mu = n * p
            for k in range(1, n + 1):
                tb = binom_tail_bounds(n, p, k)
                checked += 2
                bad += binomial_tail_exact(n, p, k) > tb.tail_upper * (1 + tol)
                bad += binomial_tail_exact(n, p, k) - binomial_tail_exact(n, p, k + 1) > tb.point_upper * (1 + tol) + tol
            for d in deltas:
                below = binomial_cdf_exact(n, p, _count_below((1 - d) * mu))
                above = binomial_tail_exact(n, p, _count_above((1 + d) * mu))
                checked += 2
                bad += below > chernoff(n, p, d, 1) * (1 + tol)
                bad += above > chernoff(n, p, d, 3) * (1 + tol)
                if d < 1:
                    checked += 1
                    bad += above > chernoff(n, p, d, 2) * (1 + tol)
    return checked, bad
