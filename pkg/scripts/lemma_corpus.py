"""Booster and staple counts on small non-Hamiltonian / non-matchable expanders.

Reports corpus sizes and the minimum count seen against the required lower bound.
"""

import argparse
import math

from gnpham.experiments import posa_corpus, staple_corpus
from gnpham.oracles import enumerate_boosters, enumerate_staples


def summarize(name, corpus, count, need):
    counts = [len(count(G)) for G in corpus]
    lo = min(counts) if counts else None
    print(f"{name:<8} graphs={len(corpus):>4} min_count={lo} required={need}"
          f" below={sum(c < need for c in counts)}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--count", type=int, default=6000)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--limit", type=int, default=80)
    args = ap.parse_args()

    for k in (2, 3):
        corpus = posa_corpus(k, args.seed, args.count, args.n_max, args.limit)
        summarize(f"posa k={k}", corpus, enumerate_boosters, math.ceil((k + 1) ** 2 / 2))
        corpus = staple_corpus(k, args.seed, args.count, args.n_max, args.limit)
        summarize(f"staple k={k}", corpus, enumerate_staples, math.comb(k + 1, 2))


if __name__ == "__main__":
    main()
