"""Trend of Pr(not Hamiltonian) / Pr(min degree < 2) near the threshold.

Non-gating: prints one row per (n, c) so the approach of the ratio towards 1
can be eyeballed as n grows.
"""

import argparse

from gnpham.experiments import ExperimentConfig, ratio_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[16, 20, 24])
    ap.add_argument("--offsets", type=float, nargs="+", default=[-1.0, 0.0, 1.0, 2.0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--property", choices=["ham", "pm"], default="ham")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = ExperimentConfig(f"ratio_{args.property}", args.n, offsets=args.offsets,
                           samples=args.samples, seed=args.seed, workers=args.workers, out=args.out)
    rows, _ = ratio_experiment(cfg)
    print(f"{'n':>4} {'c':>6} {'p':>8} {'not':>5} {'low':>5} {'unk':>4}  ratio  [wilson]")
    for r in rows:
        print(f"{r.n:>4} {r.c:>6.2f} {r.p:>8.4f} {r.count_not:>5} {r.count_lowdeg:>5} {r.count_unknown:>4}"
              f"  {r.ratio_point:.3f} [{r.ratio_wilson_lo:.3f}, {r.ratio_wilson_hi:.3f}]")


if __name__ == "__main__":
    main()
