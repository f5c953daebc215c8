"""Command line entry point: ``gnpham <subcommand> ...``.

Exit codes: 0 ok, 2 invariant breach, 3 budget exhausted / unknown-only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from .experiments import (
    ExperimentConfig,
    InvariantBreach,
    hitting_experiment,
    oracle_check,
    props_audit,
    ratio_experiment,
)
from .graph import Graph, format_edge_list, read_edge_list
from .matching import solve_pm
from .posa import solve_hamilton
from .properties import check_suite
from .random_models import derive_rng, derive_seed, sample_gnp
from .skeleton import params_for_graph, regime_params

EXIT_OK, EXIT_BREACH, EXIT_UNKNOWN = 0, 2, 3


def _threshold_p(n: int, c: float) -> float:
    ln = math.log(n)
    return min(1.0, max(0.0, (ln + math.log(ln) + c) / n))


def _overrides(args) -> dict:
    ov = {}
    for item in getattr(args, "override", None) or []:
        key, _, val = item.partition("=")
        if key in ("mode", "regime"):
            ov[key] = val
        elif key in ("skeleton_out_degree", "exact_limit"):
            ov[key] = int(val)
        else:
            ov[key] = float(val)
    return ov


def _common(sp: argparse.ArgumentParser, many: bool = False) -> None:
    nargs = "+" if many else None
    sp.add_argument("--n", type=int, nargs=nargs, required=many)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--p", type=float, nargs=nargs)
    g.add_argument("--offset-c", type=float, nargs=nargs, dest="offset_c")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--override", action="append", metavar="KEY=VALUE",
                    help="regime override (mode, regime, omega_min, skeleton_out_degree, small_threshold, exact_limit)")


def _input_graph(args) -> Graph:
    if getattr(args, "graph", None):
        return read_edge_list(args.graph)
    if args.n is None or (args.p is None and args.offset_c is None):
        raise SystemExit("give --graph, or --n with --p / --offset-c")
    p = args.p if args.p is not None else _threshold_p(args.n, args.offset_c)
    return sample_gnp(args.n, p, derive_rng(args.seed, "cli-sample"))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(G: Graph, args):
    if G.n < 3:
        return None
    ov = _overrides(args)
    if getattr(args, "p", None) is not None and not getattr(args, "graph", None):
        return regime_params(G.n, args.p, ov)
    return params_for_graph(G, ov)


def cmd_sample(args) -> int:
    G = _input_graph(args)
    _emit(args, format_edge_list(G, [f"seed {args.seed}"]))
    return EXIT_OK


def cmd_solve(args) -> int:
    G = _input_graph(args)
    cert = solve_hamilton(G, _params(G, args), mode=args.mode, seed=derive_seed(args.seed, "cli-solve"))
    _emit(args, json.dumps(cert.to_json(), indent=2) + "\n")
    return EXIT_UNKNOWN if cert.kind == "unknown" else EXIT_OK


def cmd_pm(args) -> int:
    G = _input_graph(args)
    cert = solve_pm(G, _params(G, args), mode=args.mode, seed=derive_seed(args.seed, "cli-pm"),
                    via_hamilton_path=args.via_hamilton_path)
    _emit(args, json.dumps(cert.to_json(), indent=2) + "\n")
    return EXIT_UNKNOWN if cert.kind == "unknown" else EXIT_OK


def cmd_props(args) -> int:
    if args.graph:
        G = read_edge_list(args.graph)
        reps = check_suite(G, params_for_graph(G, _overrides(args)), mode=args.check_mode,
                           trials=args.trials, seed=args.seed)
        _emit(args, json.dumps([r.to_json() for r in reps], indent=2) + "\n")
        return EXIT_UNKNOWN if all(r.verdict == "unknown" for r in reps) else EXIT_OK
    cfg = _config(args, "props_audit")
    rows, text = props_audit(cfg)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def _config(args, kind: str) -> ExperimentConfig:
    return ExperimentConfig(
        kind=kind,
        n=list(args.n),
        p=getattr(args, "p", None),
        offsets=getattr(args, "offset_c", None),
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        mode=getattr(args, "mode", "auto"),
        overrides=_overrides(args),
        check_mode=getattr(args, "check_mode", "exact"),
        trials=getattr(args, "trials", 2000),
    )


def cmd_ratio(args) -> int:
    if args.p is None and args.offset_c is None:
        raise SystemExit("ratio needs --p or --offset-c")
    cfg = _config(args, "ratio_ham" if args.property == "ham" else "ratio_pm")
    rows, text = ratio_experiment(cfg)
    if not args.out:
        sys.stdout.write(text)
    if all(r.count_unknown == r.samples for r in rows):
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_hitting(args) -> int:
    cfg = _config(args, "hitting")
    rows, summaries, text = hitting_experiment(cfg)
    if not args.out:
        sys.stdout.write(text)
    else:
        for s in summaries:
            print(json.dumps(s.__dict__))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    results = oracle_check(samples=args.samples, seed=args.seed)
    report = [{"name": r.name, "checked": r.checked, "breaches": r.breaches, "ok": r.ok} for r in results]
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.checked} checked, {r.breaches} breaches)")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    return EXIT_OK if all(r.ok for r in results) else EXIT_BREACH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gnpham", description="Hamiltonicity and perfect matchings in G(n,p)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample G(n,p) and write an edge list")
    _common(sp)
    sp.set_defaults(func=cmd_sample)

    for name, fn, helptext in (("solve", cmd_solve, "Hamilton cycle with certificate"),
                               ("pm", cmd_pm, "perfect matching with certificate")):
        sp = sub.add_parser(name, help=helptext)
        _common(sp)
        sp.add_argument("--graph", help="edge-list file (otherwise sample from --n/--p)")
        sp.add_argument("--mode", choices=("auto", "pipeline", "exact"), default="auto")
        if name == "pm":
            sp.add_argument("--via-hamilton-path", action="store_true")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("props", help="property suite on a graph, or an audit over samples")
    sp.add_argument("--graph")
    sp.add_argument("--n", type=int, nargs="+")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--p", type=float, nargs="+")
    g.add_argument("--offset-c", type=float, nargs="+", dest="offset_c")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--mode", dest="check_mode", choices=("exact", "randomized"), default="exact")
    sp.add_argument("--trials", type=int, default=2000)
    sp.add_argument("--out")
    sp.add_argument("--override", action="append", metavar="KEY=VALUE")
    sp.set_defaults(func=cmd_props)

    sp = sub.add_parser("ratio", help="Pr(no property) / Pr(low degree) experiment")
    _common(sp, many=True)
    sp.add_argument("--property", choices=("ham", "pm"), default="ham")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--mode", choices=("auto", "pipeline", "exact"), default="auto")
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("hitting", help="hitting times along random graph processes")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hitting)

    sp = sub.add_parser("oracle-check", help="cross-oracle agreement and lemma-bound checks")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
