"""Command-line entry point: bench, verify, lemma, smoothness."""
from __future__ import annotations

import argparse
import hashlib
import math
import sys

import numpy as np

from . import bench as B
from .core import SmoothParams
from .dist_lab import KINDS, make_distribution, occupancy_experiment, smoothness_estimate

DIST_CHOICES = list(KINDS)
LEMMA_FIELDS = ["run_id", "seed", "dist", "n", "k", "mean", "max", "p99"]


def _params(args, d):
    if args.unknown_params:
        return None
    if args.alpha is not None or args.delta is not None:
        if args.alpha is None or args.delta is None:
            raise ValueError("--alpha and --delta must be given together")
        return SmoothParams(args.alpha, args.delta)
    return d.declared_params


def cmd_bench(args) -> int:
    d = make_distribution(args.dist)
    params = _params(args, d)
    mix = B.parse_mix(args.mix)
    qd = make_distribution("uniform") if args.query_dist == "uniform" else None
    seq = []
    if args.prefill:
        seq += B.gen_workload(d, args.prefill, (100, 0, 0), [args.seed, 1], args.bits)
    seq += B.gen_workload(d, args.n_ops, mix, args.seed, args.bits, query_dist=qd)
    warmup = args.prefill / len(seq) if args.prefill else args.warmup
    cfg = B.BenchConfig(dist=args.dist, n_ops=len(seq), mix=mix, seed=args.seed, bits=args.bits,
                        params=params, cluster_cap=args.cluster_cap, warmup=warmup)
    report = B.run_bench(seq, cfg, out=args.out)
    row = report.row()
    print(", ".join(f"{k}={row[k]}" for k in B.CSV_FIELDS))
    if report.depth_violations:
        print(f"depth bound violated on {report.depth_violations} ops", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    ok = True
    if args.universe_bits <= 12:
        v = B.exhaustive_equivalence(args.universe_bits, args.length)
        print(f"exhaustive w={args.universe_bits} length={args.length}: {v}")
        ok &= v.passed
    for kind, seed, v in B.randomized_equivalence(args.ops, range(args.seeds), args.random_bits):
        print(f"random w={args.random_bits} dist={kind} seed={seed}: {v}")
        ok &= v.passed
    return 0 if ok else 1


def cmd_lemma(args) -> int:
    d = make_distribution(args.dist)
    rows = []
    worst = {}
    for n in args.n:
        if args.k is not None:
            k = args.k
        elif d.declared_params is not None:
            k = math.ceil(n ** d.declared_params.ratio - 1e-9)
        else:
            k = n
        lemma_mode = d.declared_params is not None
        for seed in range(args.seeds):
            rep = occupancy_experiment(d, n, k, np.random.default_rng(seed), lemma_mode=lemma_mode)
            rid = hashlib.sha1(f"lemma|{args.dist}|{n}|{k}|{seed}".encode()).hexdigest()[:12]
            rows.append(dict(run_id=rid, seed=seed, dist=args.dist, n=n, k=k,
                             mean=rep.mean, max=rep.max, p99=rep.p99))
            w = worst.setdefault(n, [k, rep.mean, 0, 0])
            w[2] = max(w[2], rep.max)
            w[3] = max(w[3], rep.p99)
    for n, (k, mean, mx, p99) in worst.items():
        print(f"dist={args.dist} n={n} k={k} mean={mean:g} worst_max={mx} worst_p99={p99}")
    if args.out:
        B.append_csv(args.out, rows, LEMMA_FIELDS)
    return 0


def cmd_smoothness(args) -> int:
    d = make_distribution(args.dist)
    beta = smoothness_estimate(d, args.alpha, args.delta, args.trials,
                               np.random.default_rng(args.seed), samples=args.samples)
    print(f"dist={args.dist} alpha={args.alpha} delta={args.delta} beta_hat={beta:.4f}")
    return 0


def _int_list(text: str) -> list[int]:
    return [eval_pow(part.strip()) for part in text.split(",")]


def eval_pow(text: str) -> int:
    # accepts plain integers and powers like 2^16 / 2**16
    if "^" in text or "**" in text:
        base, exp = text.replace("**", "^").split("^")
        return int(base) ** int(exp)
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smoothpred", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="time a generated workload and append a CSV row")
    p.add_argument("--dist", choices=DIST_CHOICES, default="uniform")
    p.add_argument("--n-ops", type=eval_pow, default=100_000)
    p.add_argument("--mix", default="50,25,25", help="insert,delete,query percentages")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits", type=int, default=64)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--unknown-params", action="store_true",
                   help="split log2(n)^2 bits instead of (alpha/delta) log2 n")
    g.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--cluster-cap", type=int)
    p.add_argument("--prefill", type=eval_pow, default=0,
                   help="untimed inserts before the measured workload")
    p.add_argument("--warmup", type=float, default=0.0)
    p.add_argument("--query-dist", choices=["same", "uniform"], default="same")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="lockstep equivalence against the sorted-list oracle")
    p.add_argument("--universe-bits", type=int, default=8)
    p.add_argument("--ops", type=eval_pow, default=100_000)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--random-bits", type=int, default=64)
    p.add_argument("--length", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemma", help="interval occupancy experiment")
    p.add_argument("--dist", choices=DIST_CHOICES, default="uniform")
    p.add_argument("--n", type=_int_list, default=[1 << 16])
    p.add_argument("--k", type=eval_pow)
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("smoothness", help="Monte Carlo lower bound on the smoothness constant")
    p.add_argument("--dist", choices=DIST_CHOICES, default="uniform")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--samples", type=eval_pow, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_smoothness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
