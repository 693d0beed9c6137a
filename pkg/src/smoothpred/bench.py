"""Workloads, the sorted-list oracle, lockstep equivalence checking and benchmarking."""
from __future__ import annotations

import csv
import hashlib
import itertools
import os
import time
import warnings
from bisect import bisect_left, bisect_right
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .core import SmoothParams, depth_bound
from .dist_lab import Distribution, make_distribution, sample_keys
from .layered import LayeredSet

INSERT = "insert"
DELETE_RANDOM = "delete_random"
PRED = "pred"
# explicit-key kinds, used by the exhaustive small-universe check
DELETE = "delete"
SUCC = "succ"

CSV_FIELDS = [
    "run_id", "seed", "dist", "n_ops", "mix", "bits", "alpha", "delta", "p_final",
    "n_final", "rebuilds", "p50_ns", "p99_ns", "max_ns", "mean_levels", "max_levels",
    "mean_bucket", "max_bucket", "p99_bucket", "entries_per_key",
]
TIMING_FIELDS = ("p50_ns", "p99_ns", "max_ns")


class WorkloadOp(NamedTuple):
    kind: str
    key: Optional[int] = None
    # DELETE_RANDOM only: victim = live[floor(u * len(live))] at execution time
    u: float = 0.0


class Oracle:
    """Sorted list; the ground truth every other structure is compared to."""

    def __init__(self, keys: Iterable[int] = ()):
        self.keys = sorted(set(keys))

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __contains__(self, key):
        i = bisect_left(self.keys, key)
        return i < len(self.keys) and self.keys[i] == key

    def insert(self, key: int) -> bool:
        i = bisect_left(self.keys, key)
        if i < len(self.keys) and self.keys[i] == key:
            return False
        self.keys.insert(i, key)
        return True

    def delete(self, key: int) -> bool:
        i = bisect_left(self.keys, key)
        if i == len(self.keys) or self.keys[i] != key:
            return False
        del self.keys[i]
        return True

    def predecessor(self, x: int) -> Optional[int]:
        i = bisect_left(self.keys, x)
        return self.keys[i - 1] if i else None

    def successor(self, x: int) -> Optional[int]:
        i = bisect_right(self.keys, x)
        return self.keys[i] if i < len(self.keys) else None

    def pick(self, u: float) -> Optional[int]:
        if not self.keys:
            return None
        return self.keys[int(u * len(self.keys))]


@dataclass
class StructConfig:
    w: int = 64
    params: Optional[SmoothParams] = None
    cluster_cap: Optional[int] = None

    def make(self) -> LayeredSet:
        return LayeredSet(self.w, self.params, self.cluster_cap)


def parse_mix(mix) -> tuple[int, int, int]:
    if isinstance(mix, str):
        mix = [int(v) for v in mix.replace("/", ",").split(",")]
    mix = tuple(int(v) for v in mix)
    if len(mix) != 3 or any(v < 0 for v in mix) or sum(mix) != 100:
        raise ValueError(f"mix must be three non-negative percentages summing to 100, got {mix}")
    return mix


def gen_workload(d: Distribution, n_ops: int, mix, seed: int, w: int = 64,
                 query_dist: Optional[Distribution] = None) -> list[WorkloadOp]:
    """Independent, intermixed operations: inserts drawn from ``d``, deletes uniform over the live set."""
    if n_ops < 1:
        raise ValueError("workload must contain at least one operation")
    ins, dele, _ = mix = parse_mix(mix)
    if dele > ins:
        warnings.warn(f"delete share {dele}% exceeds insert share {ins}%; the set will stay near empty")
    rng = np.random.default_rng(seed)
    kinds = rng.choice(3, size=n_ops, p=np.array(mix) / 100.0)
    n_ins = int((kinds == 0).sum())
    n_del = int((kinds == 1).sum())
    inserts = iter(sample_keys(d, rng, w, n_ins))
    victims = iter(rng.random(n_del).tolist())
    queries = iter(sample_keys(query_dist or d, rng, w, n_ops - n_ins - n_del))
    ops = []
    for k in kinds.tolist():
        if k == 0:
            ops.append(WorkloadOp(INSERT, next(inserts)))
        elif k == 1:
            ops.append(WorkloadOp(DELETE_RANDOM, u=next(victims)))
        else:
            ops.append(WorkloadOp(PRED, next(queries)))
    return ops


@dataclass
class Verdict:
    passed: bool
    index: Optional[int] = None
    op: Optional[WorkloadOp] = None
    expected: object = None
    got: object = None
    ops_checked: int = 0

    def __str__(self):
        if self.passed:
            return f"pass ({self.ops_checked} ops)"
        return (f"divergence at op {self.index} {self.op}: "
                f"expected {self.expected!r}, got {self.got!r}")


def _step(s, oracle: Oracle, op: WorkloadOp):
    kind = op.kind
    if kind == INSERT:
        return oracle.insert(op.key), s.insert(op.key)
    if kind == DELETE_RANDOM:
        victim = oracle.pick(op.u)
        if victim is None:
            return False, len(s) != 0
        return oracle.delete(victim), s.delete(victim)
    if kind == DELETE:
        return oracle.delete(op.key), s.delete(op.key)
    if kind == PRED:
        x = op.key
        return ((oracle.predecessor(x), oracle.successor(x)),
                (s.predecessor(x), s.successor(x)))
    if kind == SUCC:
        return oracle.successor(op.key), s.successor(op.key)
    raise ValueError(f"unknown op kind {kind!r}")


def run_equivalence(seq: Sequence[WorkloadOp], config: StructConfig = None,
                    factory: Optional[Callable[[], object]] = None,
                    check_every: int = 0) -> Verdict:
    """Replay ``seq`` on a fresh structure and the oracle in lockstep.

    Query ops compare both predecessor and successor. With ``check_every``,
    full membership is also compared every that many ops and at the end.
    """
    s = factory() if factory is not None else (config or StructConfig()).make()
    oracle = Oracle()
    for i, op in enumerate(seq):
        expected, got = _step(s, oracle, op)
        if expected != got:
            return Verdict(False, i, op, expected, got, i)
        if check_every and (i + 1) % check_every == 0 and list(s) != oracle.keys:
            return Verdict(False, i, op, "membership", "membership differs", i)
    if len(s) != len(oracle) or list(s) != oracle.keys:
        return Verdict(False, len(seq), None, oracle.keys[:16], list(s)[:16], len(seq))
    return Verdict(True, ops_checked=len(seq))


def key_pool(w: int, size: int = 16) -> list[int]:
    """Keys hugging the edges of the halves and quarters of a ``w``-bit universe."""
    top = 1 << w
    q = top >> 2
    cands = [0, 1, 2, 3, q - 1, q, q + 1, 2 * q - 1, 2 * q, 2 * q + 1, 3 * q - 1, 3 * q,
             3 * q + 1, top - 3, top - 2, top - 1]
    pool = sorted({c for c in cands if 0 <= c < top})
    return pool[:size]


def exhaustive_equivalence(w: int = 8, length: int = 3, pool: Optional[list[int]] = None,
                           configs: Optional[list[StructConfig]] = None,
                           factory_for: Optional[Callable[[StructConfig], Callable]] = None) -> Verdict:
    """Every op sequence of ``length`` over insert/delete/pred/succ on a key pool."""
    pool = pool if pool is not None else key_pool(w)
    configs = configs or [StructConfig(w, None), StructConfig(w, SmoothParams(1.0, 1.0))]
    alphabet = [WorkloadOp(kind, k) for kind in (INSERT, DELETE, PRED, SUCC) for k in pool]
    checked = 0
    for cfg in configs:
        factory = factory_for(cfg) if factory_for else cfg.make
        for seq in itertools.product(alphabet, repeat=length):
            v = run_equivalence(seq, factory=factory)
            if not v.passed:
                return v
            checked += 1
    return Verdict(True, ops_checked=checked * length)


def randomized_equivalence(n_ops: int, seeds: Iterable[int], w: int = 64,
                           kinds: Sequence[str] = ("uniform", "ramp", "normal", "atoms"),
                           mix=(50, 25, 25)) -> list[tuple[str, int, Verdict]]:
    results = []
    for kind in kinds:
        d = make_distribution(kind)
        cfg = StructConfig(w, d.declared_params)
        for seed in seeds:
            seq = gen_workload(d, n_ops, mix, seed, w)
            results.append((kind, seed, run_equivalence(seq, cfg, check_every=max(1, n_ops // 8))))
    return results


@dataclass
class BenchConfig:
    dist: str = "uniform"
    n_ops: int = 100_000
    mix: tuple = (50, 25, 25)
    seed: int = 0
    bits: int = 64
    params: Optional[SmoothParams] = None
    cluster_cap: Optional[int] = None
    warmup: float = 0.0
    batch: int = 1024

    def run_id(self) -> str:
        echo = f"{self.seed}|{self.dist}|{self.n_ops}|{self.mix}|{self.bits}|{self.params}|{self.cluster_cap}|{self.warmup}"
        return hashlib.sha1(echo.encode()).hexdigest()[:12]


@dataclass
class RunReport:
    run_id: str
    seed: int
    dist: str
    n_ops: int
    mix: str
    bits: int
    alpha: Optional[float]
    delta: Optional[float]
    counts: dict = field(default_factory=dict)
    p_final: int = 0
    n_final: int = 0
    rebuilds: int = 0
    p50_ns: float = 0.0
    p99_ns: float = 0.0
    max_ns: float = 0.0
    mean_levels: float = 0.0
    max_levels: int = 0
    mean_bucket: float = 0.0
    max_bucket: int = 0
    p99_bucket: int = 0
    entries_per_key: float = 0.0
    depth_violations: int = 0

    def row(self) -> dict:
        data = asdict(self)
        return {k: ("" if data[k] is None else data[k]) for k in CSV_FIELDS}


def run_bench(seq: Sequence[WorkloadOp], config: BenchConfig, out: Optional[str] = None) -> RunReport:
    """Time ``seq`` on a fresh structure.

    The first ``config.warmup`` fraction of ops runs untimed and is excluded
    from the level statistics. Latency is measured per batch of
    ``config.batch`` ops with a monotonic clock and reported per op. The
    trie depth bound is checked after every op, warmup included.
    """
    params = config.params
    report = RunReport(
        run_id=config.run_id(), seed=config.seed, dist=config.dist, n_ops=len(seq),
        mix="/".join(str(v) for v in config.mix), bits=config.bits,
        alpha=params.alpha if params else None, delta=params.delta if params else None,
    )
    s = LayeredSet(config.bits, params, config.cluster_cap)
    live: list[int] = []
    where: dict[int, int] = {}
    counts = dict.fromkeys((INSERT, DELETE_RANDOM, PRED), 0)
    violations = 0

    def execute(op):
        nonlocal violations
        kind = op.kind
        if kind == INSERT:
            if s.insert(op.key):
                where[op.key] = len(live)
                live.append(op.key)
        elif kind == DELETE_RANDOM:
            if live:
                i = int(op.u * len(live))
                victim = live[i]
                last = live.pop()
                if last != victim:
                    live[i] = last
                    where[last] = i
                del where[victim]
                s.delete(victim)
        else:
            s.predecessor(op.key)
        counts[kind] = counts.get(kind, 0) + 1
        if s.last_op.veb_levels_touched > depth_bound(s.op_width):
            violations += 1

    n_warm = int(len(seq) * config.warmup)
    for op in seq[:n_warm]:
        execute(op)
    s.reset_metrics()
    per_op = []
    clock = time.perf_counter_ns
    for start in range(n_warm, len(seq), config.batch):
        chunk = seq[start:start + config.batch]
        t0 = clock()
        for op in chunk:
            execute(op)
        per_op.append((clock() - t0) / len(chunk))

    st = s.stats()
    report.counts = counts
    report.p_final = st.p
    report.n_final = st.size
    report.rebuilds = st.rebuilds
    if per_op:
        report.p50_ns, report.p99_ns = (float(v) for v in np.percentile(per_op, [50, 99]))
        report.max_ns = float(max(per_op))
    report.mean_levels = round(st.mean_levels, 6)
    report.max_levels = st.max_levels
    report.mean_bucket = round(st.bucket_sizes["mean"], 6)
    report.max_bucket = st.bucket_sizes["max"]
    report.p99_bucket = st.bucket_sizes["p99"]
    report.entries_per_key = round(st.entries_per_key, 6)
    report.depth_violations = violations
    if out:
        append_csv(out, [report.row()], CSV_FIELDS)
    return report


def append_csv(path: str, rows: list[dict], fields: list[str]):
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        if fresh:
            writer.writeheader()
        writer.writerows(rows)
