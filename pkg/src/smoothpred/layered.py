"""Predecessor set that splits each key into a trie-indexed prefix and a bucketed suffix.

The top ``p`` bits of a key select a bucket; the set of occupied prefixes
lives in a ``ClusteredVeb``. ``p`` is re-derived from the set size at each
global rebuild, which happens after every ``n0/4`` successful modifications.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .buckets import Bucket, link_between, unlink
from .core import (
    DEFAULT_WORD_BITS,
    OpMetrics,
    SmoothParams,
    SplitConfig,
    note_modification,
)
from .veb import ClusteredVeb, Probe, cluster_capacity


@dataclass
class SpaceTimeReport:
    size: int
    p: int
    n0: int
    bucket_histogram: dict[int, int]
    mean_levels: float
    max_levels: int
    entries: int
    entries_per_key: float
    rebuilds: int
    ops: int
    bucket_sizes: dict = field(init=False)

    def __post_init__(self):
        hist = self.bucket_histogram
        n_buckets = sum(hist.values())
        self.bucket_sizes = {
            "mean": self.size / n_buckets if n_buckets else 0.0,
            "max": max(hist) if hist else 0,
            "p99": _percentile_from_hist(hist, 0.99),
        }


def _percentile_from_hist(hist: dict[int, int], q: float) -> int:
    total = sum(hist.values())
    if not total:
        return 0
    need = q * total
    seen = 0
    for value in sorted(hist):
        seen += hist[value]
        if seen >= need:
            return value
    return max(hist)


class LayeredSet:
    def __init__(self, w: int = DEFAULT_WORD_BITS, params: Optional[SmoothParams] = None,
                 cluster_cap: Optional[int] = None):
        self.cfg = SplitConfig(w=w, params=params)
        self.cluster_cap = cluster_cap or cluster_capacity(w)
        self.top = ClusteredVeb(self.cfg.p, self.cluster_cap)
        self.buckets: dict[int, Bucket] = {}
        self.size = 0
        self.rebuilds = 0
        self.last_op = OpMetrics()
        # prefix width the last operation ran at (a rebuild may change cfg.p afterwards)
        self.op_width = self.cfg.p
        self._probe = Probe()
        self.reset_metrics()

    def reset_metrics(self):
        self.ops = 0
        self.levels_sum = 0
        self.levels_max = 0
        self.probes_sum = 0

    @property
    def p(self) -> int:
        return self.cfg.p

    @property
    def w(self) -> int:
        return self.cfg.w

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        first = self.top.min()
        if first is None:
            return
        shift = self.cfg.w - self.cfg.p
        b = self.buckets[first]
        while b is not None:
            base = b.prefix << shift
            for low in b.lows:
                yield base | low
            b = b.next

    def __contains__(self, key: int) -> bool:
        shift = self.cfg.w - self.cfg.p
        b = self.buckets.get(key >> shift)
        return b is not None and (key & ((1 << shift) - 1)) in b

    def _check_key(self, key: int):
        if not 0 <= key < (1 << self.cfg.w):
            raise ValueError(f"key {key} outside [0, 2**{self.cfg.w})")

    def _record(self, probes: int, rebuild: bool = False):
        levels = self._probe.levels
        self.last_op = OpMetrics(levels, probes, rebuild)
        self.ops += 1
        self.levels_sum += levels
        if levels > self.levels_max:
            self.levels_max = levels
        self.probes_sum += probes

    def _modified(self, probes: int):
        due = note_modification(self.cfg)
        self._record(probes, due)
        if due:
            self.rebuild()

    def _link(self, b: Bucket, prev: Optional[Bucket], nxt: Optional[Bucket]):
        link_between(b, prev, nxt)

    def insert(self, key: int) -> bool:
        self._check_key(key)
        probe = self._probe
        probe.levels = 0
        self.op_width = p = self.cfg.p
        shift = self.cfg.w - p
        q = key >> shift
        low = key & ((1 << shift) - 1)
        b = self.buckets.get(q)
        if b is None:
            b = self.buckets[q] = Bucket(q, [low])
            top = self.top
            top.insert(q, probe)
            pq = top.predecessor(q, probe)
            if pq is not None:
                prev = self.buckets[pq]
                nxt = prev.next
            else:
                prev = None
                sq = top.successor(q, probe)
                nxt = self.buckets[sq] if sq is not None else None
            self._link(b, prev, nxt)
            probes = 0
        else:
            probes = b.probes
            if not b.insert(low):
                self._record(probes)
                return False
        self.size += 1
        self._modified(probes)
        return True

    def delete(self, key: int) -> bool:
        self._check_key(key)
        probe = self._probe
        probe.levels = 0
        self.op_width = p = self.cfg.p
        shift = self.cfg.w - p
        q = key >> shift
        b = self.buckets.get(q)
        if b is None:
            self._record(0)
            return False
        probes = b.probes
        if not b.delete(key & ((1 << shift) - 1)):
            self._record(probes)
            return False
        if not b.lows:
            unlink(b)
            del self.buckets[q]
            self.top.delete(q, probe)
        self.size -= 1
        self._modified(probes)
        return True

    def predecessor(self, x: int) -> Optional[int]:
        """Largest stored key strictly below ``x``."""
        self._check_key(x)
        probe = self._probe
        probe.levels = 0
        self.op_width = p = self.cfg.p
        shift = self.cfg.w - p
        q = x >> shift
        b = self.buckets.get(q)
        probes = 0
        if b is not None:
            probes = b.probes
            y = b.pred(x & ((1 << shift) - 1))
            if y is not None:
                self._record(probes)
                return (q << shift) | y
            prev = b.prev
        else:
            pq = self.top.predecessor(q, probe)
            prev = self.buckets[pq] if pq is not None else None
        self._record(probes)
        if prev is None:
            return None
        return (prev.prefix << shift) | prev.lows[-1]

    def successor(self, x: int) -> Optional[int]:
        """Smallest stored key strictly above ``x``."""
        self._check_key(x)
        probe = self._probe
        probe.levels = 0
        self.op_width = p = self.cfg.p
        shift = self.cfg.w - p
        q = x >> shift
        b = self.buckets.get(q)
        probes = 0
        if b is not None:
            probes = b.probes
            y = b.succ(x & ((1 << shift) - 1))
            if y is not None:
                self._record(probes)
                return (q << shift) | y
            nxt = b.next
        else:
            sq = self.top.successor(q, probe)
            nxt = self.buckets[sq] if sq is not None else None
        self._record(probes)
        if nxt is None:
            return None
        return (nxt.prefix << shift) | nxt.lows[0]

    def min(self) -> Optional[int]:
        q = self.top.min()
        if q is None:
            return None
        return (q << (self.cfg.w - self.cfg.p)) | self.buckets[q].lows[0]

    def max(self) -> Optional[int]:
        q = self.top.max()
        if q is None:
            return None
        return (q << (self.cfg.w - self.cfg.p)) | self.buckets[q].lows[-1]

    def rebuild(self) -> int:
        """Re-split every key at the width the current size calls for."""
        keys = list(self)
        p = self.cfg.reset(len(keys))
        shift = self.cfg.w - p
        mask = (1 << shift) - 1
        buckets: dict[int, Bucket] = {}
        prefixes = []
        prev = None
        for k in keys:
            q = k >> shift
            if prev is None or q != prev.prefix:
                b = Bucket(q)
                b.prev = prev
                if prev is not None:
                    prev.next = b
                buckets[q] = b
                prefixes.append(q)
                prev = b
            prev.lows.append(k & mask)
        self.buckets = buckets
        self.top = ClusteredVeb.from_sorted(p, prefixes, self.cluster_cap)
        self.rebuilds += 1
        return p

    def bucket_histogram(self) -> dict[int, int]:
        return dict(Counter(len(b.lows) for b in self.buckets.values()))

    def entry_count(self) -> int:
        # bucket: map entry + header; lows: one word each
        return self.top.entry_count() + 2 * len(self.buckets) + self.size

    def stats(self) -> SpaceTimeReport:
        entries = self.entry_count() if self.size else 0
        return SpaceTimeReport(
            size=self.size,
            p=self.cfg.p,
            n0=self.cfg.n0,
            bucket_histogram=self.bucket_histogram(),
            mean_levels=self.levels_sum / self.ops if self.ops else 0.0,
            max_levels=self.levels_max,
            entries=entries,
            entries_per_key=entries / self.size if self.size else 0.0,
            rebuilds=self.rebuilds,
            ops=self.ops,
        )

    def check(self):
        """Assert cross-layer consistency; used by tests."""
        self.top.check()
        assert set(self.top) == set(self.buckets)
        listed = []
        prev = None
        first = self.top.min()
        b = self.buckets[first] if first is not None else None
        while b is not None:
            assert b.prev is prev
            assert b.lows, "empty bucket left behind"
            assert all(x < y for x, y in zip(b.lows, b.lows[1:]))
            assert self.buckets[b.prefix] is b
            listed.append(b.prefix)
            prev, b = b, b.next
        assert listed == list(self.top)
        assert self.size == sum(len(b.lows) for b in self.buckets.values())
        assert self.cfg.mods_since_rebuild < max(1, -(-self.cfg.n0 // 4))
