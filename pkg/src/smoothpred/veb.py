"""Hashed van Emde Boas trie and its clustered (linear-space) wrapper.

``VebNode`` is the textbook recursive layout with two changes: children
live in a dict keyed by the high half, and nodes of at most ``BASE_BITS``
bits keep their members in one integer bitmask. The minimum of a node is
never pushed into its children, so every operation makes at most one
non-trivial recursive call per level.

``ClusteredVeb`` groups the sorted element sequence into small arrays
(B-tree style, capacity ``C``) joined in a doubly linked list, and only
indexes each cluster's minimum in a ``VebNode`` directory.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from typing import Iterator, Optional

BASE_BITS = 6


class Probe:
    """Records the deepest trie level reached since the last reset."""

    __slots__ = ("levels",)

    def __init__(self):
        self.levels = 0

    def reset(self):
        self.levels = 0


def _leaf(width: int, x: int) -> "VebNode":
    node = VebNode(width)
    node.min = node.max = x
    if width <= BASE_BITS:
        node.bits = 1 << x
    return node


class VebNode:
    __slots__ = ("width", "min", "max", "summary", "children", "bits", "_lo")

    def __init__(self, width: int):
        if width < 1:
            raise ValueError("width must be at least 1")
        self.width = width
        self.min: Optional[int] = None
        self.max: Optional[int] = None
        self.summary: Optional[VebNode] = None
        self.children: Optional[dict[int, VebNode]] = None
        self.bits = 0
        self._lo = width // 2

    def __repr__(self):
        return f"VebNode(width={self.width}, keys={list(self)})"

    def __iter__(self) -> Iterator[int]:
        if self.min is None:
            return
        if self.width <= BASE_BITS:
            b = self.bits
            while b:
                low = b & -b
                yield low.bit_length() - 1
                b ^= low
            return
        yield self.min
        if self.summary is not None:
            lo = self._lo
            for h in self.summary:
                for l in self.children[h]:
                    yield (h << lo) | l

    def __len__(self) -> int:
        return sum(1 for _ in self)

    def __contains__(self, x: int) -> bool:
        node = self
        while True:
            if node.min is None:
                return False
            if node.width <= BASE_BITS:
                return bool(node.bits >> x & 1)
            if x == node.min or x == node.max:
                return True
            if x < node.min or x > node.max:
                return False
            lo = node._lo
            child = node.children.get(x >> lo)
            if child is None:
                return False
            node, x = child, x & ((1 << lo) - 1)

    def insert(self, x: int, probe: Optional[Probe] = None, depth: int = 1) -> bool:
        if probe is not None and depth > probe.levels:
            probe.levels = depth
        if self.min is None:
            self.min = self.max = x
            if self.width <= BASE_BITS:
                self.bits = 1 << x
            return True
        if self.width <= BASE_BITS:
            bit = 1 << x
            if self.bits & bit:
                return False
            self.bits |= bit
            if x < self.min:
                self.min = x
            elif x > self.max:
                self.max = x
            return True
        if x == self.min:
            return False
        if x < self.min:
            x, self.min = self.min, x
        lo = self._lo
        h = x >> lo
        l = x & ((1 << lo) - 1)
        if self.children is None:
            self.children = {}
        child = self.children.get(h)
        if child is None:
            # new cluster: the child insert is O(1), the real work is in summary
            self.children[h] = _leaf(lo, l)
            if self.summary is None:
                self.summary = VebNode(self.width - lo)
            self.summary.insert(h, probe, depth + 1)
        elif not child.insert(l, probe, depth + 1):
            return False
        if x > self.max:
            self.max = x
        return True

    def delete(self, x: int, probe: Optional[Probe] = None, depth: int = 1) -> bool:
        if probe is not None and depth > probe.levels:
            probe.levels = depth
        mn = self.min
        if mn is None:
            return False
        if self.width <= BASE_BITS:
            bit = 1 << x
            if not self.bits & bit:
                return False
            b = self.bits ^ bit
            self.bits = b
            if b:
                self.min = (b & -b).bit_length() - 1
                self.max = b.bit_length() - 1
            else:
                self.min = self.max = None
            return True
        if mn == self.max:
            if x != mn:
                return False
            self.min = self.max = None
            return True
        lo = self._lo
        if x == mn:
            # pull the successor up into min, then remove it from below
            h = self.summary.min
            x = (h << lo) | self.children[h].min
            self.min = x
        elif x < mn or x > self.max:
            return False
        h = x >> lo
        child = self.children.get(h)
        if child is None or not child.delete(x & ((1 << lo) - 1), probe, depth + 1):
            return False
        if child.min is None:
            del self.children[h]
            self.summary.delete(h, probe, depth + 1)
            if self.summary.min is None:
                self.summary = None
                self.children = None
        if x == self.max:
            if self.summary is None:
                self.max = self.min
            else:
                hm = self.summary.max
                self.max = (hm << lo) | self.children[hm].max
        return True

    def predecessor(self, x: int, probe: Optional[Probe] = None, depth: int = 1) -> Optional[int]:
        """Largest member strictly below ``x``."""
        if probe is not None and depth > probe.levels:
            probe.levels = depth
        mn = self.min
        if mn is None or x <= mn:
            return None
        if x > self.max:
            return self.max
        if self.width <= BASE_BITS:
            return (self.bits & ((1 << x) - 1)).bit_length() - 1
        lo = self._lo
        h = x >> lo
        l = x & ((1 << lo) - 1)
        child = self.children.get(h)
        if child is not None and l > child.min:
            return (h << lo) | child.predecessor(l, probe, depth + 1)
        ph = self.summary.predecessor(h, probe, depth + 1)
        if ph is None:
            return mn
        return (ph << lo) | self.children[ph].max

    def successor(self, x: int, probe: Optional[Probe] = None, depth: int = 1) -> Optional[int]:
        """Smallest member strictly above ``x``."""
        if probe is not None and depth > probe.levels:
            probe.levels = depth
        mx = self.max
        if mx is None or x >= mx:
            return None
        if x < self.min:
            return self.min
        if self.width <= BASE_BITS:
            rest = self.bits >> (x + 1)
            return x + (rest & -rest).bit_length()
        lo = self._lo
        h = x >> lo
        l = x & ((1 << lo) - 1)
        child = self.children.get(h)
        if child is not None and l < child.max:
            return (h << lo) | child.successor(l, probe, depth + 1)
        sh = self.summary.successor(h, probe, depth + 1)
        return (sh << lo) | self.children[sh].min

    def node_count(self) -> int:
        """Allocated nodes plus child-map entries below (and including) this node."""
        total = 1
        if self.summary is not None:
            total += self.summary.node_count()
            for child in self.children.values():
                total += 1 + child.node_count()
        return total

    def max_depth(self) -> int:
        if self.width <= BASE_BITS:
            return 1
        return 1 + VebNode(self.width - self._lo).max_depth()


def veb_min(node: VebNode) -> Optional[int]:
    return node.min


def veb_max(node: VebNode) -> Optional[int]:
    return node.max


def cluster_capacity(w: int) -> int:
    return max(4, math.ceil(math.log2(w)))


class Cluster:
    __slots__ = ("items", "prev", "next")

    def __init__(self, items: list[int]):
        self.items = items
        self.prev: Optional[Cluster] = None
        self.next: Optional[Cluster] = None

    def __repr__(self):
        return f"Cluster({self.items})"


class ClusteredVeb:
    """Sorted set of ``width``-bit integers with a vEB directory over cluster minima."""

    def __init__(self, width: int, capacity: Optional[int] = None):
        self.width = width
        self.capacity = capacity or cluster_capacity(width)
        if self.capacity < 2:
            raise ValueError("cluster capacity must be at least 2")
        self.min_fill = -(-self.capacity // 2)
        self.directory = VebNode(width)
        self.reps: dict[int, Cluster] = {}
        self.head: Optional[Cluster] = None
        self.tail: Optional[Cluster] = None
        self.count = 0

    @classmethod
    def from_sorted(cls, width: int, keys: list[int], capacity: Optional[int] = None) -> "ClusteredVeb":
        """Bulk-build from strictly increasing ``keys``."""
        cv = cls(width, capacity)
        cap = cv.capacity
        chunks = [keys[i:i + cap] for i in range(0, len(keys), cap)]
        if len(chunks) > 1 and len(chunks[-1]) < cv.min_fill:
            chunks[-2].extend(chunks.pop())
        prev = None
        for items in chunks:
            c = Cluster(items)
            c.prev = prev
            if prev is None:
                cv.head = c
            else:
                prev.next = c
            prev = c
            cv.directory.insert(items[0])
            cv.reps[items[0]] = c
        cv.tail = prev
        cv.count = len(keys)
        return cv

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[int]:
        c = self.head
        while c is not None:
            yield from c.items
            c = c.next

    def __contains__(self, x: int) -> bool:
        c = self._floor_cluster(x, None)
        if c is None:
            return False
        i = bisect_left(c.items, x)
        return i < len(c.items) and c.items[i] == x

    def clusters(self) -> Iterator[Cluster]:
        c = self.head
        while c is not None:
            yield c
            c = c.next

    def min(self) -> Optional[int]:
        return self.head.items[0] if self.head is not None else None

    def max(self) -> Optional[int]:
        return self.tail.items[-1] if self.tail is not None else None

    def _floor_cluster(self, x: int, probe: Optional[Probe]) -> Optional[Cluster]:
        d = self.directory
        if d.min is None or x < d.min:
            return None
        if x >= d.max:
            return self.reps[d.max]
        return self.reps[d.predecessor(x + 1, probe)]

    def _link_after(self, c: Cluster, new: Cluster):
        new.prev = c
        new.next = c.next
        if c.next is None:
            self.tail = new
        else:
            c.next.prev = new
        c.next = new

    def _drop(self, c: Cluster, rep: int, probe: Optional[Probe]):
        self.directory.delete(rep, probe)
        del self.reps[rep]
        if c.prev is None:
            self.head = c.next
        else:
            c.prev.next = c.next
        if c.next is None:
            self.tail = c.prev
        else:
            c.next.prev = c.prev

    def _rekey(self, c: Cluster, old: int, probe: Optional[Probe]):
        self.directory.delete(old, probe)
        del self.reps[old]
        new = c.items[0]
        self.directory.insert(new, probe)
        self.reps[new] = c

    def insert(self, x: int, probe: Optional[Probe] = None) -> bool:
        c = self._floor_cluster(x, probe)
        if c is None:
            c = self.head
            if c is None:
                c = self.head = self.tail = Cluster([x])
                self.directory.insert(x, probe)
                self.reps[x] = c
                self.count = 1
                return True
            # below the global minimum: only the first cluster's key changes
            old = c.items[0]
            c.items.insert(0, x)
            self._rekey(c, old, probe)
        else:
            items = c.items
            i = bisect_left(items, x)
            if i < len(items) and items[i] == x:
                return False
            items.insert(i, x)
        self.count += 1
        if len(c.items) > 2 * self.capacity:
            mid = len(c.items) // 2
            right = Cluster(c.items[mid:])
            del c.items[mid:]
            self._link_after(c, right)
            self.directory.insert(right.items[0], probe)
            self.reps[right.items[0]] = right
        return True

    def delete(self, x: int, probe: Optional[Probe] = None) -> bool:
        c = self._floor_cluster(x, probe)
        if c is None:
            return False
        items = c.items
        i = bisect_left(items, x)
        if i == len(items) or items[i] != x:
            return False
        del items[i]
        self.count -= 1
        if not items:
            self._drop(c, x, probe)
            return True
        if i == 0:
            self._rekey(c, x, probe)
        if len(items) < self.min_fill and (c.prev is not None or c.next is not None):
            self._rebalance(c, probe)
        return True

    def _rebalance(self, c: Cluster, probe: Optional[Probe]):
        left, right = c.prev, c.next
        if right is not None and len(right.items) > self.min_fill:
            v = right.items.pop(0)
            c.items.append(v)
            self._rekey(right, v, probe)
        elif left is not None and len(left.items) > self.min_fill:
            old = c.items[0]
            c.items.insert(0, left.items.pop())
            self._rekey(c, old, probe)
        elif right is not None:
            rep = right.items[0]
            c.items.extend(right.items)
            self._drop(right, rep, probe)
        else:
            left.items.extend(c.items)
            self._drop(c, c.items[0], probe)

    def predecessor(self, x: int, probe: Optional[Probe] = None) -> Optional[int]:
        c = self._floor_cluster(x, probe)
        if c is None:
            return None
        i = bisect_left(c.items, x)
        if i:
            return c.items[i - 1]
        # x is this cluster's minimum; the answer closes the left neighbour
        return c.prev.items[-1] if c.prev is not None else None

    def successor(self, x: int, probe: Optional[Probe] = None) -> Optional[int]:
        c = self._floor_cluster(x, probe)
        if c is None:
            return self.head.items[0] if self.head is not None else None
        i = bisect_right(c.items, x)
        if i < len(c.items):
            return c.items[i]
        return c.next.items[0] if c.next is not None else None

    def entry_count(self) -> int:
        """Words-ish footprint: directory nodes, map entries, cluster headers and slots."""
        return self.directory.node_count() + 2 * len(self.reps) + self.count

    def check(self):
        """Assert every structural invariant; used by tests."""
        seen = []
        prev = None
        n_clusters = 0
        for c in self.clusters():
            n_clusters += 1
            assert c.prev is prev
            assert c.items, "empty cluster"
            assert all(a < b for a, b in zip(c.items, c.items[1:]))
            assert len(c.items) <= 2 * self.capacity
            if prev is not None:
                assert prev.items[-1] < c.items[0]
            assert self.reps.get(c.items[0]) is c
            seen.extend(c.items)
            prev = c
        assert prev is self.tail
        assert len(seen) == self.count
        if n_clusters > 1:
            assert all(len(c.items) >= self.min_fill for c in self.clusters())
        assert sorted(self.reps) == list(self.directory)
        assert len(self.reps) == n_clusters
        assert n_clusters <= self.count // self.min_fill + 1
