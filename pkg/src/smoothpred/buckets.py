"""Small sorted sets of low-order key bits, one per occupied prefix.

Under smooth input a bucket holds O(1) keys in expectation, so a plain
sorted list with binary search is enough; skewed input degrades only the
bucket search, never the trie above it.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Optional


class Bucket:
    __slots__ = ("prefix", "lows", "prev", "next")

    def __init__(self, prefix: int, lows: Optional[list[int]] = None):
        self.prefix = prefix
        self.lows: list[int] = lows if lows is not None else []
        self.prev: Optional[Bucket] = None
        self.next: Optional[Bucket] = None

    def __repr__(self):
        return f"Bucket({self.prefix:#x}, {self.lows})"

    def __len__(self) -> int:
        return len(self.lows)

    def __contains__(self, low: int) -> bool:
        i = bisect_left(self.lows, low)
        return i < len(self.lows) and self.lows[i] == low

    @property
    def probes(self) -> int:
        """Comparisons a binary search over this bucket costs."""
        return len(self.lows).bit_length()

    def insert(self, low: int) -> bool:
        lows = self.lows
        i = bisect_left(lows, low)
        if i < len(lows) and lows[i] == low:
            return False
        lows.insert(i, low)
        return True

    def delete(self, low: int) -> bool:
        """Remove ``low``; the caller unlinks the bucket once it is empty."""
        lows = self.lows
        i = bisect_left(lows, low)
        if i == len(lows) or lows[i] != low:
            return False
        del lows[i]
        return True

    def pred(self, x: int) -> Optional[int]:
        i = bisect_left(self.lows, x)
        return self.lows[i - 1] if i else None

    def succ(self, x: int) -> Optional[int]:
        i = bisect_right(self.lows, x)
        return self.lows[i] if i < len(self.lows) else None

    def min(self) -> int:
        return self.lows[0]

    def max(self) -> int:
        return self.lows[-1]


def link_between(b: Bucket, prev: Optional[Bucket], nxt: Optional[Bucket]):
    b.prev = prev
    b.next = nxt
    if prev is not None:
        prev.next = b
    if nxt is not None:
        nxt.prev = b


def unlink(b: Bucket):
    if b.prev is not None:
        b.prev.next = b.next
    if b.next is not None:
        b.next.prev = b.prev
    b.prev = b.next = None
