"""Key arithmetic, prefix-width policy and rebuild scheduling."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

DEFAULT_WORD_BITS = 64


@dataclass(frozen=True)
class SmoothParams:
    """Exponents of an (s**alpha, s**(1 - delta))-smooth density."""

    alpha: float
    delta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.delta > 0):
            raise ValueError(f"alpha and delta must be positive, got {self.alpha}, {self.delta}")

    @property
    def ratio(self) -> float:
        return self.alpha / self.delta


def check_key(key: int, w: int) -> int:
    if not 0 <= key < (1 << w):
        raise ValueError(f"key {key} outside [0, 2**{w})")
    return key


def split_width(params: Optional[SmoothParams], n0: int, w: int) -> int:
    """Number of high bits handed to the trie for a set of size ``n0``.

    With known parameters this is ``(alpha/delta) * log2 n`` bits, otherwise
    ``log2(n) ** 2``; clamped to ``[1, w]``. Taking all ``w`` bits turns the
    structure into a plain hashed vEB trie.
    """
    lg = math.log2(max(n0, 2))
    if params is not None:
        want = math.ceil(params.ratio * lg)
    else:
        want = math.ceil(lg * lg)
    return min(w, max(1, want))


def split_key(key: int, p: int, w: int = DEFAULT_WORD_BITS) -> tuple[int, int]:
    shift = w - p
    return key >> shift, key & ((1 << shift) - 1)


def join_key(prefix: int, low: int, p: int, w: int = DEFAULT_WORD_BITS) -> int:
    return (prefix << (w - p)) | low


def rebuild_threshold(n0: int) -> int:
    return max(1, -(-n0 // 4))


@dataclass
class SplitConfig:
    w: int = DEFAULT_WORD_BITS
    params: Optional[SmoothParams] = None
    n0: int = 0
    mods_since_rebuild: int = 0
    p: int = field(init=False)

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("word width must be at least 1")
        self.p = split_width(self.params, self.n0, self.w)

    def reset(self, n0: int) -> int:
        self.n0 = n0
        self.p = split_width(self.params, n0, self.w)
        self.mods_since_rebuild = 0
        return self.p


def note_modification(cfg: SplitConfig) -> bool:
    """Count one successful insert/delete; True when a rebuild is due."""
    cfg.mods_since_rebuild += 1
    return cfg.mods_since_rebuild >= rebuild_threshold(cfg.n0)


@dataclass
class OpMetrics:
    veb_levels_touched: int = 0
    bucket_probes: int = 0
    rebuild_triggered: bool = False


def depth_bound(p: int) -> int:
    """Largest number of trie levels one operation may touch at prefix width p."""
    return math.ceil(math.log2(p)) + 2
