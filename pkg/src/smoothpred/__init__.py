"""Predecessor search on smooth integer keys: a hashed vEB trie over key prefixes plus small buckets."""
from .core import SmoothParams, SplitConfig, split_key, split_width
from .dist_lab import Distribution, make_distribution
from .layered import LayeredSet
from .veb import ClusteredVeb, VebNode

__all__ = [
    "ClusteredVeb",
    "Distribution",
    "LayeredSet",
    "SmoothParams",
    "SplitConfig",
    "VebNode",
    "make_distribution",
    "split_key",
    "split_width",
]
