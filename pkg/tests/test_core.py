import math

import pytest
from hypothesis import given, strategies as st

from smoothpred.core import (
    SmoothParams,
    SplitConfig,
    depth_bound,
    join_key,
    note_modification,
    split_key,
    split_width,
)

params_st = st.builds(
    SmoothParams,
    st.floats(0.05, 8, allow_nan=False),
    st.floats(0.05, 8, allow_nan=False),
)


@pytest.mark.parametrize("params, n0, w, expected", [
    (SmoothParams(1, 1), 1024, 64, 10),
    (None, 256, 64, 64),
    (SmoothParams(2, 1), 2 ** 40, 64, 64),
    (None, 0, 64, 1),
])
def test_split_width_examples(params, n0, w, expected):
    assert split_width(params, n0, w) == expected


@pytest.mark.parametrize("key, p, expected", [
    (0xFF00000000000000, 8, (0xFF, 0)),
    (0, 10, (0, 0)),
    (2 ** 63 + 5, 1, (1, 5)),
])
def test_split_key_examples(key, p, expected):
    assert split_key(key, p, 64) == expected


def test_split_key_full_width_has_no_low_bits():
    assert split_key(12345, 64, 64) == (12345, 0)


def test_note_modification_examples():
    cfg = SplitConfig(64, None, n0=100)
    cfg.mods_since_rebuild = 24
    assert note_modification(cfg) is True
    cfg = SplitConfig(64, None, n0=100)
    assert note_modification(cfg) is False
    assert cfg.mods_since_rebuild == 1
    fresh = SplitConfig(64, None)
    assert fresh.n0 == 0
    assert note_modification(fresh) is True


def test_rebuild_threshold_rounds_up():
    cfg = SplitConfig(64, None, n0=5)
    fired = [note_modification(cfg) for _ in range(2)]
    assert fired == [False, True]


def test_smooth_params_must_be_positive():
    with pytest.raises(ValueError):
        SmoothParams(0, 1)
    with pytest.raises(ValueError):
        SmoothParams(1, -0.5)


def test_config_tracks_split_width():
    cfg = SplitConfig(32, SmoothParams(1, 1))
    assert cfg.p == 1
    assert cfg.reset(5000) == split_width(SmoothParams(1, 1), 5000, 32) == 13
    assert cfg.mods_since_rebuild == 0


@given(st.integers(1, 64).flatmap(
    lambda w: st.tuples(st.just(w), st.integers(0, 2 ** w - 1), st.integers(1, w))))
def test_split_key_reassembles(args):
    w, key, p = args
    prefix, low = split_key(key, p, w)
    assert prefix < 2 ** p and low < 2 ** (w - p)
    assert join_key(prefix, low, p, w) == key


@given(params=st.none() | params_st, n0=st.integers(0, 2 ** 50), w=st.integers(1, 64))
def test_split_width_in_range(params, n0, w):
    assert 1 <= split_width(params, n0, w) <= w


@given(params=st.none() | params_st, a=st.integers(0, 2 ** 50), b=st.integers(0, 2 ** 50),
       w=st.integers(1, 64))
def test_split_width_monotone(params, a, b, w):
    lo, hi = sorted((a, b))
    assert split_width(params, lo, w) <= split_width(params, hi, w)


@given(alpha=st.floats(0.05, 4), delta=st.floats(0.05, 4), n0=st.integers(2, 2 ** 50),
       w=st.integers(1, 64))
def test_known_params_never_wider_when_ratio_at_most_one(alpha, delta, n0, w):
    if alpha > delta:
        alpha, delta = delta, alpha
    assert split_width(SmoothParams(alpha, delta), n0, w) <= split_width(None, n0, w)


@pytest.mark.parametrize("p, bound", [(1, 2), (2, 3), (7, 5), (10, 6), (64, 8)])
def test_depth_bound(p, bound):
    assert depth_bound(p) == bound == math.ceil(math.log2(p)) + 2
