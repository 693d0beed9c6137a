import math
import random
from bisect import bisect_left, bisect_right

import pytest
from hypothesis import given, settings, strategies as st

from smoothpred.veb import BASE_BITS, ClusteredVeb, Probe, VebNode, veb_max, veb_min


def oracle_pred(keys, x):
    i = bisect_left(keys, x)
    return keys[i - 1] if i else None


def oracle_succ(keys, x):
    i = bisect_right(keys, x)
    return keys[i] if i < len(keys) else None


def walk(node):
    yield node
    if node.summary is not None:
        yield from walk(node.summary)
        for child in node.children.values():
            yield from walk(child)


def assert_node_invariants(node):
    for n in walk(node):
        if n.min is None:
            assert n.max is None and n.summary is None and not n.children
            continue
        assert n.min <= n.max
        if n.width <= BASE_BITS:
            assert n.bits and n.min == (n.bits & -n.bits).bit_length() - 1
            continue
        if n.summary is None:
            assert n.min == n.max
            continue
        assert sorted(n.children) == list(n.summary)
        lo = n._lo
        for h, child in n.children.items():
            assert child.min is not None
            # the node's minimum lives only in the node itself
            assert (h << lo) | child.min != n.min
            assert all((h << lo) | l != n.min for l in child)


def build(width, keys):
    node = VebNode(width)
    for k in keys:
        node.insert(k)
    return node


def test_first_insert_lives_in_min():
    node = VebNode(16)
    assert node.insert(5) is True
    assert node.min == node.max == 5
    assert node.children is None and node.summary is None


def test_insert_is_idempotent():
    node = build(16, [5])
    assert node.insert(5) is False
    assert list(node) == [5]


def test_two_clusters_in_summary():
    node = build(16, [3, 300])
    # width 16 splits into 8 high bits: 3 -> high 0, 300 -> high 1
    assert list(node.summary) == [1]
    assert node.min == 3 and node.max == 300
    assert 0 not in node.children
    node.insert(7)
    assert list(node.summary) == [0, 1]
    assert_node_invariants(node)
    assert list(node) == [3, 7, 300]


def test_delete_examples():
    node = build(16, [5])
    assert node.delete(5) is True
    assert node.min is None and node.max is None
    assert VebNode(16).delete(7) is False
    node = build(16, [3, 300, 301])
    assert node.delete(3) is True
    assert node.min == 300
    assert list(node) == [300, 301]
    assert_node_invariants(node)


def test_pred_succ_examples():
    assert VebNode(16).predecessor(9) is None
    node = build(16, [5, 9])
    assert node.predecessor(9) == 5
    assert node.successor(5) == 9
    assert build(16, [5]).successor(5) is None


def test_min_max():
    empty = VebNode(16)
    assert veb_min(empty) is None and veb_max(empty) is None
    node = build(16, [3, 300])
    assert (veb_min(node), veb_max(node)) == (3, 300)


@pytest.mark.parametrize("seed", range(3))
def test_random_set_queries_match_binary_search(seed):
    rng = random.Random(seed)
    keys = sorted(rng.sample(range(1 << 16), 200))
    node = build(16, rng.sample(keys, len(keys)))
    assert (veb_min(node), veb_max(node)) == (keys[0], keys[-1])
    for _ in range(10_000):
        x = rng.randrange(1 << 16)
        assert node.predecessor(x) == oracle_pred(keys, x)
        assert node.successor(x) == oracle_succ(keys, x)


@pytest.mark.parametrize("width", [1, 2, 3, 4])
def test_every_subset_small_width(width):
    universe = range(1 << width)
    for mask in range(1 << (1 << width)):
        keys = [x for x in universe if mask >> x & 1]
        node = VebNode(width)
        for k in reversed(keys):
            node.insert(k)
        assert list(node) == keys
        for x in universe:
            assert node.predecessor(x) == oracle_pred(keys, x)
            assert node.successor(x) == oracle_succ(keys, x)
            assert (x in node) == (mask >> x & 1 == 1)


@pytest.mark.parametrize("width", [5, 7, 8, 10])
def test_full_universe_fill_and_drain(width):
    rng = random.Random(width)
    order = list(range(1 << width))
    rng.shuffle(order)
    node = VebNode(width)
    keys = []
    for i, k in enumerate(order):
        node.insert(k)
        keys.insert(bisect_left(keys, k), k)
        if i % 97 == 0:
            assert_node_invariants(node)
            for x in range(1 << width):
                assert node.predecessor(x) == oracle_pred(keys, x)
                assert node.successor(x) == oracle_succ(keys, x)
    rng.shuffle(order)
    for i, k in enumerate(order):
        assert node.delete(k)
        keys.remove(k)
        if i % 97 == 0:
            assert_node_invariants(node)
            assert list(node) == keys
    assert node.min is None and node.summary is None


ops_st = st.lists(st.tuples(st.sampled_from("idps"), st.integers(0, 2 ** 64 - 1)), max_size=150)


@settings(max_examples=150, deadline=None)
@given(width=st.integers(1, 64), ops=ops_st)
def test_matches_set_oracle(width, ops):
    node = VebNode(width)
    ref = set()
    bound = math.ceil(math.log2(width)) + 1
    probe = Probe()
    for kind, raw in ops:
        x = raw % (1 << width)
        probe.reset()
        if kind == "i":
            assert node.insert(x, probe) == (x not in ref)
            ref.add(x)
        elif kind == "d":
            assert node.delete(x, probe) == (x in ref)
            ref.discard(x)
        else:
            keys = sorted(ref)
            assert node.predecessor(x, probe) == oracle_pred(keys, x)
            probe_levels = probe.levels
            assert node.successor(x, probe) == oracle_succ(keys, x)
            assert probe_levels <= bound
        assert probe.levels <= bound
    assert list(node) == sorted(ref)
    assert_node_invariants(node)


@settings(max_examples=100, deadline=None)
@given(keys=st.sets(st.integers(0, 2 ** 20 - 1), max_size=80), x=st.integers(0, 2 ** 20 - 1))
def test_pred_succ_duality(keys, x):
    node = build(20, keys)
    y = node.predecessor(x)
    z = node.successor(x)
    # nothing lies strictly between pred(x) and succ(x) except x itself
    if y is not None:
        after = node.successor(y)
        assert after == (x if x in keys else z)
    if z is not None:
        before = node.predecessor(z)
        assert before is None or before <= x
        assert before == (x if x in keys else y)


def test_empty_children_are_dropped():
    node = build(32, [1 << 20, 5 << 20, 7])
    node.delete(5 << 20)
    assert (5 << 20) >> 16 not in node.children
    node.delete(1 << 20)
    node.delete(7)
    assert node.min is None and node.children is None


def test_depth_never_exceeds_log_width():
    rng = random.Random(4)
    node = VebNode(64)
    probe = Probe()
    for _ in range(3000):
        probe.reset()
        node.insert(rng.getrandbits(64), probe)
        assert probe.levels <= math.ceil(math.log2(64)) + 1
    assert node.max_depth() == 5


# --- clustered wrapper ---

def test_sorted_inserts_form_few_clusters():
    cv = ClusteredVeb(16, capacity=4)
    for x in range(10, 19):
        assert cv.insert(x)
    clusters = list(cv.clusters())
    assert 2 <= len(clusters) <= 3
    assert list(cv.directory) == [c.items[0] for c in clusters]
    assert len(cv.reps) <= math.ceil(cv.count / math.ceil(4 / 2))
    cv.check()


def test_predecessor_at_cluster_boundary_uses_left_neighbour():
    cv = ClusteredVeb.from_sorted(16, list(range(0, 40, 2)), capacity=4)
    clusters = list(cv.clusters())
    boundary = clusters[1].items[0]
    assert cv.predecessor(boundary) == clusters[0].items[-1] == boundary - 2
    assert cv.successor(clusters[0].items[-1]) == boundary
    cv.check()


def test_delete_to_empty_and_reinsert():
    keys = [3, 9, 27, 81, 243, 729, 2187, 6561, 19683]
    cv = ClusteredVeb(16, capacity=4)
    for k in keys:
        cv.insert(k)
    for k in keys:
        assert cv.delete(k)
        cv.check()
    assert cv.count == 0 and cv.head is None and cv.directory.min is None
    assert cv.delete(3) is False
    for k in reversed(keys):
        assert cv.insert(k)
    cv.check()
    assert list(cv) == keys


@settings(max_examples=150, deadline=None)
@given(width=st.integers(4, 64), cap=st.integers(2, 9), ops=ops_st)
def test_clustered_matches_set_oracle(width, cap, ops):
    cv = ClusteredVeb(width, capacity=cap)
    ref = set()
    for kind, raw in ops:
        x = raw % (1 << width)
        if kind == "i":
            assert cv.insert(x) == (x not in ref)
            ref.add(x)
        elif kind == "d":
            assert cv.delete(x) == (x in ref)
            ref.discard(x)
        else:
            keys = sorted(ref)
            assert cv.predecessor(x) == oracle_pred(keys, x)
            assert cv.successor(x) == oracle_succ(keys, x)
        cv.check()
    assert list(cv) == sorted(ref)
    assert all(k in cv for k in ref)


@pytest.mark.parametrize("width", [6, 8, 9])
def test_clustered_exhaustive_small_universe(width):
    rng = random.Random(width)
    cv = ClusteredVeb(width, capacity=4)
    ref = []
    for step in range(3000):
        x = rng.randrange(1 << width)
        if rng.random() < 0.55:
            cv.insert(x)
            if x not in ref:
                ref.insert(bisect_left(ref, x), x)
        else:
            cv.delete(x)
            if x in ref:
                ref.remove(x)
        if step % 50 == 0:
            cv.check()
            for q in range(1 << width):
                assert cv.predecessor(q) == oracle_pred(ref, q)
                assert cv.successor(q) == oracle_succ(ref, q)


def test_clustered_space_is_linear():
    rng = random.Random(9)
    cv = ClusteredVeb(64)
    ratios = []
    for target in (1000, 4000, 16000):
        while cv.count < target:
            cv.insert(rng.getrandbits(64))
        cv.check()
        n_dir = len(cv.reps)
        assert n_dir <= cv.count / cv.min_fill + 1
        # every directory key costs at most a fixed number of trie nodes
        assert cv.directory.node_count() <= 12 * n_dir
        ratios.append(cv.entry_count() / cv.count)
    assert max(ratios) / min(ratios) < 1.25


def test_from_sorted_respects_fill_bounds():
    for n in range(0, 40):
        cv = ClusteredVeb.from_sorted(10, list(range(0, 3 * n, 3)), capacity=4)
        cv.check()
        assert list(cv) == list(range(0, 3 * n, 3))
