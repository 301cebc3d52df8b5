"""Linear PQ-tree engine checked against brute-force frontier sets."""

import itertools
import random

import pytest

from clevel.lptree.sweep import (
    all_frontiers,
    delete_leaves,
    force_frontier,
    frontier,
    leaf,
    leafset,
    pnode,
    qnode,
    reduce_consecutive,
    replace_run,
)


def consecutive(f, S):
    idx = [i for i, x in enumerate(f) if x in S]
    return idx[-1] - idx[0] + 1 == len(idx)


def random_tree(rng, labels):
    labels = list(labels)
    rng.shuffle(labels)

    def build(pool):
        if len(pool) == 1:
            return leaf(pool[0])
        # split the pool into 2..len groups
        k = rng.randint(2, min(len(pool), 4))
        cuts = sorted(rng.sample(range(1, len(pool)), k - 1))
        parts = []
        prev = 0
        for c in cuts + [len(pool)]:
            parts.append(pool[prev:c])
            prev = c
        kids = [build(p) for p in parts]
        return pnode(kids) if rng.random() < 0.5 else qnode(kids)

    return build(labels)


class TestBasics:
    def test_frontier_and_leafset(self):
        t = pnode([leaf("a"), qnode([leaf("b"), leaf("c"), leaf("d")])])
        assert frontier(t) == ("a", "b", "c", "d")
        assert leafset(t) == frozenset("abcd")

    def test_p_node_stores_all_permutations(self):
        t = pnode([leaf("a"), leaf("b"), leaf("c")])
        assert all_frontiers(t) == {p for p in itertools.permutations("abc")}

    def test_q_node_stores_two_readings(self):
        t = qnode([leaf("a"), leaf("b"), leaf("c")])
        assert all_frontiers(t) == {("a", "b", "c"), ("c", "b", "a")}

    def test_reduce_pair_in_flat_p(self):
        t = pnode([leaf("a"), leaf("b"), leaf("c")])
        r = reduce_consecutive(t, {"a", "b"})
        assert all_frontiers(r) == {
            ("a", "b", "c"),
            ("b", "a", "c"),
            ("c", "a", "b"),
            ("c", "b", "a"),
        }

    def test_reduce_failure_returns_none(self):
        t = qnode([leaf("a"), leaf("b"), leaf("c")])
        assert reduce_consecutive(t, {"a", "c"}) is None

    def test_delete_projects(self):
        t = qnode([leaf("a"), leaf("b"), leaf("c")])
        r = delete_leaves(t, {"b"})
        assert all_frontiers(r) == {("a", "c"), ("c", "a")}
        assert delete_leaves(t, {"a", "b", "c"}) is None


class TestReduceDifferential:
    """reduce() must match filtering the brute-force frontier set."""

    @pytest.mark.parametrize("seed", range(60))
    def test_random_tree_random_set(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        labels = [chr(ord("a") + i) for i in range(n)]
        t = random_tree(rng, labels)
        k = rng.randint(1, n)
        S = set(rng.sample(labels, k))
        want = {f for f in all_frontiers(t) if consecutive(f, S)}
        r = reduce_consecutive(t, S)
        if r is None:
            assert want == set()
        else:
            assert all_frontiers(r) == want

    @pytest.mark.parametrize("seed", range(20))
    def test_two_reduces_commute_setwise(self, seed):
        rng = random.Random(1000 + seed)
        labels = list("abcdef")
        t = random_tree(rng, labels)
        S1 = set(rng.sample(labels, rng.randint(2, 3)))
        S2 = set(rng.sample(labels, rng.randint(2, 3)))
        want = {
            f
            for f in all_frontiers(t)
            if consecutive(f, S1) and consecutive(f, S2)
        }
        r = reduce_consecutive(t, S1)
        r = reduce_consecutive(r, S2) if r is not None else None
        got = all_frontiers(r) if r is not None else set()
        assert got == want


class TestDeleteDifferential:
    @pytest.mark.parametrize("seed", range(30))
    def test_delete_matches_projection(self, seed):
        rng = random.Random(2000 + seed)
        n = rng.randint(2, 6)
        labels = [chr(ord("a") + i) for i in range(n)]
        t = random_tree(rng, labels)
        S = set(rng.sample(labels, rng.randint(1, n - 1)))
        want = {
            tuple(x for x in f if x not in S) for f in all_frontiers(t)
        }
        got = all_frontiers(delete_leaves(t, S))
        assert got == want


class TestReplace:
    @pytest.mark.parametrize("seed", range(30))
    def test_replace_after_reduce(self, seed):
        rng = random.Random(3000 + seed)
        n = rng.randint(3, 6)
        labels = [chr(ord("a") + i) for i in range(n)]
        t = random_tree(rng, labels)
        S = set(rng.sample(labels, rng.randint(1, n - 1)))
        r = reduce_consecutive(t, S)
        if r is None:
            pytest.skip("set not reducible in this tree")
        out = replace_run(r, S, leaf("X"))
        # every stored frontier of the result arises from one of the
        # reduced tree by collapsing the S-run to the one new leaf
        def collapse(f):
            res = []
            for x in f:
                if x in S:
                    if not res or res[-1] != "X":
                        res.append("X")
                else:
                    res.append(x)
            return tuple(res)

        want = {collapse(f) for f in all_frontiers(r)}
        assert all_frontiers(out) == want


class TestForceFrontier:
    @pytest.mark.parametrize("seed", range(40))
    def test_forced_frontier_is_stored_and_ordered(self, seed):
        rng = random.Random(4000 + seed)
        n = rng.randint(2, 6)
        labels = [chr(ord("a") + i) for i in range(n)]
        t = random_tree(rng, labels)
        # build rank blocks by reducing a random partition of a subset
        pool = rng.sample(labels, rng.randint(1, n))
        rng.shuffle(pool)
        blocks = []
        while pool:
            k = rng.randint(1, len(pool))
            blocks.append(pool[:k])
            pool = pool[k:]
        for b in blocks:
            t = reduce_consecutive(t, set(b))
            if t is None:
                pytest.skip("blocks not jointly reducible")
        stored = all_frontiers(t)
        for perm in itertools.permutations(range(len(blocks))):
            rank = {x: i for i, bi in enumerate(perm) for x in blocks[bi]}

            def ordered(f):
                keys = [rank[x] for x in f if x in rank]
                return keys == sorted(keys)

            realizable = any(ordered(f) for f in stored)
            try:
                f = force_frontier(t, rank)
            except AssertionError:
                assert not realizable
                continue
            assert realizable
            assert f in stored
            assert ordered(f)
