import itertools
import math
import random

import pytest

from clevel.pqtree import (
    CyclicOrder,
    LabelMismatch,
    LimitExceeded,
    all_cyclic_orders,
    format_pc,
    leaf,
    normalize_pc,
    parse_pc,
    pc_enumerate,
    pc_from_orders,
    pc_leaves,
    pc_represents,
    pnode,
    qnode,
)


def co(*items):
    return CyclicOrder.of(items)


class TestRepresents:
    def test_single_p_node_all_cyclic_orders(self):
        t = pnode("1", "2", "3")
        assert pc_represents(t, co("1", "2", "3"))
        assert pc_represents(t, co("1", "3", "2"))

    def test_single_q_node(self):
        t = qnode("1", "2", "3", "4")
        assert pc_represents(t, co("1", "2", "3", "4"))
        assert pc_represents(t, co("1", "4", "3", "2"))
        assert not pc_represents(t, co("1", "3", "2", "4"))

    def test_label_mismatch(self):
        with pytest.raises(LabelMismatch):
            pc_represents(pnode("1", "2"), co("1", "3"))

    def test_nested_matches_enumeration(self):
        t = pnode("a", qnode("b", "c", "d"), "e")
        expect = pc_enumerate(t)
        for o in all_cyclic_orders(pc_leaves(t)):
            assert pc_represents(t, o) == (o in expect)


class TestEnumerate:
    def test_p_node_counts(self):
        assert len(pc_enumerate(pnode("1", "2", "3"))) == 2
        assert len(pc_enumerate(pnode("1", "2", "3", "4"))) == 6
        for n in range(2, 6):
            t = pnode(*[str(i) for i in range(n)])
            assert len(pc_enumerate(t)) == math.factorial(n - 1)

    def test_q_node_counts(self):
        assert len(pc_enumerate(qnode("1", "2", "3", "4"))) == 2
        assert len(pc_enumerate(qnode("1", "2", "3"))) == 2

    def test_p_with_two_q_children_vs_filter(self):
        t = pnode(qnode("a", "b"), qnode("c", "d"))
        got = pc_enumerate(t)
        brute = {o for o in all_cyclic_orders("abcd") if pc_represents(t, o)}
        assert got == brute

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            pc_enumerate(pnode(*"abcdef"), limit=3)

    def test_representation_sets_reversal_closed(self):
        trees = [
            pnode("a", "b", "c", "d"),
            qnode("a", "b", "c", "d", "e"),
            pnode(qnode("a", "b", "c"), "d", qnode("e", "f")),
            qnode(pnode("a", "b", "c"), "d", leaf("e")),
        ]
        for t in trees:
            s = pc_enumerate(t)
            assert {o.reverse() for o in s} == s


class TestFormatParse:
    def test_round_trip(self):
        t = pnode("a", "b", qnode("c", "d", "e"))
        assert format_pc(t) == "P(a,b,Q(c,d,e))"
        assert parse_pc(format_pc(t)) == t

    def test_parse_leaf(self):
        assert parse_pc("x") == leaf("x")

    def test_normalize_degree_three_q_becomes_p(self):
        t = qnode("a", "b", "c")
        assert normalize_pc(t) == pnode("a", "b", "c")

    def test_normalize_two_child_root_merges(self):
        t = pnode(leaf("a"), qnode("b", "c", "d", "e"))
        n = normalize_pc(t)
        assert n.kind == "Q"
        assert set(pc_leaves(n)) == {"a", "b", "c", "d", "e"}
        assert pc_enumerate(n) == pc_enumerate(t)

    def test_normalize_preserves_semantics_random(self):
        rng = random.Random(11)
        labels = list("abcdef")

        def random_tree(lbls):
            if len(lbls) == 1:
                return leaf(lbls[0])
            if len(lbls) == 2 or rng.random() < 0.4:
                return pnode(*lbls) if rng.random() < 0.5 else qnode(*lbls)
            cut = rng.randrange(1, len(lbls))
            parts = [random_tree(lbls[:cut]), random_tree(lbls[cut:])]
            extra = []
            return (pnode if rng.random() < 0.5 else qnode)(*(parts + extra))

        for _ in range(40):
            rng.shuffle(labels)
            t = random_tree(list(labels))
            assert pc_enumerate(normalize_pc(t)) == pc_enumerate(t)


class TestSynthesis:
    def test_all_cyclic_orders_gives_p(self):
        for n in (3, 4, 5):
            labels = [str(i) for i in range(n)]
            t = pc_from_orders(set(all_cyclic_orders(labels)))
            assert t is not None
            assert t.kind == "P"
            assert all(c.kind == "leaf" for c in t.children)

    def test_order_and_reverse_gives_q(self):
        o = co("1", "2", "3", "4", "5")
        t = pc_from_orders({o, o.reverse()})
        assert t is not None
        assert t.kind == "Q"
        assert pc_enumerate(t) == {o, o.reverse()}

    def test_two_level_round_trip(self):
        t = normalize_pc(qnode("a", "b", pnode("c", "d")))
        orders = pc_enumerate(t)
        assert len(orders) == 4
        assert pc_from_orders(orders) == t

    def test_round_trip_random_trees(self):
        rng = random.Random(5)
        pool = list("abcdefg")

        def random_tree(lbls):
            if len(lbls) == 1:
                return leaf(lbls[0])
            k = rng.randint(2, min(4, len(lbls)))
            cuts = sorted(rng.sample(range(1, len(lbls)), k - 1))
            parts = []
            prev = 0
            for c in list(cuts) + [len(lbls)]:
                parts.append(random_tree(lbls[prev:c]))
                prev = c
            return (pnode if rng.random() < 0.5 else qnode)(*parts)

        for _ in range(30):
            n = rng.randint(3, 6)
            lbls = pool[:n]
            rng.shuffle(lbls)
            t = normalize_pc(random_tree(list(lbls)))
            orders = pc_enumerate(t)
            assert pc_from_orders(orders) == t

    def test_unrepresentable_set(self):
        orders = {co("1", "2", "3", "4"), co("1", "3", "2", "4")}
        assert pc_from_orders(orders) is None

    def test_non_reversal_closed_set(self):
        assert pc_from_orders({co("1", "2", "3", "4", "5")}) is None

    def test_two_labels(self):
        t = pc_from_orders({co("a", "b")})
        assert t is not None
        assert set(pc_leaves(t)) == {"a", "b"}

    def test_singleton(self):
        assert pc_from_orders({co("a")}) == leaf("a")
