"""Rooted linear PQ-trees driving the level-by-level sweep.

These trees store sets of leaf sequences read left to right: P-node
children may be permuted freely, Q-node children are fixed up to
reversal. Leaves carry arbitrary hashable labels (the sweep uses
oriented edge tuples). reduce_consecutive restricts the stored set to
sequences where a given leaf set appears consecutively; it rebuilds the
affected part of the tree instead of patching templates in place.

Unlike the cyclic trees in pqtree.py these are linear: the left end of
the frontier is meaningful, so a tree and its mirror image are distinct
objects even though they often store the same set.
"""

from __future__ import annotations

# Nodes are plain tuples so they hash and print for free:
#   ("leaf", label) | ("P", children) | ("Q", children)

LEAF = "leaf"


class _Fail(Exception):
    pass


def leaf(label):
    return (LEAF, label)


def pnode(children):
    return ("P", tuple(children))


def qnode(children):
    return ("Q", tuple(children))


def leafset(t) -> frozenset:
    if t[0] == LEAF:
        return frozenset((t[1],))
    out = set()
    for c in t[1]:
        out |= leafset(c)
    return frozenset(out)


def frontier(t) -> tuple:
    """The default left-to-right leaf sequence."""
    if t[0] == LEAF:
        return (t[1],)
    out = []
    for c in t[1]:
        out.extend(frontier(c))
    return tuple(out)


def all_frontiers(t, limit: int = 200000) -> set:
    """Every sequence the tree stores. Test helper, exponential."""
    import itertools

    def emit(node):
        if node[0] == LEAF:
            yield (node[1],)
            return
        kind, ch = node
        if kind == "P":
            arrangements = itertools.permutations(ch)
        else:
            arrangements = {ch, tuple(reversed(ch))}
        for arr in arrangements:
            for parts in itertools.product(*[list(emit(c)) for c in arr]):
                yield sum(parts, ())

    out = set()
    for f in emit(t):
        out.add(f)
        if len(out) > limit:
            raise RuntimeError("frontier set too large")
    return out


def _clean(t):
    if t[0] == LEAF:
        return t
    kind, ch = t
    ch = tuple(_clean(c) for c in ch)
    if len(ch) == 1:
        return ch[0]
    if kind == "Q" and len(ch) == 2:
        kind = "P"
    return (kind, ch)


def _classify(ch, S):
    """Split children into full / empty / partial lists."""
    full, empty, part = [], [], []
    for c in ch:
        ls = leafset(c)
        if ls <= S:
            full.append(c)
        elif not (ls & S):
            empty.append(c)
        else:
            part.append(c)
    return full, empty, part


def _group(nodes):
    if not nodes:
        return None
    if len(nodes) == 1:
        return nodes[0]
    return ("P", tuple(nodes))


def _spine(t, S):
    """Flatten a partial subtree into a node list, full side first.

    The concatenated frontiers of the result cover exactly leafset(t),
    every stored arrangement keeps the S-part a prefix, and no stored
    arrangement is lost beyond that restriction.
    """
    ls = leafset(t)
    if ls <= S or not (ls & S):
        return [t]
    if t[0] == LEAF:
        raise AssertionError("leaf cannot be partial")
    kind, ch = t
    full, empty, part = _classify(ch, S)
    if kind == "P":
        if len(part) > 1:
            raise _Fail
        mid = _spine(part[0], S) if part else []
        out = []
        if full:
            out.append(_group(full))
        out.extend(mid)
        if empty:
            out.append(_group(empty))
        return out
    # Q: children must read as fulls, then at most one partial, then empties,
    # in the stored order or its reversal.
    for seq in (ch, tuple(reversed(ch))):
        full, empty, part = _classify(seq, S)
        if len(part) > 1:
            continue
        k = len(full)
        if list(seq[:k]) != full:
            continue
        rest = list(seq[k:])
        if part:
            if rest[:1] != part:
                continue
            rest = rest[1:]
        if rest != empty:
            continue
        out = list(seq[:k])
        if part:
            out.extend(_spine(part[0], S))
        out.extend(empty)
        return out
    raise _Fail


def _reduce_at(t, S):
    ls = leafset(t)
    if ls <= S:
        return t
    kind, ch = t
    holders = [i for i, c in enumerate(ch) if leafset(c) & S]
    if len(holders) == 1:
        i = holders[0]
        sub = _reduce_at(ch[i], S)
        return (kind, ch[:i] + (sub,) + ch[i + 1 :])

    full, empty, part = _classify(ch, S)
    if kind == "P":
        if len(part) > 2:
            raise _Fail
        seq = []
        if part:
            seq.extend(reversed(_spine(part[0], S)))
        mid = _group(full)
        if mid is not None:
            seq.append(mid)
        if len(part) == 2:
            seq.extend(_spine(part[1], S))
        block = seq[0] if len(seq) == 1 else ("Q", tuple(seq))
        if empty:
            return ("P", tuple(empty) + (block,))
        return block

    # Q-node: scan for  empties, [partial], fulls, [partial], empties.
    out = []
    phase = 0  # 0 leading empties, 1 fulls, 2 trailing empties
    for c in ch:
        cls = leafset(c)
        if cls <= S:
            if phase == 2:
                raise _Fail
            phase = 1
            out.append(c)
        elif not (cls & S):
            if phase == 1:
                phase = 2
            out.append(c)
        else:
            if phase == 0:
                out.extend(reversed(_spine(c, S)))
                phase = 1
            elif phase == 1:
                out.extend(_spine(c, S))
                phase = 2
            else:
                raise _Fail
    return ("Q", tuple(out))


def reduce_consecutive(t, S):
    """Restrict to frontiers where S is consecutive; None if impossible."""
    S = frozenset(S)
    if not S:
        return t
    try:
        return _clean(_reduce_at(t, S))
    except _Fail:
        return None


def delete_leaves(t, S):
    """Drop the given leaves; None when nothing remains."""
    S = frozenset(S)

    def rec(node):
        if node[0] == LEAF:
            return None if node[1] in S else node
        kind, ch = node
        kept = tuple(c for c in (rec(x) for x in ch) if c is not None)
        if not kept:
            return None
        return (kind, kept)

    t = rec(t)
    return None if t is None else _clean(t)


def replace_run(t, S, new):
    """Substitute the consecutive leaf set S (post-reduce) by one node."""
    S = frozenset(S)

    def rec(node):
        if leafset(node) == S:
            return new
        if node[0] == LEAF:
            raise AssertionError("replace target not found")
        kind, ch = node
        holders = [i for i, c in enumerate(ch) if leafset(c) & S]
        if len(holders) == 1:
            i = holders[0]
            return (kind, ch[:i] + (rec(ch[i]),) + ch[i + 1 :])
        # S spans several children: after a successful reduce this only
        # happens as a full run inside a Q-node.
        if kind != "Q":
            raise AssertionError("split run outside a Q-node")
        covered = [i for i in holders if leafset(ch[i]) <= S]
        if covered != holders or covered != list(range(covered[0], covered[-1] + 1)):
            raise AssertionError("replace target not a clean run")
        got = frozenset().union(*[leafset(ch[i]) for i in covered])
        if got != S:
            raise AssertionError("run does not cover the target")
        return ("Q", ch[: covered[0]] + (new,) + ch[covered[-1] + 1 :])

    return _clean(rec(t))


def force_frontier(t, rank):
    """Commit one concrete frontier compatible with a rank map.

    rank maps some leaves to sortable keys; the returned sequence lists
    all leaves of every ranked key in non-decreasing key order. Leaves
    sharing a key always form one consecutive block in the reduced trees
    this runs on, and unranked leaves may go anywhere. Raises
    AssertionError when the tree cannot honor the map, which the sweep
    guarantees never happens.
    """

    def span(node):
        ks = [rank[x] for x in leafset(node) if x in rank]
        return (min(ks), max(ks)) if ks else None

    def rec(node):
        if node[0] == LEAF:
            return [node[1]]
        kind, ch = node
        spans = [span(c) for c in ch]
        if kind == "P":
            ranked = sorted(
                (i for i in range(len(ch)) if spans[i] is not None),
                key=lambda i: spans[i],
            )
            for a, b in zip(ranked, ranked[1:]):
                # ties are fine: each child emits its keys in sorted order,
                # so touching spans still concatenate non-decreasingly
                if spans[a][1] > spans[b][0]:
                    raise AssertionError("P-node children overlap in rank")
            order = ranked + [i for i in range(len(ch)) if spans[i] is None]
        else:
            ranked = [i for i in range(len(ch)) if spans[i] is not None]
            fwd = all(
                spans[a][1] <= spans[b][0] for a, b in zip(ranked, ranked[1:])
            )
            rev = all(
                spans[a][0] >= spans[b][1] for a, b in zip(ranked, ranked[1:])
            )
            if fwd:
                order = range(len(ch))
            elif rev:
                order = range(len(ch) - 1, -1, -1)
            else:
                raise AssertionError("Q-node children violate rank order")
        out = []
        for i in order:
            out.extend(rec(ch[i]))
        return out

    return tuple(rec(t))
