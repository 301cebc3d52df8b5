"""Unrooted cyclic PQ-trees over labelled slots.

A tree stores a set of cyclic orders of its leaves: P-nodes allow any
cyclic arrangement of their neighbors, Q-nodes fix the arrangement up to
reversal. Rooted nesting is just a storage convention; semantically the
parent occupies one slot in the cyclic ring around each internal node.

Provided operations: membership (pc_represents), exhaustive enumeration
(pc_enumerate) and synthesis of the canonical minimal tree from a full
set of orders (pc_from_orders). There is deliberately no incremental
reduce operation; nothing in the pipeline intersects constraints online.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class LabelMismatch(ValueError):
    pass


class LimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PCNode:
    kind: str  # "P", "Q" or "leaf"
    children: tuple["PCNode", ...] = ()
    label: str | None = None
    tag: str | None = None  # rigid-structure marker carried by some Q-nodes


CyclicPQTree = PCNode


def leaf(label: str) -> PCNode:
    return PCNode("leaf", (), label)


def pnode(*children) -> PCNode:
    return PCNode("P", tuple(_coerce(c) for c in children))


def qnode(*children, tag: str | None = None) -> PCNode:
    return PCNode("Q", tuple(_coerce(c) for c in children), None, tag)


def _coerce(c) -> PCNode:
    return c if isinstance(c, PCNode) else leaf(str(c))


def pc_leaves(t: PCNode) -> tuple[str, ...]:
    if t.kind == "leaf":
        return (t.label,)
    out: list[str] = []
    for c in t.children:
        out.extend(pc_leaves(c))
    return tuple(out)


def _min_rotation(seq: tuple) -> tuple:
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


@dataclass(frozen=True)
class CyclicOrder:
    """A cyclic sequence, stored as its lexicographically least rotation.

    Reversal produces a different CyclicOrder unless the sequence happens
    to be a palindrome up to rotation.
    """

    items: tuple[str, ...]

    @staticmethod
    def of(seq) -> "CyclicOrder":
        return CyclicOrder(_min_rotation(tuple(seq)))

    def reverse(self) -> "CyclicOrder":
        return CyclicOrder.of(tuple(reversed(self.items)))

    def __len__(self):
        return len(self.items)


def all_cyclic_orders(labels):
    """Every cyclic order of the label set, once each."""
    labels = sorted(labels)
    if not labels:
        return
    if len(labels) == 1:
        yield CyclicOrder.of(labels)
        return
    first, rest = labels[0], labels[1:]
    for perm in itertools.permutations(rest):
        yield CyclicOrder.of((first,) + perm)


def _splice_top(t: PCNode) -> PCNode:
    while t.kind != "leaf" and len(t.children) == 1:
        t = t.children[0]
    return t


def _runs(ids: list[int]) -> list[tuple[int, int, int]]:
    """Maximal runs of equal values as (value, start, end-exclusive)."""
    runs = []
    i = 0
    while i < len(ids):
        j = i
        while j < len(ids) and ids[j] == ids[i]:
            j += 1
        runs.append((ids[i], i, j))
        i = j
    return runs


def _linear_ok(node: PCNode, seq: tuple[str, ...]) -> bool:
    node = _splice_top(node)
    if node.kind == "leaf":
        return seq == (node.label,)
    owner: dict[str, int] = {}
    for i, c in enumerate(node.children):
        for lb in pc_leaves(c):
            owner[lb] = i
    ids = [owner[x] for x in seq]
    runs = _runs(ids)
    m = len(node.children)
    if len(runs) != m or {r[0] for r in runs} != set(range(m)):
        return False
    if node.kind == "Q":
        seq_ids = [r[0] for r in runs]
        if seq_ids != list(range(m)) and seq_ids != list(reversed(range(m))):
            return False
    return all(_linear_ok(node.children[v], seq[a:b]) for v, a, b in runs)


def pc_represents(t: PCNode, o: CyclicOrder) -> bool:
    """True iff the cyclic order is realizable by the tree."""
    labels = pc_leaves(t)
    if sorted(labels) != sorted(o.items):
        raise LabelMismatch(f"order over {sorted(o.items)}, tree over {sorted(labels)}")
    root = _splice_top(t)
    if root.kind == "leaf":
        return True
    owner: dict[str, int] = {}
    for i, c in enumerate(root.children):
        for lb in pc_leaves(c):
            owner[lb] = i
    seq = o.items
    n = len(seq)
    start = next((i for i in range(n) if owner[seq[i - 1]] != owner[seq[i]]), None)
    if start is None:
        return False  # m >= 2 children cannot share all leaves
    seq = seq[start:] + seq[:start]
    ids = [owner[x] for x in seq]
    runs = _runs(ids)
    m = len(root.children)
    if len(runs) != m or {r[0] for r in runs} != set(range(m)):
        return False
    if root.kind == "Q":
        ring = _min_rotation(tuple(r[0] for r in runs))
        fwd = _min_rotation(tuple(range(m)))
        bwd = _min_rotation(tuple(reversed(range(m))))
        if ring not in (fwd, bwd):
            return False
    return all(_linear_ok(root.children[v], seq[a:b]) for v, a, b in runs)


def _linear_emit(node: PCNode):
    node = _splice_top(node)
    if node.kind == "leaf":
        yield (node.label,)
        return
    if node.kind == "P":
        arrangements = itertools.permutations(node.children)
    else:
        arrangements = [node.children, tuple(reversed(node.children))]
    seen = set()
    for arr in arrangements:
        if arr in seen:
            continue
        seen.add(arr)
        for parts in itertools.product(*[_linear_emit(c) for c in arr]):
            yield sum(parts, ())


def pc_enumerate(t: PCNode, limit: int = 100000) -> set[CyclicOrder]:
    """The exact representation set; raises LimitExceeded beyond limit."""
    root = _splice_top(t)
    if root.kind == "leaf":
        return {CyclicOrder.of((root.label,))}
    out: set[CyclicOrder] = set()
    if root.kind == "P":
        arrangements = itertools.permutations(root.children)
    else:
        arrangements = [root.children, tuple(reversed(root.children))]
    for arr in arrangements:
        for parts in itertools.product(*[_linear_emit(c) for c in arr]):
            out.add(CyclicOrder.of(sum(parts, ())))
            if len(out) > limit:
                raise LimitExceeded(f"more than {limit} represented orders")
    return out


# ---------------------------------------------------------------------------
# canonical form


def format_pc(t: PCNode, with_tags: bool = False) -> str:
    if t.kind == "leaf":
        return t.label
    inner = ",".join(format_pc(c, with_tags) for c in t.children)
    tag = f"[{t.tag}]" if with_tags and t.tag else ""
    return f"{t.kind}{tag}({inner})"


def parse_pc(text: str) -> PCNode:
    pos = 0

    def parse() -> PCNode:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        head = text[start:pos].strip()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            children = [parse()]
            while text[pos] == ",":
                pos += 1
                children.append(parse())
            if text[pos] != ")":
                raise ValueError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            if head not in ("P", "Q"):
                raise ValueError(f"unknown node kind {head!r}")
            return PCNode(head, tuple(children))
        return leaf(head)

    node = parse()
    if pos != len(text.strip()):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return node


def _cleanup(node: PCNode, is_root: bool) -> PCNode:
    """Splice single-child nodes, merge a two-child root, fix tiny kinds."""
    if node.kind == "leaf":
        return node
    children = [_cleanup(c, False) for c in node.children]
    if len(children) == 1:
        return children[0]
    if is_root and len(children) == 2:
        host = next((c for c in children if c.kind != "leaf"), None)
        if host is not None:
            other = children[0] if children[1] is host else children[1]
            if host.kind == "Q":
                merged = PCNode("Q", (other,) + host.children, None, host.tag)
            else:
                merged = PCNode("P", host.children + (other,))
            return _cleanup(merged, True)
        return PCNode("P", tuple(children))
    kind = node.kind
    if len(children) + (0 if is_root else 1) <= 3:
        kind = "P"
    return PCNode(kind, tuple(children), None, node.tag if kind == "Q" else None)


def _reroot_min(t: PCNode) -> PCNode:
    """Re-root so the smallest leaf label hangs directly off the root.

    A rooted tree is only one way of storing the cyclic structure; this
    picks the storage that synthesis also produces, which makes canonical
    forms comparable across construction paths.
    """
    rings: dict[int, list] = {}
    kinds: dict[int, str] = {}
    tags: dict[int, str | None] = {}
    counter = itertools.count()

    def reg(node: PCNode, parent_ref) -> int:
        nid = next(counter)
        kinds[nid], tags[nid] = node.kind, node.tag
        items: list = [] if parent_ref is None else [parent_ref]
        rings[nid] = items
        for c in node.children:
            if c.kind == "leaf":
                items.append(("leaf", c.label))
            else:
                items.append(("node", reg(c, ("node", nid))))
        return nid

    reg(t, None)
    l0 = min(pc_leaves(t))
    host = next(nid for nid, ring in rings.items() if ("leaf", l0) in ring)

    def build(nid: int, parent_ref) -> PCNode:
        ring = rings[nid]
        if parent_ref is None:
            items = ring
        else:
            i = ring.index(parent_ref)
            items = ring[i + 1 :] + ring[:i]
        children = tuple(
            leaf(it[1]) if it[0] == "leaf" else build(it[1], ("node", nid))
            for it in items
        )
        return PCNode(kinds[nid], children, None, tags[nid])

    return build(host, None)


def _order_pass(node: PCNode, is_root: bool) -> PCNode:
    if node.kind == "leaf":
        return node
    children = [_order_pass(c, False) for c in node.children]
    kind = node.kind
    if len(children) + (0 if is_root else 1) <= 3:
        kind = "P"
    if kind == "P":
        return PCNode("P", tuple(sorted(children, key=format_pc)))
    keys = [format_pc(c) for c in children]
    if is_root:
        pairs = list(zip(keys, children))
        best = None
        for seq in (pairs, list(reversed(pairs))):
            for i in range(len(seq)):
                cand = seq[i:] + seq[:i]
                if best is None or [k for k, _ in cand] < [k for k, _ in best]:
                    best = cand
        children = [c for _, c in best]
    elif list(reversed(keys)) < keys:
        children = list(reversed(children))
    return PCNode("Q", tuple(children), None, node.tag)


def normalize_pc(t: PCNode) -> PCNode:
    """Semantics-preserving canonical form.

    Single-child nodes are spliced, nodes of cyclic degree three become
    P-nodes, a two-child root merges into an internal child, the tree is
    re-rooted at the smallest leaf and children are ordered automatically.
    Two trees with the same representation set and the same node kinds
    normalize to equal values. Tags on nodes demoted to P-nodes are lost.
    """
    t = _cleanup(t, True)
    if t.kind == "leaf" or all(c.kind == "leaf" for c in t.children):
        return _order_pass(t, True)
    return _order_pass(_reroot_min(t), True)


# ---------------------------------------------------------------------------
# synthesis


def _contiguous_everywhere(s: frozenset, positions: list[dict[str, int]]) -> bool:
    for pos in positions:
        ps = [pos[x] for x in s]
        if max(ps) - min(ps) != len(s) - 1:
            return False
    return True


def _crosses(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not a <= b and not b <= a


def pc_from_orders(orders) -> PCNode | None:
    """Synthesize the canonical tree whose representation set equals input.

    Returns None when no cyclic PQ-tree has exactly this set. The
    construction collects label subsets contiguous in every order, keeps
    the pairwise non-crossing ones as tree nodes, reads node kinds off the
    observed block arrangements and then verifies the result by full
    enumeration, so a non-None answer is always exact.
    """
    orders = set(orders)
    if not orders:
        return None
    labels = sorted(next(iter(orders)).items)
    n = len(labels)
    for o in orders:
        if sorted(o.items) != labels:
            raise LabelMismatch("orders range over different label sets")
    if n == 1:
        return leaf(labels[0])
    if n == 2:
        tree = pnode(labels[0], labels[1])
        return tree if orders == pc_enumerate(tree) else None

    l0 = labels[0]
    lins = []
    for o in orders:
        i = o.items.index(l0)
        lins.append(o.items[i:] + o.items[:i])
    positions = [{x: i for i, x in enumerate(lin)} for lin in lins]

    s0 = lins[0]
    candidates: set[frozenset] = set()
    for i in range(1, n):
        for j in range(i, n):
            s = frozenset(s0[i : j + 1])
            if _contiguous_everywhere(s, positions):
                candidates.add(s)
    cand_list = sorted(candidates, key=lambda s: (len(s), sorted(s)))
    strong = [
        s for s in cand_list if not any(_crosses(s, t) for t in candidates if t != s)
    ]
    nodes: set[frozenset] = {frozenset([x]) for x in labels}
    nodes.update(strong)
    full = frozenset(labels)
    nodes.add(full)

    by_size = sorted(nodes, key=len)
    kids: dict[frozenset, list[frozenset]] = {s: [] for s in nodes}
    for s in by_size:
        if s == full:
            continue
        parent = min(
            (t for t in nodes if s < t), key=len, default=None
        )
        kids[parent].append(s)

    def build(s: frozenset) -> PCNode:
        if len(s) == 1:
            return leaf(next(iter(s)))
        children = sorted(kids[s], key=lambda t: sorted(t))
        built = [build(t) for t in children]
        m = len(children)
        owner: dict[str, int] = {}
        for i, t in enumerate(children):
            for x in t:
                owner[x] = i
        observed: set[tuple[int, ...]] = set()
        for lin in lins:
            if s == full:
                ids = [owner[x] for x in lin]
                ring = tuple(v for v, _, _ in _runs(ids))
                observed.add(_min_rotation(ring))
            else:
                seg = [x for x in lin if x in s]
                ids = [owner[x] for x in seg]
                observed.add(tuple(v for v, _, _ in _runs(ids)))
        is_q = False
        base: tuple[int, ...] | None = None
        if m >= 2 and len(observed) <= 2:
            some = next(iter(observed))
            if s == full:
                rev = _min_rotation(tuple(reversed(some)))
                is_q = observed <= {some, rev}
            else:
                rev = tuple(reversed(some))
                is_q = observed <= {some, rev}
            base = some
        if is_q and len(set(base)) == m:
            ordered = [built[i] for i in base]
            return PCNode("Q", tuple(ordered))
        return PCNode("P", tuple(built))

    tree = normalize_pc(build(full))
    try:
        if pc_enumerate(tree, limit=len(orders)) != orders:
            return None
    except LimitExceeded:
        return None
    return tree
