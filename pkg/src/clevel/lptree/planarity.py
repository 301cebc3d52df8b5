"""Level-planarity for biconnected single-source level graphs.

level_planar_rotation sweeps the properized graph level by level,
keeping a linear PQ-tree over the edges crossing the current boundary.
Each vertex merges its incoming edges (a reduce), then either replaces
them by its outgoing fan or, for a sink, drops them. The graph is level
planar exactly when no reduce fails; a successful sweep is replayed
top-down to commit one concrete drawing, whose rotation system is
returned.

fixed_embedding_level_planar decides whether one given rotation system
is realizable by some level drawing. The rotation of every vertex except
the source forces the left-to-right order of the next boundary, so the
simulation only branches over where the source's cyclic fan is cut open.
"""

from __future__ import annotations

from ..core import LevelGraph, _is_biconnected, properize
from ..embedding import Rotation
from ..oracle.drawings import LevelDrawing, edge_name, rotations_from_drawing
from .sweep import (
    delete_leaves,
    force_frontier,
    leaf,
    leafset,
    pnode,
    reduce_consecutive,
    replace_run,
)


class ScopeError(ValueError):
    """Instance outside the supported class (biconnected, one source)."""


def _require_scope(g: LevelGraph) -> None:
    srcs = g.sources()
    if len(srcs) != 1:
        raise ScopeError(f"need exactly one source, found {len(srcs)}")
    if not _is_biconnected(g):
        raise ScopeError("graph is not biconnected")


def _in_edges(proper: LevelGraph, v: str) -> frozenset:
    return frozenset((w, v) for w in proper.down_neighbors(v))


def _out_node(proper: LevelGraph, v: str):
    ups = sorted(proper.up_neighbors(v))
    if not ups:
        return None
    if len(ups) == 1:
        return leaf((v, ups[0]))
    return pnode([leaf((v, u)) for u in ups])


def _sweep(proper: LevelGraph):
    """Run the reduce/replace sweep; snapshots per level or None."""
    k = proper.num_levels
    (s,) = proper.level_vertices(1)
    tree = _out_node(proper, s)
    snaps = []
    for j in range(2, k + 1):
        verts = sorted(proper.level_vertices(j))
        for v in verts:
            tree = reduce_consecutive(tree, _in_edges(proper, v))
            if tree is None:
                return None
        snaps.append((j, tree))
        for v in verts:
            ins = _in_edges(proper, v)
            node = _out_node(proper, v)
            if node is None:
                tree = delete_leaves(tree, ins)
            else:
                tree = replace_run(tree, ins, node)
        if tree is None and j < k:
            raise AssertionError("boundary emptied below the top level")
    return snaps


def _run_order(edges, end: int) -> tuple[str, ...]:
    """Vertex order read off contiguous runs of one endpoint."""
    order: list[str] = []
    seen = set()
    for e in edges:
        v = e[end]
        if not order or order[-1] != v:
            if v in seen:
                raise AssertionError("endpoint run is split")
            seen.add(v)
            order.append(v)
    return tuple(order)


def _extract_drawing(proper: LevelGraph, snaps) -> LevelDrawing:
    """Replay the snapshots top-down, committing one admissible drawing."""
    k = proper.num_levels
    (s,) = proper.level_vertices(1)
    orders: list[tuple[str, ...] | None] = [None] * k
    orders[0] = (s,)
    jk, top = snaps[-1]
    assert jk == k
    edges = force_frontier(top, {})
    orders[k - 1] = _run_order(edges, 1)
    for idx in range(len(snaps) - 2, -1, -1):
        j, tree = snaps[idx]
        # order the level-j vertices that continue upward like their
        # outgoing fans appear at the boundary above
        pi = _run_order(edges, 0)
        pos = {w: i for i, w in enumerate(pi)}
        rank = {}
        for e in leafset(tree):
            if e[1] in pos:
                rank[e] = pos[e[1]]
        edges = force_frontier(tree, rank)
        orders[j - 1] = _run_order(edges, 1)
    return LevelDrawing(tuple(orders))


def _assert_valid(proper: LevelGraph, d: LevelDrawing) -> None:
    for i in range(proper.num_levels):
        assert sorted(d.orders[i]) == sorted(proper.level_vertices(i + 1))
    pos = d.positions
    by_level: dict[int, list[tuple[int, int]]] = {}
    for u, v in proper.oriented_edges():
        by_level.setdefault(proper.levels[u], []).append((pos[u][1], pos[v][1]))
    for segs in by_level.values():
        segs.sort()
        for i, (a, b) in enumerate(segs):
            for c, e in segs[i + 1 :]:
                if c == a:
                    continue
                assert not (b > e), "extracted drawing has a crossing"


def level_planar_rotation(g: LevelGraph) -> Rotation | None:
    """One level-planar rotation system of g, or None.

    Raises ScopeError unless g is biconnected with a single source.
    """
    _require_scope(g)
    proper, dummies = properize(g)
    snaps = _sweep(proper)
    if snaps is None:
        return None
    drawing = _extract_drawing(proper, snaps)
    _assert_valid(proper, drawing)
    return rotations_from_drawing(g, proper, dummies, drawing)


# ---------------------------------------------------------------------------
# feasibility of one fixed rotation system


def _fan_split(g: LevelGraph, rot: Rotation, v: str):
    """Split rot[v] into (ups left-to-right, downs left-to-right).

    Returns None when the upward and downward edges do not occupy two
    contiguous arcs of the cyclic order, which no level drawing realizes.
    """
    lv = g.levels[v]
    other = {edge_name(g.levels, v, w): w for w in g.adjacency[v]}
    seq = rot[v]
    flags = [g.levels[other[e]] > lv for e in seq]
    n = len(seq)
    if all(flags):
        return tuple(reversed(seq)), ()
    if not any(flags):
        return (), seq
    starts = [i for i in range(n) if flags[i] != flags[i - 1]]
    if len(starts) != 2:
        return None
    a, b = starts
    first = [seq[i] for i in range(a, b)]
    second = [seq[i % n] for i in range(b, a + n)]
    if flags[a]:
        up_run, down_run = first, second
    else:
        up_run, down_run = second, first
    return tuple(reversed(up_run)), tuple(down_run)


def _is_rotation_of(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    bb = b + b
    return any(bb[i : i + len(a)] == a for i in range(len(b)))


def fixed_embedding_level_planar(g: LevelGraph, rot: Rotation) -> bool:
    """Does some level drawing of g induce exactly this rotation system?"""
    srcs = g.sources()
    if len(srcs) != 1:
        raise ScopeError(f"need exactly one source, found {len(srcs)}")
    (s,) = srcs
    if set(rot) != set(g.vertices):
        raise ValueError("rotation system does not cover the vertex set")
    for v in g.vertices:
        want = sorted(edge_name(g.levels, v, w) for w in g.adjacency[v])
        if sorted(rot[v]) != want:
            raise ValueError(f"rotation at {v} does not match its edges")
    if len(g.vertices) == 1:
        return True

    proper, dummies = properize(g)
    k = proper.num_levels

    # per-edge chains through the dummies
    chain: dict[str, list[str]] = {}
    for e in g.oriented_edges():
        chain[edge_name(g.levels, *e)] = [e[0], e[1]]
    for d, (u, v) in dummies.items():
        chain[edge_name(g.levels, u, v)].insert(-1, d)
    for e, cn in chain.items():
        cn.sort(key=lambda x: proper.levels[x])
    nxt = {}
    orig_of = {}
    for e, cn in chain.items():
        for a, b in zip(cn, cn[1:]):
            nxt[a] = b
            orig_of[(a, b)] = e

    fans = {}
    for v in g.vertices:
        split = _fan_split(g, rot, v)
        if split is None:
            return False
        fans[v] = split

    def simulate(src_fan) -> bool:
        edges = [(chain[e][0], chain[e][1]) for e in src_fan]
        for j in range(1, k):
            runs: list[tuple[str, list]] = []
            seen = set()
            for seg in edges:
                w = seg[1]
                if runs and runs[-1][0] == w:
                    runs[-1][1].append(seg)
                else:
                    if w in seen:
                        return False
                    seen.add(w)
                    runs.append((w, [seg]))
            for w, segs in runs:
                if w in dummies:
                    continue
                observed = tuple(orig_of[seg] for seg in segs)
                ups, downs = fans[w]
                if ups:
                    if observed != downs:
                        return False
                elif not _is_rotation_of(observed, rot[w]):
                    return False
            if j + 1 == k:
                break
            nxt_edges = []
            for w, segs in runs:
                if w in dummies:
                    nxt_edges.append((w, nxt[w]))
                    continue
                for e in fans[w][0]:
                    cn = chain[e]
                    nxt_edges.append((cn[0], cn[1]))
            edges = nxt_edges
        return True

    base = rot[s]
    for i in range(len(base)):
        cut = base[i:] + base[:i]
        if simulate(tuple(reversed(cut))):
            return True
    return False
