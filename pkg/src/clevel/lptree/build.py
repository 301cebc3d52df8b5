"""Embedding representation for biconnected single-source level graphs.

build_lp_tree compresses the full set of level-planar rotation systems
into one reference embedding plus two kinds of recorded freedom:

* parallel structures: a pole pair whose split components may be
  reordered arbitrarily, verified by swapping member arcs in the
  reference embedding and re-testing realizability;
* rigid structures: maximal groups of orientation decisions that must
  flip together, discovered by mirroring split components and checking
  which ordered arcs reverse in lockstep.

Every vertex gets a cyclic PC-tree over its incident edges whose P-nodes
come from verified parallel structures and whose Q-nodes carry the tag
of their rigid structure; the stored child order is the reference
embedding, so reading a tree with no reversals reproduces it.

The probes either re-run the fixed-rotation planarity simulation
(structural mode) or consult the exhaustive drawing enumerator (oracle
mode, small instances only). Both modes share all surrounding code, so
agreement between them exercises exactly the probe primitive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..core import LevelGraph
from ..embedding import Rotation, canonical_rotation, mirror_rotation
from ..oracle.drawings import DEFAULT_BUDGET, edge_name, oracle_level_planar_embeddings
from ..pqtree import PCNode, format_pc, leaf, pnode, qnode
from .planarity import ScopeError, _require_scope, fixed_embedding_level_planar, level_planar_rotation

Edge = tuple[str, str]


@dataclass(frozen=True)
class ParallelStructure:
    poles: tuple[str, str]
    members: tuple[tuple[Edge, ...], ...]


@dataclass(frozen=True)
class RigidStructure:
    rho: str
    vertices: tuple[str, ...]


@dataclass(frozen=True)
class LPTree:
    graph: LevelGraph
    gamma: Rotation
    parallels: tuple[ParallelStructure, ...]
    rigids: tuple[RigidStructure, ...]
    trees: dict[str, PCNode]


# ---------------------------------------------------------------------------
# separation pairs and split components


def _cut_vertices(adj: dict[str, list[str]], skip: str) -> set[str]:
    """Articulation points of the graph minus one vertex."""
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    parent: dict[str, str | None] = {}
    out: set[str] = set()
    start = next(v for v in adj if v != skip)
    order = 0
    root_children = 0
    parent[start] = None
    disc[start] = low[start] = order
    order += 1
    stack = [(start, 0)]
    while stack:
        v, idx = stack[-1]
        nbrs = adj[v]
        if idx < len(nbrs):
            stack[-1] = (v, idx + 1)
            w = nbrs[idx]
            if w == skip:
                continue
            if w not in disc:
                parent[w] = v
                if v == start:
                    root_children += 1
                disc[w] = low[w] = order
                order += 1
                stack.append((w, 0))
            elif w != parent[v]:
                low[v] = min(low[v], disc[w])
        else:
            stack.pop()
            p = parent[v]
            if p is not None:
                low[p] = min(low[p], low[v])
                if p != start and low[v] >= disc[p]:
                    out.add(p)
    if root_children > 1:
        out.add(start)
    return out


def separation_pairs(g: LevelGraph) -> list[tuple[str, str]]:
    """All vertex pairs whose removal disconnects the graph."""
    adj = {v: list(g.adjacency[v]) for v in g.vertices}
    pairs = set()
    for u in g.vertices:
        for w in _cut_vertices(adj, u):
            pairs.add((u, w) if u < w else (w, u))
    return sorted(pairs)


@dataclass(frozen=True)
class _Member:
    edges: frozenset
    interior: frozenset
    arcs: dict  # pole -> frozenset of edge names at that pole

    def __hash__(self):
        return hash(self.edges)


def split_members(g: LevelGraph, pair: tuple[str, str]) -> list[_Member]:
    """Split components at a separation pair, direct edge included."""
    u, v = pair
    comp: dict[str, int] = {}
    nid = 0
    for w in g.vertices:
        if w in (u, v) or w in comp:
            continue
        stack = [w]
        comp[w] = nid
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y in (u, v) or y in comp:
                    continue
                comp[y] = nid
                stack.append(y)
        nid += 1
    groups: list[list[Edge]] = [[] for _ in range(nid)]
    direct: list[Edge] = []
    for a, b in g.edges:
        if {a, b} == {u, v}:
            direct.append((a, b))
            continue
        w = a if a not in (u, v) else b
        groups[comp[w]].append((a, b))
    members = []
    for edges in groups + ([direct] if direct else []):
        interior = frozenset(
            x for e in edges for x in e if x not in (u, v)
        )
        arcs = {}
        for pole in (u, v):
            arcs[pole] = frozenset(
                edge_name(g.levels, a, b) for a, b in edges if pole in (a, b)
            )
        members.append(_Member(frozenset(edges), interior, arcs))
    return members


# ---------------------------------------------------------------------------
# cyclic arc surgery on the reference embedding


def _arc_run(cyc: tuple, sub: frozenset) -> tuple[int, int]:
    """Start and length of sub as one cyclic run; asserts contiguity."""
    n = len(cyc)
    idx = {i for i, x in enumerate(cyc) if x in sub}
    assert len(idx) == len(sub), "arc members missing from the rotation"
    k = len(idx)
    if k == n:
        return 0, n
    starts = [i for i in idx if (i - 1) % n not in idx]
    assert len(starts) == 1, "split-component arc is not contiguous"
    s = starts[0]
    assert all((s + j) % n in idx for j in range(k))
    return s, k


def _is_arc(cyc: tuple, sub: frozenset) -> bool:
    try:
        _arc_run(cyc, sub)
        return True
    except AssertionError:
        return False


def _rotate_out(cyc: tuple, *subs) -> tuple:
    """Rotate so position 0 lies outside all given arcs."""
    united = frozenset().union(*subs)
    n = len(cyc)
    pivot = next(i for i in range(n) if cyc[i] not in united)
    return cyc[pivot:] + cyc[:pivot]


def _swap_arcs(cyc: tuple, a: frozenset, b: frozenset) -> tuple:
    cyc = _rotate_out(cyc, a, b)
    sa, la = _arc_run(cyc, a)
    sb, lb = _arc_run(cyc, b)
    if sa > sb:
        (sa, la), (sb, lb) = (sb, lb), (sa, la)
    assert sa + la <= sb, "arcs overlap"
    return (
        cyc[:sa]
        + cyc[sb : sb + lb]
        + cyc[sa + la : sb]
        + cyc[sa : sa + la]
        + cyc[sb + lb :]
    )


def _reverse_arc(cyc: tuple, a: frozenset) -> tuple:
    if len(a) >= len(cyc):
        return tuple(reversed(cyc))
    cyc = _rotate_out(cyc, a)
    s, k = _arc_run(cyc, a)
    return cyc[:s] + tuple(reversed(cyc[s : s + k])) + cyc[s + k :]


def _swap_move(gamma: Rotation, pair, ma: _Member, mb: _Member) -> Rotation:
    rot = dict(gamma)
    for pole in pair:
        rot[pole] = _swap_arcs(rot[pole], ma.arcs[pole], mb.arcs[pole])
    return rot


def _mirror_move(gamma: Rotation, pair, m: _Member) -> Rotation:
    rot = dict(gamma)
    for x in m.interior:
        rot[x] = tuple(reversed(rot[x]))
    for pole in pair:
        rot[pole] = _reverse_arc(rot[pole], m.arcs[pole])
    return rot


# ---------------------------------------------------------------------------
# construction


def _transitive_classes(count, feasible, contiguous):
    """Group 0..count-1 into exchange classes.

    A swap probe can succeed by accident: with thin arcs the swapped
    rotation may coincide with a reflection of the arrangement rather
    than witness a genuine in-place exchange. Genuine classes occupy one
    run of the reference ring and reach every member through contiguous
    steps, so only feasible pairs that form one run seed the classes.
    Within a class every pair must then be feasible outright.
    """
    ok = {}
    for i in range(count):
        for j in range(i + 1, count):
            ok[(i, j)] = feasible(i, j)
    comp = list(range(count))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for (i, j), good in ok.items():
        if good and contiguous([i, j]):
            comp[find(i)] = find(j)
    classes: dict[int, list[int]] = {}
    for i in range(count):
        classes.setdefault(find(i), []).append(i)
    out = sorted(classes.values(), key=min)
    for cls in out:
        for x in range(len(cls)):
            for y in range(x + 1, len(cls)):
                i, j = min(cls[x], cls[y]), max(cls[x], cls[y])
                assert ok[(i, j)], "exchange class is not a clique"
    return out


def _free_member_groups(pair, members, gamma, probe):
    """Maximal freely reorderable member groups at one pole pair.

    Groups are grown bottom-up: members whose arcs exchange at both
    poles coalesce, then the unions are probed against each other until
    nothing merges. Returns lists of lists of members, every list of
    length at least two.
    """
    items: list[list[_Member]] = [[m] for m in members]

    def arcs(item, pole):
        return frozenset().union(*[m.arcs[pole] for m in item])

    groups_out: list[list[list[_Member]]] = []

    def feasible(i, j):
        rot = dict(gamma)
        try:
            for pole in pair:
                rot[pole] = _swap_arcs(
                    rot[pole], arcs(items[i], pole), arcs(items[j], pole)
                )
        except AssertionError:
            return False
        return probe(rot)

    def one_run(cls):
        """Class union occupies one run of the ring at both poles."""
        return all(
            _is_arc(
                gamma[pole],
                frozenset().union(*[arcs(items[i], pole) for i in cls]),
            )
            for pole in pair
        )

    while len(items) > 2:
        # with two blocks left, swapping them only rotates the ring
        raw = _transitive_classes(len(items), feasible, one_run)
        classes = []
        for cls in raw:
            if len(cls) == 1 or one_run(cls):
                classes.append(cls)
            else:
                classes.extend([i] for i in cls)
        if all(len(c) == 1 for c in classes):
            break
        merged = []
        for cls in classes:
            if len(cls) >= 2:
                groups_out.append([items[i] for i in cls])
            merged.append([m for i in cls for m in items[i]])
        items = merged
    return groups_out


def _laminar_tree(full: frozenset, subsets: set[frozenset]):
    """Nest the subsets; returns {set: list of child sets}."""
    fam = {s for s in subsets if 1 < len(s) < len(full)}
    fam.add(full)
    flist = sorted(fam, key=lambda s: (len(s), sorted(s)))
    for i, s in enumerate(flist):
        for t in flist[i + 1 :]:
            x = s & t
            assert not x or x == s or x == t, "arc family is not laminar"
    ordered = sorted(fam, key=len)
    parent = {}
    for i, s in enumerate(ordered):
        for t in ordered[i + 1 :]:
            if s < t:
                parent[s] = t
                break
        else:
            assert s == full
    children = {s: [] for s in fam}
    for s, t in parent.items():
        children[t].append(s)
    # singleton leaves hang under the smallest covering set
    for x in full:
        best = min((s for s in fam if x in s), key=len)
        children[best].append(frozenset((x,)))
    return children


def _exchange_probe(v, sets_a, sets_b, gamma, prov, probe):
    """Can the two groups of sibling arcs at v trade places?

    Each arc must be the pole arc of a split component at a separation
    pair shared by every arc involved; the probe then swaps whole
    components at both poles. Without such a pair the exchange is
    treated as stuck.
    """

    def pair_choices(sets):
        have = None
        for c in sets:
            here = {p for p, _ in prov.get((v, c), ())}
            have = here if have is None else have & here
        return have or set()

    common = pair_choices(sets_a) & pair_choices(sets_b)
    for p in sorted(common):
        by_set = {}
        for c in list(sets_a) + list(sets_b):
            for q, m in prov[(v, c)]:
                if q == p:
                    by_set[c] = m
                    break
        mem_a = [by_set[c] for c in sets_a]
        mem_b = [by_set[c] for c in sets_b]
        if set(map(id, mem_a)) & set(map(id, mem_b)):
            continue
        rot = dict(gamma)
        try:
            for pole in p:
                arc_a = frozenset().union(*[m.arcs[pole] for m in mem_a])
                arc_b = frozenset().union(*[m.arcs[pole] for m in mem_b])
                rot[pole] = _swap_arcs(rot[pole], arc_a, arc_b)
        except AssertionError:
            continue
        if probe(rot):
            return True
    return False


def _group_children(v, kids, is_root, gamma, prov, probe):
    """Coalesce freely exchangeable children into nested P-groups.

    Returns builders: a builder is either a child leafset or a pair
    ("P", [builder, ...]). More than one builder left means the node
    itself keeps a fixed arrangement over them.
    """
    items = [{"sets": [k], "node": k} for k in kids]

    def feasible(i, j):
        return _exchange_probe(
            v, items[i]["sets"], items[j]["sets"], gamma, prov, probe
        )

    def one_run(cls):
        union = frozenset().union(*[s for i in cls for s in items[i]["sets"]])
        return _is_arc(gamma[v], union)

    while len(items) > 1:
        if is_root and len(items) == 2:
            break  # swapping the only two blocks of a ring rotates it
        raw = _transitive_classes(len(items), feasible, one_run)
        classes = []
        for cls in raw:
            if len(cls) == 1 or one_run(cls):
                classes.append(cls)
            else:
                classes.extend([i] for i in cls)
        if all(len(c) == 1 for c in classes):
            break
        merged = []
        for cls in classes:
            if len(cls) == 1:
                merged.append(items[cls[0]])
            else:
                merged.append(
                    {
                        "sets": [s for i in cls for s in items[i]["sets"]],
                        "node": ("P", [items[i]["node"] for i in cls]),
                    }
                )
        items = merged
    return [it["node"] for it in items]


def _build_vertex_tree(v, gamma_v, children_map, gamma, prov, probe) -> PCNode:
    """Materialize the PC-tree for one vertex from its laminar family."""
    full = frozenset(gamma_v)
    n = len(gamma_v)
    anchor = gamma_v[0]

    root_kids = children_map[full]
    if len(root_kids) == 2:
        inner = [c for c in root_kids if len(c) > 1]
        if inner:
            # the ring vertex next to the anchor leaf is the real root
            top = inner[0]
            rest = [c for c in root_kids if c != top]
            assert rest == [frozenset((anchor,))]
            children_map = dict(children_map)
            children_map[full] = rest + children_map.pop(top)

    def flat(builder):
        if isinstance(builder, frozenset):
            return builder
        out = frozenset()
        for b in builder[1]:
            out |= flat(b)
        return out

    def start_key(builder, base):
        return (_arc_run(gamma_v, flat(builder))[0] - base) % n

    def emit(builder, base) -> PCNode:
        if isinstance(builder, frozenset):
            return node_of(builder)
        subs = sorted(builder[1], key=lambda b: start_key(b, base))
        return pnode(*[emit(b, base) for b in subs])

    def node_of(s) -> PCNode:
        if len(s) == 1:
            (x,) = s
            return leaf(x)
        kids = children_map[s]
        is_root = s == full
        base = 0 if is_root else _arc_run(gamma_v, s)[0]
        ordered = sorted(kids, key=lambda c: (_arc_run(gamma_v, c)[0] - base) % n)
        if is_root and len(ordered) == 2:
            # a two-arc ring has no observable arrangement at all
            return pnode(*[node_of(c) for c in ordered])
        builders = _group_children(v, ordered, is_root, gamma, prov, probe)
        if len(builders) == 1:
            subs = sorted(builders[0][1], key=lambda b: start_key(b, base))
            return pnode(*[emit(b, base) for b in subs])
        parts = [
            emit(b, base)
            for b in sorted(builders, key=lambda b: start_key(b, base))
        ]
        if is_root and len(parts) == 2:
            return pnode(*parts)
        return qnode(*parts)

    return node_of(full)


def _node_index(tree: PCNode):
    """Map each internal node's leafset to the node, walking once."""
    out = {}

    def rec(t):
        if t.kind == "leaf":
            return frozenset((t.label,))
        ls = frozenset()
        for c in t.children:
            ls |= rec(c)
        out[ls] = t
        return ls

    rec(tree)
    return out


def _retag(tree: PCNode, tags: dict) -> PCNode:
    """Rebuild the tree attaching rigid-structure tags to Q-nodes."""

    def rec(t):
        if t.kind == "leaf":
            return t, frozenset((t.label,))
        kids = []
        ls = frozenset()
        for c in t.children:
            k, cls = rec(c)
            kids.append(k)
            ls |= cls
        if t.kind == "Q" and ls in tags:
            return qnode(*kids, tag=tags[ls]), ls
        return PCNode(t.kind, tuple(kids)), ls

    return rec(tree)[0]


def build_lp_tree(
    g: LevelGraph,
    gamma: Rotation | None = None,
    mode: str = "structural",
    budget=DEFAULT_BUDGET,
) -> LPTree:
    """Compute the embedding representation of a level-planar instance.

    Raises ScopeError outside the supported class and ValueError when
    the graph has no level-planar drawing at all.
    """
    _require_scope(g)
    if gamma is None:
        gamma = level_planar_rotation(g)
        if gamma is None:
            raise ValueError("graph is not level planar")

    if mode == "structural":
        cache: dict[tuple, bool] = {}

        def probe(rot: Rotation) -> bool:
            key = canonical_rotation(rot)
            if key not in cache:
                cache[key] = fixed_embedding_level_planar(g, rot)
            return cache[key]

    elif mode == "oracle":
        known = {
            canonical_rotation(e)
            for e in oracle_level_planar_embeddings(g, budget)
        }

        def probe(rot: Rotation) -> bool:
            return canonical_rotation(rot) in known

    else:
        raise ValueError(f"unknown mode {mode!r}")

    assert probe(gamma), "reference embedding rejected by the probe"

    pairs = separation_pairs(g)
    members_of = {p: split_members(g, p) for p in pairs}
    for p, members in members_of.items():
        for m in members:
            for pole in p:
                assert m.arcs[pole], "split component misses a pole"

    # parallel structures via swap probes
    parallels: list[ParallelStructure] = []
    for p in pairs:
        members = members_of[p]
        if len(members) < 3:
            continue
        for group in _free_member_groups(p, members, gamma, probe):
            member_edges = tuple(
                tuple(sorted(frozenset().union(*[m.edges for m in item])))
                for item in group
            )
            parallels.append(ParallelStructure(p, member_edges))

    # pole arcs are ring bipartitions: the family stores the side that
    # avoids the anchor edge, while provenance keeps the component's own
    # arc so exchanges stay visible even when that arc holds the anchor
    fam: dict[str, set] = {v: set() for v in g.vertices}
    prov: dict[tuple, list] = {}
    for p in pairs:
        for m in members_of[p]:
            for pole in p:
                whole = frozenset(gamma[pole])
                raw = m.arcs[pole]
                assert raw < whole, "split component owns every pole edge"
                side = raw if gamma[pole][0] not in raw else whole - raw
                if len(side) > 1:
                    fam[pole].add(side)
                prov.setdefault((pole, raw), []).append((p, m))

    trees: dict[str, PCNode] = {}
    node_sets: dict[str, dict] = {}
    for v in g.vertices:
        full = frozenset(gamma[v])
        children_map = _laminar_tree(full, fam[v])
        trees[v] = _build_vertex_tree(
            v, gamma[v], children_map, gamma, prov, probe
        )
        node_sets[v] = _node_index(trees[v])

    # orientation-carrying node instances
    omega: list[tuple[str, frozenset]] = []
    for v in sorted(g.vertices):
        for ls, node in sorted(node_sets[v].items(), key=lambda kv: sorted(kv[0])):
            if node.kind != "Q":
                continue
            assert ls != frozenset(gamma[v]) or len(node.children) >= 3
            omega.append((v, ls))

    # synchronization classes from feasible mirror moves, with the
    # orientation changes read back off the untagged trees
    columns = {w: [1] for w in omega}  # the global mirror flips everything
    assert probe(mirror_rotation(gamma)), "mirror of the reference embedding"
    witnesses = [mirror_rotation(gamma)]
    for p in pairs:
        for m in members_of[p]:
            rot = _mirror_move(gamma, p, m)
            if not probe(rot):
                continue
            effect = {}
            for v in g.vertices:
                ori = _match_orientations(trees[v], rot[v])
                assert ori is not None, "feasible move escapes the trees"
                for ls2, d in ori.items():
                    effect[(v, ls2)] = 1 if d < 0 else 0
            if not any(effect.get(w, 0) for w in omega):
                continue
            witnesses.append(rot)
            for w in omega:
                columns[w].append(effect.get(w, 0))

    classes: dict[tuple, list] = {}
    for w in omega:
        classes.setdefault(tuple(columns[w]), []).append(w)

    rigids: list[RigidStructure] = []
    tags: dict[str, dict] = {v: {} for v in g.vertices}
    ordered = sorted(
        classes.values(),
        key=lambda ws: min((w[0], tuple(sorted(w[1]))) for w in ws),
    )
    for i, ws in enumerate(ordered, start=1):
        rho = f"rho{i}"
        verts = tuple(sorted({w[0] for w in ws}))
        rigids.append(RigidStructure(rho, verts))
        for v, ls in ws:
            tags[v][ls] = rho

    trees = {v: _retag(trees[v], tags[v]) for v in g.vertices}
    lp = LPTree(g, gamma, tuple(parallels), tuple(rigids), trees)
    assert is_level_planar_embedding(gamma, lp)
    for rot in witnesses:
        # every planar embedding the probes produced must be admitted
        assert is_level_planar_embedding(rot, lp), "witness left the representation"
    return lp


# ---------------------------------------------------------------------------
# membership


def _match_orientations(tree: PCNode, cyc: tuple):
    """Per-Q-node reading directions of one rotation, or None.

    Maps each Q-node's leafset to +1 when its children appear in stored
    order and -1 when reversed. A root ring of two blocks has no
    direction and is never reported.
    """
    n = len(cyc)
    pos = {x: i for i, x in enumerate(cyc)}
    out: dict[frozenset, int] = {}

    def leafset_of(t):
        if t.kind == "leaf":
            return frozenset((t.label,))
        ls = frozenset()
        for c in t.children:
            ls |= leafset_of(c)
        return ls

    def arc(t):
        """(start, length) of the node's leaves, or None if torn."""
        ls = leafset_of(t)
        idx = {pos[x] for x in ls}
        k = len(idx)
        if k == n:
            return 0, n
        starts = [i for i in idx if (i - 1) % n not in idx]
        if len(starts) != 1:
            return None
        s = starts[0]
        if not all((s + j) % n in idx for j in range(k)):
            return None
        return s, k

    def rec(t) -> bool:
        if t.kind == "leaf":
            return True
        spans = []
        for c in t.children:
            a = arc(c)
            if a is None:
                return False
            spans.append(a)
        m = len(spans)
        ls = leafset_of(t)
        if len(ls) == n:
            # root: the cyclic sequence of child blocks by start position
            # must be a rotation of the stored ring or of its reversal
            ring = tuple(sorted(range(m), key=lambda i: spans[i][0]))
            fwd = bwd = False
            for shift in range(m):
                rolled = ring[shift:] + ring[:shift]
                if rolled == tuple(range(m)):
                    fwd = True
                if tuple(reversed(rolled)) == tuple(range(m)):
                    bwd = True
            if t.kind == "Q":
                if not (fwd or bwd):
                    return False
                if m > 2:
                    out[ls] = 1 if fwd else -1
        else:
            base = arc(t)[0]
            seq = tuple(
                sorted(range(m), key=lambda i: (spans[i][0] - base) % n)
            )
            if t.kind == "Q":
                if seq == tuple(range(m)):
                    out[ls] = 1
                elif seq == tuple(reversed(range(m))):
                    out[ls] = -1
                else:
                    return False
        return all(rec(c) for c in t.children)

    # the root of a vertex tree may be a trivial leaf
    if tree.kind == "leaf":
        return out if cyc == (tree.label,) else None
    if not rec(tree):
        return None
    return out


def _block_cycle(ring: tuple, blocks: list[frozenset]):
    """Cyclic label sequence of the blocks around the ring, or None.

    Every block must be one contiguous run; leftover edges are labeled
    as a single filler block and must be contiguous too.
    """
    lab = {}
    for i, b in enumerate(blocks):
        for x in b:
            lab[x] = i
    seq = [lab.get(x, -1) for x in ring]
    n = len(seq)
    runs = [i for i in range(n) if seq[i] != seq[i - 1]]
    if not runs:
        return (seq[0],)
    out = tuple(seq[i] for i in runs)
    want = len(blocks) + (1 if any(s == -1 for s in seq) else 0)
    if len(out) != want:
        return None  # some block is torn apart
    return out


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(b[i:] + b[:i] == a for i in range(len(b)))


def is_level_planar_embedding(e: Rotation, lp: LPTree) -> bool:
    """Does the representation admit this rotation system?"""
    g = lp.graph
    if set(e) != set(g.vertices):
        raise ValueError("rotation system does not cover the vertex set")
    orient: dict[str, int] = {}
    for v in g.vertices:
        want = sorted(edge_name(g.levels, v, w) for w in g.adjacency[v])
        if sorted(e[v]) != want:
            raise ValueError(f"rotation at {v} does not match its edges")
        got = _match_orientations(lp.trees[v], e[v])
        if got is None:
            return False
        tree_nodes = _node_index(lp.trees[v]) if lp.trees[v].kind != "leaf" else {}
        for ls, node in tree_nodes.items():
            if node.kind == "Q" and node.tag is not None and ls in got:
                rho = node.tag
                dirn = got[ls]
                if orient.setdefault(rho, dirn) != dirn:
                    return False
    # members of a parallel structure appear in opposite cyclic orders
    # around its two poles
    for par in lp.parallels:
        cycles = []
        for pole in par.poles:
            blocks = [
                frozenset(
                    edge_name(g.levels, a, b)
                    for a, b in mem
                    if pole in (a, b)
                )
                for mem in par.members
            ]
            cyc = _block_cycle(e[pole], blocks)
            if cyc is None:
                return False
            cycles.append(cyc)
        if not _cyclic_equal(cycles[0], tuple(reversed(cycles[1]))):
            return False
    return True


def level_pq_trees(lp: LPTree) -> dict[str, PCNode]:
    """Per-vertex cyclic trees; stored child order is the default."""
    return dict(lp.trees)


# ---------------------------------------------------------------------------
# serialization


def dump_lp_tree(lp: LPTree) -> dict:
    return {
        "gamma": {v: list(r) for v, r in sorted(lp.gamma.items())},
        "parallels": [
            {
                "poles": list(p.poles),
                "members": [[list(e) for e in mem] for mem in p.members],
            }
            for p in lp.parallels
        ],
        "rigids": [
            {"rho": r.rho, "vertices": list(r.vertices)} for r in lp.rigids
        ],
        "trees": {
            v: format_pc(t, with_tags=True) for v, t in sorted(lp.trees.items())
        },
    }


def lp_tree_to_json(lp: LPTree) -> str:
    return json.dumps(dump_lp_tree(lp), indent=2, sort_keys=True)
