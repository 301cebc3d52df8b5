"""Fixed-embedding clustered planarity by exhaustive augmentation search.

An embedding (rotation system) of a connected graph is clustered planar
iff augmentation edges between same-cluster vertices can be inserted into
faces so that every non-root cluster induces a connected subgraph and
some face F0 of the full embedding can serve as outer face: for each
cluster, all outside vertices must live in the cluster-subembedding face
that contains F0. The search inserts one edge at a time, only ever trying
edges that merge two components of some cluster, and memoizes failed
states by canonical rotation.
"""

from __future__ import annotations

from ..core import ClusterTree
from ..embedding import Multigraph, Rotation, canonical_rotation, faces
from .drawings import DEFAULT_BUDGET, Budget


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _cluster_components(g: Multigraph, tree: ClusterTree, cluster: str) -> int:
    mem = tree.members[cluster]
    dsu = _DSU(mem)
    for _, (u, v) in g.edges.items():
        if u in mem and v in mem:
            dsu.union(u, v)
    return len({dsu.find(v) for v in mem})


def _viable_outer_faces(g: Multigraph, rot: Rotation, tree: ClusterTree, connected):
    """Indices of whole-embedding faces usable as the outer face.

    Only clusters that are already connected constrain the choice; their
    sub-embedding faces arise from merging whole faces across every edge
    that is not internal to the cluster. Returns None when some cluster
    puts outsiders into more than one sub-face, which no future edge
    insertion can repair.
    """
    fl = faces(g, rot)
    dart_face: dict[tuple[str, str], int] = {}
    vertex_face: dict[str, int] = {}
    for i, orbit in enumerate(fl):
        for dart in orbit:
            dart_face[dart] = i
            vertex_face.setdefault(dart[1], i)
    ok = [True] * len(fl)
    all_vs = set(g.vertices)
    for c in tree.clusters:
        if c == tree.root or not connected.get(c, False):
            continue
        mem = tree.members[c]
        outside = all_vs - mem
        if not outside:
            continue
        dsu = _DSU(range(len(fl)))
        for eid, (u, v) in g.edges.items():
            if u in mem and v in mem:
                continue
            dsu.union(dart_face[(eid, u)], dart_face[(eid, v)])
        targets = {dsu.find(vertex_face[v]) for v in outside}
        if len(targets) > 1:
            return None
        target = targets.pop()
        for i in range(len(fl)):
            if dsu.find(i) != target:
                ok[i] = False
    result = [i for i, good in enumerate(ok) if good]
    return result if result else None


def _insert_edge(g: Multigraph, rot: Rotation, u, v, eu, ev, aug_id) -> tuple[Multigraph, Rotation]:
    """Insert a new edge through the face corner before eu at u and ev at v."""
    edges = dict(g.edges)
    edges[aug_id] = (u, v)

    def ins(r: tuple, before: str) -> tuple:
        i = r.index(before)
        return r[:i] + (aug_id,) + r[i:]

    rot2 = dict(rot)
    rot2[u] = ins(rot[u], eu)
    rot2[v] = ins(rot[v], ev)
    return Multigraph(g.vertices, edges), rot2


def is_embedding_c_planar(
    g: Multigraph, rot: Rotation, tree: ClusterTree, budget=DEFAULT_BUDGET
) -> bool:
    if len(g.components()) != 1:
        raise ValueError("fixed-embedding cluster planarity needs a connected graph")
    b = Budget.ensure(budget)
    nonroot = [c for c in tree.clusters if c != tree.root]
    failed: set[tuple] = set()

    def candidate_pairs(g2: Multigraph):
        adj = {frozenset(e) for e in g2.edges.values()}
        comp_cache: dict[str, _DSU] = {}

        def dsu_of(c: str) -> _DSU:
            if c not in comp_cache:
                mem = tree.members[c]
                d = _DSU(mem)
                for _, (x, y) in g2.edges.items():
                    if x in mem and y in mem:
                        d.union(x, y)
                comp_cache[c] = d
            return comp_cache[c]

        out = []
        vs = sorted(g2.vertices)
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                if frozenset((u, v)) in adj:
                    continue
                lca = tree.lowest_common(u, v)
                if lca == tree.root:
                    continue
                c = lca
                merges = False
                while c is not None and c != tree.root:
                    d = dsu_of(c)
                    if d.find(u) != d.find(v):
                        merges = True
                        break
                    c = tree.parent[c]
                if merges:
                    out.append((u, v))
        return out

    def dfs(g2: Multigraph, rot2: Rotation) -> bool:
        b.spend()
        key = canonical_rotation(rot2)
        if key in failed:
            return False
        connected = {c: _cluster_components(g2, tree, c) == 1 for c in nonroot}
        if _viable_outer_faces(g2, rot2, tree, connected) is None:
            failed.add(key)
            return False
        if all(connected.values()):
            return True
        fl = faces(g2, rot2)
        for u, v in candidate_pairs(g2):
            aug_id = f"aug:{min(u, v)}:{max(u, v)}"
            for orbit in fl:
                u_darts = [d for d in orbit if d[1] == u]
                v_darts = [d for d in orbit if d[1] == v]
                for eu, _ in u_darts:
                    for ev, _ in v_darts:
                        g3, rot3 = _insert_edge(g2, rot2, u, v, eu, ev, aug_id)
                        if dfs(g3, rot3):
                            return True
        failed.add(key)
        return False

    return dfs(g, rot)


def oracle_uclp(cg, budget=DEFAULT_BUDGET) -> bool:
    """Ground truth for unrestricted clustered level planarity.

    True iff some level-planar rotation system of the graph is clustered
    planar. Requires a connected graph.
    """
    from ..embedding import level_multigraph
    from .drawings import oracle_level_planar_embeddings

    b = Budget.ensure(budget)
    g = cg.graph
    multi, _ = level_multigraph(g.levels, g.edges)
    for rot in oracle_level_planar_embeddings(g, b):
        if is_embedding_c_planar(multi, rot, cg.clusters, b):
            return True
    return False
