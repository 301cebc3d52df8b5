"""Core data model: level graphs, cluster trees, validation and normalization.

A level graph assigns every vertex to an integer level from a contiguous
range 1..k. Edges must join vertices on distinct levels. A cluster tree is
a rooted tree whose leaves are exactly the graph vertices; inner nodes are
clusters. The pair of both is a ClGraph.

Instances are immutable. All functions here are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

# structured error codes raised by validation
SAME_LEVEL_EDGE = "SAME_LEVEL_EDGE"
DANGLING_LEAF = "DANGLING_LEAF"
MISSING_LEAF = "MISSING_LEAF"
NONCONTIGUOUS_LEVELS = "NONCONTIGUOUS_LEVELS"
DUPLICATE_EDGE = "DUPLICATE_EDGE"
DUPLICATE_LEAF = "DUPLICATE_LEAF"
EMPTY_CLUSTER = "EMPTY_CLUSTER"
BAD_FORMAT = "BAD_FORMAT"


class InvalidInstance(ValueError):
    """Raised when an instance violates a structural invariant.

    The ``code`` attribute carries one of the module-level error constants
    so callers can dispatch without parsing the message.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class LevelGraph:
    """Undirected graph with a level assignment.

    ``levels`` maps vertex id to its level (1-based). ``edges`` is a tuple
    of vertex id pairs. The type itself tolerates same-level edges so that
    normalization can run on raw input; validation rejects them.
    """

    levels: dict[str, int]
    edges: tuple[tuple[str, str], ...]

    @staticmethod
    def build(levels: dict[str, int], edges) -> "LevelGraph":
        return LevelGraph(dict(levels), tuple((str(u), str(v)) for u, v in edges))

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.levels)

    @property
    def num_levels(self) -> int:
        return max(self.levels.values()) if self.levels else 0

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.levels}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(ns) for v, ns in adj.items()}

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self.adjacency[v]

    def up_neighbors(self, v: str) -> list[str]:
        lv = self.levels[v]
        return [w for w in self.adjacency[v] if self.levels[w] > lv]

    def down_neighbors(self, v: str) -> list[str]:
        lv = self.levels[v]
        return [w for w in self.adjacency[v] if self.levels[w] < lv]

    def level_vertices(self, i: int) -> list[str]:
        return [v for v, lv in self.levels.items() if lv == i]

    def oriented_edges(self) -> list[tuple[str, str]]:
        """Edges as (lower endpoint, upper endpoint) pairs."""
        out = []
        for u, v in self.edges:
            if self.levels[u] <= self.levels[v]:
                out.append((u, v))
            else:
                out.append((v, u))
        return out

    @property
    def is_proper(self) -> bool:
        return all(abs(self.levels[u] - self.levels[v]) == 1 for u, v in self.edges)

    def sources(self) -> list[str]:
        """Vertices without a neighbor on a strictly lower level."""
        return [v for v in self.levels if not self.down_neighbors(v)]


@dataclass(frozen=True)
class ClusterTree:
    """Rooted tree of clusters; graph vertices hang off clusters as leaves.

    ``children`` maps a cluster id to its child cluster ids, ``leaves`` maps
    a cluster id to the vertex ids attached directly to it. Every cluster id
    appears as a key in both maps.
    """

    root: str
    children: dict[str, tuple[str, ...]]
    leaves: dict[str, tuple[str, ...]]

    @staticmethod
    def build(root: str, children: dict, leaves: dict) -> "ClusterTree":
        ids = set(children) | set(leaves) | {root}
        ch = {c: tuple(children.get(c, ())) for c in ids}
        lv = {c: tuple(leaves.get(c, ())) for c in ids}
        return ClusterTree(root, ch, lv)

    @property
    def clusters(self) -> tuple[str, ...]:
        """All cluster ids in preorder."""
        out, stack = [], [self.root]
        while stack:
            c = stack.pop()
            out.append(c)
            stack.extend(reversed(self.children[c]))
        return tuple(out)

    @cached_property
    def parent(self) -> dict[str, str | None]:
        par: dict[str, str | None] = {self.root: None}
        for c in self.clusters:
            for ch in self.children[c]:
                par[ch] = c
        return par

    @cached_property
    def depth(self) -> dict[str, int]:
        d = {self.root: 0}
        for c in self.clusters:
            if c != self.root:
                d[c] = d[self.parent[c]] + 1
        return d

    @cached_property
    def cluster_of(self) -> dict[str, str]:
        """Vertex id -> the cluster holding it as a direct leaf."""
        owner: dict[str, str] = {}
        for c in self.clusters:
            for v in self.leaves[c]:
                owner[v] = c
        return owner

    @cached_property
    def members(self) -> dict[str, frozenset[str]]:
        """Cluster id -> all vertices in its subtree."""
        mem: dict[str, frozenset[str]] = {}
        for c in reversed(self.clusters):
            acc = set(self.leaves[c])
            for ch in self.children[c]:
                acc |= mem[ch]
            mem[c] = frozenset(acc)
        return mem

    def ancestors(self, c: str) -> list[str]:
        """Chain from c up to and including the root."""
        out = [c]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def lowest_common(self, u: str, v: str) -> str:
        """Deepest cluster containing both vertices."""
        a, b = self.cluster_of[u], self.cluster_of[v]
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return a

    def nontrivial(self, total_vertices: int) -> list[str]:
        """Non-root clusters with between 1 and total-1 members."""
        return [
            c
            for c in self.clusters
            if c != self.root and 1 <= len(self.members[c]) < total_vertices
        ]


@dataclass(frozen=True)
class ClGraph:
    graph: LevelGraph
    clusters: ClusterTree


@dataclass(frozen=True)
class InstanceStats:
    vertex_count: int
    edge_count: int
    level_count: int
    source_count: int
    is_biconnected: bool
    non_trivial_cluster_count: int
    d: int
    delta: int

    def to_dict(self) -> dict:
        return {
            "vertexCount": self.vertex_count,
            "edgeCount": self.edge_count,
            "levelCount": self.level_count,
            "sourceCount": self.source_count,
            "isBiconnected": self.is_biconnected,
            "nonTrivialClusterCount": self.non_trivial_cluster_count,
            "d": self.d,
            "delta": self.delta,
        }


def root_only_clustering(vertices) -> ClusterTree:
    return ClusterTree.build("root", {}, {"root": tuple(vertices)})


def flat_clustering(vertices, groups: dict) -> ClusterTree:
    """Root plus one child cluster per entry of ``groups``.

    ``groups`` maps cluster id to an iterable of vertex ids; remaining
    vertices become direct leaves of the root.
    """
    grouped = set()
    for vs in groups.values():
        grouped.update(vs)
    children = {"root": tuple(groups)}
    leaves = {"root": tuple(v for v in vertices if v not in grouped)}
    for cid, vs in groups.items():
        leaves[cid] = tuple(vs)
    return ClusterTree.build("root", children, leaves)


def check_clgraph(cg: ClGraph) -> list[tuple[str, str]]:
    """Collect invariant violations as (code, message) pairs."""
    issues: list[tuple[str, str]] = []
    g, t = cg.graph, cg.clusters

    seen_edges = set()
    for u, v in g.edges:
        if u not in g.levels or v not in g.levels:
            issues.append((BAD_FORMAT, f"edge ({u},{v}) references unknown vertex"))
            continue
        if g.levels[u] == g.levels[v]:
            issues.append((SAME_LEVEL_EDGE, f"edge ({u},{v}) joins level {g.levels[u]} to itself"))
        key = frozenset((u, v))
        if len(key) == 1:
            issues.append((DUPLICATE_EDGE, f"self loop at {u}"))
        elif key in seen_edges:
            issues.append((DUPLICATE_EDGE, f"edge ({u},{v}) repeated"))
        seen_edges.add(key)

    if g.levels:
        used = set(g.levels.values())
        if used != set(range(1, max(used) + 1)):
            issues.append((NONCONTIGUOUS_LEVELS, f"levels used: {sorted(used)}"))

    seen_leaves: set[str] = set()
    for c in t.clusters:
        if c != t.root and not t.members[c]:
            issues.append((EMPTY_CLUSTER, f"cluster {c} has no vertices"))
        for v in t.leaves[c]:
            if v in seen_leaves:
                issues.append((DUPLICATE_LEAF, f"vertex {v} attached twice"))
            seen_leaves.add(v)
            if v not in g.levels:
                issues.append((DANGLING_LEAF, f"cluster {c} lists unknown vertex {v}"))
    for v in g.levels:
        if v not in seen_leaves:
            issues.append((MISSING_LEAF, f"vertex {v} missing from cluster tree"))
    return issues


def require_valid(cg: ClGraph) -> ClGraph:
    issues = check_clgraph(cg)
    if issues:
        code, msg = issues[0]
        raise InvalidInstance(code, msg)
    return cg


def _parse_cluster_obj(obj, children: dict, leaves: dict) -> str:
    if not isinstance(obj, dict) or "id" not in obj:
        raise InvalidInstance(BAD_FORMAT, "cluster object needs an 'id'")
    cid = str(obj["id"])
    if cid in children:
        raise InvalidInstance(BAD_FORMAT, f"cluster id {cid} repeated")
    children[cid] = tuple(
        _parse_cluster_obj(ch, children, leaves) for ch in obj.get("children", [])
    )
    leaves[cid] = tuple(str(v) for v in obj.get("leaves", []))
    return cid


def validate_clgraph(data: dict) -> ClGraph:
    """Parse a raw instance dict and validate every invariant.

    Expected shape::

        {"levels": k,
         "vertices": [{"id": "...", "level": n}, ...],
         "edges": [["u", "v"], ...],
         "clusters": {"id": "...", "children": [...], "leaves": [...]}}

    Raises InvalidInstance with a structured code on the first violation.
    """
    if not isinstance(data, dict):
        raise InvalidInstance(BAD_FORMAT, "instance must be an object")
    try:
        levels = {str(v["id"]): int(v["level"]) for v in data["vertices"]}
        edges = tuple((str(u), str(v)) for u, v in data["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstance(BAD_FORMAT, f"malformed instance: {exc}") from exc
    if len(levels) != len(data["vertices"]):
        raise InvalidInstance(BAD_FORMAT, "duplicate vertex id")

    children: dict[str, tuple[str, ...]] = {}
    leaves: dict[str, tuple[str, ...]] = {}
    root = _parse_cluster_obj(data.get("clusters", {"id": "root", "leaves": list(levels)}), children, leaves)
    cg = ClGraph(LevelGraph(levels, edges), ClusterTree(root, children, leaves))

    declared = data.get("levels")
    if declared is not None and levels and int(declared) != max(levels.values()):
        raise InvalidInstance(
            NONCONTIGUOUS_LEVELS,
            f"declared {declared} levels but max level used is {max(levels.values())}",
        )
    return require_valid(cg)


def _cluster_to_obj(t: ClusterTree, c: str) -> dict:
    obj: dict = {"id": c}
    if t.children[c]:
        obj["children"] = [_cluster_to_obj(t, ch) for ch in t.children[c]]
    obj["leaves"] = list(t.leaves[c])
    return obj


def clgraph_to_json(cg: ClGraph) -> dict:
    g = cg.graph
    return {
        "levels": g.num_levels,
        "vertices": [{"id": v, "level": lv} for v, lv in g.levels.items()],
        "edges": [[u, v] for u, v in g.edges],
        "clusters": _cluster_to_obj(cg.clusters, cg.clusters.root),
    }


def load_clgraph(path: str) -> ClGraph:
    with open(path) as fh:
        return validate_clgraph(json.load(fh))


def save_clgraph(cg: ClGraph, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(clgraph_to_json(cg), fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# normalization


def properize(g: LevelGraph) -> tuple[LevelGraph, dict[str, tuple[str, str]]]:
    """Subdivide long edges so every edge spans adjacent levels.

    Returns the proper graph and a map from each dummy vertex to the
    original edge it subdivides. Contracting the dummies recovers the
    input graph.
    """
    levels = dict(g.levels)
    edges: list[tuple[str, str]] = []
    dummies: dict[str, tuple[str, str]] = {}
    for u, v in g.edges:
        lo, hi = (u, v) if g.levels[u] <= g.levels[v] else (v, u)
        span = levels[hi] - levels[lo]
        if span <= 1:
            edges.append((u, v))
            continue
        prev = lo
        for lv in range(levels[lo] + 1, levels[hi]):
            name = f"{lo}~{hi}~{lv}"
            while name in levels:
                name += "'"
            levels[name] = lv
            dummies[name] = (u, v)
            edges.append((prev, name))
            prev = name
        edges.append((prev, hi))
    return LevelGraph(levels, tuple(edges)), dummies


def contract_dummies(g: LevelGraph, dummies: dict[str, tuple[str, str]]) -> LevelGraph:
    """Inverse of properize: remove dummies, restore the original edges."""
    levels = {v: lv for v, lv in g.levels.items() if v not in dummies}
    edges = []
    restored = set()
    for u, v in g.edges:
        if u in dummies or v in dummies:
            orig = dummies[u] if u in dummies else dummies[v]
            if orig not in restored:
                restored.add(orig)
                edges.append(orig)
        else:
            edges.append((u, v))
    return LevelGraph(levels, tuple(edges))


def eliminate_same_level_edges(g: LevelGraph) -> tuple[LevelGraph, dict[str, int]]:
    """Remove same-level edges by spreading vertices over inserted levels.

    Per level, the subgraph of same-level edges is properly colored; color
    class 0 keeps the base level and class j moves to the j-th inserted
    level directly above it. Higher levels shift up accordingly. Original
    cross-level edges keep their orientation because a full level boundary
    separates consecutive original levels.

    Returns the new graph and a map from vertex id to its original level.
    """
    if not g.levels:
        return g, {}
    k = g.num_levels
    color: dict[str, int] = {}
    extra: dict[int, int] = {}
    for i in range(1, k + 1):
        here = [v for v in g.levels if g.levels[v] == i]
        adj = {v: [] for v in here}
        for u, v in g.edges:
            if g.levels.get(u) == i and g.levels.get(v) == i and u != v:
                adj[u].append(v)
                adj[v].append(u)
        used = 0
        for v in here:
            taken = {color[w] for w in adj[v] if w in color}
            c = 0
            while c in taken:
                c += 1
            color[v] = c
            used = max(used, c + 1)
        extra[i] = max(used - 1, 0)

    base: dict[int, int] = {}
    offset = 0
    for i in range(1, k + 1):
        base[i] = i + offset
        offset += extra[i]
    new_levels = {v: base[g.levels[v]] + color[v] for v in g.levels}
    return LevelGraph(new_levels, g.edges), {v: g.levels[v] for v in g.levels}


# ---------------------------------------------------------------------------
# statistics


def _is_biconnected(g: LevelGraph) -> bool:
    """Connected with no cut vertex; single vertices do not count."""
    verts = g.vertices
    n = len(verts)
    if n < 2:
        return False
    adj = g.adjacency
    start = verts[0]
    # iterative DFS computing discovery times and low links
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    parent: dict[str, str | None] = {start: None}
    order = 0
    root_children = 0
    stack: list[tuple[str, int]] = [(start, 0)]
    disc[start] = low[start] = order
    order += 1
    while stack:
        v, idx = stack[-1]
        if idx < len(adj[v]):
            stack[-1] = (v, idx + 1)
            w = adj[v][idx]
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
                    return False
    if len(disc) != n:
        return False
    return root_children <= 1


def boundary_edge_count(cg: ClGraph, cluster: str) -> int:
    """Edges with exactly one endpoint inside the cluster."""
    mem = cg.clusters.members[cluster]
    return sum(1 for u, v in cg.graph.edges if (u in mem) != (v in mem))


def structural_stats(cg: ClGraph) -> InstanceStats:
    g, t = cg.graph, cg.clusters
    n = len(g.levels)
    per_cluster = [boundary_edge_count(cg, c) for c in t.clusters if c != t.root]
    return InstanceStats(
        vertex_count=n,
        edge_count=len(g.edges),
        level_count=g.num_levels,
        source_count=len(g.sources()),
        is_biconnected=_is_biconnected(g),
        non_trivial_cluster_count=len(t.nontrivial(n)),
        d=sum(per_cluster),
        delta=max(per_cluster, default=0),
    )
