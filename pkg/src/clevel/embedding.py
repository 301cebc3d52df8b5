"""Rotation systems on multigraphs, face traversal and Euler planarity.

An embedding of a graph on an orientable surface is captured purely
combinatorially as a rotation system: a cyclic order of incident edge ids
around every vertex. Tracing dart orbits yields the faces; the Euler
formula per connected component decides whether the rotation system is
realizable in the plane.

Self-loops are not supported (a rotation over edge ids cannot tell the
two loop ends apart); parallel edges are fine because every edge carries
its own id.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import networkx as nx

# rotation system: vertex id -> cyclic tuple of incident edge ids
Rotation = dict[str, tuple[str, ...]]
# dart: (edge id, tail vertex)
Dart = tuple[str, str]


@dataclass(frozen=True)
class Multigraph:
    """Vertices plus id-labelled edges, parallel edges allowed."""

    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, str]]

    def __post_init__(self):
        for eid, (u, v) in self.edges.items():
            if u == v:
                raise ValueError(f"self loop {eid} at {u}")

    @staticmethod
    def build(vertices, edges: dict) -> "Multigraph":
        return Multigraph(tuple(vertices), {str(e): (u, v) for e, (u, v) in edges.items()})

    @cached_property
    def incident(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for eid, (u, v) in self.edges.items():
            inc[u].append(eid)
            inc[v].append(eid)
        return {v: tuple(es) for v, es in inc.items()}

    def degree(self, v: str) -> int:
        return len(self.incident[v])

    def other(self, eid: str, v: str) -> str:
        a, b = self.edges[eid]
        return b if v == a else a

    def components(self) -> list[list[str]]:
        seen: set[str] = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp, queue = [], [start]
            seen.add(start)
            while queue:
                v = queue.pop()
                comp.append(v)
                for eid in self.incident[v]:
                    w = self.other(eid, v)
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(comp)
        return comps


def level_multigraph(levels: dict[str, int], edges) -> tuple[Multigraph, dict[str, tuple[str, str]]]:
    """Wrap a simple level graph as a Multigraph with readable edge ids.

    Edge ids are "lower|upper". Returns the multigraph and the id->pair map.
    """
    named = {}
    for u, v in edges:
        lo, hi = (u, v) if levels[u] <= levels[v] else (v, u)
        named[f"{lo}|{hi}"] = (lo, hi)
    return Multigraph(tuple(levels), named), named


def check_rotation(g: Multigraph, rot: Rotation) -> None:
    """Assert that rot is a full rotation system for g."""
    if set(rot) != set(g.vertices):
        raise ValueError("rotation vertex set mismatch")
    for v in g.vertices:
        if sorted(rot[v]) != sorted(g.incident[v]):
            raise ValueError(f"rotation at {v} is not a permutation of incident edges")


def faces(g: Multigraph, rot: Rotation) -> list[tuple[Dart, ...]]:
    """Dart orbits of the rotation system.

    The successor of a dart entering v along e continues with the next
    edge after e in the rotation at v. Components without edges contribute
    no orbits; face counting handles them separately.
    """
    pos: dict[tuple[str, str], int] = {}
    for v in g.vertices:
        for i, e in enumerate(rot[v]):
            pos[(v, e)] = i
    orbits = []
    seen: set[Dart] = set()
    for eid, (a, b) in g.edges.items():
        for tail in (a, b):
            start = (eid, tail)
            if start in seen:
                continue
            orbit = []
            dart = start
            while dart not in seen:
                seen.add(dart)
                orbit.append(dart)
                e, tail_v = dart
                head = g.other(e, tail_v)
                nxt = rot[head][(pos[(head, e)] + 1) % len(rot[head])]
                dart = (nxt, head)
            orbits.append(tuple(orbit))
    return orbits


def euler_genus(g: Multigraph, rot: Rotation) -> int:
    """Sum of component genera; zero exactly for planar rotation systems."""
    comp_of: dict[str, int] = {}
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    v_cnt = [len(c) for c in comps]
    e_cnt = [0] * len(comps)
    f_cnt = [0] * len(comps)
    for eid, (a, _) in g.edges.items():
        e_cnt[comp_of[a]] += 1
    for orbit in faces(g, rot):
        f_cnt[comp_of[orbit[0][1]]] += 1
    total = 0
    for i in range(len(comps)):
        if e_cnt[i] == 0:
            continue  # single vertex: sphere
        genus2 = 2 - v_cnt[i] + e_cnt[i] - f_cnt[i]
        total += genus2 // 2
    return total


def is_planar_rotation(g: Multigraph, rot: Rotation) -> bool:
    return euler_genus(g, rot) == 0


def mirror_rotation(rot: Rotation) -> Rotation:
    return {v: tuple(reversed(es)) for v, es in rot.items()}


def _min_cyclic(seq: tuple[str, ...]) -> tuple[str, ...]:
    if not seq:
        return seq
    best = seq
    for i in range(1, len(seq)):
        cand = seq[i:] + seq[:i]
        if cand < best:
            best = cand
    return best


def canonical_rotation(rot: Rotation) -> tuple:
    """Hashable normal form: per vertex the lexicographically least shift.

    Mirror images are deliberately kept distinct; a drawing and its
    reflection count as different embeddings throughout.
    """
    return tuple((v, _min_cyclic(rot[v])) for v in sorted(rot))


def planar_rotation_of(g: Multigraph) -> Rotation | None:
    """Some planar rotation system for g, or None if g is not planar.

    Every edge is subdivided once so the auxiliary graph is simple even in
    the presence of parallel edges, then a standard planarity test supplies
    the embedding.
    """
    aux = nx.Graph()
    for v in g.vertices:
        aux.add_node(("v", v))
    for eid, (u, v) in g.edges.items():
        aux.add_edge(("v", u), ("e", eid))
        aux.add_edge(("e", eid), ("v", v))
    ok, emb = nx.check_planarity(aux)
    if not ok:
        return None
    rot: Rotation = {}
    for v in g.vertices:
        node = ("v", v)
        order = []
        for nb in emb.neighbors_cw_order(node) if g.degree(v) else []:
            order.append(nb[1])
        rot[v] = tuple(order)
    return rot
