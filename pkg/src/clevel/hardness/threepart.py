"""Reduction from 3-Partition to clustered level planarity on 5 levels.

An instance asks whether 3m values, each strictly between B/4 and B/2
and summing to m*B, can be split into m groups of sum B. The generated
graph consists of m buckets (chains of B receivers closed off by two
walls) and one k-pin plug per value k. A single cluster ties together
all plug vertices, the marked vertex of every receiver and the upper
wall vertices, so a drawing whose cluster connects through y-monotone
curves exists exactly when the plugs can be distributed with B pins per
bucket: every marked vertex must grab a pin of its own valley.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core import ClGraph, InvalidInstance, LevelGraph, flat_clustering
from ..embedding import Rotation, canonical_rotation
from ..oracle.drawings import (
    DEFAULT_BUDGET,
    LevelDrawing,
    enumerate_level_drawings,
    rotations_from_drawing,
)
from .atlas import GadgetAtlas

INVALID_INSTANCE = "INVALID_INSTANCE"

# vertices per generated instance stay below SIZE_FACTOR * m * B
SIZE_FACTOR = 15


class LimitExceeded(RuntimeError):
    """Instance outside the guaranteed range of an exhaustive decider."""


@dataclass(frozen=True)
class ThreePartitionInstance:
    m: int
    values: tuple[int, ...]
    bound: int

    @staticmethod
    def build(m: int, values, bound: int) -> "ThreePartitionInstance":
        return ThreePartitionInstance(int(m), tuple(int(a) for a in values), int(bound))

    def check(self) -> list[str]:
        """Violated invariants, empty when the instance is well formed."""
        problems = []
        if self.m < 1:
            problems.append("m must be positive")
        if self.bound < 1:
            problems.append("bound must be positive")
        if len(self.values) != 3 * self.m:
            problems.append(f"expected {3 * self.m} values, got {len(self.values)}")
        for a in self.values:
            if not (4 * a > self.bound and 2 * a < self.bound):
                problems.append(f"value {a} outside the open range (B/4, B/2)")
        if sum(self.values) != self.m * self.bound:
            problems.append(f"values sum to {sum(self.values)}, need {self.m * self.bound}")
        return problems

    def require_valid(self) -> "ThreePartitionInstance":
        problems = self.check()
        if problems:
            raise InvalidInstance(INVALID_INSTANCE, "; ".join(problems))
        return self


@dataclass(frozen=True)
class Fragment:
    """A piece of level graph with named special vertices."""

    levels: dict[str, int]
    edges: tuple[tuple[str, str], ...]
    roles: dict[str, tuple[str, ...]]

    def graph(self) -> LevelGraph:
        return LevelGraph.build(self.levels, self.edges)


def receiver(tag: str, v1: str | None = None, v2: str | None = None) -> Fragment:
    """An 11-vertex unit with endpoints on level 1.

    A path climbs from endpoint v1 over the marked vertex r (level 3) to
    the top vertex t (level 4) and descends back to endpoint v2. Two
    blocker paths hang from t, dipping to level 3 and returning to level
    4; they shield r so it can only be reached by a y-monotone curve
    from level 2 or below.
    """
    v1 = v1 or f"{tag}.v1"
    v2 = v2 or f"{tag}.v2"
    u2, r, t = f"{tag}.u2", f"{tag}.r", f"{tag}.t"
    d3, d2 = f"{tag}.d3", f"{tag}.d2"
    xa, ya, xb, yb = f"{tag}.xa", f"{tag}.ya", f"{tag}.xb", f"{tag}.yb"
    levels = {v1: 1, u2: 2, r: 3, t: 4, d3: 3, d2: 2, v2: 1,
              xa: 3, ya: 4, xb: 3, yb: 4}
    edges = ((v1, u2), (u2, r), (r, t), (t, d3), (d3, d2), (d2, v2),
             (t, xa), (xa, ya), (t, xb), (xb, yb))
    roles = {"endpoints": (v1, v2), "marked": (r,), "top": (t,),
             "descent": (d3,), "blockers": (xa, ya, xb, yb)}
    return Fragment(levels, edges, roles)


def bucket(size: int, tag: str = "b") -> Fragment:
    """``size`` chained receivers closed off by a wall on each end.

    Chaining identifies the second endpoint of one receiver with the
    first endpoint of the next. A wall is a path from the free chain
    endpoint up to level 5.
    """
    if size < 1:
        raise ValueError("bucket size must be positive")
    chain = [f"{tag}.c{j}" for j in range(size + 1)]
    levels: dict[str, int] = {}
    edges: list[tuple[str, str]] = []
    marked: list[str] = []
    descents: list[str] = []
    for j in range(size):
        rec = receiver(f"{tag}.r{j}", v1=chain[j], v2=chain[j + 1])
        levels.update(rec.levels)
        edges.extend(rec.edges)
        marked.extend(rec.roles["marked"])
        descents.extend(rec.roles["descent"])
    walls = []
    for side, base in (("wl", chain[0]), ("wr", chain[-1])):
        prev = base
        wall = []
        for lvl in range(2, 6):
            w = f"{tag}.{side}{lvl}"
            levels[w] = lvl
            edges.append((prev, w))
            wall.append(w)
            prev = w
        walls.append(tuple(wall))
    roles = {"chain": tuple(chain), "marked": tuple(marked),
             "descents": tuple(descents), "walls": (walls[0], walls[1]),
             "wall_tops": (walls[0][2], walls[0][3], walls[1][2], walls[1][3])}
    return Fragment(levels, tuple(edges), roles)


def plug(k: int, tag: str = "p") -> Fragment:
    """k paths from level 2 up to level 4, joined by an apex on level 5.

    The level-2 endpoints are the pins; they are the only vertices of
    the cluster that a marked receiver vertex can reach.
    """
    if k < 1:
        raise ValueError("plug size must be positive")
    h = f"{tag}.h"
    levels = {h: 5}
    edges: list[tuple[str, str]] = []
    pins, tops = [], []
    for q in range(k):
        s, mid, top = f"{tag}.s{q}", f"{tag}.m{q}", f"{tag}.t{q}"
        levels.update({s: 2, mid: 3, top: 4})
        edges.extend([(s, mid), (mid, top), (top, h)])
        pins.append(s)
        tops.append(top)
    roles = {"pins": tuple(pins), "apex": (h,), "tops": tuple(tops)}
    return Fragment(levels, tuple(edges), roles)


def threepart_to_yclp(t: ThreePartitionInstance) -> tuple[ClGraph, GadgetAtlas]:
    """Generate the clustered level graph for an instance.

    The output has exactly 5 levels, one non-trivial cluster C, and at
    most SIZE_FACTOR * m * B vertices (13mB + 12m exactly).
    """
    t.require_valid()
    levels: dict[str, int] = {}
    edges: list[tuple[str, str]] = []
    groups: list[tuple[str, tuple[str, ...]]] = []
    marked: list[str] = []
    pins: list[str] = []
    cluster: list[str] = []

    for i in range(t.m):
        frag = bucket(t.bound, f"b{i}")
        levels.update(frag.levels)
        edges.extend(frag.edges)
        chain = frag.roles["chain"]
        for j in range(t.bound):
            rec = [v for v in frag.levels
                   if v.startswith(f"b{i}.r{j}.")]
            groups.append((f"b{i}.r{j}", (chain[j], *sorted(rec))))
        wl, wr = frag.roles["walls"]
        groups.append((f"b{i}.wall.left", wl))
        groups.append((f"b{i}.wall.right", (chain[-1], *wr)))
        marked.extend(frag.roles["marked"])
        cluster.extend(frag.roles["marked"])
        cluster.extend(frag.roles["wall_tops"])

    for k, a in enumerate(t.values):
        frag = plug(a, f"p{k}")
        levels.update(frag.levels)
        edges.extend(frag.edges)
        groups.append((f"p{k}", tuple(sorted(frag.levels))))
        pins.extend(frag.roles["pins"])
        cluster.extend(sorted(frag.levels))

    g = LevelGraph.build(levels, edges)
    tree = flat_clustering(g.vertices, {"C": tuple(cluster)})
    atlas = GadgetAtlas(
        tuple(groups),
        (("marked", tuple(marked)), ("pins", tuple(pins)),
         ("cluster:C", tuple(cluster))),
        ("C",),
    )
    return ClGraph(g, tree), atlas


# ---------------------------------------------------------------------------
# reference deciders


def threepart_bruteforce(t: ThreePartitionInstance) -> bool:
    """Exact answer by enumerating partitions into m triples of sum B."""
    if t.m > 4:
        raise LimitExceeded(f"LIMIT_EXCEEDED: m={t.m} above brute-force range")
    vals = t.values
    if len(vals) != 3 * t.m or sum(vals) != t.m * t.bound:
        return False

    def rec(remaining: tuple[int, ...]) -> bool:
        if not remaining:
            return True
        first, rest = remaining[0], remaining[1:]
        for i, j in itertools.combinations(range(len(rest)), 2):
            if vals[first] + vals[rest[i]] + vals[rest[j]] == t.bound:
                left = tuple(x for q, x in enumerate(rest) if q not in (i, j))
                if rec(left):
                    return True
        return False

    return rec(tuple(range(len(vals))))


def plug_assignment_decide(t: ThreePartitionInstance) -> bool:
    """True iff the plugs can be assigned so every bucket gets B pins.

    Independent of threepart_bruteforce: buckets accept any number of
    plugs here, the pin count alone has to work out. On well-formed
    instances the value range forces three plugs per bucket, so the two
    deciders agree.
    """
    if t.m > 4 or t.bound > 40:
        raise LimitExceeded(
            f"LIMIT_EXCEEDED: m={t.m}, B={t.bound} above assignment-search range")
    vals = t.values
    if sum(vals) != t.m * t.bound:
        return False
    totals = [0] * t.m
    order = sorted(range(len(vals)), key=lambda i: -vals[i])

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return all(x == t.bound for x in totals)
        v = vals[order[i]]
        tried = set()
        for bi in range(min(used + 1, t.m)):
            if totals[bi] + v > t.bound or totals[bi] in tried:
                continue
            tried.add(totals[bi])
            totals[bi] += v
            if rec(i + 1, max(used, bi + 1)):
                return True
            totals[bi] -= v
        return False

    return rec(0, 0)


# ---------------------------------------------------------------------------
# fragment-scale embedding checks


def receiver_embeddings(budget=DEFAULT_BUDGET) -> list[Rotation]:
    """Rotation systems of a standalone receiver, endpoint order fixed.

    Only drawings with v1 left of v2 count, so mirror images are not
    reported. Swapping the two blockers is the only freedom, giving
    exactly two embeddings.
    """
    frag = receiver("rec")
    g = frag.graph()
    v1, v2 = frag.roles["endpoints"]
    found: dict[tuple, Rotation] = {}
    for d in enumerate_level_drawings(g, budget):
        pos = d.positions
        if pos[v1][1] > pos[v2][1]:
            continue
        rot = rotations_from_drawing(g, g, {}, d)
        found.setdefault(canonical_rotation(rot), rot)
    return [found[k] for k in sorted(found)]


def bucket_valleys(frag: Fragment, d: LevelDrawing) -> tuple[tuple[str, ...], ...]:
    """Marked vertices per valley of a bucket drawing.

    A valley is the gap between the left wall and the first descent or
    between two consecutive descents, read off the level-3 order. The
    final entry is the gap between the last descent and the right wall,
    which never holds a marked vertex. Mirrored drawings are
    normalized first.
    """
    wl, wr = frag.roles["walls"]
    row = d.orders[2]
    if row.index(wl[1]) > row.index(wr[1]):
        d = d.mirror()
        row = d.orders[2]
    x = {v: i for i, v in enumerate(row)}
    seps = [wl[1], *frag.roles["descents"], wr[1]]
    sep_x = [x[s] for s in seps]
    if sep_x != sorted(sep_x):
        raise ValueError(f"descents out of order in drawing: {seps}")
    out: list[tuple[str, ...]] = []
    for a, b in zip(sep_x, sep_x[1:]):
        out.append(tuple(v for v in row[a + 1:b] if v in frag.roles["marked"]))
    return tuple(out)
