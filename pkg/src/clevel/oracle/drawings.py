"""Exhaustive enumeration of crossing-free level drawings.

A level drawing of a proper level graph is one left-to-right vertex order
per level such that no two edges between consecutive levels interleave.
Enumeration proceeds level by level, position by position, pruning as soon
as a partial order forces a crossing. Everything here is exponential on
purpose; these are ground-truth baselines for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..core import LevelGraph, properize
from ..embedding import Rotation

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    """Mutable node-expansion counter shared across oracle stages."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"budget of {self.limit} expansions exhausted")

    @staticmethod
    def ensure(b) -> "Budget":
        return b if isinstance(b, Budget) else Budget(int(b))


@dataclass(frozen=True)
class LevelDrawing:
    """Per-level vertex sequences; index 0 holds level 1."""

    orders: tuple[tuple[str, ...], ...]

    @cached_property
    def positions(self) -> dict[str, tuple[int, int]]:
        """Vertex -> (level, index within level)."""
        pos = {}
        for li, row in enumerate(self.orders):
            for i, v in enumerate(row):
                pos[v] = (li + 1, i)
        return pos

    def mirror(self) -> "LevelDrawing":
        return LevelDrawing(tuple(tuple(reversed(row)) for row in self.orders))

    def to_json(self) -> dict:
        return {"orders": [list(row) for row in self.orders]}

    @staticmethod
    def from_json(data: dict) -> "LevelDrawing":
        return LevelDrawing(tuple(tuple(row) for row in data["orders"]))


def enumerate_level_drawings(g: LevelGraph, budget=DEFAULT_BUDGET):
    """Yield every crossing-free drawing of a proper level graph.

    Deterministic: vertices are tried in sorted order at each slot. Raises
    BudgetExceeded when the node budget runs out mid-search.
    """
    if not g.is_proper:
        raise ValueError("enumerate_level_drawings expects a proper graph")
    b = Budget.ensure(budget)
    k = g.num_levels
    by_level = [sorted(g.level_vertices(i)) for i in range(1, k + 1)]
    down = {v: g.down_neighbors(v) for v in g.levels}
    orders: list[list[str]] = [[] for _ in range(k)]
    pos: dict[str, int] = {}

    def rec_level(li: int):
        if li == k:
            yield LevelDrawing(tuple(tuple(row) for row in orders))
            return
        verts = by_level[li]
        seq = orders[li]
        remaining = sorted(verts)

        def rec_pos(running_max: int):
            b.spend()
            if not remaining:
                yield from rec_level(li + 1)
                return
            for w in list(remaining):
                dp = [pos[a] for a in down[w]]
                if dp and min(dp) < running_max:
                    continue
                remaining.remove(w)
                pos[w] = len(seq)
                seq.append(w)
                yield from rec_pos(max([running_max] + dp))
                seq.pop()
                del pos[w]
                remaining.append(w)
                remaining.sort()

        yield from rec_pos(-1)

    yield from rec_level(0)


def oracle_is_level_planar(g: LevelGraph, budget=DEFAULT_BUDGET) -> bool:
    proper, _ = properize(g)
    for _ in enumerate_level_drawings(proper, budget):
        return True
    return False


def edge_name(levels: dict[str, int], u: str, v: str) -> str:
    lo, hi = (u, v) if levels[u] <= levels[v] else (v, u)
    return f"{lo}|{hi}"


def rotations_from_drawing(
    orig: LevelGraph,
    proper: LevelGraph,
    dummies: dict[str, tuple[str, str]],
    d: LevelDrawing,
) -> Rotation:
    """Read the rotation system of the original graph off a drawing.

    The counterclockwise order around a vertex is its upward edges from
    right to left followed by its downward edges from left to right; edge
    segments are translated back to original edge names.
    """
    pos = d.positions

    def orig_name(v: str, w: str) -> str:
        if w in dummies:
            a, b = dummies[w]
        elif v in dummies:
            a, b = dummies[v]
        else:
            a, b = v, w
        return edge_name(orig.levels, a, b)

    rot: Rotation = {}
    for v in orig.vertices:
        lv = orig.levels[v]
        ups = [w for w in proper.adjacency[v] if proper.levels[w] == lv + 1]
        downs = [w for w in proper.adjacency[v] if proper.levels[w] == lv - 1]
        ups.sort(key=lambda w: -pos[w][1])
        downs.sort(key=lambda w: pos[w][1])
        rot[v] = tuple(orig_name(v, w) for w in ups + downs)
    return rot


def oracle_level_planar_embeddings(g: LevelGraph, budget=DEFAULT_BUDGET) -> list[Rotation]:
    """All rotation systems realized by some level-planar drawing of g.

    Deduplicated by canonical form; mirror images stay distinct. Output
    order is deterministic (sorted by canonical key).
    """
    from ..embedding import canonical_rotation

    b = Budget.ensure(budget)
    proper, dummies = properize(g)
    found: dict[tuple, Rotation] = {}
    for d in enumerate_level_drawings(proper, b):
        rot = rotations_from_drawing(g, proper, dummies, d)
        found.setdefault(canonical_rotation(rot), rot)
    return [found[k] for k in sorted(found)]
