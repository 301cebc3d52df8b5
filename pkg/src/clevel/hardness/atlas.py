"""Bookkeeping for generated gadget instances.

A GadgetAtlas records which generated vertex belongs to which gadget
(a partition of the vertex set), plus named overlays such as marked
vertices or pins that cut across gadget boundaries, plus the list of
non-root clusters the generator created.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import ClGraph


@dataclass(frozen=True)
class GadgetAtlas:
    groups: tuple[tuple[str, tuple[str, ...]], ...]
    marks: tuple[tuple[str, tuple[str, ...]], ...]
    clusters: tuple[str, ...]

    def group(self, name: str) -> tuple[str, ...]:
        for k, vs in self.groups:
            if k == name:
                return vs
        raise KeyError(name)

    def mark(self, name: str) -> tuple[str, ...]:
        for k, vs in self.marks:
            if k == name:
                return vs
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "groups": {k: list(vs) for k, vs in self.groups},
            "marks": {k: list(vs) for k, vs in self.marks},
            "clusters": list(self.clusters),
        }

    @staticmethod
    def from_json(data: dict) -> "GadgetAtlas":
        return GadgetAtlas(
            tuple((k, tuple(vs)) for k, vs in data["groups"].items()),
            tuple((k, tuple(vs)) for k, vs in data["marks"].items()),
            tuple(data["clusters"]),
        )


def check_atlas(cg: ClGraph, atlas: GadgetAtlas) -> list[str]:
    """Structural problems of an atlas against its instance, empty if fine."""
    problems = []
    seen: dict[str, str] = {}
    for name, vs in atlas.groups:
        for v in vs:
            if v in seen:
                problems.append(f"vertex {v} in groups {seen[v]} and {name}")
            seen[v] = name
    allv = set(cg.graph.vertices)
    if set(seen) != allv:
        missing = sorted(allv - set(seen))[:3]
        extra = sorted(set(seen) - allv)[:3]
        problems.append(f"groups do not partition the graph ({missing} / {extra})")
    for name, vs in atlas.marks:
        bad = sorted(set(vs) - allv)
        if bad:
            problems.append(f"mark {name} names unknown vertices {bad[:3]}")
    t = cg.clusters
    generated = {c for c in t.clusters if c != t.root}
    if set(atlas.clusters) != generated:
        problems.append(f"cluster list {atlas.clusters} != instance clusters {sorted(generated)}")
    return problems
