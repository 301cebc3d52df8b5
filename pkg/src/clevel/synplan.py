"""Synchronized planarity: instances, an exact solver, and a verifier.

An instance is a multigraph (disjoint skeleton components are fine)
together with two kinds of coupling constraints:

* pipes: a matching on vertices. A pipe carries an explicit bijection
  between the edge slots of its two endpoints, and a solution must give
  the second endpoint the reverse of the first endpoint's rotation,
  translated through the bijection.
* Q-constraints: disjoint vertex sets, each member carrying a default
  rotation. A solution must keep all members at their default or reverse
  all of them, recorded as one orientation bit per constraint.

A solution assigns a rotation (cyclic order of incident edge ids) to
every vertex so that every connected component is planar and all
constraints hold. ``solve`` is an exact backtracking search with eager
pipe and Q-constraint propagation; ``verify`` is an independent checker
that shares none of the solver's pruning logic.

Self-loops are not supported (a skeleton never produces one).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(Exception):
    """Search budget ran out before the space was exhausted."""


@dataclass(frozen=True)
class Pipe:
    """Matched vertex pair; ``bijection`` pairs an edge at u with one at w."""

    u: str
    w: str
    bijection: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class QConstraint:
    """Vertices that flip together; ``defaults`` maps each to its rotation."""

    defaults: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.defaults)


@dataclass(frozen=True)
class SynPlanInstance:
    """Multigraph plus pipes and Q-constraints.

    ``edges`` is a tuple of (edge id, endpoint, endpoint); parallel edges
    are distinct ids with equal endpoint pairs.
    """

    edges: tuple[tuple[str, str, str], ...]
    pipes: tuple[Pipe, ...]
    qconstraints: tuple[QConstraint, ...]

    @staticmethod
    def build(edges, pipes=(), qconstraints=()) -> "SynPlanInstance":
        edges = tuple((str(e), str(u), str(v)) for e, u, v in edges)
        ids = [e for e, _, _ in edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge id")
        for e, u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {e} at {u}")
        slots = _slot_map(edges)

        pipes = tuple(
            Pipe(str(p.u), str(p.w), tuple((str(a), str(b)) for a, b in p.bijection))
            if isinstance(p, Pipe)
            else Pipe(str(p[0]), str(p[1]), tuple((str(a), str(b)) for a, b in p[2]))
            for p in pipes
        )
        matched: set[str] = set()
        for p in pipes:
            if p.u == p.w:
                raise ValueError(f"pipe endpoints coincide at {p.u}")
            for x in (p.u, p.w):
                if x not in slots:
                    raise ValueError(f"pipe endpoint {x} not in graph")
                if x in matched:
                    raise ValueError(f"vertex {x} is in two pipes")
                matched.add(x)
            if len(slots[p.u]) != len(slots[p.w]):
                raise ValueError(f"pipe {p.u}-{p.w} endpoint degrees differ")
            srcs = sorted(a for a, _ in p.bijection)
            dsts = sorted(b for _, b in p.bijection)
            if srcs != sorted(slots[p.u]) or dsts != sorted(slots[p.w]):
                raise ValueError(f"pipe {p.u}-{p.w} bijection is not total")

        qconstraints = tuple(
            q
            if isinstance(q, QConstraint)
            else QConstraint(tuple((str(v), tuple(map(str, r))) for v, r in q))
            for q in qconstraints
        )
        owned: set[str] = set()
        for q in qconstraints:
            for v, r in q.defaults:
                if v in owned:
                    raise ValueError(f"vertex {v} is in two Q-constraints")
                owned.add(v)
                if v not in slots or sorted(r) != sorted(slots[v]):
                    raise ValueError(f"default at {v} is not a slot permutation")

        return SynPlanInstance(edges, pipes, qconstraints)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(_slot_map(self.edges)))

    @property
    def slots(self) -> dict[str, tuple[str, ...]]:
        return _slot_map(self.edges)


@dataclass(frozen=True)
class SynPlanSolution:
    """Per-vertex rotations plus one orientation bit per Q-constraint."""

    rotations: dict[str, tuple[str, ...]]
    bits: tuple[int, ...]


def _slot_map(edges) -> dict[str, tuple[str, ...]]:
    out: dict[str, list[str]] = {}
    for e, u, v in edges:
        out.setdefault(u, []).append(e)
        out.setdefault(v, []).append(e)
    return {v: tuple(sorted(es)) for v, es in out.items()}


def _canon(seq) -> tuple[str, ...]:
    """Anchor a cyclic sequence at its smallest element."""
    seq = tuple(seq)
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def _cyclic_orders(slots):
    """All cyclic orders of ``slots``, smallest element first, lex order."""
    first, *rest = sorted(slots)
    for perm in itertools.permutations(rest):
        yield (first,) + perm


def _components(edges):
    """Vertex partition into connected components (sorted, deterministic)."""
    parent: dict[str, str] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, u, v in edges:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        parent[find(u)] = find(v)
    groups: dict[str, list[str]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(sorted(g)) for g in groups.values())


# ---------------------------------------------------------------------------
# solver


class _Search:
    def __init__(self, inst: SynPlanInstance, budget: int):
        self.inst = inst
        self.budget = budget
        self.ticks = 0
        self.slots = inst.slots
        self.ends = {e: (u, v) for e, u, v in inst.edges}

        self.pipe_at: dict[str, tuple[str, dict[str, str]]] = {}
        for p in inst.pipes:
            fwd = dict(p.bijection)
            self.pipe_at[p.u] = (p.w, fwd)
            self.pipe_at[p.w] = (p.u, {b: a for a, b in p.bijection})

        self.qc_at: dict[str, int] = {}
        self.qc_default: dict[str, tuple[str, ...]] = {}
        for i, q in enumerate(inst.qconstraints):
            for v, r in q.defaults:
                self.qc_at[v] = i
                self.qc_default[v] = r

        comps = _components(inst.edges)
        self.comp_of = {v: i for i, c in enumerate(comps) for v in c}
        self.comp_vertices = comps
        self.comp_edges: list[list[str]] = [[] for _ in comps]
        for e, u, v in inst.edges:
            self.comp_edges[self.comp_of[u]].append(e)

        self.rot: dict[str, tuple[str, ...]] = {}
        self.bits: dict[int, int] = {}
        self.trail: list[tuple[str, object]] = []
        self.order = sorted(self.slots)

    def tick(self):
        self.ticks += 1
        if self.ticks > self.budget:
            raise BudgetExceeded(f"budget {self.budget} exhausted")

    def undo(self, mark: int):
        while len(self.trail) > mark:
            kind, key = self.trail.pop()
            if kind == "rot":
                del self.rot[key]
            else:
                del self.bits[key]

    def set_bit(self, qi: int, b: int) -> bool:
        if qi in self.bits:
            return self.bits[qi] == b
        self.bits[qi] = b
        self.trail.append(("bit", qi))
        for v, default in self.inst.qconstraints[qi].defaults:
            forced = default if b == 1 else tuple(reversed(default))
            if not self.assign(v, _canon(forced)):
                return False
        return True

    def assign(self, v: str, r: tuple[str, ...]) -> bool:
        """Record rotation r at v (canonical form) and propagate."""
        if v in self.rot:
            return self.rot[v] == r
        self.rot[v] = r
        self.trail.append(("rot", v))
        if not self.partial_planar(self.comp_of[v]):
            return False

        qi = self.qc_at.get(v)
        if qi is not None and qi not in self.bits:
            default = _canon(self.qc_default[v])
            mirrored = _canon(reversed(self.qc_default[v]))
            if default == mirrored:
                pass  # degree <= 2 member pins nothing
            elif r == default:
                if not self.set_bit(qi, 1):
                    return False
            elif r == mirrored:
                if not self.set_bit(qi, -1):
                    return False
            else:
                return False
        elif qi is not None:
            want = self.qc_default[v]
            if self.bits[qi] == -1:
                want = tuple(reversed(want))
            if r != _canon(want):
                return False

        if v in self.pipe_at:
            w, fwd = self.pipe_at[v]
            forced = _canon(reversed([fwd[e] for e in r]))
            if not self.assign(w, forced):
                return False
        return True

    def partial_planar(self, ci: int) -> bool:
        """Euler check on the part of component ci assigned so far.

        The restriction of any planar rotation system to an induced
        subgraph is planar, so rejecting a non-planar partial assignment
        never loses solutions.
        """
        edges = [
            e
            for e in self.comp_edges[ci]
            if self.ends[e][0] in self.rot and self.ends[e][1] in self.rot
        ]
        if not edges:
            return True
        eset = set(edges)

        parent: dict[str, str] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        succ: dict[str, dict[str, str]] = {}
        for e in edges:
            for v in self.ends[e]:
                if v in succ:
                    continue
                r = [x for x in self.rot[v] if x in eset]
                succ[v] = {x: r[(i + 1) % len(r)] for i, x in enumerate(r)}
                parent[v] = v
        for e in edges:
            u, v = self.ends[e]
            parent[find(u)] = find(v)

        nv: dict[str, int] = {}
        ne: dict[str, int] = {}
        for v in succ:
            nv[find(v)] = nv.get(find(v), 0) + 1
        for e in edges:
            ne[find(self.ends[e][0])] = ne.get(find(self.ends[e][0]), 0) + 1

        nf: dict[str, int] = {}
        seen: set[tuple[str, int]] = set()
        for start in ((e, i) for e in edges for i in (0, 1)):
            if start in seen:
                continue
            nf[find(self.ends[start[0]][0])] = (
                nf.get(find(self.ends[start[0]][0]), 0) + 1
            )
            d = start
            while d not in seen:
                seen.add(d)
                e, i = d
                v2 = self.ends[e][1 - i]
                e2 = succ[v2][e]
                d = (e2, 0 if self.ends[e2][0] == v2 else 1)
        return all(nv[c] - ne[c] + nf.get(c, 0) == 2 for c in nv)

    def run(self) -> SynPlanSolution | None:
        sol = self.dfs(0)
        if sol is None:
            return None
        bits = tuple(self.bits.get(i, 1) for i in range(len(self.inst.qconstraints)))
        return SynPlanSolution(dict(sol), bits)

    def dfs(self, i: int):
        order = self.order
        while i < len(order) and order[i] in self.rot:
            i += 1
        if i == len(order):
            return dict(self.rot)

        v = order[i]
        qi = self.qc_at.get(v)
        if qi is not None and qi not in self.bits:
            for b in (1, -1):
                self.tick()
                mark = len(self.trail)
                if self.set_bit(qi, b):
                    found = self.dfs(i + 1)
                    if found is not None:
                        return found
                self.undo(mark)
            return None

        for r in _cyclic_orders(self.slots[v]):
            self.tick()
            mark = len(self.trail)
            if self.assign(v, r):
                found = self.dfs(i + 1)
                if found is not None:
                    return found
            self.undo(mark)
        return None


def solve(inst: SynPlanInstance, budget: int = DEFAULT_BUDGET):
    """Exact search. Returns a solution, or None only after exhausting
    the whole space. Deterministic: vertices in sorted order, default
    orientation before reversal, rotations in lexicographic order.

    Raises BudgetExceeded when the node budget runs out first.
    """
    return _Search(inst, budget).run()


# ---------------------------------------------------------------------------
# verifier (independent of the solver's pruning)


def _cyclic_eq(a, b) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(b[i:] + b[:i] == a for i in range(len(b)))


def verify(inst: SynPlanInstance, sol: SynPlanSolution) -> bool:
    """Check a solution from scratch: shape, planarity per component,
    pipe reversal, Q-constraint synchronization."""
    slots = inst.slots
    rot = sol.rotations
    if set(rot) != set(slots):
        return False
    for v, r in rot.items():
        if sorted(r) != sorted(slots[v]):
            return False
    if len(sol.bits) != len(inst.qconstraints) or any(
        b not in (1, -1) for b in sol.bits
    ):
        return False

    # planarity: trace every face of every component, then Euler's formula
    ends = {e: (u, v) for e, u, v in inst.edges}
    after = {}
    for v, r in rot.items():
        for i, e in enumerate(r):
            after[(v, e)] = r[(i + 1) % len(r)]
    unvisited = {(e, u) for e, u, v in inst.edges} | {(e, v) for e, u, v in inst.edges}
    face_of: dict[tuple[str, str], int] = {}
    nfaces = 0
    while unvisited:
        start = min(unvisited)
        nfaces += 1
        e, tail = start
        while (e, tail) in unvisited:
            unvisited.discard((e, tail))
            face_of[(e, tail)] = nfaces
            u, v = ends[e]
            head = v if tail == u else u
            e = after[(head, e)]
            tail = head
    for comp in _components(inst.edges):
        cedges = [e for e, u, v in inst.edges if u in set(comp)]
        cfaces = {face_of[(e, ends[e][0])] for e in cedges}
        cfaces |= {face_of[(e, ends[e][1])] for e in cedges}
        if len(comp) - len(cedges) + len(cfaces) != 2:
            return False

    for p in inst.pipes:
        fwd = dict(p.bijection)
        translated = [fwd[e] for e in rot[p.u]]
        if not _cyclic_eq(reversed(translated), rot[p.w]):
            return False

    for q, b in zip(inst.qconstraints, sol.bits):
        for v, default in q.defaults:
            want = default if b == 1 else tuple(reversed(default))
            if not _cyclic_eq(rot[v], want):
                return False
    return True


# ---------------------------------------------------------------------------
# serialization


def synplan_to_json(inst: SynPlanInstance) -> str:
    return json.dumps(
        {
            "edges": [list(e) for e in inst.edges],
            "pipes": [
                {"u": p.u, "w": p.w, "bijection": [list(x) for x in p.bijection]}
                for p in inst.pipes
            ],
            "qconstraints": [
                [[v, list(r)] for v, r in q.defaults] for q in inst.qconstraints
            ],
        },
        sort_keys=True,
    )


def synplan_from_json(text: str) -> SynPlanInstance:
    d = json.loads(text)
    return SynPlanInstance.build(
        [tuple(e) for e in d["edges"]],
        [Pipe(p["u"], p["w"], tuple(tuple(x) for x in p["bijection"])) for p in d["pipes"]],
        [
            QConstraint(tuple((v, tuple(r)) for v, r in q))
            for q in d["qconstraints"]
        ],
    )


def solution_to_json(sol: SynPlanSolution) -> str:
    return json.dumps(
        {
            "rotations": {v: list(r) for v, r in sol.rotations.items()},
            "bits": list(sol.bits),
        },
        sort_keys=True,
    )


def solution_from_json(text: str) -> SynPlanSolution:
    d = json.loads(text)
    return SynPlanSolution(
        {v: tuple(r) for v, r in d["rotations"].items()}, tuple(d["bits"])
    )
