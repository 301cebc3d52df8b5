"""Brute-force search and verification for y-monotone clustered drawings.

A level drawing is accepted when augmentation edges between same-cluster
vertices on distinct levels can be threaded through the level orders as
y-monotone polylines so that the drawing stays crossing-free, every
non-root cluster induces a connected subgraph and no cluster cycle has an
outside vertex strictly inside it. The enclosure test is geometric: faces
of the cluster sub-drawing are traced as polyline orbits, bounded faces
are recognized by positive signed area and membership uses even-odd ray
casting in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import ClGraph, LevelGraph, properize
from .drawings import DEFAULT_BUDGET, Budget, LevelDrawing, enumerate_level_drawings


@dataclass(frozen=True)
class YclpCertificate:
    """Augmentation edges plus the extended drawing that realizes them."""

    aug_edges: tuple[tuple[str, str], ...]
    drawing: LevelDrawing

    def to_json(self) -> dict:
        return {
            "augmentation": [list(e) for e in self.aug_edges],
            "orders": [list(row) for row in self.drawing.orders],
        }

    @staticmethod
    def from_json(data: dict) -> "YclpCertificate":
        return YclpCertificate(
            tuple((u, v) for u, v in data["augmentation"]),
            LevelDrawing(tuple(tuple(row) for row in data["orders"])),
        )


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _cluster_connectivity(cg: ClGraph, aug) -> dict[str, bool]:
    t = cg.clusters
    out = {}
    all_edges = list(cg.graph.edges) + list(aug)
    for c in t.clusters:
        if c == t.root:
            continue
        mem = t.members[c]
        dsu = _DSU(mem)
        for u, v in all_edges:
            if u in mem and v in mem:
                dsu.union(u, v)
        out[c] = len({dsu.find(v) for v in mem}) <= 1
    return out


# ---------------------------------------------------------------------------
# polyline face machinery


def _polyline_orbits(pos, segs):
    """Dart orbits of a set of unit-level segments drawn at integer points.

    ``pos`` maps node -> (x, y); every segment spans adjacent y values.
    Rotation at each node: upward partners right to left, then downward
    partners left to right, which is the counterclockwise geometric order.
    """
    nbrs: dict[str, list[str]] = {}
    for a, b in segs:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    rot: dict[str, list[str]] = {}
    for n, ps in nbrs.items():
        x, y = pos[n]
        ups = sorted((p for p in ps if pos[p][1] == y + 1), key=lambda p: -pos[p][0])
        downs = sorted((p for p in ps if pos[p][1] == y - 1), key=lambda p: pos[p][0])
        rot[n] = ups + downs
    idx = {n: {p: i for i, p in enumerate(ps)} for n, ps in rot.items()}
    orbits = []
    seen: set[tuple[str, str]] = set()
    for a, b in segs:
        for dart in ((a, b), (b, a)):
            if dart in seen:
                continue
            orbit = []
            cur = dart
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                tail, head = cur
                nxt = rot[head][(idx[head][tail] + 1) % len(rot[head])]
                cur = (head, nxt)
            orbits.append(tuple(orbit))
    return orbits


def _orbit_area2(orbit, pos) -> int:
    """Twice the signed area of the orbit's polygon walk."""
    total = 0
    for tail, head in orbit:
        x1, y1 = pos[tail]
        x2, y2 = pos[head]
        total += x1 * y2 - x2 * y1
    return total


def _point_in_orbit(orbit, pos, px: int, py: int) -> bool:
    """Even-odd ray cast to the right, half-open in y to dodge endpoints."""
    crossings = 0
    for tail, head in orbit:
        x1, y1 = pos[tail]
        x2, y2 = pos[head]
        if y1 <= py < y2 or y2 <= py < y1:
            x_at = x1 if y1 == py else x2
            if x_at > px:
                crossings += 1
    return crossings % 2 == 1


def _enclosure_ok(cg: ClGraph, orders, segs, owner_pair) -> bool:
    """No outside original vertex strictly inside a cluster sub-drawing face.

    ``owner_pair(node)`` resolves a dummy to its carrying edge's original
    endpoints and returns the node itself for original vertices.
    """
    t = cg.clusters
    pos: dict[str, tuple[int, int]] = {}
    for li, row in enumerate(orders):
        for i, n in enumerate(row):
            pos[n] = (i, li + 1)
    originals = set(cg.graph.vertices)

    def seg_members(a, b):
        ends = set()
        for n in (a, b):
            o = owner_pair(n)
            if isinstance(o, tuple):
                ends.update(o)
            else:
                ends.add(o)
        return ends

    for c in t.clusters:
        if c == t.root:
            continue
        mem = t.members[c]
        outside = originals - mem
        if not outside:
            continue
        sub = [s for s in segs if seg_members(*s) <= mem]
        if not sub:
            continue
        for orbit in _polyline_orbits(pos, sub):
            if _orbit_area2(orbit, pos) <= 0:
                continue
            for p in outside:
                if _point_in_orbit(orbit, pos, *pos[p]):
                    return False
    return True


# ---------------------------------------------------------------------------
# certificate verification (independent of the search path)


def _aug_dummy_base(u, v, lvl):
    return f"{u}~{v}~{lvl}"


def verify_yclp_certificate(cg: ClGraph, cert: YclpCertificate) -> bool:
    """Re-validate a certificate from scratch.

    Checks: augmentation edges are legal, the extended drawing is a
    permutation of the properized augmented graph's levels, it is
    crossing-free, all non-root clusters are connected and the enclosure
    condition holds.
    """
    g, t = cg.graph, cg.clusters
    seen_pairs = {frozenset(e) for e in g.edges}
    for u, v in cert.aug_edges:
        if u not in g.levels or v not in g.levels:
            return False
        if g.levels[u] == g.levels[v]:
            return False
        if t.lowest_common(u, v) == t.root:
            return False
        key = frozenset((u, v))
        if key in seen_pairs:
            return False
        seen_pairs.add(key)

    g2 = LevelGraph(dict(g.levels), tuple(g.edges) + tuple(cert.aug_edges))
    proper2, dummies2 = properize(g2)
    orders = cert.drawing.orders
    if len(orders) != proper2.num_levels:
        return False
    for i in range(len(orders)):
        if sorted(orders[i]) != sorted(proper2.level_vertices(i + 1)):
            return False

    pos = cert.drawing.positions
    by_pair: dict[int, list[tuple[str, str]]] = {}
    for a, b in proper2.oriented_edges():
        by_pair.setdefault(proper2.levels[a], []).append((a, b))
    for lvl, segs in by_pair.items():
        for i in range(len(segs)):
            a1, b1 = segs[i]
            for j in range(i + 1, len(segs)):
                a2, b2 = segs[j]
                if (pos[a1][1] - pos[a2][1]) * (pos[b1][1] - pos[b2][1]) < 0:
                    return False

    if not all(_cluster_connectivity(cg, cert.aug_edges).values()):
        return False

    all_segs = list(proper2.oriented_edges())

    def owner(n):
        return dummies2[n] if n in dummies2 else n

    return _enclosure_ok(cg, orders, all_segs, owner)


# ---------------------------------------------------------------------------
# search


def check_drawing_y_cl(
    cg: ClGraph, d: LevelDrawing, budget=DEFAULT_BUDGET
) -> tuple[bool, YclpCertificate | None]:
    """Decide whether a fixed drawing extends to a y-monotone clustered one.

    ``d`` is a crossing-free drawing of the properized graph. Returns the
    certificate on success; it always re-validates through
    verify_yclp_certificate.
    """
    b = Budget.ensure(budget)
    g, t = cg.graph, cg.clusters
    proper, dummies = properize(g)
    lvl_of = dict(proper.levels)
    owner_of: dict[str, tuple[str, str]] = dict(dummies)

    def owner(n):
        return owner_of.get(n, n)

    base_segs = tuple(proper.oriented_edges())
    memo: set[tuple] = set()

    def xmaps(orders, lvl):
        return {n: i for i, n in enumerate(orders[lvl - 1])}

    def seg_ok(orders, segs, a, b):
        """Segment a(level L) - b(level L+1) against existing ones."""
        la = lvl_of[a]
        xa = xmaps(orders, la)
        xb = xmaps(orders, la + 1)
        for s, t2 in segs:
            if lvl_of[s] != la:
                continue
            if (xa[a] - xa[s]) * (xb[b] - xb[t2]) < 0:
                return False
        return True

    def threadings(orders, segs, u, v):
        """Yield (orders2, segs2) for each crossing-free routing of u-v."""
        lo, hi = (u, v) if g.levels[u] < g.levels[v] else (v, u)
        llo, lhi = g.levels[lo], g.levels[hi]
        chain = []
        for lvl in range(llo + 1, lhi):
            nm = _aug_dummy_base(lo, hi, lvl)
            while nm in proper.levels:
                nm += "'"
            lvl_of[nm] = lvl
            owner_of[nm] = (lo, hi)
            chain.append(nm)

        def place(i, cur_orders, cur_segs, prev):
            b.spend()
            if i == len(chain):
                if seg_ok(cur_orders, cur_segs, prev, hi):
                    yield cur_orders, cur_segs + ((prev, hi),)
                return
            nm = chain[i]
            lvl = llo + 1 + i
            row = cur_orders[lvl - 1]
            for gap in range(len(row) + 1):
                row2 = row[:gap] + (nm,) + row[gap:]
                orders2 = cur_orders[: lvl - 1] + (row2,) + cur_orders[lvl:]
                if seg_ok(orders2, cur_segs, prev, nm):
                    yield from place(i + 1, orders2, cur_segs + ((prev, nm),), nm)

        yield from place(0, orders, segs, lo)

    def candidates(aug):
        adj = {frozenset(e) for e in g.edges} | {frozenset(e) for e in aug}
        dsus: dict[str, _DSU] = {}

        def dsu(c):
            if c not in dsus:
                mem = t.members[c]
                dd = _DSU(mem)
                for x, y in list(g.edges) + list(aug):
                    if x in mem and y in mem:
                        dd.union(x, y)
                dsus[c] = dd
            return dsus[c]

        vs = sorted(g.vertices)
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                if g.levels[u] == g.levels[v] or frozenset((u, v)) in adj:
                    continue
                lca = t.lowest_common(u, v)
                if lca == t.root:
                    continue
                c = lca
                while c is not None and c != t.root:
                    if dsu(c).find(u) != dsu(c).find(v):
                        yield u, v
                        break
                    c = t.parent[c]

    def search(aug, orders, segs):
        b.spend()
        key = (aug, orders)
        if key in memo:
            return None
        conn = _cluster_connectivity(cg, aug)
        # a cluster cycle around an outsider can never be undone by adding
        # more edges, so enclosure violations prune immediately
        if not _enclosure_ok(cg, orders, segs, owner):
            memo.add(key)
            return None
        if all(conn.values()):
            cert = YclpCertificate(aug, LevelDrawing(orders))
            if not verify_yclp_certificate(cg, cert):
                raise AssertionError("search produced a certificate that fails verification")
            return cert
        for u, v in candidates(aug):
            for orders2, segs2 in threadings(orders, segs, u, v):
                res = search(aug + ((u, v),), orders2, segs2)
                if res is not None:
                    return res
        memo.add(key)
        return None

    res = search((), tuple(tuple(r) for r in d.orders), base_segs)
    return (res is not None), res


def oracle_yclp(cg: ClGraph, budget=DEFAULT_BUDGET) -> bool:
    """True iff some level drawing of the instance extends y-monotonically."""
    b = Budget.ensure(budget)
    proper, _ = properize(cg.graph)
    for d in enumerate_level_drawings(proper, b):
        ok, _ = check_drawing_y_cl(cg, d, b)
        if ok:
            return True
    return False
