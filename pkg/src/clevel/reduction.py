"""Clustered level planarity via vertex expansion and synchronized planarity.

The decision pipeline for biconnected single-source instances:

1. ``build_lp_tree`` gives a reference embedding and per-vertex trees of
   admissible rotations with synchronized Q-nodes.
2. ``expand_vertices`` replaces every vertex by its tree; Q-nodes turn
   into vertices whose rotation is pinned to a default or its reverse,
   recorded as one ``SfvConstraint`` per synchronization class.
3. ``build_skeletons`` contracts, per cluster, every child cluster (and
   for non-root clusters the entire outside) to a single vertex.
4. ``to_synplan`` assembles the disjoint skeletons, one pipe per
   non-root cluster, and the constraints merged into disjoint
   Q-constraints.
5. A solved instance is spliced back (``expand_synplan_solution``) and
   contracted (``contract_embedding``) into a rotation system of the
   original graph, which then passes the independent embedding checks.

``uclp_decide`` chains all of it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ClGraph, ClusterTree
from .embedding import Multigraph, Rotation, is_planar_rotation, level_multigraph
from .lptree import build_lp_tree, is_level_planar_embedding, level_planar_rotation
from .lptree.build import _match_orientations
from .oracle.cplanar import is_embedding_c_planar
from .oracle.drawings import DEFAULT_BUDGET as ORACLE_BUDGET
from .oracle.drawings import edge_name
from .pqtree import PCNode, pc_leaves
from .synplan import DEFAULT_BUDGET as SOLVER_BUDGET
from .synplan import Pipe, QConstraint, SynPlanInstance, SynPlanSolution
from .synplan import solve as solve_synplan
from .synplan import verify as verify_synplan

OUT = "<out>"


def _inner(c: str) -> str:
    """Skeleton vertex standing for a contracted child cluster."""
    return f"<{c}>"


@dataclass(frozen=True)
class SfvConstraint:
    """Vertices whose rotations flip only together, with their defaults."""

    defaults: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.defaults)


@dataclass(frozen=True)
class ExpandedGraph:
    """A clustered graph with every vertex blown up into its tree.

    ``expansion`` maps an original vertex to the tuple of vertices it
    became, ``owner`` is the inverse, ``reference`` holds the default
    rotation of every new vertex (the expansion of the reference
    embedding the trees were built from).
    """

    graph: Multigraph
    tree: ClusterTree
    expansion: dict[str, tuple[str, ...]]
    owner: dict[str, str]
    reference: dict[str, tuple[str, ...]]
    constraints: tuple[SfvConstraint, ...]


def _tree_link(node_name: str) -> str:
    """Edge id of the link from a non-root tree vertex to its parent."""
    return f"{node_name}^"


def expand_vertices(cg: ClGraph, trees: dict[str, PCNode], gamma: Rotation) -> ExpandedGraph:
    """Replace each vertex by its rotation tree.

    ``trees`` must have exactly the incident edge names of each vertex as
    leaves (LEAF_MISMATCH otherwise). ``gamma`` fixes the default layout:
    children of every node are laid out in the order their leaf arcs
    appear in ``gamma`` at that vertex, so contracting the defaults gives
    back ``gamma`` itself. Stored Q-node orders must already realize it.
    """
    g = cg.graph
    vertices: list[str] = []
    edges: dict[str, tuple[str, str]] = {}
    expansion: dict[str, tuple[str, ...]] = {}
    owner: dict[str, str] = {}
    reference: dict[str, tuple[str, ...]] = {}
    attach: dict[tuple[str, str], str] = {}
    qnodes: dict[str, list[tuple[str, tuple[str, ...]]]] = {}
    taken = set(g.vertices)

    for v in sorted(g.vertices):
        t = trees.get(v)
        incident = {edge_name(g.levels, v, w) for w in g.adjacency[v]}
        if t is None:
            raise ValueError(f"LEAF_MISMATCH: no tree for {v}")
        leaves = pc_leaves(t)
        if set(leaves) != incident or len(leaves) != len(incident):
            raise ValueError(f"LEAF_MISMATCH: tree leaves of {v} differ from edges")
        if t.kind != "leaf":
            ori = _match_orientations(t, gamma[v])
            assert ori is not None and all(d > 0 for d in ori.values()), (
                "stored Q orders must realize the reference embedding"
            )

        pos = {e: i for i, e in enumerate(gamma[v])}
        nlen = len(gamma[v])

        def arc_start(node) -> int:
            idx = {pos[x] for x in pc_leaves(node)}
            if len(idx) == nlen:
                return 0
            starts = [i for i in idx if (i - 1) % nlen not in idx]
            assert len(starts) == 1, "tree node torn apart in the reference"
            return starts[0]

        def ordered(node) -> list[PCNode]:
            base = arc_start(node)
            kids = sorted(node.children, key=lambda c: (arc_start(c) - base) % nlen)
            if node.kind == "Q" and len(pc_leaves(node)) < nlen:
                assert kids == list(node.children), "Q order strayed from gamma"
            return kids

        internal = _internal_nodes(t)
        names = [v]
        for i in range(1, len(internal)):
            name = f"{v}.{i}"
            if name in taken:
                raise ValueError(f"vertex name collision at {name}")
            names.append(name)
        taken.update(names)
        index = {id(n): names[i] for i, n in enumerate(internal)}

        expansion[v] = tuple(names)
        for name in names:
            owner[name] = v
            vertices.append(name)

        for n in internal:
            name = index[id(n)]
            if n.kind == "leaf":
                # degree-one vertex: the tree is a single leaf
                attach[(v, n.label)] = name
                reference[name] = (n.label,)
                continue
            ring = [] if name == v else [_tree_link(name)]
            for c in ordered(n):
                if c.kind == "leaf":
                    attach[(v, c.label)] = name
                    ring.append(c.label)
                else:
                    child = index[id(c)]
                    edges[_tree_link(child)] = (name, child)
                    ring.append(_tree_link(child))
            reference[name] = tuple(ring)
            if n.kind == "Q":
                qnodes.setdefault(n.tag, []).append((name, tuple(ring)))

    for u, w in g.edges:
        e = edge_name(g.levels, u, w)
        edges[e] = (attach[(u, e)], attach[(w, e)])

    old = cg.clusters
    leaves = {
        c: tuple(x for v in old.leaves[c] for x in expansion[v]) for c in old.clusters
    }
    tree = ClusterTree.build(old.root, dict(old.children), leaves)

    constraints = tuple(
        SfvConstraint(tuple(qnodes[tag]))
        for tag in sorted(qnodes, key=lambda t: (len(t), t))
    )
    graph = Multigraph.build(vertices, edges)
    return ExpandedGraph(graph, tree, expansion, owner, reference, constraints)


def _internal_nodes(t: PCNode) -> list[PCNode]:
    """Internal nodes in preorder; a bare leaf is its own single node."""
    if t.kind == "leaf":
        return [t]
    out = [t]
    for c in t.children:
        if c.kind != "leaf":
            out.extend(_internal_nodes(c))
    return out


def contract_embedding(rot_plus: Rotation, x: ExpandedGraph) -> Rotation:
    """Merge every vertex tree back into one vertex.

    The rotation of an original vertex is the order in which the original
    edges appear on a boundary walk around its (tree-shaped) expansion.
    """
    out: Rotation = {}
    for v, nodes in x.expansion.items():
        if len(nodes) == 1:
            out[v] = tuple(rot_plus[nodes[0]])
            continue
        nodeset = set(nodes)
        internal = {
            e
            for e, (a, b) in x.graph.edges.items()
            if a in nodeset and b in nodeset
        }
        succ = {
            n: {e: rot_plus[n][(i + 1) % len(rot_plus[n])] for i, e in enumerate(rot_plus[n])}
            for n in nodes
        }
        start = None
        for n in nodes:
            for e in rot_plus[n]:
                if e not in internal:
                    start = (n, e)
                    break
            if start:
                break
        ring: list[str] = []
        d = start
        while True:
            n, e = d
            if e in internal:
                m = x.graph.other(e, n)
                d = (m, succ[m][e])
            else:
                ring.append(e)
                d = (n, succ[n][e])
            if d == start:
                break
        out[v] = tuple(ring)
    return out


def build_skeletons(g: Multigraph, t: ClusterTree) -> dict[str, Multigraph]:
    """Per-cluster graphs with child clusters (and the outside) contracted.

    Every edge keeps its id in every skeleton it survives in; edges whose
    endpoints fall together disappear.
    """
    members = t.members
    out: dict[str, Multigraph] = {}
    for c in t.clusters:
        rep: dict[str, str] = {v: v for v in t.leaves[c]}
        for child in t.children[c]:
            for v in members[child]:
                rep[v] = _inner(child)
        verts = list(t.leaves[c]) + [_inner(ch) for ch in t.children[c]]
        if c != t.root:
            verts.append(OUT)
        edges = {}
        for e, (u, v) in g.edges.items():
            ru = rep.get(u, OUT)
            rv = rep.get(v, OUT)
            if ru != rv:
                edges[e] = (ru, rv)
        out[c] = Multigraph.build(verts, edges)
    return out


def _maybe_rev(r: tuple, flip: bool) -> tuple:
    return tuple(reversed(r)) if flip else r


def _cyc_eq(a, b) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(b[i:] + b[:i] == a for i in range(len(b)))


def merge_constraints(constraints) -> tuple[QConstraint, ...] | None:
    """Merge overlapping default-or-reversed constraints.

    Two constraints sharing a vertex combine into one, reversing one side
    when the shared defaults are mutually reversed. None when a shared
    vertex admits no common orientation.
    """
    groups: list[dict[str, tuple[str, ...]]] = []
    for con in constraints:
        cur = {v: tuple(r) for v, r in con}
        hit = [grp for grp in groups if set(grp) & set(cur)]
        for grp in hit:
            shared = set(grp) & set(cur)
            fits = [
                f
                for f in (False, True)
                if all(_cyc_eq(cur[v], _maybe_rev(grp[v], f)) for v in shared)
            ]
            if not fits:
                return None
            f = fits[0]
            for v, r in grp.items():
                cur.setdefault(v, _maybe_rev(r, f))
            groups.remove(grp)
        groups.append(cur)
    return tuple(
        QConstraint(tuple(sorted(grp.items()))) for grp in groups
    )


def to_synplan(x: ExpandedGraph) -> SynPlanInstance | None:
    """Disjoint skeletons + pipes + merged Q-constraints.

    None means the constraints alone are contradictory (a no-instance).
    """
    t = x.tree
    members = t.members
    skels = build_skeletons(x.graph, t)

    edges = []
    for c in t.clusters:
        for e, (u, v) in sorted(skels[c].edges.items()):
            edges.append((f"{c}:{e}", f"{c}:{u}", f"{c}:{v}"))

    pipes = []
    for mu in t.clusters:
        if mu == t.root:
            continue
        inside = members[mu]
        boundary = sorted(
            e
            for e, (u, v) in x.graph.edges.items()
            if (u in inside) != (v in inside)
        )
        if not boundary:
            continue  # cluster spans everything, nothing to synchronize
        parent = t.parent[mu]
        pipes.append(
            Pipe(
                f"{parent}:{_inner(mu)}",
                f"{mu}:{OUT}",
                tuple((f"{parent}:{e}", f"{mu}:{e}") for e in boundary),
            )
        )

    cluster_of = t.cluster_of
    translated = []
    for con in x.constraints:
        rows = []
        for v, r in con.defaults:
            c = cluster_of[v]
            rows.append((f"{c}:{v}", tuple(f"{c}:{e}" for e in r)))
        translated.append(rows)
    merged = merge_constraints(translated)
    if merged is None:
        return None
    return SynPlanInstance.build(edges, pipes, merged)


def expand_synplan_solution(
    sol: SynPlanSolution, x: ExpandedGraph
) -> tuple[Rotation, dict[str, tuple[str, ...]]]:
    """Splice the per-skeleton rotations into one rotation system.

    Returns the rotation system of the expanded graph together with the
    cluster regions (vertex sets of the spliced disks). Raises on a
    solution that does not verify against the instance.
    """
    inst = to_synplan(x)
    if inst is None or not verify_synplan(inst, sol):
        raise ValueError("VERIFICATION_FAILED: solution does not verify")

    rot: Rotation = {}
    for c in x.tree.clusters:
        prefix = f"{c}:"
        for v in x.tree.leaves[c]:
            ring = sol.rotations[f"{c}:{v}"]
            rot[v] = tuple(e[len(prefix):] for e in ring)

    assert is_planar_rotation(x.graph, rot), "spliced rotations are not planar"
    for con in x.constraints:
        seen = None
        for v, default in con.defaults:
            if _cyc_eq(rot[v], default):
                d = 1
            elif _cyc_eq(rot[v], tuple(reversed(default))):
                d = -1
            else:
                raise AssertionError("constraint member left its two rotations")
            if len(default) > 2:
                if seen is None:
                    seen = d
                assert seen == d, "constraint members flipped apart"

    regions = {
        mu: tuple(sorted(x.tree.members[mu]))
        for mu in x.tree.clusters
        if mu != x.tree.root
    }
    return rot, regions


@dataclass(frozen=True)
class UclpResult:
    answer: bool
    witness: Rotation | None


def uclp_decide(
    cg: ClGraph,
    check: bool = True,
    solver_budget: int = SOLVER_BUDGET,
    oracle_budget: int = ORACLE_BUDGET,
) -> UclpResult:
    """Decide unrestricted clustered level planarity.

    Scope: biconnected graphs with a single source (ScopeError
    otherwise). A positive answer carries a witness rotation system that
    passes the level-planarity embedding test; with ``check`` the
    cluster-planarity of the witness is re-verified by the brute-force
    checker as well (which may exhaust ``oracle_budget``).
    """
    g = cg.graph
    gamma = level_planar_rotation(g)
    if gamma is None:
        return UclpResult(False, None)
    lp = build_lp_tree(g, gamma=gamma)
    x = expand_vertices(cg, lp.trees, gamma=lp.gamma)
    inst = to_synplan(x)
    if inst is None:
        return UclpResult(False, None)
    sol = solve_synplan(inst, budget=solver_budget)
    if sol is None:
        return UclpResult(False, None)
    rot_plus, _regions = expand_synplan_solution(sol, x)
    e = contract_embedding(rot_plus, x)
    assert is_level_planar_embedding(e, lp), "witness failed the level check"
    if check:
        multi, _ = level_multigraph(g.levels, g.edges)
        if not is_embedding_c_planar(multi, e, cg.clusters, oracle_budget):
            raise AssertionError("witness failed the cluster check")
    return UclpResult(True, e)
