import pytest

from clevel.core import (
    ClGraph,
    LevelGraph,
    flat_clustering,
    properize,
    root_only_clustering,
)
from clevel.embedding import (
    Multigraph,
    canonical_rotation,
    is_planar_rotation,
    level_multigraph,
    mirror_rotation,
)
from clevel.oracle import (
    Budget,
    BudgetExceeded,
    LevelDrawing,
    YclpCertificate,
    check_drawing_y_cl,
    enumerate_level_drawings,
    is_embedding_c_planar,
    oracle_is_level_planar,
    oracle_level_planar_embeddings,
    oracle_uclp,
    oracle_yclp,
    verify_yclp_certificate,
)


def lg(levels, edges):
    return LevelGraph.build(levels, edges)


def k4():
    vs = {"v1": 1, "v2": 2, "v3": 3, "v4": 4}
    es = [("v1", "v2"), ("v1", "v3"), ("v1", "v4"), ("v2", "v3"), ("v2", "v4"), ("v3", "v4")]
    return lg(vs, es)


def c4_alternating():
    return lg({"a": 1, "b": 2, "c": 1, "d": 2}, [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def diamond():
    """Source s, sink t, parallel paths through u and w on the middle level."""
    return lg({"s": 1, "u": 2, "w": 2, "t": 3}, [("s", "u"), ("s", "w"), ("u", "t"), ("w", "t")])


def split_cluster_instance():
    """A cluster whose two members sit on different levels, joinable by one edge."""
    g = lg({"s": 1, "a": 2, "c": 2, "b": 3}, [("s", "a"), ("s", "c"), ("c", "b")])
    return ClGraph(g, flat_clustering(g.vertices, {"A": ("a", "b")}))


def enclosure_instance():
    """Cluster cycle p-q-s2-r with a free vertex z that may land inside it."""
    g = lg(
        {"p": 1, "q": 2, "z": 2, "r": 2, "s2": 3},
        [("p", "q"), ("p", "r"), ("p", "z"), ("q", "s2"), ("r", "s2")],
    )
    return ClGraph(g, flat_clustering(g.vertices, {"A": ("p", "q", "r", "s2")}))


class TestDrawingEnumeration:
    def test_single_edge_one_drawing(self):
        g = lg({"a": 1, "b": 2}, [("a", "b")])
        assert [d.orders for d in enumerate_level_drawings(g)] == [(("a",), ("b",))]

    def test_alternating_four_cycle_has_none(self):
        proper, _ = properize(c4_alternating())
        assert list(enumerate_level_drawings(proper)) == []
        assert not oracle_is_level_planar(c4_alternating())

    def test_triangle_on_three_levels(self):
        g = lg({"a": 1, "b": 2, "c": 3}, [("a", "b"), ("b", "c"), ("a", "c")])
        assert oracle_is_level_planar(g)

    def test_k4_on_four_levels(self):
        proper, _ = properize(k4())
        assert sum(1 for _ in enumerate_level_drawings(proper)) == 4
        assert oracle_is_level_planar(k4())

    def test_rejects_improper_input(self):
        g = lg({"a": 1, "b": 3}, [("a", "b")])
        with pytest.raises(ValueError):
            next(enumerate_level_drawings(g))

    def test_budget_exhaustion(self):
        with pytest.raises(BudgetExceeded):
            oracle_is_level_planar(k4(), budget=3)

    def test_budget_object_is_shared(self):
        b = Budget(10**6)
        oracle_is_level_planar(k4(), budget=b)
        used = b.used
        oracle_is_level_planar(k4(), budget=b)
        assert b.used > used

    def test_drawing_json_round_trip(self):
        d = LevelDrawing((("a",), ("b", "c")))
        assert LevelDrawing.from_json(d.to_json()) == d
        assert d.to_json() == {"orders": [["a"], ["b", "c"]]}

    def test_mirror_reverses_every_level(self):
        d = LevelDrawing((("a",), ("b", "c")))
        assert d.mirror().orders == (("a",), ("c", "b"))
        assert d.mirror().mirror() == d

    def test_positions(self):
        d = LevelDrawing((("a",), ("b", "c")))
        assert d.positions == {"a": (1, 0), "b": (2, 0), "c": (2, 1)}


class TestEmbeddingEnumeration:
    def test_path_has_one_embedding(self):
        g = lg({"a": 1, "b": 2, "c": 3}, [("a", "b"), ("b", "c")])
        assert len(oracle_level_planar_embeddings(g)) == 1

    def test_k4_mirror_pair(self):
        embs = oracle_level_planar_embeddings(k4())
        assert len(embs) == 2
        a, b = embs
        assert canonical_rotation(mirror_rotation(a)) == canonical_rotation(b)

    def test_alternating_four_cycle_empty(self):
        assert oracle_level_planar_embeddings(c4_alternating()) == []

    def test_emitted_rotations_are_planar(self):
        for g in (diamond(), k4(), split_cluster_instance().graph):
            mg, _ = level_multigraph(g.levels, g.edges)
            for rot in oracle_level_planar_embeddings(g):
                assert is_planar_rotation(mg, rot)


def square_embedding():
    g = Multigraph.build(
        "abcd", {"ab": ("a", "b"), "bc": ("b", "c"), "cd": ("c", "d"), "da": ("d", "a")}
    )
    rot = {"a": ("ab", "da"), "b": ("bc", "ab"), "c": ("cd", "bc"), "d": ("da", "cd")}
    return g, rot


class TestEmbeddingCPlanarity:
    def test_root_only_is_free(self):
        g, rot = square_embedding()
        assert is_embedding_c_planar(g, rot, root_only_clustering("abcd"))

    def test_opposite_pair_gets_a_chord(self):
        g, rot = square_embedding()
        t = flat_clustering("abcd", {"A": ("a", "c")})
        assert is_embedding_c_planar(g, rot, t)

    def test_both_opposite_pairs_use_both_faces(self):
        # one chord per face keeps the drawing planar and neither cluster
        # ends up with a cycle, so nothing can be enclosed
        g, rot = square_embedding()
        t = flat_clustering("abcd", {"A": ("a", "c"), "B": ("b", "d")})
        assert is_embedding_c_planar(g, rot, t)

    def test_disconnected_graph_rejected(self):
        g = Multigraph.build("abcd", {"ab": ("a", "b"), "cd": ("c", "d")})
        rot = {"a": ("ab",), "b": ("ab",), "c": ("cd",), "d": ("cd",)}
        with pytest.raises(ValueError):
            is_embedding_c_planar(g, rot, root_only_clustering("abcd"))


class TestUclpOracle:
    def test_root_only_level_planar_true(self):
        cg = ClGraph(diamond(), root_only_clustering(diamond().vertices))
        assert oracle_uclp(cg)

    def test_not_level_planar_false(self):
        g = c4_alternating()
        cg = ClGraph(g, flat_clustering(g.vertices, {"A": ("a", "b")}))
        assert not oracle_uclp(cg)

    def test_same_level_cluster_pair(self):
        g = diamond()
        cg = ClGraph(g, flat_clustering(g.vertices, {"A": ("u", "w")}))
        assert oracle_uclp(cg)


class TestYclpOracle:
    def test_root_only_true(self):
        cg = ClGraph(diamond(), root_only_clustering(diamond().vertices))
        assert oracle_yclp(cg)

    def test_same_level_cluster_pair_false(self):
        # u and w share a level, so no augmentation edge may join them and
        # the cluster can never become connected
        g = diamond()
        cg = ClGraph(g, flat_clustering(g.vertices, {"A": ("u", "w")}))
        assert not oracle_yclp(cg)
        assert oracle_uclp(cg)

    def test_split_cluster_needs_one_edge(self):
        cg = split_cluster_instance()
        proper, _ = properize(cg.graph)
        certs = []
        for d in enumerate_level_drawings(proper):
            ok, cert = check_drawing_y_cl(cg, d)
            if ok:
                certs.append(cert)
        assert certs
        assert all(c.aug_edges == (("a", "b"),) for c in certs)
        assert all(verify_yclp_certificate(cg, c) for c in certs)
        assert oracle_yclp(cg)

    def test_certificate_json_round_trip(self):
        cert = YclpCertificate((("a", "b"),), LevelDrawing((("s",), ("a", "c"), ("b",))))
        assert YclpCertificate.from_json(cert.to_json()) == cert

    def test_enclosed_outsider_blocks_a_drawing(self):
        cg = enclosure_instance()
        inside = LevelDrawing((("p",), ("q", "z", "r"), ("s2",)))
        outside = LevelDrawing((("p",), ("q", "r", "z"), ("s2",)))
        assert not check_drawing_y_cl(cg, inside)[0]
        assert check_drawing_y_cl(cg, outside)[0]
        assert oracle_yclp(cg)
        assert oracle_uclp(cg)

    def test_mirror_preserves_drawing_answers(self):
        cg = enclosure_instance()
        proper, _ = properize(cg.graph)
        for d in enumerate_level_drawings(proper):
            assert check_drawing_y_cl(cg, d)[0] == check_drawing_y_cl(cg, d.mirror())[0]

    def test_yclp_implies_uclp(self):
        dia = diamond()
        fam = [
            ClGraph(dia, flat_clustering(dia.vertices, {"A": ("u", "w")})),
            ClGraph(dia, flat_clustering(dia.vertices, {"A": ("s", "t")})),
            ClGraph(dia, flat_clustering(dia.vertices, {"A": ("u", "t")})),
            ClGraph(dia, flat_clustering(dia.vertices, {"A": ("s", "u"), "B": ("w", "t")})),
            split_cluster_instance(),
            enclosure_instance(),
            ClGraph(k4(), flat_clustering(k4().vertices, {"A": ("v1", "v3")})),
            ClGraph(k4(), flat_clustering(k4().vertices, {"A": ("v2", "v4")})),
        ]
        for cg in fam:
            if oracle_yclp(cg):
                assert oracle_uclp(cg)


class TestCertificateVerifier:
    def setup_method(self):
        self.cg = split_cluster_instance()
        self.good = YclpCertificate((("a", "b"),), LevelDrawing((("s",), ("a", "c"), ("b",))))

    def test_accepts_valid(self):
        assert verify_yclp_certificate(self.cg, self.good)

    def test_rejects_disconnected_cluster(self):
        cert = YclpCertificate((), self.good.drawing)
        assert not verify_yclp_certificate(self.cg, cert)

    def test_rejects_same_level_augmentation(self):
        cert = YclpCertificate((("a", "c"),), self.good.drawing)
        assert not verify_yclp_certificate(self.cg, cert)

    def test_rejects_cross_cluster_augmentation(self):
        g = lg({"s": 1, "a": 2, "c": 2, "b": 3}, [("s", "a"), ("s", "c"), ("c", "b")])
        cg = ClGraph(g, flat_clustering(g.vertices, {"A": ("a",), "B": ("b",)}))
        cert = YclpCertificate((("a", "b"),), self.good.drawing)
        assert not verify_yclp_certificate(cg, cert)

    def test_rejects_wrong_vertex_set(self):
        cert = YclpCertificate((("a", "b"),), LevelDrawing((("s",), ("a",), ("b",))))
        assert not verify_yclp_certificate(self.cg, cert)

    def test_rejects_crossing_drawing(self):
        g = lg(
            {"u1": 1, "u2": 1, "v1": 2, "v2": 2, "m": 3},
            [("u1", "v2"), ("u2", "v1"), ("v1", "m"), ("v2", "m")],
        )
        cg = ClGraph(g, flat_clustering(g.vertices, {}))
        crossed = YclpCertificate((), LevelDrawing((("u1", "u2"), ("v1", "v2"), ("m",))))
        uncrossed = YclpCertificate((), LevelDrawing((("u2", "u1"), ("v1", "v2"), ("m",))))
        assert not verify_yclp_certificate(cg, crossed)
        assert verify_yclp_certificate(cg, uncrossed)


class TestPolylineGeometry:
    def test_diamond_faces_and_membership(self):
        from clevel.oracle.yclp import _orbit_area2, _point_in_orbit, _polyline_orbits

        pos = {"p": (0, 1), "q": (0, 2), "r": (2, 2), "s": (1, 3)}
        segs = [("p", "q"), ("p", "r"), ("q", "s"), ("r", "s")]
        orbits = _polyline_orbits(pos, segs)
        assert len(orbits) == 2
        areas = sorted(_orbit_area2(o, pos) for o in orbits)
        assert areas == [-4, 4]
        bounded = next(o for o in orbits if _orbit_area2(o, pos) > 0)
        assert _point_in_orbit(bounded, pos, 1, 2)
        assert not _point_in_orbit(bounded, pos, 3, 2)
        # ray from here passes straight through vertex q; the half-open
        # crossing rule must still count it exactly once
        assert not _point_in_orbit(bounded, pos, -1, 2)
