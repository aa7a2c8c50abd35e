import pytest

from autfn.endos import (
    Endomorphism, change_basis, equal_up_to_inner, is_basis, is_inner, order,
)
from autfn.graphs import (
    EdgePath, Graph, GraphAut, closed_chain, collapse_forest, hairy,
    induced_endo, induced_out_rep, open_chain, pair_swap_aut, path_from_ids,
    presentation, ring, rose, rotation_aut,
)
from autfn.words import Word, parse_word


def W(text, rank):
    return parse_word(text, rank)


def path(g, *atoms):
    src, dst = g.endpoints(atoms[0][0])
    start = src if atoms[0][1] else dst
    return path_from_ids(g, start, atoms)


def example_graph_six():
    """Two vertices, three parallel edges, four basepoint loops (rank 6)."""
    g = Graph(
        ("v0", "v1"),
        tuple((f"s{i}", "v0", "v1") for i in (1, 2, 3))
        + tuple((f"l{i}", "v0", "v0") for i in (1, 2, 3, 4)),
    )
    aut = GraphAut(
        g,
        {"v0": "v0", "v1": "v1"},
        {"s1": ("s2", False), "s2": ("s3", False), "s3": ("s1", False),
         "l1": ("l2", False), "l2": ("l3", False), "l3": ("l4", False),
         "l4": ("l1", False)},
    )
    return g, aut


class TestConstructors:
    def test_rose(self):
        g = rose(5)
        assert len(g.vertices) == 1
        assert len(g.edges) == 5
        assert g.rank() == 5

    def test_hairy(self):
        g = hairy(5)
        assert len(g.vertices) == 2
        assert g.rank() == 4

    def test_ring(self):
        g = ring(5, 3)
        assert len(g.vertices) == 5
        assert len(g.edges) == 15
        assert g.rank() == 11

    def test_chains(self):
        assert closed_chain(4).rank() == 5
        for k in (1, 3, 5):
            assert open_chain(k).rank() == k + 1

    def test_connectivity_enforced(self):
        with pytest.raises(ValueError):
            Graph(("a", "b"), (("e", "a", "a"),))


class TestGraphAut:
    def test_incidence_checked(self):
        g = hairy(2)
        with pytest.raises(ValueError):
            GraphAut(g, {"v0": "v1", "v1": "v0"},
                     {"s1": ("s1", False), "s2": ("s2", False)})

    def test_non_loop_self_reversal_rejected(self):
        g = hairy(2)
        with pytest.raises(ValueError):
            GraphAut(g, {"v0": "v0", "v1": "v1"},
                     {"s1": ("s1", True), "s2": ("s2", False)})

    def test_loop_may_reverse(self):
        g = rose(2)
        aut = GraphAut(g, {"v0": "v0"},
                       {"s1": ("s1", True), "s2": ("s2", False)})
        assert aut.edge_map["s1"] == ("s1", True)

    def test_rotation_order(self):
        g = ring(5, 3)
        r = rotation_aut(g)
        assert (r ** 5).is_identity()
        assert not (r ** 3).is_identity()
        assert all(r.vertex_map[v] != v for v in g.vertices)

    def test_rotation_on_wrong_family(self):
        g = Graph(("a",), (("q1", "a", "a"),))
        with pytest.raises(ValueError):
            rotation_aut(g)

    def test_rotation_moves_layers(self):
        r2 = rotation_aut(ring(2, 3))
        assert r2.edge_map["s1"] == ("s2", False)
        assert r2.edge_map["l0_1"] == ("l1_1", False)


class TestPresentation:
    def test_rose_has_empty_tree(self):
        pres = presentation(rose(4), "v0")
        assert pres.tree_edges == frozenset()
        assert pres.generators == ("s1", "s2", "s3", "s4")

    def test_hairy_tree_is_single_edge(self):
        pres = presentation(hairy(5), "v0")
        assert len(pres.tree_edges) == 1
        assert pres.rank == 4

    def test_open_chain_rank(self):
        for k in (2, 4):
            pres = presentation(open_chain(k), "v0")
            assert pres.rank == k + 1

    def test_unknown_basepoint(self):
        with pytest.raises(ValueError):
            presentation(rose(2), "nope")


class TestPathToWord:
    def test_tree_only_loop_is_trivial(self):
        g = hairy(2)
        pres = presentation(g, "v0")
        tree_edge = next(iter(pres.tree_edges))
        p = path(g, (tree_edge, True), (tree_edge, False))
        assert pres.path_to_word(p) == Word.identity(1)

    def test_single_generator_loop(self):
        g = rose(3)
        pres = presentation(g, "v0")
        assert pres.path_to_word(path(g, ("s2", True))) == W("x2", 3)

    def test_two_edge_loop_on_hairy(self):
        g = hairy(5)
        pres = presentation(g, "v0")
        w = pres.path_to_word(path(g, ("s1", True), ("s2", False)))
        assert len(w) <= 2 and not w.is_identity()

    def test_open_path_rejected(self):
        g = hairy(2)
        pres = presentation(g, "v0")
        with pytest.raises(ValueError):
            pres.path_to_word(path(g, ("s1", True)))


class TestInducedEndo:
    def test_rank_six_realization_matches(self):
        g, aut = example_graph_six()
        pres = presentation(g, "v0")
        fc = induced_endo(pres, aut)
        basis = [
            pres.path_to_word(path(g, ("s1", True), ("s2", False))),
            pres.path_to_word(path(g, ("s2", True), ("s3", False))),
            pres.path_to_word(path(g, ("l1", True))),
            pres.path_to_word(path(g, ("l2", True))),
            pres.path_to_word(path(g, ("l3", True))),
            pres.path_to_word(path(g, ("l4", True))),
        ]
        f = change_basis(fc, basis)
        expected = Endomorphism.from_images(
            [W(s, 6) for s in ("x2", "x2^-1 x1^-1", "x4", "x5", "x6", "x3")]
        )
        assert f == expected

    def test_identity_automorphism(self):
        g = rose(3)
        pres = presentation(g, "v0")
        assert induced_endo(pres, GraphAut.identity(g)).is_identity()

    def test_rose_rotation_shifts(self):
        g = rose(5)
        pres = presentation(g, "v0")
        f = induced_endo(pres, rotation_aut(g))
        assert f == Endomorphism.from_images(
            [W(s, 5) for s in ("x2", "x3", "x4", "x5", "x1")]
        )

    def test_always_a_basis(self):
        for g, aut in (
            (rose(4), rotation_aut(rose(4))),
            (closed_chain(3), pair_swap_aut(closed_chain(3))),
        ):
            pres = presentation(g, g.vertices[0])
            assert is_basis(induced_endo(pres, aut).images)

    def test_order_divides_graph_order(self):
        g = rose(6)
        aut = rotation_aut(g)
        pres = presentation(g, "v0")
        f = induced_endo(pres, aut)
        assert 6 % order(f) == 0

    def test_moved_basepoint_rejected(self):
        g = ring(3, 2)
        pres = presentation(g, "v0")
        with pytest.raises(ValueError):
            induced_endo(pres, rotation_aut(g))


class TestInducedOutRep:
    def test_empty_delta_matches_induced_endo(self):
        g, aut = example_graph_six()
        pres = presentation(g, "v0")
        delta = EdgePath(g, "v0", ())
        assert induced_out_rep(pres, aut, delta) == induced_endo(pres, aut)

    def test_shift_realization_matches(self):
        g = ring(3, 2)
        pres = presentation(g, "v0")
        rep = induced_out_rep(pres, rotation_aut(g), path(g, ("s1", True)))
        basis = [
            pres.path_to_word(path(g, ("l0_1", True))),
            pres.path_to_word(path(g, ("s1", True), ("l1_1", True), ("s1", False))),
            pres.path_to_word(
                path(g, ("s1", True), ("s2", True), ("l2_1", True),
                     ("s2", False), ("s1", False))),
            pres.path_to_word(path(g, ("s1", True), ("s2", True), ("s3", True))),
        ]
        gstar = change_basis(rep, basis)
        expected = Endomorphism.from_images(
            [W(s, 4) for s in ("x2", "x3", "x4 x1 x4^-1", "x4")]
        )
        assert gstar == expected

    def test_wrong_delta_rejected(self):
        g = ring(3, 2)
        pres = presentation(g, "v0")
        with pytest.raises(ValueError):
            induced_out_rep(pres, rotation_aut(g), path(g, ("s2", True)))

    def test_delta_change_is_inner(self):
        g = ring(5, 3)
        pres = presentation(g, "v0")
        aut = rotation_aut(g)
        d1 = path(g, ("s1", True))
        d2 = path(g, ("l0_1", True), ("s1", True))
        d3 = path(g, ("l0_2", False), ("l0_1", True), ("s1", True))
        reps = [induced_out_rep(pres, aut, d) for d in (d1, d2, d3)]
        for a in reps:
            for b in reps:
                assert is_inner(a * (b ** -1)) is not None

    def test_multiplicative_up_to_inner(self):
        g = ring(5, 3)
        pres = presentation(g, "v0")
        rot = rotation_aut(g)
        samples = [(rot, rot), (rot, rot ** 2), (rot ** 2, rot ** 3)]
        for a, b in samples:
            def connecting(aut):
                steps = []
                v = "v0"
                while aut.vertex_map["v0"] != v:
                    idx = int(v[1:]) + 1
                    steps.append((f"s{idx}", True))
                    v = f"v{idx % 5}"
                return path_from_ids(g, "v0", steps)

            phi_a = induced_out_rep(pres, a, connecting(a))
            phi_b = induced_out_rep(pres, b, connecting(b))
            ab = a * b
            phi_ab = induced_out_rep(pres, ab, connecting(ab))
            assert equal_up_to_inner(phi_ab, phi_a * phi_b) is not None


class TestCollapseForest:
    def test_two_vertex_tree_edge(self):
        g = hairy(3)
        aut = GraphAut(
            g, {"v0": "v0", "v1": "v1"},
            {"s1": ("s1", False), "s2": ("s3", False), "s3": ("s2", False)},
        )
        collapsed, caut = collapse_forest(g, ["s1"], aut)
        assert len(collapsed.vertices) == 1
        assert collapsed.rank() == g.rank()
        assert set(caut.edge_map) == {"s2", "s3"}

    def test_full_orbit_cycle_rejected(self):
        g = hairy(4)
        aut = GraphAut(
            g, {"v0": "v0", "v1": "v1"},
            {"s1": ("s2", False), "s2": ("s3", False),
             "s3": ("s4", False), "s4": ("s1", False)},
        )
        with pytest.raises(ValueError, match="cycle"):
            collapse_forest(g, ["s1", "s2", "s3", "s4"], aut)

    def test_non_invariant_rejected(self):
        g = hairy(4)
        aut = GraphAut(
            g, {"v0": "v0", "v1": "v1"},
            {"s1": ("s2", False), "s2": ("s1", False),
             "s3": ("s4", False), "s4": ("s3", False)},
        )
        with pytest.raises(ValueError, match="invariant"):
            collapse_forest(g, ["s1"], aut)

    def test_rank_preserved_on_chain(self):
        g = closed_chain(4)
        aut = pair_swap_aut(g)
        forest = ["s1_1", "s2_1", "s3_1"]
        # Not invariant under the swap; use the identity automorphism instead.
        collapsed, _ = collapse_forest(g, forest, GraphAut.identity(g))
        assert collapsed.rank() == g.rank()
        assert len(collapsed.vertices) == 1
