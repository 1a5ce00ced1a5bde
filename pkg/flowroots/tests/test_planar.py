"""
Tests for embeddings, duals, chordality and the planar chordal generators.
"""

from django.test import SimpleTestCase

from ..exceptions import DisconnectedInput, HasBridge, InvalidScript, PlanarError
from ..families import bipyramid, complete, complete_bipartite, cube, cycle, fan_dual, petersen, prism, theta
from ..flowcalc import FlowEngine
from ..graph import Multigraph, is_isomorphic
from ..planar import (
    Embedding,
    GeneratorMode,
    NonPlanar,
    build_from_script,
    dual,
    dual_embedding,
    gen_chordal_planar,
    is_chordal,
    is_dual_of_planar_chordal,
    is_series_parallel,
    is_two_tree,
    planarity_embed,
)
from ..polynomial import integer_roots


def embed(g: Multigraph) -> Embedding:
    embedding = planarity_embed(g)
    assert isinstance(embedding, Embedding)
    return embedding


class EmbeddingTest(SimpleTestCase):
    """Tests for planarity_embed and face tracing"""

    def test_k4_faces(self):
        """Test K4 embeds with four triangular faces"""
        embedding = embed(complete(4))
        self.assertEqual(len(embedding.faces), 4)
        self.assertTrue(all(len(face) == 3 for face in embedding.faces))
        self.assertTrue(embedding.euler_holds)

    def test_parallel_edges_and_loops(self):
        """Test multigraph faces: theta graphs get 2-faces, a loop splits the plane"""
        self.assertEqual(embed(theta(3)).face_count, 3)
        self.assertEqual(embed(cycle(1)).face_count, 2)
        self.assertEqual(embed(Multigraph.from_pairs(2, [(0, 1), (0, 1), (1, 1)])).face_count, 3)

    def test_kuratowski_witnesses(self):
        """Test K5 and K3,3 are reported with their kind"""
        k5 = planarity_embed(complete(5))
        self.assertIsInstance(k5, NonPlanar)
        self.assertEqual(k5.kind, "K5")
        self.assertEqual(len(k5.witness_edges), 10)
        k33 = planarity_embed(complete_bipartite(3, 3))
        self.assertEqual(k33.kind, "K3,3")
        self.assertIsInstance(planarity_embed(petersen()), NonPlanar)

    def test_invalid_rotation(self):
        """Test a rotation that misses darts is rejected"""
        with self.assertRaises(PlanarError):
            Embedding(cycle(3), (((0, 0),), ((0, 1),), ()))


class DualTest(SimpleTestCase):
    """Tests for dual graphs and dual maps"""

    def test_k4_is_self_dual(self):
        """Test the dual of K4 is K4 and keeps edge ids"""
        h = dual(embed(complete(4)))
        self.assertTrue(is_isomorphic(h, complete(4)))
        self.assertEqual(h.edge_ids, complete(4).edge_ids)

    def test_known_duals(self):
        """Test prism/bipyramid, cube/octahedron and theta/triangle"""
        self.assertTrue(is_isomorphic(dual(embed(prism())), bipyramid()))
        octahedron = dual(embed(cube()))
        self.assertEqual((octahedron.n, octahedron.m), (6, 12))
        self.assertEqual(set(octahedron.degrees), {4})
        self.assertTrue(is_isomorphic(dual(embed(theta(3))), cycle(3)))

    def test_bridge_becomes_loop(self):
        """Test a bridge is dual to a loop"""
        h = dual(embed(Multigraph.from_pairs(4, [(0, 1), (1, 2), (0, 2), (2, 3)])))
        self.assertEqual((h.n, len(h.loops)), (2, 1))
        self.assertEqual(h.loops[0].eid, 3)
        path = dual(embed(Multigraph.from_pairs(2, [(0, 1)])))
        self.assertEqual((path.n, len(path.loops)), (1, 1))

    def test_dual_of_dual(self):
        """Test taking the dual map twice returns the original graph"""
        for g in (complete(4), prism(), cube(), theta(3), fan_dual(5)):
            embedding = embed(g)
            self.assertTrue(is_isomorphic(dual(dual_embedding(embedding)), g))

    def test_disconnected(self):
        """Test duals of disconnected embeddings are refused"""
        g = Multigraph.from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        with self.assertRaises(DisconnectedInput):
            dual(embed(g))


class ChordalityTest(SimpleTestCase):
    """Tests for chordality, 2-trees and series-parallel graphs"""

    def test_chordal(self):
        """Test elimination orders and chordless cycles"""
        result = is_chordal(bipyramid())
        self.assertTrue(result.chordal)
        self.assertEqual(sorted(result.elimination_order), [0, 1, 2, 3, 4])
        square = is_chordal(cycle(4))
        self.assertFalse(square.chordal)
        self.assertEqual(len(square.chordless_cycle), 4)
        self.assertFalse(is_chordal(dual(embed(cube()))).chordal)

    def test_multigraph_edges_ignored(self):
        """Test parallel edges and loops do not affect chordality"""
        self.assertTrue(is_chordal(Multigraph.from_pairs(3, [(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)])).chordal)

    def test_two_tree(self):
        """Test 2-tree recognition"""
        self.assertTrue(is_two_tree(cycle(3)))
        self.assertTrue(is_two_tree(Multigraph.from_pairs(4, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])))
        self.assertFalse(is_two_tree(complete(4)))
        self.assertFalse(is_two_tree(bipyramid()))
        self.assertFalse(is_two_tree(cycle(4)))

    def test_series_parallel(self):
        """Test K4-minor detection"""
        self.assertTrue(is_series_parallel(cycle(5)))
        self.assertTrue(is_series_parallel(theta(4)))
        self.assertTrue(is_series_parallel(Multigraph.from_pairs(4, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])))
        self.assertFalse(is_series_parallel(complete(4)))
        self.assertFalse(is_series_parallel(prism()))


class GeneratorTest(SimpleTestCase):
    """Tests for the planar chordal generators"""

    def test_two_trees(self):
        """Test edge-joins give 2-trees with 2n - 3 edges"""
        generated = gen_chordal_planar(GeneratorMode.TWO_TREE, 9, seed=3)
        self.assertEqual((generated.graph.n, generated.graph.m), (9, 15))
        self.assertTrue(is_two_tree(generated.graph))
        self.assertTrue(is_series_parallel(generated.graph))

    def test_triangulations(self):
        """Test face insertions give chordal triangulations with 3n - 6 edges"""
        generated = gen_chordal_planar(GeneratorMode.TRIANGULATION, 9, seed=3)
        self.assertEqual(generated.graph.m, 21)
        self.assertTrue(is_chordal(generated.graph).chordal)
        self.assertEqual(len(generated.embedding.faces), 14)

    def test_chordal_planar(self):
        """Test mixed steps stay chordal and planar"""
        for seed in range(10):
            generated = gen_chordal_planar(GeneratorMode.CHORDAL_PLANAR, 10, seed=seed)
            self.assertTrue(is_chordal(generated.graph).chordal, seed)
            self.assertTrue(generated.embedding.euler_holds, seed)

    def test_determinism_and_replay(self):
        """Test a seed fixes the graph and the script rebuilds it"""
        first = gen_chordal_planar(GeneratorMode.CHORDAL_PLANAR, 12, seed=7)
        second = gen_chordal_planar(GeneratorMode.CHORDAL_PLANAR, 12, seed=7)
        self.assertEqual(first.graph, second.graph)
        self.assertEqual(first.script, second.script)
        self.assertEqual(build_from_script(first.script).graph, first.graph)

    def test_thousand_seeds(self):
        """Test every mode over 1000 seeds: chordal, planar, sized right and replayable"""
        modes = list(GeneratorMode)
        engine = FlowEngine.with_capacity(10000)
        for seed in range(1000):
            mode = modes[seed % len(modes)]
            n = 3 + (seed // len(modes)) % 9
            generated = gen_chordal_planar(mode, n, seed=seed)
            g = generated.graph
            label = f"{mode.value} n={n} seed={seed}"
            self.assertEqual(g.n, n, label)
            self.assertTrue(g.is_simple(), label)
            self.assertTrue(2 * n - 3 <= g.m <= max(3 * n - 6, 3), label)
            if mode is GeneratorMode.TWO_TREE:
                self.assertEqual(g.m, 2 * n - 3, label)
            if mode is GeneratorMode.TRIANGULATION:
                self.assertEqual(g.m, max(3 * n - 6, 3), label)
            self.assertTrue(is_chordal(g).chordal, label)
            self.assertTrue(generated.embedding.euler_holds, label)
            self.assertIsInstance(planarity_embed(g), Embedding, label)
            self.assertEqual(build_from_script(generated.script).graph, g, label)
            if seed % 50 == 0:
                flow = engine.flow_poly(dual(generated.embedding))
                self.assertTrue(integer_roots(flow).all_roots_integral, label)

    def test_too_small(self):
        """Test sizes below three are refused"""
        with self.assertRaises(PlanarError):
            gen_chordal_planar(GeneratorMode.TWO_TREE, 2)

    def test_script_errors(self):
        """Test build scripts report the offending line"""
        with self.assertRaises(InvalidScript) as ctx:
            build_from_script(["# comment", "E 0 1", "E 0 9"])
        self.assertEqual(ctx.exception.line, 3)
        with self.assertRaises(InvalidScript) as ctx:
            build_from_script(["F 0 1 2", "F 0 1 2", "F 0 1 2"])
        self.assertEqual(ctx.exception.line, 3)
        with self.assertRaises(InvalidScript):
            build_from_script(["X 1"])
        with self.assertRaises(InvalidScript):
            build_from_script(["E 0 2", "E 1 3"])


class StructuralRecognizerTest(SimpleTestCase):
    """Tests for is_dual_of_planar_chordal"""

    def test_k4(self):
        """Test K4 is the dual of a planar chordal graph"""
        report = is_dual_of_planar_chordal(complete(4))
        self.assertTrue(report.dual_of_planar_chordal)
        self.assertTrue(report.planar)
        self.assertTrue(report.certificate_chordal)
        self.assertEqual(report.blocks[0].roots, (1, 2, 3))

    def test_cube(self):
        """Test the cube's dual is the non-chordal octahedron"""
        report = is_dual_of_planar_chordal(cube())
        self.assertFalse(report.dual_of_planar_chordal)
        self.assertFalse(report.certificate_chordal)
        self.assertEqual(len(report.chordal_check.chordless_cycle), 4)

    def test_petersen(self):
        """Test the Petersen graph is non-planar and not supersolvable"""
        report = is_dual_of_planar_chordal(petersen())
        self.assertFalse(report.planar)
        self.assertFalse(report.dual_of_planar_chordal)
        self.assertIsNotNone(report.kuratowski)
        self.assertIsNone(report.certificate)

    def test_series_edges_and_blocks(self):
        """Test subdivided and block-joined inputs are reduced first"""
        subdivided = Multigraph.from_pairs(5, [(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        self.assertTrue(is_dual_of_planar_chordal(subdivided).dual_of_planar_chordal)
        two_k4s = Multigraph.from_pairs(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
                                            (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)])
        report = is_dual_of_planar_chordal(two_k4s)
        self.assertEqual(len(report.blocks), 2)
        self.assertTrue(report.dual_of_planar_chordal)

    def test_bridge(self):
        """Test bridged graphs are refused"""
        with self.assertRaises(HasBridge):
            is_dual_of_planar_chordal(Multigraph.from_pairs(2, [(0, 1)]))
