"""
Tests for multigraphs: parsing, edits, connectivity, cutsets and canonical keys.
"""

import random

import networkx as nx
from django.test import SimpleTestCase

from ..corpus import atlas, is_bridgeless, reduced
from ..exceptions import Disconnected, GraphError, HasBridge, MalformedInput, NotThreeEdgeConnected, UnknownEdge
from ..families import TEN_VERTEX_CUTSET, complete, complete_bipartite, cube, cycle, ten_vertex, petersen, prism, theta
from ..graph import (
    Edge,
    GraphFormat,
    Multigraph,
    blocks,
    bridges,
    canonical_key,
    contract_edge,
    cut_structure,
    delete_edge,
    detect_format,
    edge_connectivity,
    is_isomorphic,
    minimal_three_cutsets,
    parse,
    parse_stream,
    series_reduce,
    split_at_cutset,
)


class MultigraphTest(SimpleTestCase):
    """Tests for the Multigraph value type"""

    def test_edges_are_normalised(self):
        """Test endpoints are ordered and edges sorted by id"""
        g = Multigraph(3, (Edge(2, 1, 5), Edge(1, 0, 2)))
        self.assertEqual(g.edges, (Edge(0, 1, 2), Edge(1, 2, 5)))
        self.assertEqual(g.edge_ids, (2, 5))

    def test_invalid_edges(self):
        """Test out-of-range endpoints and duplicate ids are rejected"""
        with self.assertRaises(GraphError):
            Multigraph.from_pairs(2, [(0, 2)])
        with self.assertRaises(GraphError):
            Multigraph(2, (Edge(0, 1, 0), Edge(0, 1, 0)))

    def test_counts(self):
        """Test degrees, nullity and rank of K4"""
        g = complete(4)
        self.assertEqual(g.degrees, (3, 3, 3, 3))
        self.assertEqual(g.nullity, 3)
        self.assertEqual(g.rank, 3)
        self.assertTrue(g.is_connected)
        self.assertTrue(g.is_simple())

    def test_unknown_edge(self):
        """Test lookups of a missing id"""
        with self.assertRaises(UnknownEdge) as ctx:
            complete(3).edge(7)
        self.assertEqual(ctx.exception.edge_id, 7)

    def test_simple_collapses_parallel_edges(self):
        """Test the underlying simple graph drops loops and parallels"""
        g = Multigraph.from_pairs(2, [(0, 1), (0, 1), (1, 1)])
        self.assertEqual(g.simple().edges, (Edge(0, 1, 0),))
        self.assertEqual(len(g.loops), 1)
        self.assertEqual(g.multiplicity(1), 2)


class ParseTest(SimpleTestCase):
    """Tests for graph6, sparse6 and edge-list input"""

    def test_graph6_k4(self):
        """Test 'C~' decodes to K4"""
        g = parse(GraphFormat.GRAPH6, b"C~")
        self.assertEqual((g.n, g.m), (4, 6))
        self.assertTrue(is_isomorphic(g, complete(4)))

    def test_graph6_truncated(self):
        """Test a record missing its body reports the byte offset and line"""
        with self.assertRaises(MalformedInput) as ctx:
            parse_stream(GraphFormat.GRAPH6, b"C~\nC\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.offset, 4)

    def test_graph6_bad_byte(self):
        """Test bytes outside the printable range are rejected"""
        with self.assertRaises(MalformedInput) as ctx:
            parse(GraphFormat.GRAPH6, b"C\x01")
        self.assertEqual(ctx.exception.offset, 1)

    def test_sparse6_multigraph(self):
        """Test sparse6 keeps parallel edges"""
        g = parse(GraphFormat.SPARSE6, b":A_")
        self.assertTrue(is_isomorphic(g, theta(3)))

    def test_edgelist_stream(self):
        """Test consecutive edge-list records"""
        graphs = parse_stream(GraphFormat.EDGELIST, b"3 3\n0 1\n1 2\n2 0\n2 2\n0 1\n0 1\n")
        self.assertEqual(len(graphs), 2)
        self.assertTrue(is_isomorphic(graphs[0], cycle(3)))
        self.assertTrue(is_isomorphic(graphs[1], theta(2)))

    def test_edgelist_errors(self):
        """Test edge-list errors carry line numbers"""
        with self.assertRaises(MalformedInput) as ctx:
            parse_stream(GraphFormat.EDGELIST, b"2 1\n0 5\n")
        self.assertEqual(ctx.exception.line, 2)
        with self.assertRaises(MalformedInput):
            parse_stream(GraphFormat.EDGELIST, b"2 2\n0 1\n")

    def test_parse_expects_one_graph(self):
        """Test parse rejects empty input"""
        with self.assertRaises(MalformedInput):
            parse(GraphFormat.GRAPH6, b"")

    def test_detect_format(self):
        """Test format detection from the first line"""
        self.assertEqual(detect_format(b"C~\n"), GraphFormat.GRAPH6)
        self.assertEqual(detect_format(b":A_\n"), GraphFormat.SPARSE6)
        self.assertEqual(detect_format(b"3 3\n0 1\n"), GraphFormat.EDGELIST)


class EditTest(SimpleTestCase):
    """Tests for deletion, contraction and block splitting"""

    def test_delete_and_contract(self):
        """Test deletion keeps vertices and contraction merges endpoints"""
        g = complete(4)
        self.assertEqual(delete_edge(g, 0).m, 5)
        contracted = contract_edge(g, 0)
        self.assertEqual((contracted.n, contracted.m), (3, 5))
        self.assertEqual(sorted(contracted.multiplicities.values()), [1, 2, 2])
        with self.assertRaises(UnknownEdge):
            delete_edge(g, 42)

    def test_contract_loop_deletes_it(self):
        """Test contracting a loop removes it"""
        g = Multigraph.from_pairs(1, [(0, 0)])
        self.assertEqual(contract_edge(g, 0).m, 0)

    def test_blocks(self):
        """Test two triangles sharing a vertex split into two blocks"""
        g = Multigraph.from_pairs(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 4)])
        parts = blocks(g)
        self.assertEqual(len(parts), 3)
        self.assertEqual([p.m for p in parts], [3, 3, 1])
        self.assertTrue(is_isomorphic(parts[0], cycle(3)))


class ConnectivityTest(SimpleTestCase):
    """Tests for bridges, edge connectivity and series reduction"""

    def test_bridges(self):
        """Test bridges of a path and of a cycle"""
        path = Multigraph.from_pairs(3, [(0, 1), (1, 2)])
        self.assertEqual(bridges(path), frozenset({0, 1}))
        self.assertEqual(bridges(cycle(4)), frozenset())
        self.assertEqual(bridges(theta(2)), frozenset())

    def test_edge_connectivity(self):
        """Test minimum cut sizes"""
        self.assertEqual(edge_connectivity(complete(4)), 3)
        self.assertEqual(edge_connectivity(petersen()), 3)
        self.assertEqual(edge_connectivity(cycle(5)), 2)
        self.assertEqual(edge_connectivity(complete(5)), 4)
        self.assertIsNone(edge_connectivity(Multigraph(1)))
        with self.assertRaises(Disconnected):
            edge_connectivity(Multigraph(2))

    def test_series_reduce_cycle(self):
        """Test a cycle reduces to one vertex with a loop"""
        reduced = series_reduce(cycle(5))
        self.assertEqual(reduced.n, 1)
        self.assertEqual(len(reduced.loops), 1)

    def test_series_reduce_subdivided_k4(self):
        """Test a subdivided K4 returns to K4"""
        g = Multigraph.from_pairs(5, [(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        self.assertTrue(is_isomorphic(series_reduce(g), complete(4)))

    def test_series_reduce_bridge(self):
        """Test series reduction refuses bridged graphs"""
        with self.assertRaises(HasBridge):
            series_reduce(Multigraph.from_pairs(2, [(0, 1)]))

    def test_cut_structure_matches_networkx(self):
        """Test cut edges and cut vertices against networkx on the atlas"""
        for graph_id, g in atlas(6):
            simple = g.simple_networkx()
            structure = cut_structure(g)
            expected = {tuple(sorted(pair)) for pair in nx.bridges(simple)}
            self.assertEqual({(g.edge(eid).u, g.edge(eid).v) for eid in structure.bridges}, expected, graph_id)
            self.assertEqual(structure.cut_vertices, frozenset(nx.articulation_points(simple)), graph_id)

    def test_parallel_edges_and_exclusions(self):
        """Test parallel edges are never bridges and excluded edges are gone"""
        doubled = Multigraph.from_pairs(3, [(0, 1), (0, 1), (1, 2), (1, 1)])
        structure = cut_structure(doubled)
        self.assertEqual(structure.bridges, frozenset({2}))
        self.assertEqual(structure.cut_vertices, frozenset({1}))
        self.assertEqual(bridges(doubled, exclude=(0,)), frozenset({1, 2}))
        self.assertEqual(bridges(complete(4), exclude=(0, 1)), frozenset({2}))

    def test_reduced_corpus_is_loop_free(self):
        """Test corpus.reduced drops the loops series reduction leaves"""
        subdivided_theta = Multigraph.from_pairs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)])
        self.assertEqual(len(series_reduce(subdivided_theta).loops), 0)
        items = [('c5', cycle(5)), ('subdivided', subdivided_theta), ('prism', prism())]
        out = dict(reduced(items))
        self.assertEqual(set(out), {'c5-reduced', 'subdivided-reduced', 'prism-reduced'})
        self.assertTrue(all(not g.loops for g in out.values()))
        self.assertEqual((out['c5-reduced'].n, out['c5-reduced'].m), (1, 0))
        self.assertEqual(out['subdivided-reduced'].m, 3)


class CutsetTest(SimpleTestCase):
    """Tests for minimal 3-cutsets"""

    def test_k4_has_only_vertex_cutsets(self):
        """Test K4's four 3-cutsets are all improper"""
        report = minimal_three_cutsets(complete(4))
        self.assertEqual(len(report.cutsets), 4)
        self.assertEqual(report.proper, [])

    def test_prism(self):
        """Test the prism's rungs form its only proper 3-cutset"""
        report = minimal_three_cutsets(prism())
        self.assertEqual(len(report.cutsets), 7)
        self.assertEqual([c.edges for c in report.proper], [(6, 7, 8)])

    def test_not_three_edge_connected(self):
        """Test the enumerator requires edge connectivity three"""
        with self.assertRaises(NotThreeEdgeConnected):
            minimal_three_cutsets(cycle(4))

    def test_ten_vertex_cutset(self):
        """Test the dashed cutset splits off a K4"""
        g = ten_vertex()
        cutset = minimal_three_cutsets(g).find(TEN_VERTEX_CUTSET)
        self.assertIsNotNone(cutset)
        self.assertTrue(cutset.proper)
        self.assertIn((2, 3, 6), (cutset.side_a, cutset.side_b))
        g1, g2 = split_at_cutset(g, cutset)
        small, large = sorted((g1, g2), key=lambda h: h.m)
        self.assertTrue(is_isomorphic(small, complete(4)))
        self.assertEqual((large.n, large.m), (8, 15))


class CanonicalKeyTest(SimpleTestCase):
    """Tests for isomorphism-invariant keys"""

    def test_relabel_invariance(self):
        """Test keys ignore vertex labels and edge ids"""
        g = ten_vertex()
        h = g.relabel([9, 3, 7, 1, 0, 5, 2, 8, 4, 6])
        self.assertEqual(canonical_key(g), canonical_key(h))

    def test_multiplicities_matter(self):
        """Test parallel edges and loops change the key"""
        self.assertNotEqual(canonical_key(theta(2)), canonical_key(theta(3)))
        self.assertNotEqual(
            canonical_key(Multigraph.from_pairs(2, [(0, 1), (0, 0)])),
            canonical_key(Multigraph.from_pairs(2, [(0, 1), (1, 1), (1, 1)])),
        )

    def test_cubic_six_vertex_graphs(self):
        """Test the prism and K3,3 are told apart"""
        self.assertFalse(is_isomorphic(prism(), complete_bipartite(3, 3)))
        self.assertTrue(is_isomorphic(cube(), cube().relabel([7, 6, 5, 4, 3, 2, 1, 0])))

    def test_stable_under_random_relabelings(self):
        """Test 100 random relabelings per graph leave the key unchanged"""
        rng = random.Random(3)
        graphs = [ten_vertex(), prism(), complete(4), theta(3), complete_bipartite(3, 3)]
        graphs += [g for index, (_, g) in enumerate(atlas(6, is_bridgeless)) if index % 9 == 0]
        pairs = [(rng.randrange(7), rng.randrange(7)) for _ in range(12)]
        graphs.append(Multigraph.from_pairs(7, pairs))
        for g in graphs:
            key = canonical_key(g)
            for _ in range(100):
                mapping = list(range(g.n))
                rng.shuffle(mapping)
                self.assertEqual(canonical_key(g.relabel(mapping)), key, str(g))
