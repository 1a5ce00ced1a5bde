"""
Tests for rank-oracle matroids, the lattice of flats, modularity,
supersolvability, parallel connections and the three-circuit bounds.
"""

from unittest.mock import patch

from django.test import SimpleTestCase

from ..exceptions import BudgetExceeded, GlueNotModular, GlueNotPresent, HypothesisNotMet, NonDivisible, NotAFlat
from ..families import bipyramid, complete, complete_bipartite, cube, cycle, prism, theta
from ..graph import Multigraph
from ..matroid import (
    FlatLattice,
    Glue,
    GlueKind,
    UniformMatroid,
    char_poly_mobius,
    cocycle_matroid,
    cycle_matroid,
    is_modular_flat,
    is_modular_flat_by_rank,
    is_supersolvable,
    line_stats,
    parallel_connection,
    three_circuit_bound_check,
)
from ..planar import NonPlanar, planarity_embed
from ..polynomial import IntPoly, divide_exact


class MatroidTest(SimpleTestCase):
    """Tests for rank, closure and simplification"""

    def test_cycle_matroid_rank(self):
        """Test the cycle matroid of K4"""
        m = cycle_matroid(complete(4))
        self.assertEqual(m.full_rank, 3)
        self.assertEqual(m.rank([0, 1, 3]), 2)
        self.assertEqual(m.closure([0, 1]), frozenset({0, 1, 3}))
        self.assertTrue(m.is_flat([0, 5]))
        self.assertTrue(m.is_simple())

    def test_cocycle_matroid_rank(self):
        """Test the cocycle rank equals the nullity"""
        self.assertEqual(cocycle_matroid(complete(4)).full_rank, 3)
        self.assertEqual(cocycle_matroid(complete_bipartite(3, 3)).full_rank, 4)
        dual_of_cycle = cocycle_matroid(cycle(4))
        self.assertEqual(dual_of_cycle.full_rank, 1)
        self.assertEqual(dual_of_cycle.parallel_classes(), [(0, 1, 2, 3)])

    def test_loops_and_parallels(self):
        """Test loops are dropped and parallel classes collapsed"""
        m = cycle_matroid(Multigraph.from_pairs(3, [(0, 1), (0, 1), (1, 2), (2, 2)]))
        self.assertEqual(m.loops(), frozenset({3}))
        self.assertEqual(m.parallel_classes(), [(0, 1), (2,)])
        self.assertEqual(m.simplify().elements, (0, 2))
        self.assertFalse(m.is_simple())

    def test_restriction_keeps_ids(self):
        """Test restrictions of restrictions stay on the base matroid"""
        m = cycle_matroid(complete(4))
        inner = m.restrict([0, 1, 3, 5]).restrict([0, 3, 5])
        self.assertIs(inner.base, m)
        self.assertEqual(inner.rank(), 3)
        self.assertEqual(inner.elements, (0, 3, 5))


class FlatLatticeTest(SimpleTestCase):
    """Tests for the lattice of flats and Moebius characteristic polynomials"""

    def test_k4_lattice(self):
        """Test M(K4) has 15 flats with four triangles and three two-point lines"""
        lattice = FlatLattice(cycle_matroid(complete(4)))
        self.assertEqual(lattice.rank, 3)
        self.assertEqual(len(lattice), 15)
        self.assertEqual(sorted(len(f) for f in lattice.flats(2)), [2, 2, 2, 3, 3, 3, 3])
        self.assertEqual(lattice.characteristic_polynomial(), IntPoly.from_roots([1, 2, 3]))

    def test_uniform(self):
        """Test chi(U(3,4)) = (x-1)(x^2-3x+3)"""
        self.assertEqual(char_poly_mobius(UniformMatroid(3, 4)), IntPoly((-3, 6, -4, 1)))

    def test_loop_gives_zero(self):
        """Test a matroid with a loop has chi = 0"""
        g = Multigraph.from_pairs(2, [(0, 1), (0, 0)])
        self.assertEqual(char_poly_mobius(cycle_matroid(g)), IntPoly.zero())

    def test_chromatic_relation(self):
        """Test P(G) = x^c chi(M(G)) on the bipyramid"""
        chi = char_poly_mobius(cycle_matroid(bipyramid()))
        self.assertEqual(chi, IntPoly.from_roots([1, 2, 3, 3]))

    def test_flow_relation(self):
        """Test chi of the cocycle matroid is the flow polynomial"""
        self.assertEqual(char_poly_mobius(cocycle_matroid(prism())), IntPoly.from_roots([1, 2, 3, 3]))
        self.assertEqual(char_poly_mobius(cocycle_matroid(theta(3))), IntPoly.from_roots([1, 2]))

    def test_budget(self):
        """Test the flat budget is enforced"""
        with self.assertRaises(BudgetExceeded):
            FlatLattice(cycle_matroid(complete(5)), budget=10)


class ModularityTest(SimpleTestCase):
    """Tests for modular flats"""

    def setUp(self):
        self.m = cycle_matroid(complete(4))

    def test_triangle_is_modular(self):
        """Test a triangle flat of M(K4) is modular under both criteria"""
        self.assertTrue(is_modular_flat(self.m, [0, 1, 3]))
        self.assertTrue(is_modular_flat_by_rank(self.m, [0, 1, 3]))

    def test_two_point_line_is_not_modular(self):
        """Test a pair of opposite edges is not modular"""
        self.assertFalse(is_modular_flat(self.m, [0, 5]))
        self.assertFalse(is_modular_flat_by_rank(self.m, [0, 5]))

    def test_criteria_agree(self):
        """Test the line and rank criteria on every flat of M(K4)"""
        lattice = FlatLattice(self.m)
        for flat in lattice.flats():
            self.assertEqual(is_modular_flat(self.m, flat), is_modular_flat_by_rank(self.m, flat, lattice), flat)

    def test_modular_flats_divide_the_characteristic_polynomial(self):
        """Test chi(M|X) divides chi(M) for every modular flat X"""
        matroids = [
            self.m,
            cycle_matroid(complete(5)),
            cocycle_matroid(prism()),
            cycle_matroid(bipyramid()),
            cocycle_matroid(complete(4)),
        ]
        for m in matroids:
            chi = char_poly_mobius(m)
            modular = 0
            for flat in FlatLattice(m).flats():
                if is_modular_flat(m, flat):
                    quotient = divide_exact(chi, char_poly_mobius(m.restrict(flat)))
                    self.assertEqual(quotient.degree, m.full_rank - m.rank(flat), sorted(flat))
                    modular += 1
            self.assertGreater(modular, 2)

    def test_non_modular_flat_need_not_divide(self):
        """Test a pair of opposite edges of K4 gives a non-divisor"""
        with self.assertRaises(NonDivisible):
            divide_exact(char_poly_mobius(self.m), char_poly_mobius(self.m.restrict([0, 5])))

    def test_not_a_flat(self):
        """Test a set that is not closed is rejected"""
        with self.assertRaises(NotAFlat):
            is_modular_flat(UniformMatroid(3, 4), [0, 1, 2])
        with self.assertRaises(NotAFlat):
            is_modular_flat(self.m, [0, 1])


class SupersolvabilityTest(SimpleTestCase):
    """Tests for is_supersolvable"""

    def test_chordal_graphs(self):
        """Test cycle matroids of chordal graphs factor by their chain"""
        result = is_supersolvable(cycle_matroid(complete(4)))
        self.assertTrue(result.supersolvable)
        self.assertEqual(result.roots, (1, 2, 3))
        self.assertEqual(len(result.chain), 4)
        self.assertEqual(is_supersolvable(cycle_matroid(complete(5))).roots, (1, 2, 3, 4))

    def test_dual_of_prism(self):
        """Test the cocycle matroid of the prism is supersolvable"""
        result = is_supersolvable(cocycle_matroid(prism()))
        self.assertTrue(result.supersolvable)
        self.assertEqual(sorted(result.roots), [1, 2, 3, 3])

    def test_not_supersolvable(self):
        """Test U(3,4), M(K3,3) and the dual of the cube"""
        self.assertFalse(is_supersolvable(UniformMatroid(3, 4)).supersolvable)
        self.assertFalse(is_supersolvable(cycle_matroid(complete_bipartite(3, 3))).supersolvable)
        self.assertFalse(is_supersolvable(cocycle_matroid(cube())).supersolvable)

    def test_rank_limit(self):
        """Test the rank limit raises instead of searching"""
        with self.assertRaises(BudgetExceeded):
            is_supersolvable(cycle_matroid(complete(4)), max_rank=2)

    def test_small_ranks(self):
        """Test rank one and two matroids are supersolvable"""
        self.assertEqual(is_supersolvable(cocycle_matroid(theta(3))).roots, (1, 2))
        self.assertEqual(is_supersolvable(cycle_matroid(theta(4))).roots, (1,))


class ParallelConnectionTest(SimpleTestCase):
    """Tests for gluing graphs along a point or a line"""

    def test_point_glue(self):
        """Test two triangles on a common edge give (x-1)(x-2)^2"""
        pc = parallel_connection(cycle(3), cycle(3), Glue(GlueKind.POINT, (0,), (0,)))
        self.assertEqual((pc.graph.n, pc.graph.m), (4, 5))
        self.assertEqual(pc.offset, 3)
        self.assertEqual(char_poly_mobius(pc.matroid), IntPoly.from_roots([1, 2, 2]))

    def test_empty_glue(self):
        """Test gluing at a vertex multiplies characteristic polynomials"""
        pc = parallel_connection(cycle(3), cycle(3), Glue(GlueKind.EMPTY))
        self.assertEqual(pc.graph.n, 5)
        self.assertEqual(char_poly_mobius(pc.matroid), IntPoly.from_roots([1, 2, 1, 2]))

    def test_line_glue(self):
        """Test gluing a triangle onto a K4 triangle returns K4"""
        pc = parallel_connection(complete(4), cycle(3), Glue(GlueKind.LINE, (0, 1, 3), (0, 1, 2)))
        self.assertEqual((pc.graph.n, pc.graph.m), (4, 6))
        self.assertEqual(pc.modular_in, "both")
        self.assertFalse(pc.k33_risk)

    def test_product_formula(self):
        """Test chi(P) * (x-1)(x-2) = chi(M1) chi(M2) for two K4s on a line"""
        pc = parallel_connection(complete(4), complete(4), Glue(GlueKind.LINE, (0, 1, 3), (0, 1, 3)))
        chi = char_poly_mobius(pc.matroid)
        k4 = IntPoly.from_roots([1, 2, 3])
        self.assertEqual(chi * IntPoly.from_roots([1, 2]), k4 * k4)

    def test_three_k4s_on_a_line(self):
        """Test a third K4 on the same triangle flags a K3,3"""
        glue = Glue(GlueKind.LINE, (0, 1, 3), (0, 1, 3))
        with self.assertLogs('flowroots', level='WARNING'):
            second = parallel_connection(complete(4), complete(4), glue)
            third = parallel_connection(second.graph, complete(4), glue)
        self.assertFalse(second.k33_risk)
        self.assertTrue(third.k33_risk)
        self.assertIsInstance(planarity_embed(third.graph), NonPlanar)

    def test_glue_not_present(self):
        """Test missing edges and non-triangles are rejected"""
        with self.assertRaises(GlueNotPresent):
            parallel_connection(cycle(3), cycle(3), Glue(GlueKind.POINT, (7,), (0,)))
        with self.assertRaises(GlueNotPresent):
            parallel_connection(complete(4), complete(4), Glue(GlueKind.LINE, (0, 1, 2), (0, 1, 3)))
        with self.assertRaises(GlueNotPresent):
            parallel_connection(cycle(3), cycle(3), Glue(GlueKind.EMPTY, (0,), ()))

    def test_glue_not_modular(self):
        """Test a glue line modular in neither operand is refused"""
        with patch('flowroots.matroid._glue_is_modular', return_value=False):
            with self.assertRaises(GlueNotModular):
                parallel_connection(complete(4), complete(4), Glue(GlueKind.LINE, (0, 1, 3), (0, 1, 3)))


class CircuitBoundTest(SimpleTestCase):
    """Tests for line statistics and the three-circuit bounds"""

    def test_line_stats(self):
        """Test the line counts of M(K4)"""
        stats = line_stats(cocycle_matroid(complete(4)))
        self.assertEqual(stats.gamma, {2: 3, 3: 4})
        self.assertEqual(stats.three_point_lines, 4)
        self.assertTrue(stats.pairs_covered)
        self.assertEqual(stats.weighted_sum(), 4)

    def test_k4_dual_attains_every_bound(self):
        """Test each bound is tight on the dual of K4 and equality forces chi"""
        report = three_circuit_bound_check(cocycle_matroid(complete(4)))
        self.assertEqual((report.rank, report.elements, report.delta), (3, 6, 0))
        self.assertEqual(report.chi_at_two, 0)
        self.assertTrue(report.connected)
        names = [check.name for check in report.checks]
        self.assertEqual(names, ["real_full_size", "integer_deficit", "real_spread_two"])
        for check in report.checks:
            self.assertTrue(check.applies, check.name)
            self.assertTrue(check.equality, check.name)
            self.assertTrue(check.matches_forced_form, check.name)
        self.assertTrue(report.holds)

    def test_prism_dual(self):
        """Test the integer bound is tight on the dual of the prism"""
        report = three_circuit_bound_check(cocycle_matroid(prism()))
        self.assertEqual((report.rank, report.delta), (4, 0))
        check = next(c for c in report.checks if c.name == "integer_deficit")
        self.assertTrue(check.applies)
        self.assertEqual(check.slack, 0)
        self.assertTrue(check.matches_forced_form)
        self.assertTrue(report.holds)

    def test_unmet_hypotheses(self):
        """Test U(3,4) reports its failing hypotheses without asserting the bound"""
        report = three_circuit_bound_check(UniformMatroid(3, 4))
        self.assertEqual(report.chi_at_two, 1)
        check = report.checks[0]
        self.assertIn("size_3r_minus_3", check.unmet)
        self.assertIn("chi_two_zero", check.unmet)
        self.assertTrue(check.holds)
        with self.assertRaises(HypothesisNotMet):
            check.require()

    def test_supplied_chi(self):
        """Test a supplied characteristic polynomial is used as is"""
        chi = IntPoly.from_roots([1, 2, 3])
        report = three_circuit_bound_check(cocycle_matroid(complete(4)), chi=chi)
        self.assertEqual(report.chi, chi)
