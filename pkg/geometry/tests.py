from fractions import Fraction
from itertools import product

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from toricstab.exceptions import BadIndex, Empty, LowDimensional, NonIntegralVertex, Unbounded

from .hull import simplex_volume, triangulate
from .lattice import integer_points, interior_lattice_points, lattice_count, lattice_points
from .linalg import adjugate, barycentric, det, rank, solve, unimodular_completion
from .polytope import (
    HalfSpace, contains, facet, hull_of_vertices, is_delzant, is_reflexive, scale,
    vertices_from_halfspaces,
)
from .rationals import format_rational, parse_rational

F = Fraction

HIRZEBRUCH = [((-1, -1), 1), ((1, 0), 1), ((1, 1), 1), ((0, 1), 1)]
UNIT_SQUARE = [((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)]
SIMPLEX2 = [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]


class RationalParsingTestCase(SimpleTestCase):
    """Test cases for the p/q codec."""

    def test_parse_reduces_to_lowest_terms(self):
        """Test that parsed rationals are in lowest terms."""
        self.assertEqual(parse_rational("3/6"), F(1, 2))
        self.assertEqual(parse_rational("-4/2"), F(-2))
        self.assertEqual(parse_rational("7"), F(7))

    def test_parse_rejects_floats_and_zero_denominators(self):
        """Test that inexact or malformed numbers are refused."""
        for text in ("1.5", "1e3", "2/0", " 1/2", "1/-2", ""):
            with self.assertRaises(ValueError):
                parse_rational(text)

    def test_format(self):
        """Test canonical formatting."""
        self.assertEqual(format_rational(F(-6, 4)), "-3/2")
        self.assertEqual(format_rational(F(4, 2)), "2")


class LinearAlgebraTestCase(SimpleTestCase):
    """Test cases for exact linear algebra helpers."""

    def test_unimodular_completion(self):
        """Test that the completion maps the normal to e_1 and is invertible."""
        for normal in [(6, 10, 15), (-1, -1), (0, 1), (2, -3, 0), (1,)]:
            u, u_inv = unimodular_completion(normal)
            n = len(normal)
            image = [sum(normal[r] * u[r][c] for r in range(n)) for c in range(n)]
            self.assertEqual(image, [1] + [0] * (n - 1))
            identity = [[sum(u[r][k] * u_inv[k][c] for k in range(n)) for c in range(n)]
                        for r in range(n)]
            self.assertEqual(identity, [[int(r == c) for c in range(n)] for r in range(n)])
            self.assertEqual(abs(det(u)), 1)

    def test_kernel_columns_are_oriented(self):
        """Test that the kernel basis of (1, 1) is the primitive vector (1, -1)."""
        u, _ = unimodular_completion((1, 1))
        self.assertEqual([row[1] for row in u], [1, -1])

    def test_non_primitive_normal(self):
        """Test that (2, 4) has no unimodular completion."""
        with self.assertRaises(ValueError):
            unimodular_completion((2, 4))

    def test_exact_values(self):
        """Test det, rank and solve on small rational systems."""
        self.assertEqual(det([[F(1, 2), 1], [3, 4]]), -1)
        self.assertEqual(det([]), 1)
        self.assertEqual(rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]), 2)
        self.assertEqual(solve([[2, 1], [1, 3]], [3, 5]), (F(4, 5), F(7, 5)))
        self.assertIsNone(solve([[1, 2], [2, 4]], [1, 2]))
        self.assertEqual(barycentric([(0, 0), (1, 0), (0, 1)], (F(1, 4), F(1, 2))),
                         (F(1, 4), F(1, 4), F(1, 2)))
        self.assertEqual(adjugate([[1, 2], [3, 4]]), ([[4, -2], [-3, 1]], -2))


class HalfspaceConversionTestCase(SimpleTestCase):
    """Test cases for vertices_from_halfspaces."""

    def test_interval(self):
        """Test that {x >= 0, 1 - x >= 0} has vertices 0 and 1."""
        P = vertices_from_halfspaces([((1,), 0), ((-1,), 1)])
        self.assertEqual(P.vertices, ((0,), (1,)))
        self.assertEqual(P.dim, 1)

    def test_hirzebruch(self):
        """Test the Hirzebruch surface system."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        self.assertEqual(P.vertices, ((-1, 0), (-1, 2), (0, -1), (2, -1)))
        self.assertEqual([h.normal for h in P.halfspaces], [n for n, _ in HIRZEBRUCH])

    def test_unbounded(self):
        """Test that an open strip is rejected."""
        with self.assertRaises(Unbounded):
            vertices_from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, 0), 1)])

    def test_rank_deficient_is_unbounded(self):
        """Test that normals not spanning R^n give Unbounded."""
        with self.assertRaises(Unbounded):
            vertices_from_halfspaces([((1, 0), 0), ((-1, 0), 1)])

    def test_empty(self):
        """Test that infeasible systems raise Empty."""
        with self.assertRaises(Empty):
            vertices_from_halfspaces([((1,), -2), ((-1,), 1)])

    def test_low_dimensional(self):
        """Test that a segment in the plane raises LowDimensional."""
        with self.assertRaises(LowDimensional):
            vertices_from_halfspaces([((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), 1)])

    def test_non_integral_vertex(self):
        """Test that 2x - 1 >= 0 produces a non-lattice vertex."""
        with self.assertRaises(NonIntegralVertex):
            vertices_from_halfspaces([((2,), -1), ((-1,), 1)])

    def test_duplicates_and_redundant_rows_dropped(self):
        """Test that the H-rep becomes irredundant, first occurrence kept."""
        P = vertices_from_halfspaces([((1,), 0), ((2,), 0), ((1,), 5), ((-1,), 1)])
        self.assertEqual(P.halfspaces, (HalfSpace((1,), 0), HalfSpace((-1,), 1)))

    def test_round_trip_through_vertices(self):
        """Test that hull_of_vertices reproduces the irredundant H-rep."""
        for system in (HIRZEBRUCH, UNIT_SQUARE, SIMPLEX2):
            P = vertices_from_halfspaces(system)
            Q = hull_of_vertices(P.vertices)
            self.assertEqual(set(P.halfspaces), set(Q.halfspaces))
            self.assertEqual(P.vertices, Q.vertices)

    def test_hull_discards_non_vertices(self):
        """Test that interior and edge points are not reported as vertices."""
        Q = hull_of_vertices([(0, 0), (1, 0), (2, 0), (0, 2), (1, 1), (0, 1)])
        self.assertEqual(Q.vertices, ((0, 0), (0, 2), (2, 0)))

    def test_halfspace_must_be_primitive(self):
        """Test the primitive normal invariant."""
        with self.assertRaises(ValueError):
            HalfSpace((2, 0), 1)


class DelzantTestCase(SimpleTestCase):
    """Test cases for the smoothness check."""

    def test_standard_simplex(self):
        """Test that the standard triangle is Delzant."""
        self.assertTrue(is_delzant(vertices_from_halfspaces(SIMPLEX2)).is_delzant)

    def test_hirzebruch(self):
        """Test that the Hirzebruch polygon is Delzant."""
        self.assertTrue(is_delzant(vertices_from_halfspaces(HIRZEBRUCH)).is_delzant)

    def test_failure_vertex(self):
        """Test the non-Delzant triangle fails exactly at (1, 0)."""
        report = is_delzant(hull_of_vertices([(0, 0), (1, 0), (0, 2)]))
        self.assertFalse(report.is_delzant)
        self.assertEqual(len(report.failures), 1)
        failure = report.failures[0]
        self.assertEqual(failure.vertex, (1, 0))
        self.assertEqual(failure.edges, ((-1, 0), (-1, 2)))
        self.assertEqual(abs(failure.determinant), 2)

    def test_reflexive(self):
        """Test the Fano check on symmetric and unit polytopes."""
        self.assertTrue(is_reflexive(vertices_from_halfspaces(HIRZEBRUCH)))
        self.assertTrue(is_reflexive(hull_of_vertices([(-1, -1), (-1, 1), (1, -1), (1, 1)])))
        self.assertFalse(is_reflexive(vertices_from_halfspaces(UNIT_SQUARE)))


class LatticePointTestCase(SimpleTestCase):
    """Test cases for lattice enumeration."""

    def test_interval_thirds(self):
        """Test P ∩ (Z/3) for the unit interval."""
        P = vertices_from_halfspaces([((1,), 0), ((-1,), 1)])
        self.assertEqual(lattice_points(P, 3), [(F(0),), (F(1, 3),), (F(2, 3),), (F(1),)])

    def test_simplex_stars_and_bars(self):
        """Test E(i) = (i+1)(i+2)/2 for the standard triangle."""
        P = vertices_from_halfspaces(SIMPLEX2)
        for i in range(1, 6):
            self.assertEqual(lattice_count(P, i), (i + 1) * (i + 2) // 2)

    def test_hirzebruch_count(self):
        """Test that the Hirzebruch polygon has 9 lattice points."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        self.assertEqual(lattice_count(P, 1), 9)
        self.assertEqual(interior_lattice_points(P), [(0, 0)])

    def test_brute_force_agreement(self):
        """Test enumeration against an independent box scan."""
        for system in (HIRZEBRUCH, UNIT_SQUARE, SIMPLEX2):
            P = vertices_from_halfspaces(system)
            brute = [p for p in product(range(-3, 4), repeat=2) if contains(P, p)]
            self.assertEqual(integer_points(P, 1), sorted(brute))

    def test_scale_consistency(self):
        """Test that counting P at scale i equals counting iP at scale 1."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        for i in range(1, 5):
            self.assertEqual(lattice_count(P, i), lattice_count(scale(P, i), 1))

    def test_points_are_sorted(self):
        """Test deterministic lexicographic order."""
        points = lattice_points(vertices_from_halfspaces(HIRZEBRUCH), 2)
        self.assertEqual(points, sorted(points))

    def test_worker_pool_keeps_order(self):
        """Test that a multi-process scan returns the sequential result."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        sequential = integer_points(P, 3)
        with override_settings(TORIC_STAB={**settings.TORIC_STAB, 'THREADS': 2}):
            pooled = integer_points(P, 3)
        self.assertEqual(pooled, sequential)


class FacetTestCase(SimpleTestCase):
    """Test cases for facets and their lattice charts."""

    def test_square_facet_chart(self):
        """Test that the facet x = 0 of the unit square has chart t -> (0, t)."""
        F0 = facet(vertices_from_halfspaces(UNIT_SQUARE), 0)
        self.assertEqual(F0.chart.origin, (0, 0))
        self.assertEqual(F0.chart.basis, ((0, 1),))
        self.assertEqual(F0.chart.to_point((F(3),)), (F(0), F(3)))

    def test_hirzebruch_facet_chart(self):
        """Test the chart of the facet on x + y = 1."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        F0 = facet(P, 0)
        self.assertEqual(F0.chart.origin, (-1, 2))
        self.assertEqual(F0.chart.basis, ((1, -1),))
        on_facet = [p for p in integer_points(P) if F0.contains(p)]
        charted = sorted(F0.chart.to_chart(p)[0] for p in on_facet)
        self.assertEqual(charted, [0, 1, 2, 3])
        for p in on_facet:
            self.assertEqual(F0.chart.to_point(F0.chart.to_chart(p)), tuple(F(x) for x in p))

    def test_point_facet(self):
        """Test that the facet {1} of [0, 1] has an empty chart."""
        F1 = facet(vertices_from_halfspaces([((1,), 0), ((-1,), 1)]), 1)
        self.assertEqual(F1.vertices, ((1,),))
        self.assertEqual(F1.chart.basis, ())
        self.assertEqual(F1.chart.to_chart((1,)), ())

    def test_bad_index(self):
        """Test that out-of-range facet indices raise BadIndex."""
        P = vertices_from_halfspaces(SIMPLEX2)
        with self.assertRaises(BadIndex):
            facet(P, 3)
        with self.assertRaises(BadIndex):
            facet(P, -1)


class TriangulationTestCase(SimpleTestCase):
    """Test cases for pulling triangulations."""

    def test_volumes_agree_for_both_apexes(self):
        """Test that both triangulations cover the same area."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        for apex in ("first", "last"):
            simplices = triangulate(P.vertices, apex)
            self.assertEqual(sum(simplex_volume(s) for s in simplices), 4)

    def test_lower_dimensional_input(self):
        """Test triangulating collinear points in the plane."""
        segments = triangulate([(0, 0), (1, 1), (3, 3)])
        self.assertEqual(segments, [((F(0), F(0)), (F(3), F(3)))])

    def test_cube(self):
        """Test that the unit cube triangulates into volume-one pieces."""
        cube = list(product((0, 1), repeat=3))
        simplices = triangulate(cube, "last")
        self.assertEqual(sum(simplex_volume(s) for s in simplices), 1)
        self.assertTrue(all(simplex_volume(s) > 0 for s in simplices))
