import random
from fractions import Fraction

from django.test import SimpleTestCase

from toricstab.exceptions import DomainMismatch, ScaleMismatch, TooLarge

from geometry.lattice import lattice_points
from geometry.linalg import barycentric
from geometry.polytope import vertices_from_halfspaces
from geometry.rationals import centroid

from .cone import concavity_cone
from .functions import (
    _hull_planes, _upper_planes, concave_envelope, concave_restriction_of_linear, evaluate,
    is_concave, lattice_function, refine,
)

F = Fraction

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]
SIMPLEX2 = [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]
HIRZEBRUCH = [((-1, -1), 1), ((1, 0), 1), ((1, 1), 1), ((0, 1), 1)]


def random_values(rng, count):
    return [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(count)]


def random_concave(rng, polytope, i, pieces=3):
    """Minimum of a few random affine forms, sampled on the lattice."""
    forms = [
        (tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(polytope.dim)),
         F(rng.randint(-4, 4)))
        for _ in range(pieces)
    ]
    return lattice_function(
        polytope, i, lambda a: min(sum(u * x for u, x in zip(grad, a)) + c for grad, c in forms)
    )


class ConcaveEnvelopeTestCase(SimpleTestCase):
    """Test cases for concave_envelope."""

    def setUp(self):
        """Set up test polytopes."""
        self.interval = vertices_from_halfspaces(UNIT_INTERVAL)
        self.hirzebruch = vertices_from_halfspaces(HIRZEBRUCH)

    def test_affine_function_is_its_own_envelope(self):
        """Test that an affine restriction has every cell on the same plane."""
        phi = concave_restriction_of_linear(self.hirzebruch, 1, (1, 2), 1)
        g = concave_envelope(phi)
        self.assertEqual(g.values, phi.values)
        self.assertTrue(all(cell.gradient == (1, 2) and cell.constant == 1 for cell in g.cells))
        self.assertEqual(len(g.cells), 2)

    def test_hull_facets_match_exhaustive_scan(self):
        """Test that the qhull facets equal those of the all-subsets scan."""
        rng = random.Random(31)
        simplex = vertices_from_halfspaces(SIMPLEX2)
        for polytope, i in ((self.hirzebruch, 2), (simplex, 3)):
            for k in range(6):
                if k % 3 == 0:
                    phi = concave_restriction_of_linear(polytope, i, (F(1, 2), -1), 2)
                elif k % 3 == 1:
                    phi = random_concave(rng, polytope, i)
                else:
                    phi = lattice_function(polytope, i, random_values(rng, len(lattice_points(polytope, i))))
                expected = sorted(_upper_planes(phi.points, phi.values))
                self.assertEqual(_hull_planes(phi.points, phi.values), expected)

    def test_too_few_points_for_qhull(self):
        """Test that three lifted points still give one cell."""
        simplex = vertices_from_halfspaces(SIMPLEX2)
        phi = lattice_function(simplex, 1, [0, 1, 2])
        self.assertEqual(_hull_planes(phi.points, phi.values), [])
        g = concave_envelope(phi)
        self.assertEqual(len(g.cells), 1)
        self.assertEqual(g.cells[0].gradient, (2, 1))

    def test_tent(self):
        """Test that (0, 1, 0) keeps its kink at 1/2."""
        g = concave_envelope(lattice_function(self.interval, 2, [0, 1, 0]))
        self.assertEqual(g.values, (0, 1, 0))
        self.assertEqual(len(g.cells), 2)
        self.assertEqual(evaluate(g, (F(1, 4),)), F(1, 2))

    def test_valley_is_flattened(self):
        """Test that (0, -1, 0) lifts to the zero function."""
        phi = lattice_function(self.interval, 2, [0, -1, 0])
        g = concave_envelope(phi)
        self.assertEqual(g.values, (0, 0, 0))
        self.assertEqual(evaluate(g, (F(1, 2),)), 0)
        self.assertFalse(is_concave(phi))

    def test_is_concave(self):
        """Test the concavity predicate on the basic examples."""
        self.assertTrue(is_concave(lattice_function(self.interval, 2, [0, 1, 0])))
        self.assertTrue(is_concave(concave_restriction_of_linear(self.interval, 5, (F(3, 2),), 2)))

    def test_envelope_dominates_and_is_idempotent(self):
        """Test g >= phi on the lattice and env(g) = g."""
        rng = random.Random(7)
        for polytope, i in ((self.interval, 4), (self.hirzebruch, 1)):
            for _ in range(20):
                phi = lattice_function(polytope, i, random_values(rng, len(lattice_points(polytope, i))))
                g = concave_envelope(phi)
                self.assertTrue(all(gv >= v for gv, v in zip(g.values, phi.values)))
                again = concave_envelope(g.lattice_values())
                self.assertEqual(again.values, g.values)
                for cell in g.cells:
                    x = centroid(cell.simplex)
                    self.assertEqual(evaluate(again, x), evaluate(g, x))

    def test_cell_forms_match_stored_values(self):
        """Test that each cell's form interpolates every lattice point it contains."""
        rng = random.Random(11)
        phi = lattice_function(self.hirzebruch, 2, random_values(rng, 25))
        g = concave_envelope(phi)
        stored = g.as_dict()
        for cell in g.cells:
            for a, value in stored.items():
                weights = barycentric(cell.simplex, a)
                if weights is not None and all(w >= 0 for w in weights):
                    self.assertEqual(cell.value(a), value)

    def test_refine(self):
        """Test re-expressing the tent on the quarter lattice."""
        g = concave_envelope(lattice_function(self.interval, 2, [0, 1, 0]))
        finer = refine(g, 4)
        self.assertEqual(finer.values, (0, F(1, 2), 1, F(1, 2), 0))
        with self.assertRaises(ScaleMismatch):
            refine(g, 3)

    def test_evaluate_outside(self):
        """Test that evaluation outside P is refused."""
        g = concave_envelope(lattice_function(self.interval, 1, [0, 0]))
        with self.assertRaises(DomainMismatch):
            evaluate(g, (F(3, 2),))

    def test_wrong_value_count(self):
        """Test that a value vector of the wrong length is refused."""
        with self.assertRaises(DomainMismatch):
            lattice_function(self.interval, 2, [0, 1])


class ConcavityConeTestCase(SimpleTestCase):
    """Test cases for the concavity cone."""

    def test_three_points(self):
        """Test the single second-difference constraint on (0, 1/2, 1)."""
        cone = concavity_cone(vertices_from_halfspaces(UNIT_INTERVAL), 2)
        self.assertEqual(len(cone), 1)
        constraint = cone.constraints[0]
        self.assertEqual(constraint.target, 1)
        self.assertEqual(constraint.terms, ((0, F(1, 2)), (2, F(1, 2))))

    def test_interval_thirds(self):
        """Test that i = 3 needs two constraints."""
        cone = concavity_cone(vertices_from_halfspaces(UNIT_INTERVAL), 3)
        self.assertEqual(len(cone), 2)

    def test_simplex_edge_midpoint(self):
        """Test that the midpoint of the bottom edge of the triangle is constrained."""
        cone = concavity_cone(vertices_from_halfspaces(SIMPLEX2), 2)
        targets = {(c.target, c.terms) for c in cone.constraints}
        self.assertIn((3, ((0, F(1, 2)), (5, F(1, 2)))), targets)

    def test_cap(self):
        """Test that exceeding the constraint cap raises TooLarge."""
        with self.assertRaises(TooLarge):
            concavity_cone(vertices_from_halfspaces(HIRZEBRUCH), 2, max_constraints=10)

    def test_triangle_keeps_three_midpoint_constraints(self):
        """Test that the doubled triangle needs only its three edge midpoints."""
        cone = concavity_cone(vertices_from_halfspaces(SIMPLEX2), 2)
        self.assertEqual(sorted(c.target for c in cone.constraints), [1, 3, 4])

    def test_square_corners_are_unconstrained(self):
        """Test that four points in convex position give no constraint."""
        square = vertices_from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)])
        self.assertEqual(len(concavity_cone(square, 1)), 0)

    def test_constraint_simplices_are_empty(self):
        """Test that no other lattice point lies in a kept simplex."""
        cone = concavity_cone(vertices_from_halfspaces(HIRZEBRUCH), 1)
        self.assertTrue(cone.constraints)
        for c in cone.constraints:
            support = [k for k, _ in c.terms]
            if len(support) < 3:
                continue
            simplex = [cone.points[k] for k in support]
            for m, point in enumerate(cone.points):
                if m == c.target or m in support:
                    continue
                self.assertTrue(any(w < 0 for w in barycentric(simplex, point)))

    def test_cone_matches_envelope(self):
        """Test is_concave against cone membership on random value vectors."""
        rng = random.Random(2024)
        cases = [
            (vertices_from_halfspaces(UNIT_INTERVAL), 3),
            (vertices_from_halfspaces(SIMPLEX2), 2),
            (vertices_from_halfspaces(HIRZEBRUCH), 1),
        ]
        for polytope, i in cases:
            cone = concavity_cone(polytope, i)
            for k in range(200):
                if k % 2:
                    phi = random_concave(rng, polytope, i)
                else:
                    phi = lattice_function(polytope, i, random_values(rng, len(cone.points)))
                self.assertEqual(is_concave(phi), cone.contains(phi.values))
