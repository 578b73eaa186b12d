import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from toricstab.exceptions import DomainMismatch

from envelope.functions import (
    Cell, PLFunction, concave_envelope, concave_restriction_of_linear, lattice_function,
)
from geometry.polytope import facet, hull_of_vertices, vertices_from_halfspaces
from geometry.rationals import centroid

from .integrals import (
    boundary_volume, facet_moment, facet_volume, integrate_pl, integrate_pl_boundary,
    integrate_pl_facet, measure_report, moment, volume,
)

F = Fraction

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]
UNIT_SQUARE = [((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)]
SIMPLEX2 = [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]
HIRZEBRUCH = [((-1, -1), 1), ((1, 0), 1), ((1, 1), 1), ((0, 1), 1)]


def random_envelope(rng, polytope, i):
    phi = lattice_function(polytope, i, lambda a: F(rng.randint(-5, 5), rng.randint(1, 3)))
    return concave_envelope(phi)


def midpoint_sum_2d(polytope, g, n=200):
    """Midpoint rule over a grid of mesh 1/n; midpoints on the boundary count half."""
    (x0, x1), (y0, y1) = polytope.bounding_box()
    # midpoints are (2k + 1) / (2n); keep numerators as integers for exact boundary tests
    kx = np.arange(2 * n * x0 + 1, 2 * n * x1, 2, dtype=np.int64)
    ky = np.arange(2 * n * y0 + 1, 2 * n * y1, 2, dtype=np.int64)
    KX, KY = np.meshgrid(kx, ky, indexing="ij")
    weight = np.ones(KX.shape)
    for h in polytope.halfspaces:
        value = h.normal[0] * KX + h.normal[1] * KY + 2 * n * h.offset
        weight[value < 0] = 0.0
        weight[value == 0] *= 0.5
    X, Y = KX / (2.0 * n), KY / (2.0 * n)
    G = np.minimum.reduce([
        float(c.gradient[0]) * X + float(c.gradient[1]) * Y + float(c.constant) for c in g.cells
    ])
    return float((G * weight).sum()) / n ** 2


class PolytopeMeasureTestCase(SimpleTestCase):
    """Test cases for volumes and moments."""

    def test_volume(self):
        """Test volumes of the standard fixtures."""
        self.assertEqual(volume(vertices_from_halfspaces(SIMPLEX2)), F(1, 2))
        self.assertEqual(volume(hull_of_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])), F(1, 6))
        self.assertEqual(volume(hull_of_vertices([(-1, -1), (-1, 1), (1, -1), (1, 1)])), 4)
        self.assertEqual(volume(vertices_from_halfspaces(HIRZEBRUCH)), 4)

    def test_moment(self):
        """Test first moments of the standard fixtures."""
        self.assertEqual(moment(hull_of_vertices([(-1, -1), (-1, 1), (1, -1), (1, 1)])), (0, 0))
        self.assertEqual(moment(vertices_from_halfspaces(SIMPLEX2)), (F(1, 6), F(1, 6)))
        self.assertEqual(moment(vertices_from_halfspaces(HIRZEBRUCH)), (F(1, 3), F(1, 3)))

    def test_triangulation_independence(self):
        """Test that both pulling triangulations give the same measures."""
        for system in (HIRZEBRUCH, SIMPLEX2, UNIT_SQUARE):
            P = vertices_from_halfspaces(system)
            self.assertEqual(volume(P, "first"), volume(P, "last"))
            self.assertEqual(moment(P, "first"), moment(P, "last"))
            for F_ in P.facets():
                self.assertEqual(facet_moment(F_, "first"), facet_moment(F_, "last"))

    def test_barycenter_inside(self):
        """Test that moment / volume is an interior point."""
        report = measure_report(vertices_from_halfspaces(HIRZEBRUCH))
        P = vertices_from_halfspaces(HIRZEBRUCH)
        self.assertTrue(all(h.value(report.barycenter) > 0 for h in P.halfspaces))


class FacetMeasureTestCase(SimpleTestCase):
    """Test cases for dsigma measures."""

    def test_square_facet(self):
        """Test the facet x = 0 of the unit square."""
        F0 = facet(vertices_from_halfspaces(UNIT_SQUARE), 0)
        self.assertEqual(facet_volume(F0), 1)
        self.assertEqual(facet_moment(F0), (0, F(1, 2)))

    def test_hirzebruch_facets(self):
        """Test lattice lengths and moments of all four edges."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        volumes = [facet_volume(F_) for F_ in P.facets()]
        moments = [facet_moment(F_) for F_ in P.facets()]
        self.assertEqual(volumes, [3, 2, 1, 2])
        self.assertEqual(moments, [(F(3, 2), F(3, 2)), (-2, 2), (F(-1, 2), F(-1, 2)), (2, -2)])

    def test_point_facet(self):
        """Test that a zero-dimensional facet is a unit point mass."""
        F1 = facet(vertices_from_halfspaces(UNIT_INTERVAL), 1)
        self.assertEqual(facet_volume(F1), 1)
        self.assertEqual(facet_moment(F1), (1,))

    def test_boundary_volume(self):
        """Test Vol(∂P) on the fixtures."""
        self.assertEqual(boundary_volume(vertices_from_halfspaces(UNIT_INTERVAL)), 2)
        self.assertEqual(boundary_volume(vertices_from_halfspaces(UNIT_SQUARE)), 4)
        self.assertEqual(boundary_volume(vertices_from_halfspaces(HIRZEBRUCH)), 8)


class PLIntegrationTestCase(SimpleTestCase):
    """Test cases for integrals of PL functions."""

    def setUp(self):
        """Set up test polytopes."""
        self.interval = vertices_from_halfspaces(UNIT_INTERVAL)
        self.hirzebruch = vertices_from_halfspaces(HIRZEBRUCH)

    def test_constant(self):
        """Test that a constant integrates to c times the volume."""
        g = concave_envelope(concave_restriction_of_linear(self.hirzebruch, 2, (0, 0), F(5, 3)))
        self.assertEqual(integrate_pl(self.hirzebruch, g), F(5, 3) * 4)
        self.assertEqual(integrate_pl_boundary(self.hirzebruch, g), F(5, 3) * 8)

    def test_identity_on_interval(self):
        """Test that ∫_0^1 x = 1/2."""
        g = concave_envelope(concave_restriction_of_linear(self.interval, 1, (1,)))
        self.assertEqual(integrate_pl(self.interval, g), F(1, 2))
        self.assertEqual(integrate_pl_facet(facet(self.interval, 1), g), 1)
        self.assertEqual(integrate_pl_facet(facet(self.interval, 0), g), 0)

    def test_tent(self):
        """Test the two-trapezoid example."""
        g = concave_envelope(lattice_function(self.interval, 2, [0, 1, 0]))
        self.assertEqual(integrate_pl(self.interval, g), F(1, 2))

    def test_integral_ignores_cell_subdivision(self):
        """Test that splitting every cell at its centroid leaves the integrals unchanged."""
        rng = random.Random(17)
        for _ in range(5):
            g = random_envelope(rng, self.hirzebruch, 2)
            cells = tuple(
                Cell(tuple(p for p in cell.simplex if p != skip) + (centroid(cell.simplex),),
                     cell.gradient, cell.constant)
                for cell in g.cells for skip in cell.simplex
            )
            split = PLFunction(g.polytope, g.scale, g.points, g.values, cells)
            for integral in (integrate_pl, integrate_pl_boundary):
                self.assertEqual(integral(self.hirzebruch, split), integral(self.hirzebruch, g))

    def test_integral_ignores_diagonal(self):
        """Test an affine function on the unit square cut along either diagonal."""
        square = vertices_from_halfspaces(UNIT_SQUARE)
        g = concave_envelope(concave_restriction_of_linear(square, 1, (2, -1), 3))
        form = g.cells[0]
        integrals = set()
        for diagonal in (((0, 0), (1, 1)), ((0, 1), (1, 0))):
            corners = [p for p in g.points if p not in diagonal]
            cells = tuple(Cell(diagonal + (p,), form.gradient, form.constant) for p in corners)
            integrals.add(integrate_pl(square, PLFunction(square, 1, g.points, g.values, cells)))
        self.assertEqual(integrals, {F(7, 2)})

    def test_affine_shift(self):
        """Test additivity under adding an affine function."""
        rng = random.Random(5)
        phi = lattice_function(self.hirzebruch, 2, lambda a: F(rng.randint(-4, 4)))
        shift = lambda a: 2 * a[0] - a[1] + 1  # noqa: E731
        g = concave_envelope(phi)
        shifted = concave_envelope(lattice_function(
            self.hirzebruch, 2, [v + shift(a) for a, v in zip(phi.points, phi.values)]
        ))
        linear = concave_envelope(lattice_function(self.hirzebruch, 2, shift))
        for integral in (integrate_pl, integrate_pl_boundary):
            self.assertEqual(
                integral(self.hirzebruch, shifted),
                integral(self.hirzebruch, g) + integral(self.hirzebruch, linear),
            )

    def test_boundary_is_sum_of_facets(self):
        """Test ∫_∂P g = Σ_F ∫_F g."""
        g = random_envelope(random.Random(3), self.hirzebruch, 2)
        self.assertEqual(
            integrate_pl_boundary(self.hirzebruch, g),
            sum(integrate_pl_facet(F_, g) for F_ in self.hirzebruch.facets()),
        )

    def test_domain_mismatch(self):
        """Test that functions on another polytope are refused."""
        g = concave_envelope(concave_restriction_of_linear(self.interval, 1, (1,)))
        other = vertices_from_halfspaces([((1,), 1), ((-1,), 1)])
        with self.assertRaises(DomainMismatch):
            integrate_pl(other, g)


class FloatCrossCheckTestCase(SimpleTestCase):
    """Test exact integrals against midpoint Riemann sums at mesh 1/200."""

    def assertClose(self, exact, approx):
        """Assert relative agreement within 1e-3."""
        self.assertLessEqual(abs(float(exact) - approx), 1e-3 * max(1.0, abs(float(exact))))

    def test_interior_integrals(self):
        """Test ∫_P g dnu for random envelopes on planar fixtures."""
        rng = random.Random(17)
        for system in (HIRZEBRUCH, SIMPLEX2):
            P = vertices_from_halfspaces(system)
            g = random_envelope(rng, P, 2)
            self.assertClose(integrate_pl(P, g), midpoint_sum_2d(P, g))

    def test_facet_integral(self):
        """Test ∫_F g dsigma along the long edge of the Hirzebruch polygon."""
        P = vertices_from_halfspaces(HIRZEBRUCH)
        g = random_envelope(random.Random(23), P, 2)
        F0 = facet(P, 0)
        n = 200
        ts = (np.arange(3 * n) + 0.5) / n
        (ox, oy), ((bx, by),) = F0.chart.origin, F0.chart.basis
        X, Y = ox + bx * ts, oy + by * ts
        G = np.minimum.reduce([
            float(c.gradient[0]) * X + float(c.gradient[1]) * Y + float(c.constant) for c in g.cells
        ])
        self.assertClose(integrate_pl_facet(F0, g), float(G.sum()) / n)

    def test_interval(self):
        """Test the one-dimensional integral."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        g = random_envelope(random.Random(29), P, 6)
        xs = (np.arange(200) + 0.5) / 200
        G = np.minimum.reduce([float(c.gradient[0]) * xs + float(c.constant) for c in g.cells])
        self.assertClose(integrate_pl(P, g), float(G.mean()))
