from fractions import Fraction

import sympy as sp
from django.test import SimpleTestCase

from toricstab.exceptions import BadFacetIndex

from cli.fixtures import load_fixture
from geometry.lattice import lattice_count
from geometry.polytope import vertices_from_halfspaces
from measures.integrals import boundary_volume, moment, volume

from .oracle import hirzebruch_printed_audit, interval_convention_audit, oracle_q_vector
from .polynomials import I, VectorPolynomial, coefficients, to_sympy
from .q import (
    CHOW_UNSTABLE, DivisorSpec, asymptotic_verdict, ehrhart_polynomial, lattice_sum,
    lattice_sum_polynomial, q_polynomial, q_vector,
)

F = Fraction

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]
UNIT_SQUARE = [((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)]
SIMPLEX2 = [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]
ANGLE_PAIRS = [(F(1), F(1, 2)), (F(13, 14), F(13, 14)), (F(1, 3), F(3, 4)),
               (F(5, 7), F(1)), (F(1, 2), F(1, 5))]


class DivisorSpecTestCase(SimpleTestCase):
    """Test cases for DivisorSpec."""

    def test_beta_range(self):
        """Test that beta must lie in (0, 1]."""
        self.assertEqual(DivisorSpec(0, "13/14").beta, F(13, 14))
        for beta in (0, F(-1, 2), F(3, 2)):
            with self.assertRaises(ValueError):
                DivisorSpec(0, beta)

    def test_bad_facet_index(self):
        """Test unknown and repeated facet indices."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        with self.assertRaises(BadFacetIndex):
            q_vector(P, [DivisorSpec(2, 1)], 1)
        with self.assertRaises(BadFacetIndex):
            q_vector(P, [DivisorSpec(0, 1), DivisorSpec(0, F(1, 2))], 1)


class EhrhartTestCase(SimpleTestCase):
    """Test cases for the Ehrhart and lattice-sum polynomials."""

    def test_unit_square(self):
        """Test E(i) = (i+1)^2."""
        poly = ehrhart_polynomial(vertices_from_halfspaces(UNIT_SQUARE))
        self.assertEqual(poly, sp.Poly((I + 1) ** 2, I, domain=sp.QQ))

    def test_simplex(self):
        """Test E(i) = (i+1)(i+2)/2."""
        poly = ehrhart_polynomial(vertices_from_halfspaces(SIMPLEX2))
        self.assertEqual(poly, sp.Poly((I + 1) * (I + 2) / 2, I, domain=sp.QQ))

    def test_hirzebruch(self):
        """Test E(i) = 4i^2 + 4i + 1 and its volume coefficients."""
        P, _ = load_fixture("hirzebruch1")
        poly = ehrhart_polynomial(P)
        self.assertEqual(coefficients(poly), [1, 4, 4])
        self.assertEqual(coefficients(poly)[2], volume(P))
        self.assertEqual(coefficients(poly)[1], boundary_volume(P) / 2)

    def test_leading_coefficients_on_all_fixtures(self):
        """Test Vol(P) and Vol(∂P)/2 as the top Ehrhart coefficients."""
        for name in ("cp1-unit", "cp1-sym", "square-sym", "simplex2", "hirzebruch1"):
            P, _ = load_fixture(name)
            c = coefficients(ehrhart_polynomial(P))
            self.assertEqual(c[P.dim], volume(P))
            self.assertEqual(c[P.dim - 1], boundary_volume(P) / 2)

    def test_hirzebruch_lattice_sum(self):
        """Test S(1) = (1, 1) and the closed form (i^2/3 + i/2 + 1/6)(1, 1)."""
        P, _ = load_fixture("hirzebruch1")
        self.assertEqual(lattice_sum(P, 1), (1, 1))
        poly = lattice_sum_polynomial(P)
        expected = sp.Poly(I ** 2 / 3 + I / 2 + sp.Rational(1, 6), I, domain=sp.QQ)
        self.assertEqual(poly, VectorPolynomial([expected, expected]))
        for i in range(1, 7):
            self.assertEqual(poly(i), lattice_sum(P, i))


class QVectorTestCase(SimpleTestCase):
    """Test cases for q_vector and q_polynomial."""

    def test_unit_interval_closed_form(self):
        """Test Q_i = (1/2)(i+1)(beta_0 - beta_inf) on [0, 1]."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        for b0, b1 in ANGLE_PAIRS:
            poly = q_polynomial(P, [DivisorSpec(0, b0), DivisorSpec(1, b1)])
            expected = sp.Poly(sp.Rational(1, 2) * (I + 1) * to_sympy(b0 - b1), I, domain=sp.QQ)
            self.assertEqual(poly, VectorPolynomial([expected]))

    def test_unit_interval_quarter(self):
        """Test (beta_0, beta_inf) = (1, 1/2) gives (i+1)/4."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        poly = q_polynomial(P, [DivisorSpec(0, 1), DivisorSpec(1, F(1, 2))])
        self.assertEqual(poly.coefficients(), [(F(1, 4),), (F(1, 4),)])

    def test_balanced_angles_vanish(self):
        """Test that equal angles give the zero polynomial."""
        P, divisors = load_fixture("cp1-unit")
        poly = q_polynomial(P, divisors)
        self.assertTrue(poly.is_zero())
        self.assertTrue(asymptotic_verdict(P, divisors, poly).vanishes)

    def test_symmetric_square(self):
        """Test that central symmetry kills Q_i."""
        P, _ = load_fixture("square-sym")
        for i in range(1, 5):
            self.assertEqual(q_vector(P, [], i), (0, 0))

    def test_hirzebruch_oracle_value(self):
        """Test Q_i = (10/21 i + 5/21)(1, 1) against the oracle."""
        P, divisors = load_fixture("hirzebruch1")
        poly = q_polynomial(P, divisors)
        self.assertEqual(poly.coefficients(), [(F(5, 21), F(5, 21)), (F(10, 21), F(10, 21))])
        self.assertEqual(q_vector(P, divisors, 1), (F(5, 7), F(5, 7)))
        for i in range(1, 11):
            value = q_vector(P, divisors, i)
            self.assertEqual(value, oracle_q_vector(P, divisors, i))
            self.assertEqual(value[0], value[1])
            self.assertNotEqual(value[0], 0)

    def test_polynomial_matches_direct_values(self):
        """Test the polynomial identity at i = 1..10 on every fixture."""
        for name in ("cp1-unit", "cp1-sym", "square-sym", "simplex2", "hirzebruch1"):
            P, divisors = load_fixture(name)
            poly = q_polynomial(P, divisors)
            self.assertLessEqual(poly.degree, P.dim + 1)
            for i in range(1, 11):
                self.assertEqual(poly(i), q_vector(P, divisors, i))

    def test_beta_one_reduction(self):
        """Test Q_i = 2i(E ∫x - Vol S) when every beta is 1."""
        P, divisors = load_fixture("hirzebruch1")
        trivial = [DivisorSpec(d.facet_index, 1) for d in divisors]
        m, vol = moment(P), volume(P)
        for i in range(1, 5):
            E = lattice_count(P, i)
            S = lattice_sum(P, i)
            expected = tuple(2 * i * (E * mk - vol * sk) for mk, sk in zip(m, S))
            self.assertEqual(q_vector(P, trivial, i), expected)
            self.assertEqual(q_vector(P, [], i), expected)

    def test_affine_in_angles(self):
        """Test that Q_i is affine in each 1 - beta_t."""
        P, _ = load_fixture("hirzebruch1")
        base = q_vector(P, [], 2)
        full = q_vector(P, [DivisorSpec(0, F(1, 3))], 2)
        half = q_vector(P, [DivisorSpec(0, F(2, 3))], 2)
        self.assertEqual(tuple(h - b for h, b in zip(half, base)),
                         tuple((f - b) / 2 for f, b in zip(full, base)))

    def test_swap_symmetry(self):
        """Test that swapping x and y swaps the components of Q_i."""
        P, divisors = load_fixture("hirzebruch1")
        swapped = vertices_from_halfspaces(
            [((h.normal[1], h.normal[0]), h.offset) for h in P.halfspaces]
        )
        for i in range(1, 4):
            a = q_vector(P, divisors, i)
            b = q_vector(swapped, divisors, i)
            self.assertEqual(a, (b[1], b[0]))


class VerdictTestCase(SimpleTestCase):
    """Test cases for the asymptotic verdict."""

    def test_unbalanced_interval(self):
        """Test that unequal angles are obstructed at i = 1."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        verdict = asymptotic_verdict(P, [DivisorSpec(0, 1), DivisorSpec(1, F(1, 2))])
        self.assertFalse(verdict.vanishes)
        self.assertEqual(verdict.witness, 1)

    def test_hirzebruch(self):
        """Test that the Hirzebruch data is asymptotically Chow unstable."""
        P, divisors = load_fixture("hirzebruch1")
        verdict = asymptotic_verdict(P, divisors)
        self.assertEqual(verdict.witness, 1)
        self.assertEqual(verdict.label, CHOW_UNSTABLE)
        self.assertEqual(q_polynomial(P, divisors).integer_zeros(), [])

    def test_integer_zeros(self):
        """Test the common integer zeros of a vector polynomial."""
        poly = VectorPolynomial([(I - 2) * (I + 3), (I - 2) * (2 * I - 1)])
        self.assertEqual(poly.integer_zeros(), [2])
        self.assertIsNone(VectorPolynomial([0, 0]).integer_zeros())

    def test_render(self):
        """Test the human-readable rendering."""
        poly = VectorPolynomial([I / 4 + sp.Rational(1, 4)])
        self.assertEqual(poly.render(), "Q_i = (1/4)·i + (1/4)")


class OracleAuditTestCase(SimpleTestCase):
    """Test cases for the printed-example audits."""

    def test_interval_conventions(self):
        """Test that [0, 1] reproduces the printed formula and [-1, 1] does not."""
        audit = interval_convention_audit()
        unit, symmetric = audit.intervals
        self.assertTrue(unit.matches_printed)
        self.assertFalse(symmetric.matches_printed)
        self.assertTrue(unit.matches_closed_form)
        self.assertTrue(symmetric.matches_closed_form)
        self.assertEqual(audit.reproducing_interval, "[0,1]")

    def test_hirzebruch_printed_values(self):
        """Test that the oracle disagrees with the printed coefficients but keeps the verdict."""
        P, divisors = load_fixture("hirzebruch1")
        rows, label = hirzebruch_printed_audit(P, divisors)
        self.assertEqual(label, CHOW_UNSTABLE)
        i, value, printed = rows[0]
        self.assertEqual(value, (F(5, 7), F(5, 7)))
        self.assertEqual(printed, F(137, 70))
        self.assertNotEqual(value[0], printed)
