import random
from fractions import Fraction

from django.test import SimpleTestCase

from toricstab.exceptions import CreaseMismatch, NotConvex

from cli.fixtures import load_fixture
from geometry.polytope import facet, vertices_from_halfspaces
from measures.integrals import boundary_volume, facet_moment, moment, volume
from obstruction.q import DivisorSpec
from stability.decide import EXACT, SEMISTABLE, UNSTABLE, decide_semistable

from .invariants import (
    ExpansionCoefficients, asymptotic_consistency_check, convex_pl_function,
    expansion_coefficients, expansions, futaki_from_expansions, log_futaki_from_expansions,
    log_futaki_toric,
)

F = Fraction

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]


def identity(a):
    return a[0]


def random_convex(rng, polytope, k, pieces=3):
    """Maximum of a few random affine forms, sampled on the scale-k lattice."""
    forms = [
        (tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(polytope.dim)),
         F(rng.randint(-3, 3)))
        for _ in range(pieces)
    ]
    return convex_pl_function(
        polytope, k, lambda a: max(sum(u * x for u, x in zip(grad, a)) + c for grad, c in forms)
    )


class ConvexPLFunctionTestCase(SimpleTestCase):
    """Test cases for convex_pl_function."""

    def test_bound(self):
        """Test R as the ceiling of the largest value."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        h = convex_pl_function(P, 2, [F(1, 3), 0, F(4, 3)])
        self.assertEqual(h.bound, 2)
        self.assertEqual(h.values, (F(1, 3), 0, F(4, 3)))

    def test_rejects_concave_values(self):
        """Test NotConvex on a tent."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        with self.assertRaises(NotConvex):
            convex_pl_function(P, 2, [0, 1, 0])


class LogFutakiTestCase(SimpleTestCase):
    """Test cases for log_futaki_toric."""

    def setUp(self):
        """Set up the unit interval and h = x."""
        self.P = vertices_from_halfspaces(UNIT_INTERVAL)
        self.h = convex_pl_function(self.P, 1, identity)

    def test_single_divisor(self):
        """Test (1 - beta)/2 for the divisor at 1 and h = x."""
        for beta in (F(1, 2), F(13, 14), F(1)):
            value = log_futaki_toric(self.P, [DivisorSpec(1, beta)], self.h)
            self.assertEqual(value, (1 - beta) / 2)
        self.assertEqual(log_futaki_toric(self.P, [DivisorSpec(1, F(1, 2))], self.h), F(1, 4))

    def test_balanced_divisors_cancel(self):
        """Test that equal angles at both ends give 0 for h = x."""
        divisors = [DivisorSpec(0, F(2, 3)), DivisorSpec(1, F(2, 3))]
        self.assertEqual(log_futaki_toric(self.P, divisors, self.h), 0)

    def test_constants(self):
        """Test that h = c gives 0 on every fixture."""
        for name in ("cp1-unit", "cp1-sym", "square-sym", "simplex2", "hirzebruch1"):
            P, divisors = load_fixture(name)
            h = convex_pl_function(P, 1, lambda a: F(5, 2))
            self.assertEqual(log_futaki_toric(P, divisors, h), 0)

    def test_affine_functions(self):
        """Test the linear formula in the gradient and its vanishing under symmetry."""
        u = (F(3), F(-1, 2))
        for name in ("square-sym", "simplex2", "hirzebruch1"):
            P, _ = load_fixture(name)
            h = convex_pl_function(P, 1, lambda a: u[0] * a[0] + u[1] * a[1] + 1)
            ratio = boundary_volume(P) / volume(P)
            edge = [sum(facet_moment(Fc)[k] for Fc in P.facets()) for k in range(2)]
            expected = sum(c * (ratio * m - e) for c, m, e in zip(u, moment(P), edge))
            self.assertEqual(log_futaki_toric(P, [], h), expected)
        P, _ = load_fixture("square-sym")
        h = convex_pl_function(P, 1, lambda a: u[0] * a[0] + u[1] * a[1])
        self.assertEqual(log_futaki_toric(P, [], h), 0)

    def test_scale_invariance(self):
        """Test log_futaki(c h) = c log_futaki(h)."""
        rng = random.Random(3)
        P, divisors = load_fixture("hirzebruch1")
        for _ in range(5):
            h = random_convex(rng, P, 1)
            tripled = convex_pl_function(P, 1, [3 * v for v in h.values])
            self.assertEqual(log_futaki_toric(P, divisors, tripled),
                             3 * log_futaki_toric(P, divisors, h))


class ExpansionTestCase(SimpleTestCase):
    """Test cases for the expansion coefficients."""

    def setUp(self):
        """Set up the unit interval, its facet {1} and h = x."""
        self.P = vertices_from_halfspaces(UNIT_INTERVAL)
        self.F = facet(self.P, 1)
        self.h = convex_pl_function(self.P, 1, identity)

    def test_leading_terms(self):
        """Test d_k = k + 1, w_k = k^2/2 + k/2, d~_k = 1 and w~_k = 0."""
        for k in range(1, 6):
            e = expansions(self.P, self.F, self.h, k)
            self.assertEqual(e.d, k + 1)
            self.assertEqual(e.w, F(k * k, 2) + F(k, 2))
            self.assertEqual(e.d_tilde, 1)
            self.assertEqual(e.w_tilde, 0)

    def test_coefficients(self):
        """Test a0 = 1, a1 = 1, b0 = 1/2, b1 = 1/2, a0~ = 1, b0~ = 0."""
        c = expansion_coefficients(self.P, self.F, self.h)
        self.assertEqual((c.a0, c.a1, c.b0, c.b1, c.a0_tilde, c.b0_tilde), (1, 1, F(1, 2), F(1, 2), 1, 0))
        self.assertEqual(futaki_from_expansions(c, F(1, 2)), F(-1, 4))
        self.assertEqual(futaki_from_expansions(c, 1), 0)

    def test_trivial_coefficients(self):
        """Test that vanishing b-coefficients give 0."""
        c = ExpansionCoefficients(F(3), F(2), 0, 0, F(1), 0, 0)
        self.assertEqual(futaki_from_expansions(c, F(1, 3)), 0)

    def test_identity_on_samples(self):
        """Test futaki_from_expansions = -log_futaki_toric for sampled convex h."""
        rng = random.Random(17)
        for name, k in (("cp1-unit", 3), ("hirzebruch1", 1)):
            P, divisors = load_fixture(name)
            for _ in range(20):
                h = random_convex(rng, P, k)
                self.assertEqual(log_futaki_from_expansions(P, divisors, h),
                                 -log_futaki_toric(P, divisors, h))
                for d in divisors:
                    c = expansion_coefficients(P, facet(P, d.facet_index), h)
                    self.assertEqual(futaki_from_expansions(c, d.beta),
                                     -log_futaki_toric(P, [d], h))

    def test_bound_cancels(self):
        """Test that raising R leaves the expansion value unchanged."""
        rng = random.Random(23)
        P, divisors = load_fixture("hirzebruch1")
        h = random_convex(rng, P, 1)
        raised = convex_pl_function(P, 1, list(h.values), bound=h.bound + 4)
        self.assertEqual(log_futaki_from_expansions(P, divisors, raised),
                         log_futaki_from_expansions(P, divisors, h))


class ConsistencyTestCase(SimpleTestCase):
    """Test cases for asymptotic_consistency_check."""

    def test_balanced_interval(self):
        """Test a zero leading coefficient for h = x with equal angles."""
        P, divisors = load_fixture("cp1-unit")
        h = convex_pl_function(P, 1, identity)
        report = asymptotic_consistency_check(P, divisors, h, 1, imax=6)
        self.assertEqual(report.extracted, 0)
        self.assertEqual(report.log_futaki, 0)
        self.assertTrue(report.passed)

    def test_single_divisor(self):
        """Test the extracted coefficient -1/4 against -log_futaki."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        divisors = [DivisorSpec(1, F(1, 2))]
        h = convex_pl_function(P, 1, identity)
        report = asymptotic_consistency_check(P, divisors, h, 1, imax=6)
        self.assertEqual(report.extracted, F(-1, 4))
        self.assertEqual(report.expected, F(-1, 4))
        self.assertEqual(report.samples[0], (1, F(-1, 2)))
        self.assertTrue(report.passed)

    def test_surface(self):
        """Test the check on the Hirzebruch fixture with a random convex h."""
        P, divisors = load_fixture("hirzebruch1")
        h = random_convex(random.Random(31), P, 1)
        self.assertTrue(asymptotic_consistency_check(P, divisors, h, 1).passed)

    def test_crease_mismatch(self):
        """Test that k must be a multiple of the crease scale."""
        P, divisors = load_fixture("cp1-unit")
        h = convex_pl_function(P, 2, [0, 0, 1])
        with self.assertRaises(CreaseMismatch):
            asymptotic_consistency_check(P, divisors, h, 3)

    def test_semistable_pairs_have_nonpositive_futaki(self):
        """Test that semistable scales come with log_futaki <= 0 on sampled h."""
        rng = random.Random(41)
        P, divisors = load_fixture("cp1-unit")
        for i in range(1, 5):
            self.assertEqual(decide_semistable(P, divisors, 2 * i, mode=EXACT).decision, SEMISTABLE)
        for _ in range(20):
            self.assertLessEqual(log_futaki_toric(P, divisors, random_convex(rng, P, 2)), 0)

    def test_unstable_pairs_have_positive_futaki(self):
        """Test that unequal angles give Unstable verdicts and a positive expression."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        divisors = [DivisorSpec(0, 1), DivisorSpec(1, F(1, 2))]
        h = convex_pl_function(P, 1, identity)
        self.assertGreater(log_futaki_toric(P, divisors, h), 0)
        for i in range(1, 4):
            self.assertEqual(decide_semistable(P, divisors, i).decision, UNSTABLE)
