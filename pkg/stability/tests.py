import random
from dataclasses import dataclass
from fractions import Fraction

from django.test import SimpleTestCase

from toricstab.exceptions import ScaleMismatch, TooLarge

from cli.fixtures import load_fixture
from envelope.cone import concavity_cone
from envelope.functions import (
    LatticeFunction, concave_envelope, concave_restriction_of_linear, lattice_function,
)
from geometry.lattice import lattice_count, lattice_points
from geometry.polytope import facet, hull_of_vertices, vertices_from_halfspaces
from geometry.rationals import dot
from measures.integrals import facet_volume, moment, volume
from obstruction.q import DivisorSpec, q_vector

from .decide import (
    ESCALATE_HINT, EXACT, INCONCLUSIVE, LINEAR, SAMPLED, SEMISTABLE, UNSTABLE, decide_semistable,
    exact_minimum, lp_size,
)
from .diagnostics import (
    affine_hull_constraints, affine_hull_constraints_facet, barycenter_constant,
    barycenter_diagnostic,
)
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, minimize
from .margin import MarginFunctional, margin

F = Fraction

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]
FIXTURES = ("cp1-unit", "cp1-sym", "square-sym", "simplex2", "hirzebruch1")


def random_envelope(rng, polytope, i):
    phi = lattice_function(polytope, i, lambda a: F(rng.randint(-8, 8), rng.randint(1, 4)))
    return concave_envelope(phi)


@dataclass(frozen=True)
class PenalizedMargin:
    """A margin functional minus a fixed linear form that vanishes on affine functions."""

    base: MarginFunctional
    penalty: tuple

    @property
    def polytope(self):
        return self.base.polytope

    @property
    def scale(self):
        return self.base.scale

    def __call__(self, g):
        return self.base(g) - dot(self.penalty, g.values)

    def interpolation_weights(self, simplices, points):
        weights = self.base.interpolation_weights(simplices, points)
        return tuple(w - p for w, p in zip(weights, self.penalty))


class ExactLPTestCase(SimpleTestCase):
    """Test cases for the exact simplex solver."""

    def test_textbook_optimum(self):
        """Test a two-variable LP with a rational optimal vertex."""
        result = minimize([-1, -1], [[1, 2], [3, 1]], [4, 6])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.x, (F(8, 5), F(6, 5)))
        self.assertEqual(result.value, F(-14, 5))

    def test_equality_with_negative_rhs(self):
        """Test that equality rows are sign-normalized before phase one."""
        result = minimize([1, 1], A_eq=[[-1, 0]], b_eq=[-3])
        self.assertEqual(result.x, (3, 0))
        self.assertEqual(result.value, 3)

    def test_infeasible(self):
        """Test x <= -1 with x >= 0."""
        self.assertEqual(minimize([1], [[1]], [-1]).status, INFEASIBLE)

    def test_unbounded(self):
        """Test minimizing -x with no upper bound."""
        self.assertEqual(minimize([-1]).status, UNBOUNDED)

    def test_degenerate_cycling_example(self):
        """Test that Bland's rule terminates on a classic cycling instance."""
        c = [F(-3, 4), 20, F(-1, 2), 6]
        A = [[F(1, 4), -8, -1, 9], [F(1, 2), -12, F(-1, 2), 3], [0, 0, 1, 0]]
        result = minimize(c, A, [0, 0, 1])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.value, F(-5, 4))


class MarginTestCase(SimpleTestCase):
    """Test cases for the margin functional."""

    def test_tent_example(self):
        """Test the tent (0, 1, 0) on [0, 1] with both angles 1/2."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        divisors = [DivisorSpec(0, F(1, 2)), DivisorSpec(1, F(1, 2))]
        g = concave_envelope(lattice_function(P, 2, [0, 1, 0]))
        self.assertEqual(margin(P, divisors, 2, g), 1)

    def test_constants_have_zero_margin(self):
        """Test margin(c) = 0 on every fixture."""
        for name in FIXTURES:
            P, divisors = load_fixture(name)
            for i in (1, 2):
                g = concave_envelope(lattice_function(P, i, lambda a: F(7, 3)))
                self.assertEqual(margin(P, divisors, i, g), 0)

    def test_linear_margin_is_q(self):
        """Test margin(<u, x>) = <u, Q_i> on every fixture."""
        u = {1: (F(-3, 2),), 2: (F(2), F(-1, 3))}
        for name in FIXTURES:
            P, divisors = load_fixture(name)
            for i in range(1, 5):
                g = concave_envelope(concave_restriction_of_linear(P, i, u[P.dim], 5))
                q = q_vector(P, divisors, i)
                expected = sum(a * b for a, b in zip(u[P.dim], q))
                self.assertEqual(margin(P, divisors, i, g), expected)

    def test_homogeneity(self):
        """Test margin(c g) = c margin(g) for c > 0."""
        rng = random.Random(5)
        P, divisors = load_fixture("hirzebruch1")
        for _ in range(10):
            g = random_envelope(rng, P, 1)
            doubled = concave_envelope(LatticeFunction(P, 1, g.points, [3 * v for v in g.values]))
            self.assertEqual(margin(P, divisors, 1, doubled), 3 * margin(P, divisors, 1, g))

    def test_adding_affine_function_shifts_by_q(self):
        """Test margin(g + <u, x> + c) = margin(g) + <u, Q_i>."""
        rng = random.Random(9)
        P, divisors = load_fixture("hirzebruch1")
        q = q_vector(P, divisors, 1)
        u, c = (F(3, 2), F(-2)), F(5, 7)
        for _ in range(10):
            g = random_envelope(rng, P, 1)
            shifted = concave_envelope(LatticeFunction(
                P, 1, g.points, [v + dot(u, a) + c for a, v in zip(g.points, g.values)]
            ))
            self.assertEqual(margin(P, divisors, 1, shifted), margin(P, divisors, 1, g) + dot(u, q))

    def test_scale_mismatch(self):
        """Test that a PL function from another scale is rejected."""
        P, divisors = load_fixture("cp1-unit")
        g = concave_envelope(lattice_function(P, 2, [0, 1, 0]))
        with self.assertRaises(ScaleMismatch):
            margin(P, divisors, 3, g)

    def test_cached_measures(self):
        """Test that the cached measures match a fresh computation."""
        P, divisors = load_fixture("hirzebruch1")
        functional = MarginFunctional.build(P, divisors, 2)
        self.assertEqual(functional.count, lattice_count(P, 2))
        self.assertEqual(functional.terms.volume, volume(P))
        self.assertEqual(functional.terms.moment, moment(P))
        for (F_, w), d in zip(functional.facets, divisors):
            self.assertEqual(facet_volume(F_), facet_volume(facet(P, d.facet_index)))
            self.assertEqual(w, 1 - d.beta)

    def test_interpolation_weights(self):
        """Test that cuts are tight on their own envelope and below elsewhere."""
        rng = random.Random(11)
        P, divisors = load_fixture("hirzebruch1")
        functional = MarginFunctional.build(P, divisors, 1)
        points = lattice_points(P, 1)
        coarse = [cell.simplex for cell in concave_envelope(
            LatticeFunction(P, 1, points, [0] * len(points))).cells]
        for _ in range(20):
            g = random_envelope(rng, P, 1)
            own = functional.interpolation_weights([c.simplex for c in g.cells], points)
            other = functional.interpolation_weights(coarse, points)
            value = functional(g)
            self.assertEqual(sum(w * v for w, v in zip(own, g.values)), value)
            self.assertLessEqual(sum(w * v for w, v in zip(other, g.values)), value)


class DecisionTestCase(SimpleTestCase):
    """Test cases for decide_semistable."""

    def test_balanced_interval_is_semistable(self):
        """Test exact Semistable on [0, 1] with equal angles, cross-checked by samples."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        rng = random.Random(2024)
        for beta in (F(1), F(13, 14), F(1, 2)):
            divisors = [DivisorSpec(0, beta), DivisorSpec(1, beta)]
            for i in range(1, 9):
                verdict = decide_semistable(P, divisors, i, mode=EXACT)
                self.assertEqual(verdict.decision, SEMISTABLE)
                self.assertEqual(verdict.minimum, 0)
                self.assertIsNone(verdict.witness)
                functional = MarginFunctional.build(P, divisors, i)
                for _ in range(500):
                    self.assertGreaterEqual(functional(random_envelope(rng, P, i)), 0)

    def test_unbalanced_interval_is_unstable(self):
        """Test Unstable at every scale with a verified negative witness."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        divisors = [DivisorSpec(0, 1), DivisorSpec(1, F(1, 2))]
        for i in range(1, 9):
            for mode in (LINEAR, EXACT):
                verdict = decide_semistable(P, divisors, i, mode=mode)
                self.assertEqual(verdict.decision, UNSTABLE)
                q = q_vector(P, divisors, i)
                self.assertEqual(verdict.minimum, -q[0] ** 2)
                self.assertLess(margin(P, divisors, i, verdict.witness), 0)

    def test_two_point_lattice(self):
        """Test that only affine functions live on the scale-1 lattice of [0, 1]."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        verdict = decide_semistable(P, [], 1, mode=EXACT)
        self.assertEqual(verdict.decision, SEMISTABLE)
        self.assertEqual(verdict.minimum, 0)
        self.assertEqual(verdict.vertex, (0, 0))

    def test_projective_plane(self):
        """Test that the standard triangle is semistable at small scales."""
        P, divisors = load_fixture("simplex2")
        for i in (1, 2):
            verdict = decide_semistable(P, divisors, i, mode=EXACT)
            self.assertEqual(verdict.decision, SEMISTABLE)
            self.assertEqual(verdict.minimum, 0)

    def test_linear_mode_without_obstruction(self):
        """Test the escalation hint when Q_i vanishes."""
        P, divisors = load_fixture("cp1-unit")
        verdict = decide_semistable(P, divisors, 3, mode=LINEAR)
        self.assertEqual(verdict.decision, INCONCLUSIVE)
        self.assertEqual(verdict.hint, ESCALATE_HINT)
        self.assertFalse(verdict.certified)

    def test_sampled_mode_never_certifies(self):
        """Test that sampling returns Inconclusive on a semistable pair."""
        P, divisors = load_fixture("cp1-unit")
        verdict = decide_semistable(P, divisors, 4, mode=SAMPLED, seed=7, samples=50)
        self.assertEqual(verdict.decision, INCONCLUSIVE)
        self.assertEqual(verdict.samples, 50)

    def test_sampled_mode_refutes(self):
        """Test that sampling finds a negative margin on unequal angles."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        divisors = [DivisorSpec(0, 1), DivisorSpec(1, F(1, 2))]
        verdict = decide_semistable(P, divisors, 4, mode=SAMPLED, seed=0, samples=200)
        self.assertEqual(verdict.decision, UNSTABLE)
        self.assertLess(margin(P, divisors, 4, verdict.witness), 0)

    def test_sampling_is_deterministic(self):
        """Test that equal seeds give equal verdicts."""
        P, divisors = load_fixture("hirzebruch1")
        a = decide_semistable(P, divisors, 1, mode=SAMPLED, seed=3, samples=20)
        b = decide_semistable(P, divisors, 1, mode=SAMPLED, seed=3, samples=20)
        self.assertEqual(a, b)

    def test_exact_contains_linear(self):
        """Test that exact mode refutes whenever linear mode does."""
        for name in FIXTURES:
            P, divisors = load_fixture(name)
            linear = decide_semistable(P, divisors, 1, mode=LINEAR)
            if linear.decision == UNSTABLE:
                exact = decide_semistable(P, divisors, 1, mode=EXACT)
                self.assertEqual(exact.decision, UNSTABLE)
                self.assertLess(margin(P, divisors, 1, exact.witness), 0)

    def test_exact_verdict_agrees_with_samples(self):
        """Test that the symmetric square is semistable, with samples never below zero."""
        P, divisors = load_fixture("square-sym")
        verdict = decide_semistable(P, divisors, 1, mode=EXACT)
        self.assertEqual(verdict.decision, SEMISTABLE)
        self.assertEqual(verdict.minimum, 0)
        functional = MarginFunctional.build(P, divisors, 1)
        rng = random.Random(8)
        for _ in range(100):
            self.assertGreaterEqual(functional(random_envelope(rng, P, 1)), 0)

    def test_square_needs_a_second_cut(self):
        """Test the two-round cutting-plane run on the symmetric square."""
        # The normalized section is t * xy on the corners; the seed diagonal
        # only bounds one sign of t, the opposite diagonal closes the gap.
        P, divisors = load_fixture("square-sym")
        verdict = decide_semistable(P, divisors, 1, mode=EXACT)
        self.assertEqual(verdict.cuts, 2)
        self.assertEqual(verdict.vertex, (0, 0, 0, 0))
        with self.assertRaises(TooLarge):
            decide_semistable(P, divisors, 1, mode=EXACT, max_cuts=1, samples=3)

    def test_negative_exact_minimum_is_unstable(self):
        """Test the exact Unstable branch when Q_i vanishes."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        functional = PenalizedMargin(MarginFunctional.build(P, [], 2), (F(-2), F(4), F(-2)))
        verdict = exact_minimum(functional, (F(0),), concavity_cone(P, 2))
        self.assertEqual(verdict.decision, UNSTABLE)
        self.assertEqual(verdict.minimum, -3)
        self.assertEqual(verdict.vertex, (F(-1, 2), F(1), F(-1, 2)))
        self.assertEqual(functional(verdict.witness), -3)
        self.assertEqual(verdict.cuts, 2)

    def test_lp_size_cap_raises_with_partial_result(self):
        """Test that an oversized cutting-plane LP gives up with a sampled result."""
        self.assertEqual(lp_size(6, 5, 3), 152)
        P, divisors = load_fixture("square-sym")
        with self.assertRaises(TooLarge) as ctx:
            decide_semistable(P, divisors, 1, mode=EXACT, max_lp_entries=100, samples=3)
        self.assertIn("tableau entries", str(ctx.exception))
        self.assertEqual(ctx.exception.partial.mode, SAMPLED)
        self.assertEqual(ctx.exception.partial.samples, 3)

    def test_non_delzant_polytope_warns(self):
        """Test that a singular triangle is decided with a warning attached."""
        P = hull_of_vertices([(-1, -1), (1, 0), (0, 1)])
        verdict = decide_semistable(P, [], 1, mode=LINEAR)
        self.assertEqual(len(verdict.warnings), 1)
        self.assertTrue(verdict.warnings[0].startswith("polytope is not Delzant at vertices"))
        smooth, divisors = load_fixture("hirzebruch1")
        self.assertEqual(decide_semistable(smooth, divisors, 1).warnings, ())

    def test_caps_raise_with_partial_result(self):
        """Test TooLarge with a sampled fallback attached."""
        P, divisors = load_fixture("square-sym")
        with self.assertRaises(TooLarge) as ctx:
            decide_semistable(P, divisors, 1, mode=EXACT, max_constraints=1, samples=5)
        self.assertEqual(ctx.exception.partial.mode, SAMPLED)
        self.assertEqual(ctx.exception.partial.samples, 5)

    def test_unknown_mode(self):
        """Test that an unknown mode is rejected."""
        P, divisors = load_fixture("cp1-unit")
        with self.assertRaises(ValueError):
            decide_semistable(P, divisors, 1, mode="vertex")


class AffineHullTestCase(SimpleTestCase):
    """Test cases for the affine-hull constraints and the barycenter constant."""

    def test_interval(self):
        """Test mass 2 and moment 1 on [0, 1] at i = 1."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        system = affine_hull_constraints(P, 1)
        mass, first = system.equalities
        self.assertEqual(mass.rhs, 2)
        self.assertEqual(first.terms, ((1, 1),))
        self.assertEqual(first.rhs, 1)
        self.assertTrue(system.contains([1, 1]))

    def test_interval_scaled(self):
        """Test mass 4 on [0, 1] at i = 2."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        self.assertEqual(affine_hull_constraints(P, 2).equalities[0].rhs, 4)

    def test_point_facet(self):
        """Test phi(0) = 0 and phi(1) = 1 on the facet {1}."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        system = affine_hull_constraints_facet(P, 1, 1)
        self.assertTrue(system.contains([0, 1]))
        self.assertFalse(system.contains([1, 0]))
        self.assertFalse(system.contains([0, 2]))

    def test_constant(self):
        """Test the scalar 2 for beta = 1 and 3 for beta = 1/2 at both ends."""
        P = vertices_from_halfspaces(UNIT_INTERVAL)
        self.assertEqual(barycenter_constant(P, [], 1), 2)
        halves = [DivisorSpec(0, F(1, 2)), DivisorSpec(1, F(1, 2))]
        self.assertEqual(barycenter_constant(P, halves, 1), 3)

    def test_diagnostic(self):
        """Test that the mass always agrees and the moment agrees iff Q_i = 0."""
        for name in FIXTURES:
            P, divisors = load_fixture(name)
            for i in (1, 2, 3):
                diagnostic = barycenter_diagnostic(P, divisors, i)
                self.assertTrue(diagnostic.mass_ok)
                self.assertEqual(diagnostic.moment_ok, diagnostic.q_vanishes)
        P, divisors = load_fixture("hirzebruch1")
        self.assertFalse(barycenter_diagnostic(P, divisors, 1).moment_ok)
