"""
Affine hulls of the Chow weight polytopes and the normalization constant of
the barycenter condition.

Lattice points are used in the coordinates of ``iP ∩ Z^n``.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from geometry.lattice import integer_points, lattice_count
from geometry.polytope import facet
from measures.integrals import facet_moment, facet_volume, moment, volume
from obstruction.q import obstruction_terms, q_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearEquality:
    """``sum(c * phi[k] for k, c in terms) == rhs``."""

    terms: tuple
    rhs: Fraction

    def holds(self, values):
        return sum((c * values[k] for k, c in self.terms), Fraction(0)) == self.rhs


@dataclass(frozen=True)
class AffineHullSystem:
    scale: int
    points: tuple
    equalities: tuple

    def contains(self, values):
        return all(e.holds(values) for e in self.equalities)


def _mass_and_moment(points, mass, moments):
    every = tuple((k, Fraction(1)) for k in range(len(points)))
    equalities = [LinearEquality(every, mass)]
    for axis, target in enumerate(moments):
        terms = tuple((k, Fraction(b[axis])) for k, b in enumerate(points) if b[axis])
        equalities.append(LinearEquality(terms, target))
    return equalities


def affine_hull_constraints(polytope, i):
    """
    ``sum phi(b) = (n+1)! Vol(iP)`` and ``sum phi(b) b = (n+1)! ∫_{iP} x dnu``.
    """
    n = polytope.dim
    points = tuple(integer_points(polytope, i))
    c = factorial(n + 1)
    mass = c * volume(polytope) * i ** n
    moments = [c * m * i ** (n + 1) for m in moment(polytope)]
    return AffineHullSystem(i, points, tuple(_mass_and_moment(points, mass, moments)))


def affine_hull_constraints_facet(polytope, index, i):
    """
    ``phi = 0`` off ``iF``, ``sum phi(b) = n! Vol_sigma(iF)`` and
    ``sum phi(b) b = n! ∫_{iF} x dsigma``.
    """
    n = polytope.dim
    F = facet(polytope, index)
    points = tuple(integer_points(polytope, i))
    c = factorial(n)
    off = [LinearEquality(((k, Fraction(1)),), Fraction(0))
           for k, b in enumerate(points) if not F.contains(tuple(Fraction(x, i) for x in b))]
    mass = c * facet_volume(F) * i ** (n - 1)
    moments = [c * m * i ** n for m in facet_moment(F)]
    return AffineHullSystem(i, points, tuple(off + _mass_and_moment(points, mass, moments)))


def barycenter_constant(polytope, divisors, i):
    """
    The scalar multiplying the all-ones vector in the barycenter condition::

        n! (n+1)! / E_P(i) * (2 Vol(iP) + sum_t (1 - beta_t) Vol(iF_t))
    """
    n = polytope.dim
    terms = obstruction_terms(polytope, divisors)
    total = 2 * terms.volume * i ** n + terms.divisor_volume * i ** (n - 1)
    return Fraction(factorial(n) * factorial(n + 1), lattice_count(polytope, i)) * total


@dataclass(frozen=True)
class BarycenterDiagnostic:
    """
    The constant target against the affine hull of the weighted Minkowski sum
    ``2 n! Ch(iP) + sum_t (1 - beta_t) (n+1)! Ch(iF_t)``.
    """

    constant: Fraction
    mass: Fraction
    target_mass: Fraction
    moment: tuple
    target_moment: tuple
    q_vanishes: bool

    @property
    def mass_ok(self):
        return self.mass == self.target_mass

    @property
    def moment_ok(self):
        return self.moment == self.target_moment


def barycenter_diagnostic(polytope, divisors, i):
    """
    Compare the mass and first moment of the constant target with those every
    point of the Minkowski sum shares. The mass always agrees; the moment
    agrees exactly when Q_i = 0.
    """
    n = polytope.dim
    terms = obstruction_terms(polytope, divisors)
    constant = barycenter_constant(polytope, divisors, i)
    points = integer_points(polytope, i)
    coef = factorial(n) * factorial(n + 1)

    mass = coef * (2 * terms.volume * i ** n + terms.divisor_volume * i ** (n - 1))
    moment_ = tuple(
        coef * (2 * m * i ** (n + 1) + dm * i ** n)
        for m, dm in zip(terms.moment, terms.divisor_moment)
    )
    target_mass = constant * len(points)
    target_moment = tuple(constant * sum(b[axis] for b in points) for axis in range(n))
    q = q_vector(polytope, divisors, i, terms)
    diagnostic = BarycenterDiagnostic(constant, mass, target_mass, moment_, target_moment, not any(q))
    logger.info("barycenter diagnostic i=%d mass_ok=%s moment_ok=%s",
                i, diagnostic.mass_ok, diagnostic.moment_ok)
    return diagnostic
