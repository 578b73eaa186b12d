"""
The semistability margin of a concave PL function.

For g in PL(P, i)::

    margin(g) = E_P(i) * (2i ∫_P g dnu + sum_t (1 - beta_t) ∫_{F_t} g dsigma)
                - (2i Vol(P) + sum_t (1 - beta_t) Vol(F_t)) * sum_a g(a)

where ``a`` runs over ``P ∩ (Z/i)^n``. The pair is T_iP-semistable at scale
``i`` iff the margin is nonnegative for every such g.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from toricstab.exceptions import DomainMismatch, ScaleMismatch

from geometry.hull import simplex_volume
from geometry.lattice import lattice_count
from geometry.polytope import facet
from measures.integrals import facet_faces, facet_simplex_volume, integrate_pl, integrate_pl_facet
from obstruction.q import obstruction_terms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarginFunctional:
    """Everything the margin needs at one scale, measured once."""

    polytope: object
    divisors: tuple
    scale: int
    count: int
    terms: object
    facets: tuple  # (Facet, 1 - beta) per divisor

    @classmethod
    def build(cls, polytope, divisors, i):
        if i < 1:
            raise ValueError("lattice scale i must be >= 1")
        divisors = tuple(divisors)
        terms = obstruction_terms(polytope, divisors)
        facets = tuple((facet(polytope, d.facet_index), d.weight) for d in divisors)
        return cls(polytope, divisors, i, lattice_count(polytope, i), terms, facets)

    @property
    def weight(self):
        """``2i Vol(P) + sum_t (1 - beta_t) Vol(F_t)``."""
        return self.terms.leading_volume(self.scale)

    def __call__(self, g):
        if g.scale != self.scale:
            raise ScaleMismatch(f"PL function has scale {g.scale}, margin was built for i={self.scale}")
        if g.polytope != self.polytope:
            raise DomainMismatch("PL function is defined on a different polytope")
        interior = integrate_pl(self.polytope, g)
        boundary = sum((w * integrate_pl_facet(F, g) for F, w in self.facets), Fraction(0))
        total = sum(g.values, Fraction(0))
        return self.count * (2 * self.scale * interior + boundary) - self.weight * total

    def interpolation_weights(self, simplices, points):
        """
        Coefficients ``w`` with ``margin(g) = sum_a w[a] * g(a)`` for every g
        that is affine on each of ``simplices``.

        For any other concave g with the same lattice values the sum is a
        lower bound, because interpolation on a lattice triangulation lies
        below the concave envelope.
        """
        index = {a: k for k, a in enumerate(points)}
        n = self.polytope.dim
        interior = [Fraction(0)] * len(points)
        boundary = [Fraction(0)] * len(points)
        for simplex in simplices:
            share = simplex_volume(simplex) / (n + 1)
            for a in simplex:
                interior[index[a]] += share
        cells = [_Simplex(s) for s in simplices]
        for F, w in self.facets:
            for face, _ in facet_faces(F, cells):
                share = w * facet_simplex_volume(F, face) / n
                for a in face:
                    boundary[index[a]] += share
        return tuple(
            self.count * (2 * self.scale * inner + outer) - self.weight
            for inner, outer in zip(interior, boundary)
        )


@dataclass(frozen=True)
class _Simplex:
    simplex: tuple


def margin(polytope, divisors, i, g):
    """LHS minus RHS of the semistability inequality, exactly."""
    value = MarginFunctional.build(polytope, divisors, i)(g)
    logger.debug("margin i=%d value=%s", i, value)
    return value
