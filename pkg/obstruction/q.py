"""
The Chow obstruction vector Q_i and its polynomial form in i.

For a polytope P with divisors ``D = sum_t (1 - beta_t) D_{F_t}``::

    Q_i = E_P(i) * (2i * ∫_P x dnu + sum_t (1 - beta_t) ∫_{F_t} x dsigma)
          - (2i * Vol(P) + sum_t (1 - beta_t) Vol(F_t)) * sum_{a in P ∩ (Z/i)^n} a

Vanishing of Q_i for all large i is necessary for asymptotic log Chow
semistability. Values are reported without the n!(n+1)! normalization of the
weight polytope.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from toricstab.conf import parallel_map
from toricstab.exceptions import BadFacetIndex, VerificationFailed

from geometry.lattice import integer_points, lattice_count
from geometry.polytope import facet
from geometry.rationals import zero
from measures.integrals import facet_moment, facet_volume, moment, volume

from .polynomials import I, VectorPolynomial, evaluate, interpolate, to_sympy

logger = logging.getLogger(__name__)

CHOW_UNSTABLE = "asymptotically Chow unstable"


class QPolynomial(VectorPolynomial):
    """The obstruction vector as a polynomial in ``i``."""


@dataclass(frozen=True)
class DivisorSpec:
    """The divisor ``(1 - beta) D_F`` on facet ``facet_index``."""

    facet_index: int
    beta: Fraction

    def __post_init__(self):
        beta = Fraction(self.beta)
        if not 0 < beta <= 1:
            raise ValueError(f"cone angle beta must lie in (0, 1], got {beta}")
        object.__setattr__(self, 'beta', beta)

    @property
    def weight(self):
        """``1 - beta``."""
        return 1 - self.beta


@dataclass(frozen=True)
class DivisorMeasure:
    weight: Fraction
    volume: Fraction
    moment: tuple


@dataclass(frozen=True)
class ObstructionTerms:
    """The i-independent measures Q_i is assembled from."""

    volume: Fraction
    moment: tuple
    divisors: tuple

    @property
    def divisor_volume(self):
        """``sum_t (1 - beta_t) Vol(F_t)``."""
        return sum((d.weight * d.volume for d in self.divisors), Fraction(0))

    @property
    def divisor_moment(self):
        """``sum_t (1 - beta_t) ∫_{F_t} x dsigma``."""
        total = list(zero(len(self.moment)))
        for d in self.divisors:
            for k, x in enumerate(d.moment):
                total[k] += d.weight * x
        return tuple(total)

    def leading_volume(self, i):
        """``2i Vol(P) + sum_t (1 - beta_t) Vol(F_t)``."""
        return 2 * i * self.volume + self.divisor_volume


def validate_divisors(polytope, divisors):
    """Check that divisor facets exist and are pairwise distinct."""
    seen = set()
    for d in divisors:
        if not isinstance(d.facet_index, int) or not 0 <= d.facet_index < polytope.facet_count:
            raise BadFacetIndex(
                f"divisor facet_index {d.facet_index!r} out of range 0..{polytope.facet_count - 1}"
            )
        if d.facet_index in seen:
            raise BadFacetIndex(f"divisor facet_index {d.facet_index} listed twice")
        seen.add(d.facet_index)
    return list(divisors)


def obstruction_terms(polytope, divisors):
    validate_divisors(polytope, divisors)
    measures = []
    for d in divisors:
        F = facet(polytope, d.facet_index)
        measures.append(DivisorMeasure(d.weight, facet_volume(F), facet_moment(F)))
    return ObstructionTerms(volume(polytope), moment(polytope), tuple(measures))


def lattice_sum(polytope, i):
    """``sum_{a in P ∩ (Z/i)^n} a``, computed as ``sum_{b in iP ∩ Z^n} b / i``."""
    total = [0] * polytope.dim
    for b in integer_points(polytope, i):
        for k, x in enumerate(b):
            total[k] += x
    return tuple(Fraction(x, i) for x in total)


def q_vector(polytope, divisors, i, terms=None):
    """Q_i for one scale, computed directly from enumeration and measures."""
    if i < 1:
        raise ValueError("lattice scale i must be >= 1")
    if terms is None:
        terms = obstruction_terms(polytope, divisors)
    count = lattice_count(polytope, i)
    sums = lattice_sum(polytope, i)
    weight = terms.leading_volume(i)
    divisor_moment = terms.divisor_moment
    return tuple(
        count * (2 * i * m + dm) - weight * s
        for m, dm, s in zip(terms.moment, divisor_moment, sums)
    )


def ehrhart_polynomial(polytope):
    """
    ``E_P(i)`` through ``E_P(0) = 1`` and ``i = 1 .. n+1``, checked at ``n+2``.
    """
    n = polytope.dim
    nodes = list(range(1, n + 2))
    counts = parallel_map(lambda i: lattice_count(polytope, i), nodes)
    poly = interpolate([(0, 1)] + list(zip(nodes, counts)))
    check = n + 2
    expected = lattice_count(polytope, check)
    predicted = evaluate(poly, check)
    if predicted != expected:
        raise VerificationFailed(
            f"Ehrhart interpolation predicts {predicted} points at i={check}, "
            f"enumeration found {expected}"
        )
    return poly


def lattice_sum_polynomial(polytope):
    """
    Vector polynomial ``S(i) = sum_{a in P ∩ (Z/i)^n} a`` through
    ``i = 1 .. n+3``, checked at ``n+4``.
    """
    n = polytope.dim
    nodes = list(range(1, n + 4))
    sums = parallel_map(lambda i: lattice_sum(polytope, i), nodes)
    poly = VectorPolynomial([
        interpolate([(i, s[k]) for i, s in zip(nodes, sums)]) for k in range(n)
    ])
    check = n + 4
    if poly(check) != lattice_sum(polytope, check):
        raise VerificationFailed(f"lattice-sum interpolation disagrees with enumeration at i={check}")
    return poly


def q_polynomial(polytope, divisors):
    """
    Q_i as a vector polynomial of degree at most n+1, assembled from the
    Ehrhart and lattice-sum polynomials and checked against ``q_vector`` at
    ``i = 1 .. n+3``.
    """
    terms = obstruction_terms(polytope, divisors)
    ehrhart = ehrhart_polynomial(polytope)
    sums = lattice_sum_polynomial(polytope)
    weight = 2 * I * to_sympy(terms.volume) + to_sympy(terms.divisor_volume)
    components = [
        ehrhart.as_expr() * (2 * I * to_sympy(m) + to_sympy(dm)) - weight * s.as_expr()
        for m, dm, s in zip(terms.moment, terms.divisor_moment, sums.components)
    ]
    poly = QPolynomial(components)
    for i in range(1, polytope.dim + 4):
        direct = q_vector(polytope, divisors, i, terms)
        if poly(i) != direct:
            raise VerificationFailed(f"Q polynomial disagrees with direct Q_{i}")
    logger.info("q polynomial degree=%d", poly.degree)
    return poly


@dataclass(frozen=True)
class AsymptoticVerdict:
    vanishes: bool
    witness: int = None
    label: str = "obstruction vanishes"


def asymptotic_verdict(polytope, divisors, poly=None):
    """
    ObstructionVanishes when Q is identically zero, otherwise the first
    ``i >= 1`` with ``Q_i != 0``.
    """
    if poly is None:
        poly = q_polynomial(polytope, divisors)
    zeros = poly.integer_zeros()
    if zeros is None:
        return AsymptoticVerdict(vanishes=True)
    witness = 1
    while witness in zeros:
        witness += 1
    logger.info("obstructed witness_i=%d", witness)
    return AsymptoticVerdict(vanishes=False, witness=witness, label=CHOW_UNSTABLE)
