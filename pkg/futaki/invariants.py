"""
Toric log Futaki invariants of rational convex PL functions.

A convex PL function ``h`` on P with creases on the scale-``k`` lattice
defines a toric test configuration. Its log Futaki invariant can be read off
the expansion coefficients of the weight and dimension polynomials, or
computed directly as an interior/boundary integral functional of ``h``. The
two agree up to sign::

    futaki_from_expansions(h) == -log_futaki_toric(h)
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from toricstab.conf import parallel_map
from toricstab.exceptions import CreaseMismatch, NotConvex, VerificationFailed

from envelope.functions import PLFunction, concave_envelope, is_concave, lattice_function, refine
from geometry.polytope import facet
from measures.integrals import (
    boundary_volume, facet_volume, integrate_pl, integrate_pl_boundary, integrate_pl_facet,
    volume,
)
from obstruction.polynomials import coefficients, evaluate, interpolate
from obstruction.q import validate_divisors
from stability.margin import MarginFunctional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvexPLFunction:
    """
    A convex PL function ``h``, stored as the concave envelope ``g = -h``,
    with an integer ``bound`` R such that ``h <= R`` on P.
    """

    concave: PLFunction
    bound: int

    @property
    def polytope(self):
        return self.concave.polytope

    @property
    def scale(self):
        return self.concave.scale

    @property
    def points(self):
        return self.concave.points

    @property
    def values(self):
        return tuple(-v for v in self.concave.values)

    def integral(self):
        """``∫_P h dnu``."""
        return -integrate_pl(self.polytope, self.concave)

    def facet_integral(self, F):
        """``∫_F h dsigma``."""
        return -integrate_pl_facet(F, self.concave)

    def boundary_integral(self):
        """``∫_∂P h dsigma``."""
        return -integrate_pl_boundary(self.polytope, self.concave)


def convex_pl_function(polytope, k, values, bound=None):
    """
    Build a ConvexPLFunction from its values on ``P ∩ (Z/k)^n``.

    ``values`` is anything ``lattice_function`` accepts. Raises NotConvex
    unless ``-h`` equals its own concave envelope.
    """
    negated = -lattice_function(polytope, k, values)
    if not is_concave(negated):
        raise NotConvex(f"values are not those of a convex function on the scale-{k} lattice")
    g = concave_envelope(negated)
    top = math.ceil(max(-v for v in g.values))
    if bound is None:
        bound = top
    elif bound < top:
        raise ValueError(f"bound R={bound} lies below max h = {top}")
    return ConvexPLFunction(g, bound)


def log_futaki_toric(polytope, divisors, h):
    """
    ::

        Vol(∂P)/Vol(P) ∫_P h dnu - ∫_∂P h dsigma
            + sum_t (1 - beta_t) (∫_{F_t} h dsigma - Vol(F_t)/Vol(P) ∫_P h dnu)

    The pair is log K-semistable for toric degenerations iff this is <= 0
    for every rational convex h.
    """
    validate_divisors(polytope, divisors)
    vol = volume(polytope)
    interior = h.integral()
    value = boundary_volume(polytope) / vol * interior - h.boundary_integral()
    for d in divisors:
        F = facet(polytope, d.facet_index)
        value += d.weight * (h.facet_integral(F) - facet_volume(F) / vol * interior)
    return value


@dataclass(frozen=True)
class ExpansionCoefficients:
    """
    Leading coefficients of ``d_k = a0 k^n + a1 k^(n-1)``,
    ``w_k = b0 k^(n+1) + b1 k^n``, ``d~_k = a0~ k^(n-1)`` and
    ``w~_k = b0~ k^n``.
    """

    a0: Fraction
    a1: Fraction
    b0: Fraction
    b1: Fraction
    a0_tilde: Fraction
    b0_tilde: Fraction
    bound: int


@dataclass(frozen=True)
class Expansions:
    d: Fraction
    w: Fraction
    d_tilde: Fraction
    w_tilde: Fraction


def expansion_coefficients(polytope, F, h):
    """Toric values of the coefficients for the divisor on ``F``."""
    R = h.bound
    vol, boundary = volume(polytope), boundary_volume(polytope)
    a0_tilde = facet_volume(F)
    return ExpansionCoefficients(
        a0=vol,
        a1=boundary / 2,
        b0=R * vol - h.integral(),
        b1=(R * boundary - h.boundary_integral()) / 2,
        a0_tilde=a0_tilde,
        b0_tilde=R * a0_tilde - h.facet_integral(F),
        bound=R,
    )


def expansions(polytope, F, h, k):
    """The leading terms of ``d_k``, ``w_k``, ``d~_k`` and ``w~_k`` at ``k``."""
    n = polytope.dim
    c = expansion_coefficients(polytope, F, h)
    return Expansions(
        d=c.a0 * k ** n + c.a1 * k ** (n - 1),
        w=c.b0 * k ** (n + 1) + c.b1 * k ** n,
        d_tilde=c.a0_tilde * Fraction(k) ** (n - 1),
        w_tilde=c.b0_tilde * k ** n,
    )


def futaki_from_expansions(c, beta):
    """``2 (a1/a0 b0 - b1) + (1 - beta) (b0~ - a0~/a0 b0)``."""
    if c.a0 <= 0:
        raise ValueError("a0 must be positive")
    beta = Fraction(beta)
    return 2 * (c.a1 / c.a0 * c.b0 - c.b1) + (1 - beta) * (c.b0_tilde - c.a0_tilde / c.a0 * c.b0)


def log_futaki_from_expansions(polytope, divisors, h):
    """
    The expansion formula with one correction term per divisor. Without
    divisors only the first term remains.
    """
    validate_divisors(polytope, divisors)
    vol, boundary = volume(polytope), boundary_volume(polytope)
    b0 = h.bound * vol - h.integral()
    b1 = (h.bound * boundary - h.boundary_integral()) / 2
    value = 2 * (boundary / 2 / vol * b0 - b1)
    for d in divisors:
        c = expansion_coefficients(polytope, facet(polytope, d.facet_index), h)
        value += d.weight * (c.b0_tilde - c.a0_tilde / c.a0 * c.b0)
    return value


@dataclass(frozen=True)
class ConsistencyReport:
    """
    Exact margins of ``g = -h`` at scales ``m = i k`` and the coefficient of
    ``m^n`` in the polynomial through them, divided by Vol(P).
    """

    k: int
    samples: tuple  # (m, margin)
    coefficients: tuple  # lowest degree first
    extracted: Fraction
    subleading: Fraction
    log_futaki: Fraction

    @property
    def expected(self):
        return -self.log_futaki

    @property
    def passed(self):
        return self.extracted == self.expected


def asymptotic_consistency_check(polytope, divisors, h, k, imax=None):
    """
    Fit ``margin(P, divisors, m, -h)`` over ``m = k, 2k, .., imax k`` and
    compare its ``m^n`` coefficient, over Vol(P), with ``-log_futaki_toric(h)``.

    The margin is a polynomial of degree at most n in m on these scales
    (the ``m^(n+1)`` terms cancel); one extra sample checks the fit.
    """
    n = polytope.dim
    if k < 1 or k % h.scale:
        raise CreaseMismatch(f"h has creases on the scale-{h.scale} lattice, not representable at k={k}")
    if imax is None:
        imax = n + 3
    if imax < n + 3:
        raise ValueError(f"imax must be at least {n + 3} to fit and check a degree-{n + 1} polynomial")
    scales = [i * k for i in range(1, imax + 1)]

    def sample(m):
        return m, MarginFunctional.build(polytope, divisors, m)(refine(h.concave, m))

    samples = tuple(parallel_map(sample, scales))
    poly = interpolate(samples[:n + 2])
    for m, value in samples[n + 2:]:
        if evaluate(poly, m) != value:
            raise VerificationFailed(f"margin at m={m} is off the fitted polynomial")
    coeffs = coefficients(poly) + [0] * (n + 2)
    if coeffs[n + 1] != 0:
        raise VerificationFailed(f"margin grows like m^{n + 1}; leading terms failed to cancel")
    vol = volume(polytope)
    report = ConsistencyReport(
        k=k,
        samples=samples,
        coefficients=tuple(Fraction(c) for c in coeffs[:n + 1]),
        extracted=Fraction(coeffs[n]) / vol,
        subleading=Fraction(coeffs[n - 1]) / vol,
        log_futaki=log_futaki_toric(polytope, divisors, h),
    )
    logger.info("futaki consistency k=%d extracted=%s expected=%s passed=%s",
                k, report.extracted, report.expected, report.passed)
    return report
