"""Exact univariate and vector-valued polynomials in the lattice scale i."""
from fractions import Fraction

import sympy as sp

from geometry.rationals import format_rational

I = sp.Symbol('i')


def to_sympy(value):
    value = Fraction(value)
    return sp.Rational(value.numerator, value.denominator)


def to_fraction(value):
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def interpolate(samples):
    """Lowest-degree polynomial in ``i`` through ``(node, value)`` samples."""
    data = [(to_sympy(x), to_sympy(y)) for x, y in samples]
    return sp.Poly(sp.interpolate(data, I), I, domain=sp.QQ)


def coefficients(poly):
    """Coefficients as Fractions, constant term first; ``[0]`` for zero."""
    return [to_fraction(c) for c in reversed(poly.all_coeffs())]


def evaluate(poly, i):
    total = Fraction(0)
    for c in reversed(coefficients(poly)):
        total = total * i + c
    return total


def integer_roots(poly):
    """Integer zeros of a nonzero polynomial, from its linear factors over Q."""
    roots = set()
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            a, b = (to_fraction(c) for c in factor.all_coeffs())
            root = -b / a
            if root.denominator == 1:
                roots.add(int(root))
    return roots


class VectorPolynomial:
    """A point of Q^n whose coordinates are polynomials in ``i``."""

    def __init__(self, components):
        self.components = [
            p if isinstance(p, sp.Poly) else sp.Poly(p, I, domain=sp.QQ) for p in components
        ]

    @property
    def dim(self):
        return len(self.components)

    @property
    def degree(self):
        """Largest component degree; -1 for the zero polynomial."""
        degrees = [p.degree() for p in self.components if not p.is_zero]
        return max(degrees) if degrees else -1

    def is_zero(self):
        return all(p.is_zero for p in self.components)

    def __call__(self, i):
        return tuple(evaluate(p, i) for p in self.components)

    def coefficients(self):
        """Vector coefficients of ``i^0 .. i^degree``."""
        width = max(self.degree, 0) + 1
        padded = [coefficients(p) + [Fraction(0)] * width for p in self.components]
        return [tuple(c[k] for c in padded) for k in range(width)]

    def integer_zeros(self):
        """
        Integers where every component vanishes, sorted.

        Returns None when the polynomial is identically zero.
        """
        live = [p for p in self.components if not p.is_zero]
        if not live:
            return None
        common = set.intersection(*(integer_roots(p) for p in live))
        return sorted(common)

    def render(self, name='Q_i'):
        """Human-readable form, highest power first."""
        if self.is_zero():
            return f"{name} = 0"
        terms = []
        for k, coeff in reversed(list(enumerate(self.coefficients()))):
            if not any(coeff):
                continue
            vector = '(' + ', '.join(format_rational(c) for c in coeff) + ')'
            power = '' if k == 0 else ('·i' if k == 1 else f'·i^{k}')
            terms.append(vector + power)
        return f"{name} = " + ' + '.join(terms)

    def __eq__(self, other):
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __repr__(self):
        return f"<VectorPolynomial {self.render()}>"
