"""Parsing and formatting of exact rationals and rational points."""
import re
from fractions import Fraction

RATIONAL_PATTERN = r'^-?\d+(/[1-9]\d*)?$'
_RATIONAL_RE = re.compile(RATIONAL_PATTERN)


def parse_rational(text):
    """
    Parse ``"p/q"`` or ``"p"`` into a Fraction in lowest terms.

    Floats, exponents and whitespace are rejected: every number crossing the
    file boundary is exact.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    return Fraction(text)


def format_rational(value):
    """Canonical ``"p/q"`` (or ``"p"`` for integers) for a Fraction."""
    value = Fraction(value)
    return str(value)


def as_point(coords):
    """Coerce an iterable of numbers to a tuple of Fractions."""
    return tuple(Fraction(c) for c in coords)


def dot(u, x):
    return sum((Fraction(a) * b for a, b in zip(u, x)), Fraction(0))


def add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x):
    return tuple(c * a for a in x)


def centroid(points):
    """Barycenter of a non-empty list of points."""
    count = len(points)
    dim = len(points[0])
    return tuple(
        sum((Fraction(p[k]) for p in points), Fraction(0)) / count
        for k in range(dim)
    )


def zero(dim):
    return tuple(Fraction(0) for _ in range(dim))
