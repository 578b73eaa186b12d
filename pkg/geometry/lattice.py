"""Lattice point enumeration by bounding-box scan."""
import logging
from fractions import Fraction
from itertools import product

from toricstab.conf import parallel_map

logger = logging.getLogger(__name__)


def integer_points(polytope, i=1):
    """
    Sorted list of ``iP ∩ Z^n`` as integer tuples.

    The scan is split by the first coordinate so slices can run on the worker
    pool; slices come back in order, so the result is already sorted.
    """
    if i < 1:
        raise ValueError("lattice scale i must be >= 1")
    box = [(low * i, high * i) for low, high in polytope.bounding_box()]
    first, rest = box[0], box[1:]

    def scan(x0):
        ranges = [range(low, high + 1) for low, high in rest]
        return [
            (x0,) + tail for tail in product(*ranges)
            if all(h.value((x0,) + tail) + (i - 1) * h.offset >= 0 for h in polytope.halfspaces)
        ]

    slices = parallel_map(scan, range(first[0], first[1] + 1))
    points = [p for chunk in slices for p in chunk]
    logger.debug("enumerated lattice points i=%d count=%d", i, len(points))
    return points


def lattice_points(polytope, i=1):
    """``P ∩ (Z/i)^n`` as rational points, sorted lexicographically."""
    return [tuple(Fraction(x, i) for x in b) for b in integer_points(polytope, i)]


def lattice_count(polytope, i=1):
    """``E_P(i)``."""
    return len(integer_points(polytope, i))


def interior_lattice_points(polytope):
    """Lattice points of P strictly inside every facet halfspace."""
    return [
        b for b in integer_points(polytope, 1)
        if all(h.value(b) > 0 for h in polytope.halfspaces)
    ]
