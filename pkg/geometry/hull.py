"""
Facet enumeration and triangulation of small exact point sets.

Both routines are brute force over subsets of the input points. That is the
right trade at the sizes this toolkit runs at (dimension at most three, a few
hundred points) and keeps every step auditable in exact arithmetic.
"""
import logging
from fractions import Fraction
from itertools import combinations
from math import factorial

from .linalg import affine_rank, cross, det, primitive
from .rationals import as_point, dot, sub

logger = logging.getLogger(__name__)


def facet_hyperplanes(points):
    """
    Return the facet-defining inequalities of ``conv(points)``.

    ``points`` must affinely span R^d. Each inequality is a pair
    ``(normal, offset)`` with a primitive integer ``normal`` and a rational
    ``offset`` such that every point satisfies ``<normal, x> + offset >= 0``.
    The list is sorted by ``(normal, offset)``.
    """
    pts = sorted(set(as_point(p) for p in points))
    dim = len(pts[0])
    if dim == 1:
        low, high = pts[0][0], pts[-1][0]
        return sorted([((1,), -low), ((-1,), high)])

    found = {}
    for subset in combinations(pts, dim):
        if any(all(_on_plane(plane, p) for p in subset) for plane in found):
            continue
        normal = cross([sub(p, subset[0]) for p in subset[1:]], dim)
        if not any(normal):
            continue
        offset = -dot(normal, subset[0])
        values = [dot(normal, p) + offset for p in pts]
        if any(v < 0 for v in values):
            if any(v > 0 for v in values):
                continue
            normal = tuple(-x for x in normal)
            offset = -offset
        ints, factor = primitive(normal)
        plane = (ints, offset * factor)
        found[plane] = True
    return sorted(found)


def _on_plane(plane, point):
    normal, offset = plane
    return dot(normal, point) + offset == 0


def simplex_volume(simplex):
    """Lebesgue volume of a full-dimensional simplex given by its vertices."""
    base = simplex[0]
    dim = len(base)
    if dim == 0:
        return Fraction(1)
    return abs(det([sub(p, base) for p in simplex[1:]])) / factorial(dim)


def triangulate(points, apex='first'):
    """
    Pulling triangulation of ``conv(points)``.

    The hull is coned from its lexicographically first (``apex="first"``) or
    last (``apex="last"``) point over a recursive triangulation of every facet
    not containing that point. Points may sit in a lower-dimensional affine
    subspace; simplices then have ``k + 1`` vertices where ``k`` is the affine
    dimension. Vertices of each simplex are returned sorted.
    """
    if apex not in ('first', 'last'):
        raise ValueError(f"apex must be 'first' or 'last', got {apex!r}")
    pts = sorted(set(as_point(p) for p in points))
    rank = affine_rank(pts)
    if rank == 0:
        return [(pts[0],)]
    coords = _spanning_coordinates(pts, rank)
    lifted = {tuple(p[c] for c in coords): p for p in pts}
    simplices = _pull(sorted(lifted), apex)
    result = sorted(tuple(sorted(lifted[q] for q in s)) for s in simplices)
    logger.debug("triangulated points=%d dim=%d simplices=%d", len(pts), rank, len(result))
    return result


def _spanning_coordinates(points, rank):
    """Smallest lexicographic coordinate subset on which projection is injective."""
    dim = len(points[0])
    if rank == dim:
        return tuple(range(dim))
    for coords in combinations(range(dim), rank):
        if affine_rank([tuple(p[c] for c in coords) for p in points]) == rank:
            return coords
    raise ValueError("point set has no coordinate projection of full rank")


def _pull(points, apex):
    if len(points[0]) == 1:
        return [(points[0], points[-1])]
    top = points[0] if apex == 'first' else points[-1]
    simplices = []
    for normal, offset in facet_hyperplanes(points):
        if dot(normal, top) + offset == 0:
            continue
        face = [p for p in points if dot(normal, p) + offset == 0]
        for simplex in triangulate(face, apex):
            simplices.append(simplex + (top,))
    return simplices
