"""
Lattice functions and their concave piecewise-linear envelopes.

A LatticeFunction assigns a rational value to every point of ``P ∩ (Z/i)^n``.
Its concave envelope ``g_phi`` is the upper hull of the lifted points
``(a, phi(a))``, stored as cells: simplices with lattice vertices, each with
the affine form the envelope equals there.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from toricstab.exceptions import DomainMismatch, ScaleMismatch

from geometry.hull import simplex_volume, triangulate
from geometry.lattice import lattice_points
from geometry.linalg import affine_rank, solve
from geometry.polytope import contains
from geometry.rationals import as_point, dot
from measures.integrals import volume

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    """A simplex together with the affine form ``<gradient, x> + constant``."""

    simplex: tuple
    gradient: tuple
    constant: Fraction

    def value(self, x):
        return dot(self.gradient, x) + self.constant


@dataclass(frozen=True)
class LatticeFunction:
    polytope: object
    scale: int
    points: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(as_point(p) for p in self.points))
        object.__setattr__(self, 'values', tuple(Fraction(v) for v in self.values))
        if len(self.points) != len(self.values):
            raise DomainMismatch("lattice function needs exactly one value per point")

    def as_dict(self):
        return dict(zip(self.points, self.values))

    def __neg__(self):
        return LatticeFunction(self.polytope, self.scale, self.points, [-v for v in self.values])


@dataclass(frozen=True)
class PLFunction:
    """
    Concave PL function on P with creases on the scale-``i`` lattice.

    ``values`` are the function's values at ``points`` (the full lattice);
    ``cells`` cover P.
    """

    polytope: object
    scale: int
    points: tuple
    values: tuple
    cells: tuple

    def lattice_values(self):
        return LatticeFunction(self.polytope, self.scale, self.points, self.values)

    def as_dict(self):
        return dict(zip(self.points, self.values))


def lattice_function(polytope, i, data):
    """
    Build a LatticeFunction on ``P ∩ (Z/i)^n``.

    ``data`` is a callable of the point, a mapping keyed by point, or a
    sequence of values in lattice-point order.
    """
    points = lattice_points(polytope, i)
    if callable(data):
        values = [data(a) for a in points]
    elif isinstance(data, dict):
        keyed = {as_point(k): Fraction(v) for k, v in data.items()}
        if set(keyed) != set(points):
            raise DomainMismatch(f"values do not match the scale-{i} lattice of P")
        values = [keyed[a] for a in points]
    else:
        values = list(data)
        if len(values) != len(points):
            raise DomainMismatch(
                f"expected {len(points)} values for the scale-{i} lattice, got {len(values)}"
            )
    return LatticeFunction(polytope, i, points, values)


def concave_restriction_of_linear(polytope, i, gradient, constant=0):
    """Restriction of ``<gradient, x> + constant`` to the scale-``i`` lattice."""
    return lattice_function(polytope, i, lambda a: dot(gradient, a) + Fraction(constant))


def _upper_chain(points, values):
    """Upper hull of lifted points in the line, left to right."""
    hull = []
    for x, v in zip(points, values):
        p = (x[0], v)
        while len(hull) > 1:
            o, a = hull[-2], hull[-1]
            if (a[0] - o[0]) * (p[1] - o[1]) - (p[0] - o[0]) * (a[1] - o[1]) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _cells_in_line(points, values):
    hull = _upper_chain(points, values)
    cells = []
    for (x0, v0), (x1, v1) in zip(hull, hull[1:]):
        slope = (v1 - v0) / (x1 - x0)
        cells.append(Cell(((x0,), (x1,)), (slope,), v0 - slope * x0))
    return cells


def _upper_planes(points, values):
    """Non-vertical upper facets of the lifted point set, as ``(u, c)``, by exhaustive scan."""
    dim = len(points[0])
    lifted = list(zip(points, values))
    planes = []
    for subset in combinations(lifted, dim + 1):
        base = [a for a, _ in subset]
        if affine_rank(base) < dim:
            continue
        if any(all(dot(u, a) + c == v for a, v in subset) for u, c in planes):
            continue
        solution = solve([list(a) + [1] for a in base], [v for _, v in subset])
        u, c = solution[:dim], solution[dim]
        if all(v <= dot(u, a) + c for a, v in lifted):
            planes.append((tuple(u), c))
    return planes


def _hull_planes(points, values):
    """
    Upper facets proposed by qhull on the lifted points, each re-derived and
    checked exactly. Facets qhull gets wrong are dropped, not repaired.
    """
    dim = len(points[0])
    lifted = np.array([[float(x) for x in a] + [float(v)] for a, v in zip(points, values)])
    try:
        hull = ConvexHull(lifted, qhull_options='QJ')
    except (QhullError, ValueError) as exc:
        logger.debug("qhull rejected lifted points detail=%s", exc)
        return []
    planes = set()
    for simplex, equation in zip(hull.simplices, hull.equations):
        if equation[-2] <= 0:
            continue
        base = [points[k] for k in simplex]
        solution = solve([list(a) + [1] for a in base], [values[k] for k in simplex])
        if solution is None:
            continue
        u, c = tuple(solution[:dim]), solution[dim]
        if all(v <= dot(u, a) + c for a, v in zip(points, values)):
            planes.add((u, c))
    return sorted(planes)


def _cells_from_planes(points, values, planes):
    cells = []
    for u, c in planes:
        contact = [a for a, v in zip(points, values) if dot(u, a) + c == v]
        for simplex in triangulate(contact):
            cells.append(Cell(simplex, u, c))
    return cells


def _cells_in_space(polytope, points, values):
    # Distinct upper facets have disjoint interiors, so full volume means none is missing.
    cells = _cells_from_planes(points, values, _hull_planes(points, values))
    if sum((simplex_volume(cell.simplex) for cell in cells), Fraction(0)) == volume(polytope):
        return cells
    logger.debug("qhull facets incomplete, scanning points=%d", len(points))
    return _cells_from_planes(points, values, _upper_planes(points, values))


def concave_envelope(phi):
    """
    The concave envelope ``g_phi`` of a lattice function.

    Flat upper faces are triangulated deterministically, so equal inputs give
    equal cell lists. ``g_phi(a) >= phi(a)`` and may be strict.
    """
    points, values = phi.points, phi.values
    if phi.polytope.dim == 1:
        cells = _cells_in_line(points, values)
    else:
        cells = _cells_in_space(phi.polytope, points, values)
    cells = tuple(sorted(cells, key=lambda cell: cell.simplex))
    lifted = tuple(min(cell.value(a) for cell in cells) for a in points)
    logger.debug("envelope scale=%d points=%d cells=%d", phi.scale, len(points), len(cells))
    return PLFunction(phi.polytope, phi.scale, points, lifted, cells)


def is_concave(phi):
    """True iff ``phi`` equals its envelope at every lattice point."""
    return concave_envelope(phi).values == phi.values


def evaluate(g, x):
    """Value of ``g`` at any rational point of P: the minimum of its cell forms."""
    x = as_point(x)
    if not contains(g.polytope, x):
        raise DomainMismatch(f"point {tuple(str(c) for c in x)} lies outside P")
    return min(cell.value(x) for cell in g.cells)


def refine(g, scale):
    """
    Re-express ``g`` on the finer lattice ``P ∩ (Z/scale)^n``.

    ``scale`` must be a multiple of ``g.scale``; the cells are unchanged.
    """
    if scale % g.scale:
        raise ScaleMismatch(f"scale {scale} is not a multiple of {g.scale}")
    points = lattice_points(g.polytope, scale)
    values = tuple(evaluate(g, a) for a in points)
    return PLFunction(g.polytope, scale, tuple(points), values, g.cells)
