"""
Integral Delzant polytopes in exact arithmetic.

A polytope is stored with both representations: irredundant halfspaces
``<normal, x> + offset >= 0`` (one per facet, primitive integer normals) and
its lexicographically sorted integer vertices.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from toricstab.exceptions import (
    BadIndex, Empty, LowDimensional, NonIntegralVertex, Unbounded,
)

from .hull import facet_hyperplanes
from .linalg import affine_rank, cross, det, primitive, rank, solve, unimodular_completion
from .rationals import as_point, dot, sub

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HalfSpace:
    """The closed halfspace ``<normal, x> + offset >= 0``."""

    normal: tuple
    offset: int

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        if not any(normal):
            raise ValueError("halfspace normal must be nonzero")
        if primitive(normal)[0] != normal:
            raise ValueError(f"halfspace normal {normal} is not primitive")
        object.__setattr__(self, 'normal', normal)
        object.__setattr__(self, 'offset', int(self.offset))

    def value(self, x):
        """Evaluate ``<normal, x> + offset``."""
        return dot(self.normal, x) + self.offset

    def __str__(self):
        terms = ' + '.join(f"{c}*x{k}" for k, c in enumerate(self.normal) if c)
        return f"{terms} + {self.offset} >= 0"


@dataclass(frozen=True)
class LatticeChart:
    """
    Affine unimodular parameterization ``t -> origin + sum_k t_k basis_k``
    of (affine hull of a facet) ∩ Z^n by Z^(n-1).
    """

    origin: tuple
    basis: tuple
    inverse: tuple = field(repr=False)

    def to_point(self, t):
        """Map chart coordinates to a point of R^n."""
        point = [Fraction(x) for x in self.origin]
        for coeff, vector in zip(t, self.basis):
            for k, x in enumerate(vector):
                point[k] += coeff * x
        return tuple(point)

    def to_chart(self, x):
        """Chart coordinates of a point on the facet hyperplane."""
        delta = sub(as_point(x), self.origin)
        return tuple(dot(row, delta) for row in self.inverse)


@dataclass(frozen=True)
class Facet:
    index: int
    halfspace: HalfSpace
    vertices: tuple
    chart: LatticeChart

    @property
    def dim(self):
        return len(self.halfspace.normal) - 1

    def contains(self, x):
        return self.halfspace.value(x) == 0


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional polytope with integral vertices."""

    dim: int
    halfspaces: tuple
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, 'halfspaces', tuple(self.halfspaces))
        object.__setattr__(self, 'vertices', tuple(tuple(int(x) for x in v) for v in self.vertices))

    @property
    def facet_count(self):
        return len(self.halfspaces)

    def facets(self):
        """All facets in index order."""
        return [facet(self, k) for k in range(self.facet_count)]

    def bounding_box(self):
        """Per-coordinate ``(low, high)`` over the vertices."""
        return [
            (min(v[k] for v in self.vertices), max(v[k] for v in self.vertices))
            for k in range(self.dim)
        ]

    def to_dict(self):
        return {
            'dim': self.dim,
            'halfspaces': [
                {'normal': list(h.normal), 'offset': h.offset} for h in self.halfspaces
            ],
        }


@dataclass(frozen=True)
class DelzantFailure:
    vertex: tuple
    edges: tuple
    determinant: object  # None when the vertex is not simple


@dataclass(frozen=True)
class DelzantReport:
    is_delzant: bool
    failures: tuple = ()

    @property
    def warnings(self):
        """Human-readable lines; empty when every vertex is smooth."""
        if self.is_delzant:
            return ()
        vertices = ', '.join(str(f.vertex) for f in self.failures)
        return (f"polytope is not Delzant at vertices {vertices}",)


def _normalize(halfspace):
    if isinstance(halfspace, HalfSpace):
        normal, offset = halfspace.normal, halfspace.offset
    else:
        normal, offset = halfspace
    ints, factor = primitive(normal)
    return ints, Fraction(offset) * factor


def vertices_from_halfspaces(halfspaces):
    """
    Build a LatticePolytope from an H-representation.

    Accepts HalfSpace objects or ``(normal, offset)`` pairs. Duplicate and
    redundant inequalities are dropped; surviving facets keep their input
    order. Raises Unbounded, Empty, LowDimensional or NonIntegralVertex.
    """
    inequalities = []
    for h in halfspaces:
        normalized = _normalize(h)
        if normalized not in inequalities:
            inequalities.append(normalized)
    if not inequalities:
        raise Unbounded("no halfspaces given")
    dim = len(inequalities[0][0])
    normals = [normal for normal, _ in inequalities]
    if rank(normals) < dim:
        raise Unbounded(f"halfspace normals span only rank {rank(normals)} < {dim}")

    def feasible(x):
        return all(dot(normal, x) + offset >= 0 for normal, offset in inequalities)

    points = set()
    for subset in combinations(inequalities, dim):
        x = solve([normal for normal, _ in subset], [-offset for _, offset in subset])
        if x is not None and feasible(x):
            points.add(x)
    if not points:
        raise Empty("halfspaces have no common point")

    for subset in combinations(normals, dim - 1):
        direction = cross(subset, dim)
        if not any(direction):
            continue
        for ray in (direction, tuple(-x for x in direction)):
            if all(dot(normal, ray) >= 0 for normal in normals):
                raise Unbounded(f"region contains the ray {tuple(str(x) for x in ray)}")

    points = sorted(points)
    if affine_rank(points) < dim:
        raise LowDimensional(f"region has affine dimension {affine_rank(points)} < {dim}")
    for x in points:
        if any(c.denominator != 1 for c in x):
            raise NonIntegralVertex(f"vertex {tuple(str(c) for c in x)} is not a lattice point")

    kept = []
    for normal, offset in inequalities:
        on_facet = [x for x in points if dot(normal, x) + offset == 0]
        if on_facet and affine_rank(on_facet) == dim - 1:
            kept.append(HalfSpace(normal, int(offset)))
        else:
            logger.debug("dropped redundant halfspace normal=%s offset=%s", normal, offset)
    polytope = LatticePolytope(dim, kept, points)
    logger.info("built polytope dim=%d vertices=%d facets=%d", dim, len(points), len(kept))
    return polytope


def hull_of_vertices(vertices):
    """
    Build a LatticePolytope as the convex hull of integer points.

    Non-vertex input points are discarded. Facets are sorted by
    ``(normal, offset)``.
    """
    points = sorted(set(tuple(int(x) for x in v) for v in vertices))
    if not points:
        raise Empty("no vertices given")
    dim = len(points[0])
    if affine_rank(points) < dim:
        raise LowDimensional(f"points have affine dimension {affine_rank(points)} < {dim}")
    planes = facet_hyperplanes(points)
    halfspaces = [HalfSpace(normal, int(offset)) for normal, offset in planes]
    corners = [
        p for p in points
        if rank([h.normal for h in halfspaces if h.value(p) == 0]) == dim
    ]
    return LatticePolytope(dim, halfspaces, corners)


def facet(polytope, index):
    """Return facet ``index`` with its unimodular lattice chart."""
    if not isinstance(index, int) or not 0 <= index < polytope.facet_count:
        raise BadIndex(f"facet index {index!r} out of range 0..{polytope.facet_count - 1}")
    halfspace = polytope.halfspaces[index]
    on_facet = tuple(v for v in polytope.vertices if halfspace.value(v) == 0)
    u, u_inv = unimodular_completion(halfspace.normal)
    dim = polytope.dim
    basis = tuple(tuple(u[r][c] for r in range(dim)) for c in range(1, dim))
    inverse = tuple(tuple(u_inv[r]) for r in range(1, dim))
    chart = LatticeChart(origin=on_facet[0], basis=basis, inverse=inverse)
    return Facet(index=index, halfspace=halfspace, vertices=on_facet, chart=chart)


def _neighbours(polytope, vertex):
    """Vertices joined to ``vertex`` by an edge, in lexicographic order."""
    dim = polytope.dim
    through = [h for h in polytope.halfspaces if h.value(vertex) == 0]
    result = []
    for other in polytope.vertices:
        if other == vertex:
            continue
        common = [h.normal for h in through if h.value(other) == 0]
        if dim == 1 or (common and rank(common) == dim - 1):
            result.append(other)
    return result


def is_delzant(polytope):
    """
    Check smoothness at every vertex: the primitive edge directions must form
    a basis of Z^n (|det| = 1). Non-simple vertices fail with determinant None.
    """
    failures = []
    for vertex in polytope.vertices:
        edges = tuple(primitive(sub(w, vertex))[0] for w in _neighbours(polytope, vertex))
        if len(edges) != polytope.dim:
            failures.append(DelzantFailure(vertex, edges, None))
            continue
        determinant = int(det(edges))
        if abs(determinant) != 1:
            failures.append(DelzantFailure(vertex, edges, determinant))
    if failures:
        logger.warning("non-Delzant polytope failures=%d first_vertex=%s",
                       len(failures), failures[0].vertex)
    return DelzantReport(is_delzant=not failures, failures=tuple(failures))


def scale(polytope, i):
    """The dilate ``i * P``; facets keep their indices."""
    if i < 1:
        raise ValueError("scale factor must be a positive integer")
    return LatticePolytope(
        polytope.dim,
        [HalfSpace(h.normal, h.offset * i) for h in polytope.halfspaces],
        [tuple(i * x for x in v) for v in polytope.vertices],
    )


def contains(polytope, x):
    """True when the rational point ``x`` lies in P."""
    return all(h.value(x) >= 0 for h in polytope.halfspaces)


def is_reflexive(polytope):
    """
    Delzant with the origin as its only interior lattice point, i.e. the
    polytope of a smooth toric Fano manifold with its anticanonical polarization.
    """
    from .lattice import interior_lattice_points

    if not is_delzant(polytope).is_delzant:
        return False
    return interior_lattice_points(polytope) == [tuple(0 for _ in range(polytope.dim))]
