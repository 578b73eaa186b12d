"""
Exact volumes, moments and integrals of piecewise-linear functions.

Interior integrals use Lebesgue measure dnu. Facet integrals use the lattice
measure dsigma: Lebesgue measure in a unimodular chart of the facet lattice,
so ``dh_F ∧ dsigma = dnu``. Zero-dimensional facets carry unit point mass.
Every integrand is affine on every simplex, so the centroid rule is exact.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from toricstab.exceptions import DomainMismatch

from geometry.hull import simplex_volume, triangulate
from geometry.linalg import affine_rank
from geometry.rationals import add, centroid, scale, zero

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FacetMeasure:
    index: int
    volume: Fraction
    moment: tuple


@dataclass(frozen=True)
class MeasureReport:
    volume: Fraction
    moment: tuple
    facets: tuple
    boundary_volume: Fraction

    @property
    def barycenter(self):
        return tuple(x / self.volume for x in self.moment)


def simplices(polytope, apex='first'):
    """``(simplex, volume)`` pairs of a triangulation of P."""
    return [(s, simplex_volume(s)) for s in triangulate(polytope.vertices, apex)]


def facet_simplex_volume(facet, simplex):
    """dsigma-volume of an (n-1)-simplex lying on ``facet``."""
    if facet.dim == 0:
        return Fraction(1)
    return simplex_volume([facet.chart.to_chart(p) for p in simplex])


def facet_simplices(facet, apex='first'):
    """``(simplex, sigma_volume)`` pairs of a triangulation of the facet."""
    return [(s, facet_simplex_volume(facet, s)) for s in triangulate(facet.vertices, apex)]


def _weighted_moment(pieces, dim):
    total = zero(dim)
    for simplex, vol in pieces:
        total = add(total, scale(vol, centroid(simplex)))
    return total


def volume(polytope, apex='first'):
    """Lebesgue volume of P."""
    return sum((vol for _, vol in simplices(polytope, apex)), Fraction(0))


def moment(polytope, apex='first'):
    """``∫_P x dnu`` componentwise."""
    return _weighted_moment(simplices(polytope, apex), polytope.dim)


def facet_volume(facet, apex='first'):
    """``Vol_sigma(F)``."""
    return sum((vol for _, vol in facet_simplices(facet, apex)), Fraction(0))


def facet_moment(facet, apex='first'):
    """``∫_F x dsigma`` componentwise."""
    return _weighted_moment(facet_simplices(facet, apex), facet.dim + 1)


def boundary_volume(polytope):
    """``Vol(∂P)``, the sum of the facet dsigma-volumes."""
    return sum((facet_volume(F) for F in polytope.facets()), Fraction(0))


def measure_report(polytope):
    """All measures of P in one pass."""
    facets = tuple(
        FacetMeasure(F.index, facet_volume(F), facet_moment(F)) for F in polytope.facets()
    )
    report = MeasureReport(
        volume=volume(polytope),
        moment=moment(polytope),
        facets=facets,
        boundary_volume=sum((f.volume for f in facets), Fraction(0)),
    )
    logger.info("measures volume=%s boundary=%s", report.volume, report.boundary_volume)
    return report


def _check_domain(polytope, g):
    if g.polytope != polytope:
        raise DomainMismatch("PL function is defined on a different polytope")


def integrate_pl(polytope, g):
    """``∫_P g dnu`` for a PL function given by its cells."""
    _check_domain(polytope, g)
    total = Fraction(0)
    for cell in g.cells:
        total += simplex_volume(cell.simplex) * cell.value(centroid(cell.simplex))
    return total


def facet_faces(facet, cells):
    """
    ``(face, cell)`` pairs: the (n-1)-faces of cell simplices lying on ``facet``.

    These faces tile the facet whenever the cells tile P.
    """
    faces = []
    for cell in cells:
        face = tuple(p for p in cell.simplex if facet.contains(p))
        if len(face) == facet.dim + 1 and affine_rank(face) == facet.dim:
            faces.append((face, cell))
    return faces


def integrate_pl_facet(facet, g):
    """``∫_F g dsigma``."""
    if facet.index >= g.polytope.facet_count or g.polytope.halfspaces[facet.index] != facet.halfspace:
        raise DomainMismatch(f"facet {facet.index} does not belong to the PL function's polytope")
    total = Fraction(0)
    for face, cell in facet_faces(facet, g.cells):
        total += facet_simplex_volume(facet, face) * cell.value(centroid(face))
    return total


def integrate_pl_boundary(polytope, g):
    """``∫_∂P g dsigma``."""
    _check_domain(polytope, g)
    return sum((integrate_pl_facet(F, g) for F in polytope.facets()), Fraction(0))
