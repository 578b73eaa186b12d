"""
The concavity cone: value vectors that equal their own concave envelope.

Each constraint reads ``v(a) >= sum_j lambda_j v(a_j)`` where ``a`` lies in
the simplex spanned by the ``a_j`` with barycentric weights ``lambda``. Over
all lattice simplices these describe the cone exactly; only the empty ones
are kept, those whose closed hull meets the lattice in their vertices and
``a`` alone.

If some constraint fails, take a failing one of least volume and, inside its
simplex, the lattice point ``b`` sitting least far below the interpolant.
Any further lattice point of the simplex lies in a strictly smaller simplex
spanned by ``b`` and all but one of the old vertices, and fails there too.
So the least failing simplex is empty, and the pruned list loses nothing.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from toricstab.conf import get_setting
from toricstab.exceptions import TooLarge

from geometry.lattice import lattice_points
from geometry.linalg import adjugate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConcavityConstraint:
    """``v[target] >= sum(weight * v[index] for index, weight in terms)``."""

    target: int
    terms: tuple

    def slack(self, values):
        """Nonnegative exactly when the constraint holds."""
        return values[self.target] - sum((w * values[j] for j, w in self.terms), Fraction(0))


@dataclass(frozen=True)
class ConcavityCone:
    scale: int
    points: tuple
    constraints: tuple

    def contains(self, values):
        return all(c.slack(values) >= 0 for c in self.constraints)

    def __len__(self):
        return len(self.constraints)


def candidate_count(point_count, dim):
    """Number of (point, simplex) pairs the generator may inspect."""
    if dim == 1:
        return max(point_count - 2, 0)
    return point_count * comb(point_count, dim + 1)


def _empty_simplex_constraint(lattice, subset):
    """
    The constraint carried by ``subset`` if its simplex holds exactly one
    other lattice point, else None. Coordinates are the integer ones of iP.
    """
    dim = len(lattice[0])
    rows = [[lattice[k][axis] for k in subset] for axis in range(dim)]
    rows.append([1] * len(subset))
    adj, d = adjugate(rows)
    if d == 0:
        return None
    found = None
    for target, point in enumerate(lattice):
        if target in subset:
            continue
        h = point + (1,)
        scaled = [sum(a * x for a, x in zip(row, h)) for row in adj]
        if all(w * d >= 0 for w in scaled):
            if found is not None:
                return None
            found = (target, scaled)
    if found is None:
        return None
    target, scaled = found
    terms = tuple((k, Fraction(w, d)) for k, w in zip(subset, scaled) if w)
    return ConcavityConstraint(target, terms)


def concavity_cone(polytope, i, max_constraints=None):
    """
    Constraints cutting out the concave value vectors on ``P ∩ (Z/i)^n``.

    In dimension one these are the consecutive second differences. Otherwise
    every affinely independent (n+1)-subset of the points is tested and kept
    when its simplex is empty in the sense above; constraints with equal
    support are emitted once. Raises TooLarge before inspecting more than
    ``max_constraints`` candidates.
    """
    if max_constraints is None:
        max_constraints = get_setting('MAX_CONSTRAINTS')
    points = tuple(lattice_points(polytope, i))
    dim = polytope.dim
    estimate = candidate_count(len(points), dim)
    if estimate > max_constraints:
        raise TooLarge(
            f"concavity cone at i={i} needs {estimate} candidate constraints "
            f"(cap {max_constraints})"
        )

    half = Fraction(1, 2)
    if dim == 1:
        constraints = [
            ConcavityConstraint(k, ((k - 1, half), (k + 1, half)))
            for k in range(1, len(points) - 1)
        ]
        return ConcavityCone(i, points, tuple(constraints))

    lattice = [tuple(int(x * i) for x in a) for a in points]
    seen = set()
    constraints = []
    for subset in combinations(range(len(points)), dim + 1):
        constraint = _empty_simplex_constraint(lattice, subset)
        if constraint is None:
            continue
        key = (constraint.target, constraint.terms)
        if key not in seen:
            seen.add(key)
            constraints.append(constraint)
    logger.info("concavity cone i=%d points=%d constraints=%d", i, len(points), len(constraints))
    return ConcavityCone(i, points, tuple(constraints))
