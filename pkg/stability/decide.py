"""
Deciding T_iP-semistability at a fixed scale.

Three modes:

* ``linear`` checks the obstruction vector only. A nonzero Q_i is refuted by
  the linear witness ``g = <-Q_i, x>``; otherwise the answer is inconclusive.
* ``exact`` minimizes the margin over the normalized section of the
  concavity cone with an exact cutting-plane LP and returns a certificate
  either way.
* ``sampled`` evaluates the margin on seeded random envelopes. It can refute
  semistability but never certifies it.
"""
import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction

from toricstab.conf import get_setting, parallel_map
from toricstab.exceptions import TooLarge, VerificationFailed

from envelope.cone import concavity_cone
from envelope.functions import (
    LatticeFunction, PLFunction, concave_envelope, concave_restriction_of_linear,
)
from geometry.lattice import lattice_points
from geometry.polytope import is_delzant
from geometry.rationals import dot
from obstruction.q import q_vector

from .lp import OPTIMAL, minimize
from .margin import MarginFunctional

logger = logging.getLogger(__name__)

SEMISTABLE = 'Semistable'
UNSTABLE = 'Unstable'
INCONCLUSIVE = 'Inconclusive'

EXACT = 'exact'
LINEAR = 'linear'
SAMPLED = 'sampled'
MODES = (LINEAR, EXACT, SAMPLED)
MODE_LABELS = {EXACT: 'Exact', LINEAR: 'LinearOnly', SAMPLED: 'Sampled'}

ESCALATE_HINT = "escalate to --mode exact or --mode sampled"
NOT_A_CERTIFICATE = "sampled search found no negative margin; not a certificate"


@dataclass(frozen=True)
class StabilityVerdict:
    """
    Outcome of one decision.

    ``minimum`` is the exact minimum over the normalized cone section in
    exact mode, otherwise the margin of the witness (or of the best sample).
    ``vertex`` is the value vector attaining it.
    """

    decision: str
    mode: str
    scale: int
    q: tuple
    minimum: Fraction = None
    vertex: tuple = None
    witness: PLFunction = None
    hint: str = ''
    samples: int = 0
    cuts: int = 0
    warnings: tuple = ()

    @property
    def certified(self):
        return self.decision != INCONCLUSIVE

    @property
    def mode_label(self):
        return MODE_LABELS[self.mode]


def decide_semistable(polytope, divisors, i, mode=LINEAR, seed=None, samples=None,
                      max_constraints=None, max_cuts=None, max_lp_entries=None):
    """
    Decide T_iP-semistability of ``(P, divisors)`` at scale ``i``.

    Raises TooLarge in exact mode when the dimension or a cap rules out an
    exact answer; the exception's ``partial`` then holds a sampled verdict.
    A non-Delzant polytope is still decided, with a line in ``warnings``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    notes = is_delzant(polytope).warnings
    functional = MarginFunctional.build(polytope, divisors, i)
    q = q_vector(polytope, divisors, i, functional.terms)
    logger.info("decide i=%d mode=%s q_zero=%s", i, mode, not any(q))
    try:
        verdict = _decide(functional, q, mode, seed, samples, max_constraints, max_cuts, max_lp_entries)
    except TooLarge as exc:
        if exc.partial is not None:
            exc.partial = replace(exc.partial, warnings=notes)
        raise
    return replace(verdict, warnings=notes)


def _decide(functional, q, mode, seed, samples, max_constraints, max_cuts, max_lp_entries):
    polytope, i = functional.polytope, functional.scale
    if mode == SAMPLED:
        return _sampled(functional, q, mode, seed, samples)
    if any(q):
        return _linear_witness(functional, q, mode)
    if mode == LINEAR:
        return StabilityVerdict(INCONCLUSIVE, LINEAR, i, q, hint=ESCALATE_HINT)

    limit = get_setting('EXACT_MAX_DIM')
    if polytope.dim > limit:
        raise TooLarge(
            f"exact mode handles dimension <= {limit}, got {polytope.dim}",
            partial=_sampled(functional, q, SAMPLED, seed, samples),
        )
    try:
        cone = concavity_cone(polytope, i, max_constraints)
        return exact_minimum(functional, q, cone, max_cuts, max_lp_entries)
    except TooLarge as exc:
        raise TooLarge(str(exc), partial=_sampled(functional, q, SAMPLED, seed, samples))


def _linear_witness(functional, q, mode):
    """Refute with ``g = <-Q_i, x>``, whose margin is ``-|Q_i|^2``."""
    gradient = tuple(-x for x in q)
    phi = concave_restriction_of_linear(functional.polytope, functional.scale, gradient)
    g = concave_envelope(phi)
    value = functional(g)
    if value != -dot(q, q):
        raise VerificationFailed(f"linear witness margin {value} differs from -|Q_i|^2 = {-dot(q, q)}")
    return StabilityVerdict(UNSTABLE, mode, functional.scale, q, value, g.values, g)


def _random_values(rng, count):
    return [Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for _ in range(count)]


def _sampled(functional, q, mode, seed, samples):
    if seed is None:
        seed = get_setting('DEFAULT_SEED')
    if samples is None:
        samples = get_setting('DEFAULT_SAMPLES')
    P, i = functional.polytope, functional.scale
    points = lattice_points(P, i)
    rng = random.Random(seed)
    draws = [_random_values(rng, len(points)) for _ in range(samples)]

    def evaluate(values):
        g = concave_envelope(LatticeFunction(P, i, points, values))
        return functional(g), g

    results = parallel_map(evaluate, draws)
    best = None
    for value, g in results:
        if best is None or value < best[0]:
            best = (value, g)
    logger.info("sampled i=%d samples=%d best=%s", i, samples, best[0] if best else None)
    if best is not None and best[0] < 0:
        value, g = best
        return StabilityVerdict(UNSTABLE, mode, i, q, value, g.values, g, samples=samples)
    return StabilityVerdict(INCONCLUSIVE, mode, i, q, hint=NOT_A_CERTIFICATE, samples=samples)


def _seed_cuts(functional, points):
    """The envelope of zero, plus the finest subdivision on a line."""
    zero = LatticeFunction(functional.polytope, functional.scale, points, [0] * len(points))
    seeds = [tuple(cell.simplex for cell in concave_envelope(zero).cells)]
    if functional.polytope.dim == 1:
        seeds.append(tuple(zip(points, points[1:])))
    return seeds


def lp_size(variables, inequalities, equalities):
    """Entries of the dense tableau: one slack per inequality, one artificial per row."""
    rows = inequalities + equalities
    return rows * (variables + inequalities + rows)


def exact_minimum(functional, q, cone, max_cuts=None, max_lp_entries=None):
    """
    Minimize the margin over ``{v in cone : sum v = 0, sum v b = 0, |v| <= 1}``.

    Variables are ``w = v + 1 in [0, 2]`` and ``s = s+ - s-``. Each cut
    ``s >= sum_a c_a v_a`` comes from a lattice triangulation; the margin on
    the cone is the maximum of all of them, so the LP value is a lower bound
    that is exact once the LP vertex's own envelope adds no new cut.
    """
    if max_cuts is None:
        max_cuts = get_setting('MAX_CUTS')
    if max_lp_entries is None:
        max_lp_entries = get_setting('MAX_LP_ENTRIES')
    P, i = functional.polytope, functional.scale
    points = cone.points
    N = len(points)
    width = N + 2
    lattice = [tuple(int(x * i) for x in a) for a in points]

    base_ub, base_rhs = [], []
    for c in cone.constraints:
        row = [Fraction(0)] * width
        row[c.target] -= 1
        for k, w in c.terms:
            row[k] += w
        base_ub.append(row)
        base_rhs.append(Fraction(0))
    for k in range(N):
        row = [Fraction(0)] * width
        row[k] = Fraction(1)
        base_ub.append(row)
        base_rhs.append(Fraction(2))
    A_eq = [[Fraction(1)] * N + [Fraction(0), Fraction(0)]]
    b_eq = [Fraction(N)]
    for axis in range(P.dim):
        A_eq.append([Fraction(b[axis]) for b in lattice] + [Fraction(0), Fraction(0)])
        b_eq.append(Fraction(sum(b[axis] for b in lattice)))
    cost = [Fraction(0)] * N + [Fraction(1), Fraction(-1)]

    seen = set()
    cut_rows, cut_rhs = [], []

    def add_cut(simplices):
        key = tuple(sorted(simplices))
        if key in seen:
            return False
        seen.add(key)
        weights = functional.interpolation_weights(key, points)
        cut_rows.append(list(weights) + [Fraction(-1), Fraction(1)])
        cut_rhs.append(sum(weights, Fraction(0)))
        return True

    for simplices in _seed_cuts(functional, points):
        add_cut(simplices)

    for rounds in range(1, max_cuts + 1):
        entries = lp_size(width, len(base_ub) + len(cut_rows), len(A_eq))
        if entries > max_lp_entries:
            raise TooLarge(
                f"cutting-plane LP at i={i} needs {entries} tableau entries "
                f"(cap {max_lp_entries})"
            )
        result = minimize(cost, base_ub + cut_rows, base_rhs + cut_rhs, A_eq, b_eq)
        if result.status != OPTIMAL:
            raise VerificationFailed(f"normalized cone section LP is {result.status}")
        values = tuple(w - 1 for w in result.x[:N])
        g = concave_envelope(LatticeFunction(P, i, points, values))
        if g.values != values:
            raise VerificationFailed("LP vertex lies outside the concavity cone")
        value = functional(g)
        logger.debug("cut round=%d bound=%s margin=%s", rounds, result.value, value)
        if value == result.value:
            logger.info("exact i=%d minimum=%s cuts=%d", i, value, len(cut_rows))
            if value >= 0:
                return StabilityVerdict(SEMISTABLE, EXACT, i, q, value, values, cuts=len(cut_rows))
            return StabilityVerdict(UNSTABLE, EXACT, i, q, value, values, g, cuts=len(cut_rows))
        if value < result.value or not add_cut(cell.simplex for cell in g.cells):
            raise VerificationFailed(f"cutting plane at margin {value} does not separate bound {result.value}")
    raise TooLarge(f"cutting planes did not close within {max_cuts} rounds")
