"""
Brute-force reference values for Q_i in dimensions one and two.

Nothing here goes through the triangulation or chart machinery: lattice
points come from a plain box scan, areas and moments from the shoelace
formula, and edge lattice lengths from gcds. Used to audit the main
computation and the printed examples.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd

from geometry.polytope import vertices_from_halfspaces

from .q import CHOW_UNSTABLE, DivisorSpec, q_polynomial

UNIT_INTERVAL = [((1,), 0), ((-1,), 1)]
SYMMETRIC_INTERVAL = [((1,), 1), ((-1,), 1)]
AUDIT_ANGLES = [
    (Fraction(1), Fraction(1, 2)),
    (Fraction(13, 14), Fraction(13, 14)),
    (Fraction(1, 3), Fraction(3, 4)),
    (Fraction(5, 7), Fraction(1)),
    (Fraction(1, 2), Fraction(1, 5)),
]


def _inside(halfspaces, x):
    return all(sum(n * c for n, c in zip(normal, x)) + offset >= 0 for normal, offset in halfspaces)


def _box_scan(halfspaces, vertices, i):
    points = []
    if len(vertices[0]) == 1:
        low, high = min(v[0] for v in vertices), max(v[0] for v in vertices)
        for b in range(low * i, high * i + 1):
            points.append((Fraction(b, i),))
        return points
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    for bx in range(min(xs) * i, max(xs) * i + 1):
        for by in range(min(ys) * i, max(ys) * i + 1):
            a = (Fraction(bx, i), Fraction(by, i))
            if _inside(halfspaces, a):
                points.append(a)
    return points


def _ccw(vertices):
    pivot = min(vertices)

    def compare(p, q):
        cross = (p[0] - pivot[0]) * (q[1] - pivot[1]) - (p[1] - pivot[1]) * (q[0] - pivot[0])
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return [pivot] + sorted((v for v in vertices if v != pivot), key=cmp_to_key(compare))


def _area_and_moment(vertices):
    if len(vertices[0]) == 1:
        low, high = min(v[0] for v in vertices), max(v[0] for v in vertices)
        return Fraction(high - low), (Fraction(high * high - low * low, 2),)
    ring = _ccw(vertices)
    area, mx, my = Fraction(0), Fraction(0), Fraction(0)
    for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1]):
        cross = x0 * y1 - x1 * y0
        area += Fraction(cross, 2)
        mx += Fraction((x0 + x1) * cross, 6)
        my += Fraction((y0 + y1) * cross, 6)
    return area, (mx, my)


def _edge_measure(halfspace, vertices):
    normal, offset = halfspace
    ends = [v for v in vertices if sum(n * c for n, c in zip(normal, v)) + offset == 0]
    if len(ends[0]) == 1:
        return Fraction(1), (Fraction(ends[0][0]),)
    (x0, y0), (x1, y1) = ends
    length = Fraction(gcd(abs(x1 - x0), abs(y1 - y0)))
    return length, (length * Fraction(x0 + x1, 2), length * Fraction(y0 + y1, 2))


def oracle_q_vector(polytope, divisors, i):
    """Q_i by direct enumeration and elementary integration (n <= 2)."""
    if polytope.dim > 2:
        raise ValueError("the oracle handles dimensions one and two only")
    halfspaces = [(h.normal, h.offset) for h in polytope.halfspaces]
    vertices = list(polytope.vertices)
    points = _box_scan(halfspaces, vertices, i)
    area, moment_ = _area_and_moment(vertices)
    weight = 2 * i * area
    target = [2 * i * m for m in moment_]
    for d in divisors:
        length, edge_moment = _edge_measure(halfspaces[d.facet_index], vertices)
        weight += (1 - d.beta) * length
        target = [t + (1 - d.beta) * m for t, m in zip(target, edge_moment)]
    sums = [sum((a[k] for a in points), Fraction(0)) for k in range(polytope.dim)]
    return tuple(len(points) * t - weight * s for t, s in zip(target, sums))


@dataclass(frozen=True)
class IntervalAudit:
    interval: str
    closed_form: str
    matches_printed: bool
    matches_closed_form: bool


@dataclass(frozen=True)
class IntervalConventionAudit:
    """Which interval reproduces ``Q_i = (1/2)(i+1)(beta_0 - beta_inf)``."""

    angles: tuple
    intervals: tuple

    @property
    def reproducing_interval(self):
        return next((a.interval for a in self.intervals if a.matches_printed), None)

    @property
    def note(self):
        return (
            f"Q_i = (1/2)(i+1)(beta_0 - beta_inf) is reproduced on {self.reproducing_interval}; "
            "[-1,1] gives (2i+1)(beta_0 - beta_inf); both vanish iff beta_0 = beta_inf"
        )


def interval_convention_audit(angles=None):
    """
    Compare the interval obstruction polynomial with the printed closed form
    on both ``[0,1]`` and ``[-1,1]`` for several angle pairs.
    """
    angles = tuple(AUDIT_ANGLES if angles is None else angles)
    cases = [
        ("[0,1]", UNIT_INTERVAL, "(1/2)(i+1)(beta_0 - beta_inf)",
         lambda i, b0, b1: Fraction(1, 2) * (i + 1) * (b0 - b1)),
        ("[-1,1]", SYMMETRIC_INTERVAL, "(2i+1)(beta_0 - beta_inf)",
         lambda i, b0, b1: (2 * i + 1) * (b0 - b1)),
    ]
    printed = cases[0][3]
    audits = []
    for name, system, closed_form, formula in cases:
        polytope = vertices_from_halfspaces(system)
        matches_printed = matches_closed_form = True
        for b0, b1 in angles:
            poly = q_polynomial(polytope, [DivisorSpec(0, b0), DivisorSpec(1, b1)])
            # degree <= 2, so three nodes decide a polynomial identity
            values = [(i, poly(i)[0]) for i in (1, 2, 3)]
            matches_printed &= all(q == printed(i, b0, b1) for i, q in values)
            matches_closed_form &= all(q == formula(i, b0, b1) for i, q in values)
        audits.append(IntervalAudit(name, closed_form, matches_printed, matches_closed_form))
    return IntervalConventionAudit(angles, tuple(audits))


HIRZEBRUCH_PRINTED_Q = (Fraction(21, 10), Fraction(-1, 7))


def hirzebruch_printed_audit(polytope, divisors, imax=10):
    """
    Oracle Q_i on the Hirzebruch data next to the printed ``(21/10 i - 1/7)``.

    Returns rows ``(i, oracle, printed)`` and the oracle verdict label.
    """
    rows = []
    for i in range(1, imax + 1):
        value = oracle_q_vector(polytope, divisors, i)
        printed = HIRZEBRUCH_PRINTED_Q[0] * i + HIRZEBRUCH_PRINTED_Q[1]
        rows.append((i, value, printed))
    nonzero = all(any(value) for _, value, _ in rows)
    return rows, (CHOW_UNSTABLE if nonzero else None)
