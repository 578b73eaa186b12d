"""
Exact linear programming over the rationals.

Two-phase tableau simplex with Bland's rule, so it terminates on degenerate
problems. Problems are given as

    minimize    c . x
    subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple = ()
    value: Fraction = None


class SimplexTableau:
    """Dense tableau in canonical form with respect to ``basis``."""

    def __init__(self, rows, rhs, basis, cost):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0
        self.set_cost(cost)

    def set_cost(self, cost):
        """Install an objective and compute its reduced costs."""
        self.cost = cost
        reduced = list(cost)
        value = Fraction(0)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[r]
                for j, x in enumerate(row):
                    if x:
                        reduced[j] -= cb * x
                value += cb * self.rhs[r]
        self.reduced = reduced
        self.value = value

    def pivot(self, r, c):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row[:] = [x / p for x in row]
            self.rhs[r] /= p
        support = [(j, x) for j, x in enumerate(row) if x]
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            f = other[c]
            if f:
                for j, x in support:
                    other[j] -= f * x
                self.rhs[k] -= f * self.rhs[r]
        f = self.reduced[c]
        if f:
            for j, x in support:
                self.reduced[j] -= f * x
            self.value += f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def bland_step(self, allowed):
        """One pivot by Bland's rule; returns None, OPTIMAL or UNBOUNDED."""
        entering = next((j for j in range(allowed) if self.reduced[j] < 0), None)
        if entering is None:
            return OPTIMAL
        best = None
        for r, row in enumerate(self.rows):
            a = row[entering]
            if a > 0:
                key = (self.rhs[r] / a, self.basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            return UNBOUNDED
        self.pivot(best[1], entering)
        return None

    def run(self, allowed):
        while True:
            status = self.bland_step(allowed)
            if status is not None:
                return status


def minimize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Solve the LP exactly. Returns an LPResult."""
    n = len(c)
    ub = [([Fraction(x) for x in a], Fraction(b)) for a, b in zip(A_ub, b_ub)]
    eq = [([Fraction(x) for x in a], Fraction(b)) for a, b in zip(A_eq, b_eq)]
    slack_count = len(ub)
    rows, rhs, needs_artificial = [], [], []
    for k, (a, b) in enumerate(ub):
        slack = [Fraction(0)] * slack_count
        slack[k] = Fraction(1)
        if b < 0:
            rows.append([-x for x in a] + [-s for s in slack])
            rhs.append(-b)
            needs_artificial.append(True)
        else:
            rows.append(a + slack)
            rhs.append(b)
            needs_artificial.append(False)
    for a, b in eq:
        sign = -1 if b < 0 else 1
        rows.append([sign * x for x in a] + [Fraction(0)] * slack_count)
        rhs.append(sign * b)
        needs_artificial.append(True)

    width = n + slack_count
    artificial_rows = [r for r, flag in enumerate(needs_artificial) if flag]
    total = width + len(artificial_rows)
    basis = []
    for r, row in enumerate(rows):
        row.extend([Fraction(0)] * len(artificial_rows))
        if needs_artificial[r]:
            col = width + artificial_rows.index(r)
            row[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(n + r)

    phase_one = [Fraction(0)] * width + [Fraction(1)] * len(artificial_rows)
    tableau = SimplexTableau(rows, rhs, basis, phase_one)
    if artificial_rows:
        tableau.run(total)
        if tableau.value > 0:
            logger.debug("lp infeasible phase_one=%s", tableau.value)
            return LPResult(INFEASIBLE)
        _drive_out_artificials(tableau, width)

    for row in tableau.rows:
        del row[width:]
    tableau.set_cost([Fraction(x) for x in c] + [Fraction(0)] * slack_count)
    status = tableau.run(width)
    logger.debug("lp status=%s pivots=%d rows=%d cols=%d", status, tableau.pivots, len(rows), width)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * width
    for r, b in enumerate(tableau.basis):
        x[b] = tableau.rhs[r]
    return LPResult(OPTIMAL, tuple(x[:n]), tableau.value)


def _drive_out_artificials(tableau, width):
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] < width:
            r += 1
            continue
        row = tableau.rows[r]
        col = next((j for j in range(width) if row[j] != 0), None)
        if col is None:
            del tableau.rows[r]
            del tableau.rhs[r]
            del tableau.basis[r]
            continue
        tableau.pivot(r, col)
        r += 1
