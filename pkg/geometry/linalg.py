"""
Exact linear algebra on small dense matrices of Fractions.

Matrices are lists of rows. The arithmetic is done by sympy's DomainMatrix over
QQ (or ZZ for lattice bases); results come back as Fractions and ints.
"""
from fractions import Fraction
from math import gcd

from sympy import QQ, ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.matrices import DomainMatrix

from .rationals import sub


def _qq(x):
    x = Fraction(x)
    return (x.numerator, x.denominator)


def _matrix(rows):
    return DomainMatrix.from_list([[_qq(x) for x in row] for row in rows], QQ)


def _fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


def det(rows):
    """Determinant of a square matrix; the empty matrix has determinant 1."""
    rows = list(rows)
    if not rows:
        return Fraction(1)
    return _fraction(_matrix(rows).det())


def rank(rows):
    """Rank of a (possibly non-square) matrix."""
    rows = [list(row) for row in rows]
    if not rows or not rows[0]:
        return 0
    return _matrix(rows).rank()


def solve(rows, rhs):
    """
    Solve the square system ``rows @ x = rhs``.

    Returns the unique solution as a tuple of Fractions, or None when the
    matrix is singular.
    """
    m = _matrix(rows)
    if m.det() == 0:
        return None
    b = DomainMatrix.from_list([[_qq(v)] for v in rhs], QQ)
    return tuple(_fraction(row[0]) for row in m.lu_solve(b).to_list())


def affine_rank(points):
    """Dimension of the affine hull of a non-empty point list."""
    points = list(points)
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([sub(p, base) for p in points[1:]])


def cross(vectors, dim):
    """
    Generalized cross product of ``dim - 1`` vectors in R^dim.

    The result is orthogonal to every input vector and vanishes exactly when
    the inputs are linearly dependent. For ``dim == 1`` it is ``(1,)``.
    """
    vectors = [[Fraction(x) for x in v] for v in vectors]
    result = []
    for k in range(dim):
        minor = [[v[j] for j in range(dim) if j != k] for v in vectors]
        sign = -1 if k % 2 else 1
        result.append(sign * det(minor))
    return tuple(result)


def primitive(vector):
    """
    Scale a nonzero rational vector to the primitive integer vector in the
    same direction. Returns the integer vector and the positive factor used.
    """
    vector = [Fraction(x) for x in vector]
    denominators = 1
    for x in vector:
        denominators = denominators * x.denominator // gcd(denominators, x.denominator)
    ints = [int(x * denominators) for x in vector]
    common = 0
    for x in ints:
        common = gcd(common, abs(x))
    if common == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // common for x in ints), Fraction(denominators, common)


def barycentric(simplex, point):
    """
    Barycentric coordinates of ``point`` with respect to an n-simplex in R^n.

    Returns None when the simplex is degenerate.
    """
    dim = len(point)
    rows = [[Fraction(p[k]) for p in simplex] for k in range(dim)]
    rows.append([Fraction(1)] * len(simplex))
    return solve(rows, list(point) + [1])


def unimodular_completion(normal):
    """
    For a primitive integer row vector ``h`` return ``(U, U_inv)``, integer
    matrices with ``h @ U = e_1`` and ``U @ U_inv = I``.

    The columns 2..n of U form a basis of the lattice ``{x in Z^n : h.x = 0}``,
    read off the Smith decomposition ``S h T = (g, 0, .., 0)``.
    """
    n = len(normal)
    smith, s, t = smith_normal_decomp(Matrix([[int(x) for x in normal]]), domain=ZZ)
    if abs(int(smith[0, 0])) != 1:
        raise ValueError(f"normal {tuple(normal)} is not primitive")
    # S is (+-1); fold its sign and the sign of g into the first column
    sign = int(s[0, 0]) * int(smith[0, 0])
    u = [[int(t[r, c]) * (sign if c == 0 else 1) for c in range(n)] for r in range(n)]
    # Orient the kernel basis: first nonzero entry of each column positive.
    for c in range(1, n):
        lead = next(u[r][c] for r in range(n) if u[r][c] != 0)
        if lead < 0:
            for r in range(n):
                u[r][c] = -u[r][c]
    u_inv = DomainMatrix.from_list(u, ZZ).to_field().inv().to_list()
    return u, [[int(_fraction(x)) for x in row] for row in u_inv]


def adjugate(rows):
    """
    Adjugate and determinant of a square integer matrix, as ints.

    ``adj @ rows == det * I``, so ``adj @ b / det`` solves ``rows @ x = b``
    without leaving the integers until the final division.
    """
    adj, d = DomainMatrix.from_list([[int(x) for x in row] for row in rows], ZZ).adj_det()
    return [[int(x) for x in row] for row in adj.to_list()], int(d)
