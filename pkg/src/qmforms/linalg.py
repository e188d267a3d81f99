"""Dense exact linear algebra over Q or a quadratic extension.

Matrix entries are Fractions or FieldElements (ints are promoted); all
elimination is exact, with no pivoting heuristics beyond "first nonzero".
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["promote", "rref", "nullspace", "solve", "coords_in_span", "charpoly"]


def promote(x):
    return Fraction(x) if isinstance(x, int) else x


def _rows_copy(rows):
    return [[promote(x) for x in row] for row in rows]


def rref(rows):
    """Reduced row echelon form.  Returns (matrix, pivot column list)."""
    m = _rows_copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows, ncols=None):
    """Basis of the right kernel of the matrix, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis

def solve(rows, rhs):
    """Solve A x = b exactly; returns x or None if inconsistent.

    Requires the solution to be unique (raises on free columns).
    """
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        raise ValueError("underdetermined system")
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return x


def coords_in_span(basis_rows, v):
    """Coordinates of v in the row span of basis_rows, or None."""
    if not basis_rows:
        return None if any(promote(x) != 0 for x in v) else []
    cols = [[row[j] for row in basis_rows] for j in range(len(v))]
    sol = solve(cols, list(v))
    return sol


def charpoly(mat):
    """Characteristic polynomial det(X*I - M), coefficients low to high."""
    n = len(mat)
    m = _rows_copy(mat)
    # Faddeev-LeVerrier: M_1 = M, c_k = -tr(M_k)/k, M_{k+1} = M (M_k + c_k I)
    cs = [Fraction(1)]  # leading coefficient
    mk = [row[:] for row in m]
    coeffs = []
    for k in range(1, n + 1):
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            mk[i][i] += ck
        mk = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return list(reversed(coeffs)) + cs
