"""Exact linear algebra over the integers and rationals.

Everything here works on plain Python ints / Fractions so ranks, determinants
and Hermite forms are exact; dimensions stay small (<= ~10) throughout the
package, so no attempt is made to be fast on big matrices.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "bareiss_det",
    "rational_rank",
    "independent_subset",
    "row_hnf",
    "integer_kernel_basis",
    "solve_rational",
    "is_unimodular",
]


def _as_int_rows(vectors) -> list[list[int]]:
    rows = []
    for v in vectors:
        row = [int(c) for c in v]
        rows.append(row)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("vectors must share a common length")
    return rows


def bareiss_det(matrix) -> int:
    """Determinant of a square integer matrix (fraction-free elimination)."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rank_with_pivot_rows(rows: list[list[int]]) -> tuple[int, list[int]]:
    """Rank over Q plus the indices of one independent row subset."""
    if not rows:
        return 0, []
    work = [list(r) for r in rows]
    index = list(range(len(rows)))
    ncols = len(rows[0])
    rank = 0
    pivots: list[int] = []
    col = 0
    r = 0
    while r < len(work) and col < ncols:
        piv = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        work[r], work[piv] = work[piv], work[r]
        index[r], index[piv] = index[piv], index[r]
        pr = work[r]
        for i in range(r + 1, len(work)):
            if work[i][col] != 0:
                f1, f2 = pr[col], work[i][col]
                work[i] = [f1 * work[i][j] - f2 * pr[j] for j in range(ncols)]
        pivots.append(index[r])
        rank += 1
        r += 1
        col += 1
    return rank, sorted(pivots)


def rational_rank(vectors) -> int:
    """Rank over Q of a family of integer vectors, exactly."""
    rows = _as_int_rows(vectors)
    return _rank_with_pivot_rows(rows)[0]


def independent_subset(vectors) -> list[int]:
    """Indices of a maximal linearly independent subfamily."""
    rows = _as_int_rows(vectors)
    return _rank_with_pivot_rows(rows)[1]


def row_hnf(matrix) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form with transform.

    Returns (H, U) with U unimodular, U @ A == H, H in echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    Zero rows of H sit at the bottom; the matching rows of U span the left
    integer kernel of A.
    """
    a = [list(map(int, row)) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def row_op(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j, applied to both a and u
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        # clear below using gcd steps
        while True:
            nz = [i for i in range(r, nrows) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            if piv != r:
                a[r], a[piv] = a[piv], a[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, nrows):
                if a[i][col] != 0:
                    row_op(i, r, a[i][col] // a[r][col])
                    if a[i][col] != 0:
                        done = False
            if done:
                break
        if r < nrows and a[r][col] != 0:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
                u[r] = [-x for x in u[r]]
            d = a[r][col]
            for i in range(r):
                q = a[i][col] // d
                if q:
                    row_op(i, r, q)
            r += 1
    return a, u


def integer_kernel_basis(matrix) -> list[list[int]]:
    """Basis of {x in Z^n : x @ A == 0} for an integer matrix A (n rows).

    The returned basis generates the full (saturated) kernel lattice.
    """
    h, u = row_hnf(matrix)
    out = [u[i] for i in range(len(h)) if all(c == 0 for c in h[i])]
    return out


def solve_rational(matrix, rhs) -> list[Fraction] | None:
    """Solve A x = b exactly over Q; None if inconsistent.

    A is given by rows; the system may be overdetermined.  For underdetermined
    consistent systems one solution is returned (free variables set to 0).
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    b = [Fraction(x) for x in rhs]
    if len(a) != len(b):
        raise ValueError("matrix/rhs size mismatch")
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    row = 0
    pivot_cols: list[int] = []
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        b[row], b[piv] = b[piv], b[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        b[row] = b[row] * inv
        for i in range(nrows):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
                b[i] = b[i] - f * b[row]
        pivot_cols.append(col)
        row += 1
        if row == nrows:
            break
    for i in range(row, nrows):
        if b[i] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivot_cols):
        x[col] = b[r]
    return x


def is_unimodular(matrix) -> bool:
    return abs(bareiss_det(matrix)) == 1
