"""Small dense linear algebra over the scalar field (exact or bigfloat)."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .errors import ShapeError
from .scalars import inverse, is_exact, magnitude


def _pivot(rows: list, col: int, start: int, exact: bool):
    best = None
    for r in range(start, len(rows)):
        x = rows[r][col]
        if x == 0:
            continue
        if exact:
            return r
        if best is None or magnitude(x) > magnitude(rows[best][col]):
            best = r
    return best


def _all_exact(matrix) -> bool:
    return all(is_exact(x) for row in matrix for x in row)


def scalar_det(matrix: Sequence[Sequence]):
    """Determinant by Gaussian elimination (partial pivoting for bigfloats)."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ShapeError("determinant of a non-square matrix")
    rows = [list(r) for r in matrix]
    exact = _all_exact(rows)
    det = 1
    for c in range(n):
        p = _pivot(rows, c, c, exact)
        if p is None:
            return 0
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = inverse(piv)
        for r in range(c + 1, n):
            factor = rows[r][c] * inv
            if factor != 0:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[c])]
    return det


def rref(matrix: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form and pivot columns (exact arithmetic intended)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    exact = _all_exact(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        p = _pivot(rows, c, r, exact)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = inverse(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and rows[rr][c] != 0:
                f = rows[rr][c]
                rows[rr] = [x - f * y for x, y in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{c : M c = 0}``, one vector per free column."""
    ncols = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    R, pivots = rref(matrix) if matrix else ([], [])
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(R, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def first_nonzero_minor(matrix: Sequence[Sequence]):
    """Lexicographically first choice of rows giving a nonzero maximal minor.

    Returns ``(row_indices, value)`` or ``None`` if every maximal minor vanishes.
    """
    m = len(matrix[0]) if matrix else 0
    for rows in combinations(range(len(matrix)), m):
        d = scalar_det([matrix[r] for r in rows])
        if d != 0:
            return rows, d
    return None
