"""Exact rank and determinant helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly

__all__ = ["rational_rank", "poly_det"]


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / p[col]
                m[r] = [a - f * b for a, b in zip(m[r], p)]
        rank += 1
        if rank == len(m):
            break
    return rank


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by Laplace expansion along rows, memoized on column subsets.

    Costs O(2^n n) polynomial products, fine for the small charts used here.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in matrix):
        raise ValueError("matrix is not square")
    memo: dict[int, Poly] = {}

    def minor(row: int, cols: int) -> Poly:
        # determinant of rows row.. and the column set encoded in ``cols``
        if row == n:
            return matrix[0][0] * 0 + 1
        if cols in memo:
            return memo[cols]
        total = None
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = matrix[row][c]
            if entry:
                term = entry * minor(row + 1, cols & ~(1 << c))
                term = term if sign > 0 else -term
                total = term if total is None else total + term
            sign = -sign
        memo[cols] = total if total is not None else matrix[0][0] * 0
        return memo[cols]

    return minor(0, (1 << n) - 1)
