"""Fraction-free (Bareiss) elimination for exact rational linear systems."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from gmpy2 import mpq, mpz


def _integer_rows(rows, rhs):
    out = []
    for row, b in zip(rows, rhs):
        vals = [Fraction(x) for x in row] + [Fraction(b)]
        den = lcm(*(v.denominator for v in vals))
        out.append([mpz(v.numerator * (den // v.denominator)) for v in vals])
    return out


def bareiss_echelon(M):
    """Row-reduce an integer matrix in place, fraction-free.

    Returns ``(pivots, M)`` where ``pivots`` lists the pivot columns. Entries
    stay integral because every update is divided exactly by the previous pivot.
    """
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    prev = mpz(1)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[c] = mpz(0)
        # rows above the current band are untouched; zero out left of pivot
        prev = p
        pivots.append(c)
        r += 1
    return pivots, M


def solve_exact(rows, rhs):
    """Solve ``rows @ x = rhs`` exactly.

    Returns ``(x, rank, consistent)``. ``x`` is ``None`` when the system is
    inconsistent or its coefficient rank is below the number of unknowns.
    """
    n = len(rows[0]) if rows else 0
    M = _integer_rows(rows, rhs)
    pivots, M = bareiss_echelon(M)
    consistent = n not in pivots
    coef_pivots = [c for c in pivots if c < n]
    rank = len(coef_pivots)
    if not consistent or rank < n:
        return None, rank, consistent
    x = [mpq(0)] * n
    for i in range(n - 1, -1, -1):
        row = M[i]
        s = mpq(row[n])
        for j in range(i + 1, n):
            if row[j]:
                s -= row[j] * x[j]
        x[i] = s / row[i]
    return [Fraction(int(v.numerator), int(v.denominator)) for v in x], rank, True
