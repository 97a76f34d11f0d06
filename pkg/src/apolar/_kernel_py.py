"""Pure Python integer Gauss-Jordan elimination.

Reference implementation of the elimination kernel; ``_ckernel.pyx`` must
return identical results.
"""
from __future__ import annotations

from math import gcd


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def echelon(rows, ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced echelon form of an integer matrix over the rationals.

    Rows are kept primitive (content 1) instead of normalised to a leading
    one, so all arithmetic stays in the integers. Pivots are chosen as the
    first nonzero entry in column order, which makes the result canonical
    up to the positive scaling of each row.

    Returns ``(rows, pivots)``: one row per pivot, each with a positive entry
    in its pivot column and zeros in every other pivot column.
    """
    work = [_primitive(list(r)) for r in rows if any(r)]
    n = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        p = r
        while p < n and not work[p][c]:
            p += 1
        if p == n:
            continue
        if p != r:
            work[r], work[p] = work[p], work[r]
        prow = work[r]
        a = prow[c]
        for i in range(n):
            if i == r:
                continue
            row = work[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            ag, bg = a // g, b // g
            work[i] = _primitive([ag * x - bg * y for x, y in zip(row, prow)])
        pivots.append(c)
        r += 1
    out = work[:r]
    for k, c in enumerate(pivots):
        if out[k][c] < 0:
            out[k] = [-x for x in out[k]]
    return out, pivots
