# cython: language_level=3, cdivision=True
"""Compiled integer Gauss-Jordan elimination.

Same contract as ``apolar._kernel_py.echelon``. Runs on 64-bit machine
integers with overflow detection and restarts on Python integers the
moment any intermediate value leaves the safe range.
"""
from libc.stdlib cimport malloc, free
from math import gcd

cdef extern from *:
    """
    static inline int apolar_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int apolar_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    /* |entries| stay below 2**62 so negation and gcd never overflow */
    #define APOLAR_SAFE 4611686018427387904LL
    """
    const long long APOLAR_SAFE
    bint apolar_mul_ovf(long long a, long long b, long long *r) nogil
    bint apolar_sub_ovf(long long a, long long b, long long *r) nogil


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef Py_ssize_t _echelon_ll(long long *M, Py_ssize_t n, Py_ssize_t ncols,
                            Py_ssize_t *piv) noexcept nogil:
    """In-place elimination; returns the rank, or -1 on overflow."""
    cdef Py_ssize_t r = 0, c, p, i, k
    cdef long long a, b, g, ag, bg, x, y, t, rg
    cdef long long *prow
    cdef long long *row
    for c in range(ncols):
        if r == n:
            break
        p = r
        while p < n and M[p * ncols + c] == 0:
            p += 1
        if p == n:
            continue
        if p != r:
            for k in range(ncols):
                t = M[r * ncols + k]
                M[r * ncols + k] = M[p * ncols + k]
                M[p * ncols + k] = t
        prow = M + r * ncols
        a = prow[c]
        for i in range(n):
            if i == r:
                continue
            row = M + i * ncols
            b = row[c]
            if b == 0:
                continue
            g = _gcd(a, b)
            ag = a // g
            bg = b // g
            rg = 0
            for k in range(ncols):
                if apolar_mul_ovf(ag, row[k], &x):
                    return -1
                if apolar_mul_ovf(bg, prow[k], &y):
                    return -1
                if apolar_sub_ovf(x, y, &t):
                    return -1
                if t >= APOLAR_SAFE or t <= -APOLAR_SAFE:
                    return -1
                row[k] = t
                if t != 0 and rg != 1:
                    rg = _gcd(rg, t)
            if rg > 1:
                for k in range(ncols):
                    row[k] = row[k] // rg
        piv[r] = c
        r += 1
    return r


cdef list _primitive(list row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


cdef object _echelon_obj(list work, Py_ssize_t ncols):
    cdef Py_ssize_t n = len(work), r = 0, c, p, i
    cdef list prow, row, new
    pivots = []
    for c in range(ncols):
        if r == n:
            break
        p = r
        while p < n and not (<list>work[p])[c]:
            p += 1
        if p == n:
            continue
        if p != r:
            work[r], work[p] = work[p], work[r]
        prow = <list>work[r]
        a = prow[c]
        for i in range(n):
            if i == r:
                continue
            row = <list>work[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            ag = a // g
            bg = b // g
            new = [ag * x - bg * y for x, y in zip(row, prow)]
            g = 0
            for x in new:
                if x:
                    g = gcd(g, x)
                    if g == 1:
                        break
            if g > 1:
                new = [x // g for x in new]
            work[i] = new
        pivots.append(c)
        r += 1
    return work[:r], pivots


def echelon(rows, Py_ssize_t ncols):
    """Reduced echelon form of an integer matrix; see ``_kernel_py.echelon``."""
    cdef list work = [_primitive(list(row)) for row in rows if any(row)]
    cdef Py_ssize_t n = len(work), i, k, rank
    cdef long long *M
    cdef Py_ssize_t *piv
    cdef bint fits = True
    cdef list out
    for row in work:
        for x in row:
            if x >= APOLAR_SAFE or x <= -APOLAR_SAFE:
                fits = False
                break
        if not fits:
            break
    rank = -1
    if fits and n and ncols:
        M = <long long *> malloc(n * ncols * sizeof(long long))
        piv = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
        if M == NULL or piv == NULL:
            free(M)
            free(piv)
            raise MemoryError()
        try:
            for i in range(n):
                row = work[i]
                for k in range(ncols):
                    M[i * ncols + k] = row[k]
            with nogil:
                rank = _echelon_ll(M, n, ncols, piv)
            if rank >= 0:
                out = [[M[i * ncols + k] for k in range(ncols)] for i in range(rank)]
                pivots = [piv[i] for i in range(rank)]
        finally:
            free(M)
            free(piv)
    if rank < 0:
        out, pivots = _echelon_obj(work, ncols)
    for i in range(len(pivots)):
        if out[i][pivots[i]] < 0:
            out[i] = [-x for x in out[i]]
    return out, pivots
