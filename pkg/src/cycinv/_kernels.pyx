# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Scalar GF(p) row-reduction kernels.

Both entry points mirror ``cycinv._fallback`` exactly; ``cycinv.linalg``
picks whichever imports.
"""

import numpy as np

ctypedef long long i64


cdef inline i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def absorb_rows(i64[:, ::1] rows, i64[:, ::1] E, i64[::1] piv, Py_ssize_t s, i64 p):
    """Reduce ``rows`` one at a time into the reduced echelon set ``E[:s]``.

    Returns ``(s, taken)`` where ``taken`` lists the rows that became pivots.
    Stops once ``s`` reaches the row width.
    """
    cdef Py_ssize_t m = rows.shape[0], w = rows.shape[1]
    cdef Py_ssize_t i, j, k, c
    cdef i64 f, a
    cdef i64[::1] v = np.empty(w, dtype=np.int64)
    taken = []
    for i in range(m):
        if s >= w:
            break
        for j in range(w):
            v[j] = rows[i, j] % p
            if v[j] < 0:
                v[j] += p
        for k in range(s):
            f = v[piv[k]]
            if f:
                for j in range(w):
                    if E[k, j]:
                        v[j] = (v[j] - f * E[k, j]) % p
                        if v[j] < 0:
                            v[j] += p
        c = -1
        for j in range(w):
            if v[j]:
                c = j
                break
        if c < 0:
            continue
        a = _inv(v[c], p)
        for j in range(c, w):
            v[j] = (v[j] * a) % p
        for k in range(s):
            f = E[k, c]
            if f:
                for j in range(c, w):
                    if v[j]:
                        E[k, j] = (E[k, j] - f * v[j]) % p
                        if E[k, j] < 0:
                            E[k, j] += p
        for j in range(w):
            E[s, j] = v[j]
        piv[s] = c
        s += 1
        taken.append(i)
    return s, taken


def rref_inplace(i64[:, ::1] A, i64 p):
    """Gauss-Jordan on ``A`` in place; returns the pivot column list.

    Afterwards ``A[:rank]`` is the reduced row echelon form and the
    remaining rows are zero.
    """
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef i64 f, a, tmp
    pivots = []
    for i in range(m):
        for j in range(n):
            A[i, j] %= p
            if A[i, j] < 0:
                A[i, j] += p
    for c in range(n):
        if r >= m:
            break
        pr = -1
        for i in range(r, m):
            if A[i, c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[pr, j]
                A[pr, j] = tmp
        a = _inv(A[r, c], p)
        for j in range(c, n):
            A[r, j] = (A[r, j] * a) % p
        for i in range(m):
            if i == r:
                continue
            f = A[i, c]
            if f:
                for j in range(c, n):
                    if A[r, j]:
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
                        if A[i, j] < 0:
                            A[i, j] += p
        pivots.append(c)
        r += 1
    return pivots
