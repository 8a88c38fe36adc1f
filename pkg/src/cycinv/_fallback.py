"""Pure numpy versions of the row-reduction kernels in ``_kernels.pyx``."""

import numpy as np


def absorb_rows(rows, E, piv, s, p):
    m, w = rows.shape
    taken = []
    for i in range(m):
        if s >= w:
            break
        v = rows[i] % p
        if s:
            v = (v - v[piv[:s]] @ E[:s]) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, p) % p
        if s:
            col = E[:s, c].copy()
            E[:s] = (E[:s] - np.outer(col, v)) % p
        E[s] = v
        piv[s] = c
        s += 1
        taken.append(i)
    return s, taken


def rref_inplace(A, p):
    m, n = A.shape
    A %= p
    r = 0
    pivots = []
    for c in range(n):
        if r >= m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return pivots
