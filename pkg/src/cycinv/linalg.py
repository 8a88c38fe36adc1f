"""Exact dense linear algebra over F_p.

Matrices are numpy integer arrays with entries in [0, p).  Small problems go
straight to the scalar kernel; large ones use a column-panel Gauss-Jordan
whose trailing updates are float BLAS products (exact, since every partial
sum stays below the float mantissa).

Set ``CYCINV_PURE_PYTHON=1`` to force the numpy fallback kernel.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("CYCINV_PURE_PYTHON"):
    from . import _fallback as _kern
    KERNEL = "python"
else:
    try:
        from . import _kernels as _kern
        KERNEL = "compiled"
    except ImportError:  # extension not built
        from . import _fallback as _kern
        KERNEL = "python"

PANEL = 128
# below this many m*n*min(m,n) scalar operations the unblocked kernel wins
_DIRECT_WORK = 4_000_000


def use_kernel(name: str) -> None:
    """Switch the scalar kernel at runtime ("compiled" or "python")."""
    global _kern, KERNEL
    if name == "python":
        from . import _fallback as k
    elif name == "compiled":
        from . import _kernels as k
    else:
        raise ValueError(name)
    _kern, KERNEL = k, name


def _float_dtype(p: int, width: int):
    bound = width * (p - 1) ** 2 + p
    # _fmod needs |x| well inside the mantissa, hence 2^22 rather than 2^24
    if bound < 2 ** 22:
        return np.float32
    if bound < 2 ** 53:
        return np.float64
    raise OverflowError(f"prime {p} too large for float-exact elimination")


def _fmod(Z: np.ndarray, p: int) -> np.ndarray:
    """In-place reduction of an integer-valued float array into [0, p).

    Much faster than ``np.remainder``; offsetting by 1/2 keeps the quotient
    away from integers so rounding cannot push floor() the wrong way.
    """
    q = Z + 0.5
    q *= 1.0 / p
    np.floor(q, out=q)
    q *= p
    Z -= q
    return Z


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for integer matrices, computed in exact float chunks."""
    k = a.shape[-1]
    step = max(1, min(k, (2 ** 52) // max(1, (p - 1) ** 2)))
    ft = _float_dtype(p, min(k, step))
    if ft is np.float32 and k > step:
        ft = np.float64
    out = None
    for s in range(0, k, step):
        part = a[..., s:s + step].astype(ft) @ b[s:s + step].astype(ft)
        part = _fmod(part, p)
        out = part if out is None else _fmod(out + part, p)
    if out is None:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    return out.astype(np.int64)


def _inverse_small(T: np.ndarray, p: int) -> np.ndarray:
    s = T.shape[0]
    aug = np.zeros((s, 2 * s), dtype=np.int64)
    aug[:, :s] = T
    aug[:, s:] = np.eye(s, dtype=np.int64)
    piv = _kern.rref_inplace(aug, p)
    if len(piv) < s or piv[s - 1] != s - 1:
        raise ZeroDivisionError("singular pivot block")
    return aug[:, s:].copy()


def _panel_pivots(panel: np.ndarray, p: int):
    """Row indices and columns of an RREF pivot set of ``panel``'s row space."""
    m, w = panel.shape
    E = np.zeros((w, w), dtype=np.int64)
    piv = np.zeros(w, dtype=np.int64)
    s = 0
    taken: list[int] = []
    idx = np.arange(m)
    cur = np.ascontiguousarray(panel, dtype=np.int64)
    while cur.shape[0] and s < w:
        chunk = min(cur.shape[0], max(8, 2 * (w - s)))
        s, got = _kern.absorb_rows(np.ascontiguousarray(cur[:chunk]), E, piv, s, p)
        taken.extend(int(idx[g]) for g in got)
        cur, idx = cur[chunk:], idx[chunk:]
        if s >= w or not cur.shape[0]:
            break
        res = cur - (cur[:, piv[:s]].astype(np.float64) @ E[:s].astype(np.float64))
        res = _fmod(res, p).astype(np.int64)
        keep = np.flatnonzero(res.any(axis=1))
        cur, idx = np.ascontiguousarray(res[keep]), idx[keep]
    return np.asarray(taken, dtype=np.int64), piv[:s].copy()


def _rref_blocked(A: np.ndarray, p: int, reduced: bool):
    m, n = A.shape
    b = PANEL
    ft = _float_dtype(p, b)
    W = np.remainder(np.asarray(A), p).astype(ft)
    active = np.arange(m)
    prow: list[np.ndarray] = []
    pcol: list[np.ndarray] = []
    for j0 in range(0, n, b):
        if active.size == 0:
            break
        j1 = min(n, j0 + b)
        panel = W[active, j0:j1].astype(np.int64)
        sel, cols = _panel_pivots(panel, p)
        if sel.size == 0:
            continue
        S = active[sel]
        C = j0 + cols
        Tinv = _inverse_small(W[np.ix_(S, C)].astype(np.int64), p)
        rows_s = _fmod(Tinv.astype(ft) @ W[S, j0:], p)
        W[S, j0:] = rows_s
        keep = np.ones(active.size, dtype=bool)
        keep[sel] = False
        rest = active[keep]
        upd = rest
        if reduced and prow:
            upd = np.concatenate([rest] + prow)
        if upd.size:
            X = W[np.ix_(upd, C)]
            block = W[upd, j0:]
            block -= X @ rows_s
            _fmod(block, p)
            W[upd, j0:] = block
            if rest.size:
                alive = block[: rest.size, j1 - j0:].any(axis=1)
                rest = rest[alive]
        prow.append(S)
        pcol.append(C)
        active = rest
    if not prow:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    rows = np.concatenate(prow)
    cols = np.concatenate(pcol)
    order = np.argsort(cols, kind="stable")
    return W[rows[order]].astype(np.int64), cols[order]


def rref(A, p: int, reduced: bool = True):
    """Row echelon form of ``A`` over F_p.

    Returns ``(R, pivots)``: ``R`` has ``rank`` rows with the identity in the
    pivot columns.  With ``reduced=False`` entries above pivots outside the
    current panel may be left nonzero (enough for rank).
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    m, n = A.shape
    if m == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    if m * n * min(m, n) <= _DIRECT_WORK or min(m, n) <= 16:
        W = np.array(A, dtype=np.int64, order="C") % p
        piv = _kern.rref_inplace(W, p)
        return W[: len(piv)].copy(), np.asarray(piv, dtype=np.int64)
    return _rref_blocked(A, p, reduced)


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.shape[0] > A.shape[1]:
        A = A.T
    return int(rref(A, p, reduced=False)[1].size)


def nullspace(A, p: int) -> np.ndarray:
    """Basis (as rows, in RREF) of {x : A x = 0}."""
    A = np.asarray(A)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = np.setdiff1d(np.arange(n), piv)
    Z = np.zeros((free.size, n), dtype=np.int64)
    if free.size:
        Z[np.arange(free.size), free] = 1
        if piv.size:
            Z[:, piv] = (-R[:, free].T) % p
    return Z


def left_nullspace(A, p: int) -> np.ndarray:
    """Basis of {y : y A = 0}."""
    return nullspace(np.asarray(A).T, p)


class RowSpace:
    """Row space held as an RREF basis; supports batched membership tests."""

    def __init__(self, R: np.ndarray, pivots: np.ndarray, p: int, ncols: int):
        self.R = R
        self.pivots = pivots
        self.p = p
        self.ncols = ncols

    @classmethod
    def span(cls, vectors, p: int, ncols: int | None = None) -> "RowSpace":
        V = np.asarray(vectors, dtype=np.int64)
        if ncols is None:
            ncols = V.shape[1]
        V = V.reshape(-1, ncols)
        R, piv = rref(V, p)
        return cls(R, piv, p, ncols)

    @property
    def dim(self) -> int:
        return int(self.pivots.size)

    def residual(self, V) -> np.ndarray:
        V = np.asarray(V, dtype=np.int64) % self.p
        if self.dim == 0:
            return V
        return (V - mod_matmul(V[..., self.pivots], self.R, self.p)) % self.p

    def contains(self, V) -> np.ndarray:
        """Boolean per row of ``V`` (or a scalar for a single vector)."""
        res = self.residual(V)
        return ~res.any(axis=-1)

    def coordinates(self, V) -> np.ndarray:
        """Coordinates of rows of V (assumed in the span) w.r.t. ``R``."""
        return np.asarray(V, dtype=np.int64)[..., self.pivots] % self.p


def intersect_in_coords(K: np.ndarray, W: RowSpace) -> np.ndarray:
    """Coordinate vectors y (rows, RREF) with y @ K inside W."""
    res = W.residual(K)
    if res.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return left_nullspace(res, W.p)
