"""The action of G = Z/p^r on F_p[x_1..x_n]: sigma, Delta, transfers, norms.

sigma(x_i) = x_i + x_{i-1} with x_0 = 0.  In characteristic p,
sigma^(p^t) = 1 + Delta^(p^t) sends x_i to x_i + x_{i-p^t}, so any power of
sigma is a product of at most (p-1) * r such shift substitutions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .context import G, L, GroupContext, SubgroupSpec, trivial_subgroup
from .gfpoly import Polynomial, _layout, graded_basis, unit

__all__ = [
    "GroupContext", "SubgroupSpec", "G", "L", "trivial_subgroup",
    "sigma_apply", "delta_apply", "transfer", "norm", "is_invariant",
    "sigma_component_matrix", "delta_component_matrix", "shift_apply",
]


@lru_cache(maxsize=None)
def _binom_table(p: int, size: int) -> np.ndarray:
    """C(e, k) mod p for 0 <= e, k < size."""
    T = np.zeros((size, size), dtype=np.int64)
    T[:, 0] = 1
    for e in range(1, size):
        T[e, 1:e + 1] = (T[e - 1, 1:e + 1] + T[e - 1, 0:e]) % p
    return T


def _binom_mod(p: int, e: np.ndarray, k: int) -> np.ndarray:
    size = 64
    top = int(e.max()) + 1 if e.size else 1
    while size < top:
        size *= 2
    return _binom_table(p, size)[e, k]


def _combine_tagged(tags, keys, coeffs, p):
    if keys.size == 0:
        return tags, keys, coeffs
    order = np.lexsort((keys, tags))
    t, k, c = tags[order], keys[order], coeffs[order]
    start = np.flatnonzero(np.r_[True, (k[1:] != k[:-1]) | (t[1:] != t[:-1])])
    c = np.add.reduceat(c, start) % p
    t, k = t[start], k[start]
    nz = c != 0
    return t[nz], k[nz], c[nz]


def _substitute(tags, keys, coeffs, i, j, n, p):
    """x_i -> x_i + x_j on a batch of tagged terms."""
    _, mask, shifts = _layout(n)
    e = (keys >> shifts[i - 1]) & mask
    top = int(e.max()) if e.size else 0
    if top == 0:
        return tags, keys, coeffs
    ui, uj = unit(i, n), unit(j, n)
    T, K, C = [tags], [keys], [coeffs]
    for k in range(1, top + 1):
        sel = np.flatnonzero(e >= k)
        b = _binom_mod(p, e[sel], k)
        ok = b != 0
        sel, b = sel[ok], b[ok]
        if sel.size == 0:
            continue
        T.append(tags[sel])
        K.append(keys[sel] + k * (uj - ui))
        C.append(coeffs[sel] * b % p)
    return _combine_tagged(np.concatenate(T), np.concatenate(K), np.concatenate(C), p)


def shift_apply(n, p, tags, keys, coeffs, s):
    """Apply the automorphism x_i -> x_i + x_{i-s} (x_j = 0 for j <= 0).

    Substituting variables in increasing index order never re-substitutes a
    freshly introduced x_{i-s}, so the sequential result is the simultaneous
    one.
    """
    for i in range(s + 1, n + 1):
        tags, keys, coeffs = _substitute(tags, keys, coeffs, i, i - s, n, p)
    return tags, keys, coeffs


def _power_stages(ctx: GroupContext, power: int):
    power %= ctx.order
    t = 0
    while power:
        digit = power % ctx.p
        s = ctx.p ** t
        if s < ctx.n:
            for _ in range(digit):
                yield s
        power //= ctx.p
        t += 1


def _sigma_arrays(ctx, tags, keys, coeffs, power):
    for s in _power_stages(ctx, power):
        tags, keys, coeffs = shift_apply(ctx.n, ctx.p, tags, keys, coeffs, s)
    return tags, keys, coeffs


def sigma_apply(ctx: GroupContext, f: Polynomial, power: int = 1) -> Polynomial:
    """sigma^power (f)."""
    if f.is_zero():
        return f
    _, keys, coeffs = _sigma_arrays(ctx, np.zeros(len(f), np.int64),
                                    f.keys.copy(), f.coeffs.copy(), power)
    return Polynomial(f.ctx, keys, coeffs, _clean=True)


def delta_apply(ctx: GroupContext, f: Polynomial, k: int = 1) -> Polynomial:
    """Delta^k (f) with Delta = sigma - 1, applied k times."""
    if k < 0:
        raise ValueError("k must be non-negative")
    for _ in range(k):
        if f.is_zero():
            break
        f = sigma_apply(ctx, f) - f
    return f


def transfer(ctx: GroupContext, f: Polynomial, sub: SubgroupSpec = L) -> Polynomial:
    """Relative transfer Tr_H^G(f) = sum_{i < p^t} sigma^i(f), H = <sigma^(p^t)>."""
    ctx.check_subgroup(sub)
    total = f
    cur = f
    for _ in range(sub.generator_power(ctx) - 1):
        cur = sigma_apply(ctx, cur)
        total = total + cur
    return total


def orbit(ctx: GroupContext, f: Polynomial, sub: SubgroupSpec = G) -> list:
    """Distinct elements of the orbit of f under <sigma^(p^t)>."""
    step = sub.generator_power(ctx)
    ctx.check_subgroup(sub)
    out = [f]
    cur = sigma_apply(ctx, f, step)
    while cur != f:
        out.append(cur)
        cur = sigma_apply(ctx, cur, step)
    return out


def norm(ctx: GroupContext, f: Polynomial, sub: SubgroupSpec = G) -> Polynomial:
    """Product over the distinct orbit elements (0 for f = 0)."""
    if f.is_zero():
        return f
    result = Polynomial.one(f.ctx)
    for g in orbit(ctx, f, sub):
        result = result * g
    return result


def is_invariant(ctx: GroupContext, f: Polynomial, sub: SubgroupSpec = G) -> bool:
    ctx.check_subgroup(sub)
    return sigma_apply(ctx, f, sub.generator_power(ctx)) == f


def sigma_component_matrix(ctx: GroupContext, d: int, power: int = 1,
                           dtype=np.int64, subset=None) -> np.ndarray:
    """Matrix S of sigma^power on degree d: row a holds sigma^power(m_a).

    With ``subset`` (sorted basis indices of a sigma-stable span of
    monomials) only that block is built.
    """
    basis = graded_basis(ctx.n, d)
    rows = np.arange(basis.dim, dtype=np.int64) if subset is None else np.asarray(subset, np.int64)
    N = len(rows)
    tags, keys, coeffs = _sigma_arrays(ctx, np.arange(N, dtype=np.int64),
                                       basis.keys[rows].copy(), np.ones(N, np.int64), power)
    cols = basis.index(keys)
    if subset is not None:
        pos = np.searchsorted(rows, cols)
        if np.any(pos >= N) or np.any(rows[np.minimum(pos, N - 1)] != cols):
            raise ValueError("subset is not stable under sigma")
        cols = pos
    S = np.zeros((N, N), dtype=dtype)
    S[tags, cols] = coeffs
    return S


def delta_component_matrix(ctx: GroupContext, d: int, power: int = 1,
                           dtype=np.int64) -> np.ndarray:
    """Matrix of sigma^power - 1 on degree d (same row convention)."""
    S = sigma_component_matrix(ctx, d, power, dtype=np.int64)
    S[np.diag_indices_from(S)] -= 1
    S %= ctx.p
    return S.astype(dtype, copy=False)
