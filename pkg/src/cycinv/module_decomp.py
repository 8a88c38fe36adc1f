"""Decomposing F[V_n]_d (and other sigma-modules) into Jordan blocks V_m.

Two independent routes:

* the length filtration: images U_j = Delta^j(W) intersected with W^G give
  F_{j+1}; a basis of W^G adapted to that flag tags each socle vector with
  the size of the block it sits in (``compatible_basis``/``decompose_graded``);
* the rank oracle: mult(V_m) = r_{m-1} - 2 r_m + r_{m+1}, r_k = rank (S-1)^k,
  applied to sigma matrices built directly from a Jordan block
  (``decompose_matrix``).

Vectors are rows and Delta acts on the right: v -> v @ D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .context import G, GroupContext, SubgroupSpec
from .cyclic_action import delta_component_matrix, sigma_component_matrix
from .gfpoly import Polynomial, graded_basis, pack, product_index_map


# --- results --------------------------------------------------------------


class ModuleDecomposition:
    """Multiset of indecomposable summands, m -> multiplicity."""

    __slots__ = ("mult",)

    def __init__(self, mult=None):
        clean = {}
        for m, k in dict(mult or {}).items():
            m, k = int(m), int(k)
            if k < 0:
                raise ValueError(f"negative multiplicity for V_{m}")
            if m < 1:
                raise ValueError(f"block size {m} < 1")
            if k:
                clean[m] = k
        self.mult = dict(sorted(clean.items()))

    @classmethod
    def from_lengths(cls, lengths):
        out: dict = {}
        for t in lengths:
            out[int(t)] = out.get(int(t), 0) + 1
        return cls(out)

    @property
    def dimension(self) -> int:
        return sum(m * k for m, k in self.mult.items())

    @property
    def summands(self) -> int:
        return sum(self.mult.values())

    def __getitem__(self, m):
        return self.mult.get(m, 0)

    def items(self):
        return self.mult.items()

    def __eq__(self, other):
        if isinstance(other, ModuleDecomposition):
            return self.mult == other.mult
        if isinstance(other, dict):
            return self.mult == ModuleDecomposition(other).mult
        return NotImplemented

    def __add__(self, other):
        out = dict(self.mult)
        for m, k in other.items():
            out[m] = out.get(m, 0) + k
        return ModuleDecomposition(out)

    def to_text(self) -> str:
        return ",".join(f"{m}:{k}" for m, k in self.mult.items())

    def to_pairs(self) -> list:
        return [[m, k] for m, k in self.mult.items()]

    def __repr__(self):
        inner = " + ".join(f"{k}V{m}" if k > 1 else f"V{m}" for m, k in self.mult.items())
        return f"ModuleDecomposition({inner or '0'})"


@dataclass
class FilteredBasis:
    """Basis of a fixed space, each element tagged with its length."""

    degree: int
    elements: list = field(default_factory=list)  # (Polynomial, length)

    @property
    def lengths(self) -> list:
        return [t for _, t in self.elements]

    def decomposition(self) -> ModuleDecomposition:
        return ModuleDecomposition.from_lengths(self.lengths)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# --- sigma matrices -------------------------------------------------------


class SigmaMatrix:
    """A matrix over F_p representing a generator acting (on rows)."""

    def __init__(self, entries, p: int):
        A = np.asarray(entries, dtype=np.int64) % p
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("sigma matrix must be square")
        self.entries = A
        self.p = p

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, k: int, p: int):
        return cls(np.eye(k, dtype=np.int64), p)

    @classmethod
    def jordan_block(cls, m: int, p: int):
        """Row i is the image of e_i: e_i -> e_i + e_{i-1}."""
        J = np.eye(m, dtype=np.int64)
        if m > 1:
            J[np.arange(1, m), np.arange(m - 1)] = 1
        return cls(J, p)

    def tensor(self, other: "SigmaMatrix") -> "SigmaMatrix":
        return SigmaMatrix(np.kron(self.entries, other.entries), self.p)

    def exterior_power(self, i: int) -> "SigmaMatrix":
        """Action on Lambda^i with basis the sorted index tuples.

        The coefficient of e_T in the image of e_S is the minor det J[S, T].
        """
        m = self.dim
        if not 0 <= i <= m:
            raise ValueError(f"exterior power {i} of a {m}-dimensional module")
        subsets = list(combinations(range(m), i))
        k = len(subsets)
        A = np.zeros((k, k), dtype=np.int64)
        J = self.entries
        for a, S in enumerate(subsets):
            rows = J[list(S)]
            for b, T in enumerate(subsets):
                A[a, b] = _det_mod(rows[:, list(T)], self.p)
        return SigmaMatrix(A, self.p)


def _det_mod(A: np.ndarray, p: int) -> int:
    A = A.copy() % p
    n = A.shape[0]
    det = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return 0
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
            det = -det
        det = det * int(A[c, c]) % p
        inv = pow(int(A[c, c]), -1, p)
        for r2 in range(c + 1, n):
            if A[r2, c]:
                A[r2] = (A[r2] - A[r2, c] * inv * A[c]) % p
    return det % p


def symmetric_power_matrices(J: SigmaMatrix, d_max: int):
    """Yield (d, matrix of the induced action on S^d) for d = 0..d_max.

    Built by the recursion sigma(x_j m') = sigma(x_j) sigma(m'), with x_j the
    lowest-index variable of the monomial; only the Jordan matrix is used.
    """
    n, p = J.dim, J.p
    prev = np.ones((1, 1), dtype=np.int64)
    yield 0, prev
    for d in range(1, d_max + 1):
        cur_basis = graded_basis(n, d)
        prev_basis = graded_basis(n, d - 1)
        ex = cur_basis.exps
        j = np.argmax(ex > 0, axis=1)
        ex_prev = ex.copy()
        ex_prev[np.arange(ex.shape[0]), j] -= 1
        prev_idx = prev_basis.index(pack(ex_prev, n))
        # row of x_{a+1} in the degree-1 basis (which lists x_n first)
        shift = product_index_map(n, 1, d - 1)[graded_basis(n, 1).index(
            pack(np.eye(n, dtype=np.int64), n))]
        out = np.zeros((cur_basis.dim, cur_basis.dim), dtype=np.int64)
        src = prev[prev_idx]
        for a in range(n):
            coef = J.entries[j, a]
            rows = np.flatnonzero(coef)
            if rows.size:
                out[np.ix_(rows, shift[a])] += coef[rows, None] * src[rows]
        out %= p
        prev = out
        yield d, out


# --- rank oracle ----------------------------------------------------------


class _Level:
    """One step of the image chain: U_{j} inside U_{j-1} in RREF coordinates.

    The RREF basis is the identity on ``piv`` plus the block ``Z`` on the
    remaining columns ``rest`` of the parent coordinates.
    """

    __slots__ = ("piv", "rest", "Z", "size")

    def __init__(self, R, piv, size):
        self.size = size
        self.piv = np.asarray(piv, dtype=np.int64)
        self.rest = np.setdiff1d(np.arange(size), self.piv)
        self.Z = R[:, self.rest].astype(np.int8 if R.size and R.max() < 128 else np.int64)

    @property
    def rank(self):
        return int(self.piv.size)

    def lift(self, Y, p):
        """Parent coordinates of vectors given in this level's coordinates."""
        out = np.zeros((Y.shape[0], self.size), dtype=np.int64)
        out[:, self.piv] = Y
        if self.rest.size and Y.shape[0]:
            out[:, self.rest] = linalg.mod_matmul(Y, self.Z.astype(np.int64), p)
        return out

    def project(self, X, p):
        """(coords, residual) of parent-coordinate vectors X."""
        Y = X[:, self.piv]
        return Y, (X - self.lift(Y, p)) % p


def _restrict(Y, R, piv, p):
    """Matrix of the operator Y restricted to the row space of R (RREF)."""
    rest = np.setdiff1d(np.arange(Y.shape[0]), piv)
    top = Y[np.ix_(piv, piv)]
    if rest.size:
        top = (top + linalg.mod_matmul(R[:, rest], Y[np.ix_(rest, piv)], p)) % p
    return top


def image_chain(X, p: int, max_steps: int | None = None):
    """Levels for U_1 = Im X, U_2 = Im X^2, ... until zero.

    Each step restricts X to the current image and row-reduces only that
    smaller matrix.  Raises if X is not nilpotent within ``max_steps``.
    """
    levels = []
    Y = np.asarray(X, dtype=np.int64) % p
    size = Y.shape[0]
    while size:
        R, piv = linalg.rref(Y, p)
        lev = _Level(R, piv, size)
        if max_steps is not None and len(levels) >= max_steps and lev.rank:
            raise ValueError(f"operator not nilpotent of index <= {max_steps}")
        levels.append(lev)
        if lev.rank == size:
            raise ValueError("operator is not nilpotent")
        if lev.rank == 0:
            break
        Y = _restrict(Y, R, piv, p)
        size = lev.rank
    return levels


def rank_sequence(X, p: int, max_steps: int | None = None) -> list:
    """[r_0, r_1, ...] with r_k = rank X^k, ending at the first zero."""
    N = np.asarray(X).shape[0]
    return [N] + [lev.rank for lev in image_chain(X, p, max_steps)]


def multiplicities_from_ranks(ranks) -> dict:
    r = list(ranks)
    get = lambda k: r[k] if k < len(r) else 0  # noqa: E731
    out = {}
    for m in range(1, len(r)):
        k = get(m - 1) - 2 * get(m) + get(m + 1)
        if k < 0:
            raise ArithmeticError("rank sequence is not convex")
        if k:
            out[m] = k
    return out


def decompose_matrix(m: SigmaMatrix, ctx: GroupContext | None = None) -> ModuleDecomposition:
    """Jordan type of a unipotent matrix of order dividing p^r from ranks."""
    p = m.p if ctx is None else ctx.p
    if m.dim == 0:
        return ModuleDecomposition()
    X = m.entries.copy()
    X[np.diag_indices_from(X)] -= 1
    X %= p
    limit = ctx.order if ctx is not None else None
    return ModuleDecomposition(multiplicities_from_ranks(rank_sequence(X, p, limit)))


def tensor_decompose(a: int, b: int, ctx: GroupContext) -> ModuleDecomposition:
    for m in (a, b):
        if not 1 <= m <= ctx.order:
            raise ValueError(f"V_{m} is not a module for Z/{ctx.order}")
    J1 = SigmaMatrix.jordan_block(a, ctx.p)
    J2 = SigmaMatrix.jordan_block(b, ctx.p)
    return decompose_matrix(J1.tensor(J2), ctx)


def exterior_decompose(m: int, i: int, ctx: GroupContext) -> ModuleDecomposition:
    if not 1 <= m <= ctx.order:
        raise ValueError(f"V_{m} is not a module for Z/{ctx.order}")
    return decompose_matrix(SigmaMatrix.jordan_block(m, ctx.p).exterior_power(i), ctx)


def graded_sigma_matrices(ctx: GroupContext, d_max: int):
    """Oracle-side sigma matrices of F[V_n]_d for d = 0..d_max."""
    J = SigmaMatrix.jordan_block(ctx.n, ctx.p)
    for d, S in symmetric_power_matrices(J, d_max):
        yield d, SigmaMatrix(S, ctx.p)


def decompose_graded_oracle(ctx: GroupContext, degrees) -> dict:
    degrees = sorted(set(degrees))
    out = {}
    if not degrees:
        return out
    wanted = set(degrees)
    for d, S in graded_sigma_matrices(ctx, degrees[-1]):
        if d in wanted:
            out[d] = decompose_matrix(S, ctx)
    return out


# --- length filtration ----------------------------------------------------


class Filtration:
    """Image chain of Delta on F[V_n]_d together with the socle flag.

    ``socle[j]`` holds (ambient coordinates) a basis of
    F_{j+1} = Delta^j(W) cap W^G, so ``len(socle[j])`` is dim F_{j+1}.
    """

    def __init__(self, ctx: GroupContext, d: int, D=None):
        self.ctx = ctx
        self.degree = d
        self.basis = graded_basis(ctx.n, d)
        p = ctx.p
        if D is None:
            D = delta_component_matrix(ctx, d)
        self.levels = image_chain(D, p, ctx.order)
        K = linalg.rref(linalg.left_nullspace(D, p), p)[0]
        socle = [K]
        S, Y = K, K
        for lev in self.levels:
            if lev.rank == 0:
                break
            Yc, res = lev.project(Y, p)
            if res.any():
                a = linalg.left_nullspace(res, p)
                if a.shape[0] == 0:
                    break
                S = linalg.mod_matmul(a, S, p)
                Y = linalg.mod_matmul(a, Yc, p)
            else:
                Y = Yc
            socle.append(S)
        self.socle = socle

    @property
    def ranks(self) -> list:
        return [self.basis.dim] + [lev.rank for lev in self.levels]

    @property
    def nbytes(self) -> int:
        return (sum(lev.Z.nbytes + lev.piv.nbytes + lev.rest.nbytes for lev in self.levels)
                + sum(s.nbytes for s in self.socle))

    def socle_dims(self) -> list:
        return [s.shape[0] for s in self.socle]

    def lengths_of(self, V) -> np.ndarray:
        """Largest t with each row of V in Delta^(t-1)(W); V need not be invariant."""
        p = self.ctx.p
        Y = np.asarray(V, dtype=np.int64).reshape(-1, self.basis.dim) % p
        out = np.ones(Y.shape[0], dtype=np.int64)
        idx = np.arange(Y.shape[0])
        for lev in self.levels:
            if idx.size == 0 or lev.rank == 0:
                break
            Yc, res = lev.project(Y, p)
            ok = ~res.any(axis=1)
            idx, Y = idx[ok], Yc[ok]
            out[idx] += 1
        return out

    def compatible_rows(self):
        """(rows, lengths): a basis of W^G adapted to the socle flag."""
        p = self.ctx.p
        N = self.basis.dim
        chosen = np.zeros((0, N), dtype=np.int64)
        lengths: list = []
        span = linalg.RowSpace(chosen, np.zeros(0, np.int64), p, N)
        for j in range(len(self.socle) - 1, -1, -1):
            S = self.socle[j]
            if S.shape[0] == len(lengths):
                continue
            res = span.residual(S)
            piv = linalg.rref(res.T, p)[1]  # greedy independent rows of res
            new = S[piv]
            chosen = np.vstack([chosen, new])
            lengths.extend([j + 1] * new.shape[0])
            span = linalg.RowSpace.span(chosen, p, N)
        return chosen, lengths


_FILTRATIONS: dict = {}
_FILTRATION_CACHE = 48
_FILTRATION_BYTES = 1 << 30


def filtration(ctx: GroupContext, d: int) -> Filtration:
    """Cached :class:`Filtration`; least recently used entries are dropped
    past 48 entries or 1 GiB."""
    key = (ctx.p, ctx.r, ctx.n, d)
    f = _FILTRATIONS.pop(key, None)
    if f is None:
        f = Filtration(ctx, d)
    _FILTRATIONS[key] = f
    total = sum(v.nbytes for v in _FILTRATIONS.values())
    while len(_FILTRATIONS) > 1 and (len(_FILTRATIONS) > _FILTRATION_CACHE
                                     or total > _FILTRATION_BYTES):
        total -= _FILTRATIONS.pop(next(iter(_FILTRATIONS))).nbytes
    return f


def clear_cache() -> None:
    _FILTRATIONS.clear()


def fixed_space(ctx: GroupContext, d: int, sub: SubgroupSpec = G) -> list:
    """RREF basis (grevlex pivots) of the sub-invariants in degree d."""
    ctx.check_subgroup(sub)
    basis = graded_basis(ctx.n, d)
    if sub == G:
        K = filtration(ctx, d).socle[0]
    else:
        D = delta_component_matrix(ctx, d, sub.generator_power(ctx))
        K = linalg.rref(linalg.left_nullspace(D, ctx.p), ctx.p)[0]
    return basis.polynomials(ctx, K)


def fixed_space_matrix(ctx: GroupContext, d: int) -> np.ndarray:
    return filtration(ctx, d).socle[0]


def _check_homogeneous(f: Polynomial) -> int:
    if f.is_zero():
        raise ValueError("length of the zero polynomial is undefined")
    if not f.is_homogeneous():
        raise ValueError("length needs a homogeneous polynomial")
    return f.degree()


def length(ctx: GroupContext, f: Polynomial) -> int:
    """l(f): the largest t with f = Delta^(t-1)(F) for some F of the same degree."""
    d = _check_homogeneous(f)
    filt = filtration(ctx, d)
    return int(filt.lengths_of(filt.basis.vector(f)[None, :])[0])


def lengths(ctx: GroupContext, polys) -> list:
    """Batched :func:`length` (groups by degree)."""
    out = [0] * len(polys)
    by_deg: dict = {}
    for i, f in enumerate(polys):
        by_deg.setdefault(_check_homogeneous(f), []).append(i)
    for d, idx in by_deg.items():
        filt = filtration(ctx, d)
        V = filt.basis.matrix([polys[i] for i in idx])
        for i, t in zip(idx, filt.lengths_of(V)):
            out[i] = int(t)
    return out


def compatible_basis(ctx: GroupContext, d: int) -> FilteredBasis:
    filt = filtration(ctx, d)
    rows, lens = filt.compatible_rows()
    polys = filt.basis.polynomials(ctx, rows)
    return FilteredBasis(d, list(zip(polys, lens)))


def decompose_graded(ctx: GroupContext, d: int) -> ModuleDecomposition:
    dec = compatible_basis(ctx, d).decomposition()
    dim = graded_basis(ctx.n, d).dim
    if dec.dimension != dim:
        raise ArithmeticError(f"summands of degree {d} span {dec.dimension}, not {dim}")
    return dec


def _flat_indices(ctx: GroupContext, d: int) -> np.ndarray:
    return np.flatnonzero(graded_basis(ctx.n, d).exps[:, ctx.n - 1] < ctx.p ** 2)


def decompose_flat(ctx: GroupContext, d: int) -> ModuleDecomposition:
    """Decomposition of the span of monomials with x_n-exponent below p^2."""
    if ctx.r != 2 or ctx.n != ctx.p + 1:
        raise ValueError("the flat part is defined for n = p+1, r = 2")
    idx = _flat_indices(ctx, d)
    S = sigma_component_matrix(ctx, d, subset=idx)
    return decompose_matrix(SigmaMatrix(S, ctx.p), ctx)


def non_induced(dec: ModuleDecomposition, p: int) -> dict:
    return {m: k for m, k in dec.items() if m % p}


def dimension_identity(dec: ModuleDecomposition, dim: int) -> bool:
    return dec.dimension == dim


def expected_component_dim(n: int, d: int) -> int:
    return comb(n - 1 + d, d)
