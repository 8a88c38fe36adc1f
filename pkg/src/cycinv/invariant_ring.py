"""Generators of F_p[V_{p+1}]^G for G = Z/p^2, minimal generators and the
Noether number.

Notation: M = N^G(x_p), N = N^G(x_{p+1}), w = N^L(x_{p+1}) with L = <sigma^p>.
The candidate family is {M, N} together with the relative transfers
Tr_L^G(gamma x_p^j w^k), gamma a monomial in x_1..x_{p-1} of degree at most
p-2 and 0 <= j, k < p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from . import linalg
from .context import G, L, GroupContext
from .cyclic_action import is_invariant, norm, transfer
from .gfpoly import Monomial, Polynomial, graded_basis, product_index_map
from .module_decomp import fixed_space_matrix

# components above this dimension need certify=True
CERTIFY_DIM_LIMIT = 60_000


def ring_context(p: int) -> GroupContext:
    return GroupContext(p, 2, p + 1)


@dataclass
class GeneratorSet:
    p: int
    norms: list  # [("M", M), ("N", N)]
    transfers: list  # [((gamma exps, j, k), Polynomial)]

    @property
    def ctx(self) -> GroupContext:
        return ring_context(self.p)

    def polynomials(self) -> list:
        return [f for _, f in self.norms] + [f for _, f in self.transfers]

    def labelled(self) -> list:
        return list(self.norms) + [(label_text(lab), f) for lab, f in self.transfers]

    def degrees(self) -> list:
        return [f.degree() for f in self.polynomials()]

    def __len__(self):
        return len(self.norms) + len(self.transfers)


def label_text(label) -> str:
    gamma, j, k = label
    g = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(gamma, 1) if e)
    return f"Tr(gamma={g or '1'},j={j},k={k})"


def _gammas(p: int):
    """Exponent vectors over x_1..x_{p-1} of total degree <= p-2."""
    nv = p - 1
    out = []
    for deg in range(p - 1):
        for combo in combinations_with_replacement(range(nv), deg):
            e = [0] * nv
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda e: (sum(e), [-v for v in e]))


@lru_cache(maxsize=None)
def special_elements(p: int):
    ctx = ring_context(p)
    xp = Polynomial.variable(ctx, p)
    xq = Polynomial.variable(ctx, p + 1)
    return norm(ctx, xp, G), norm(ctx, xq, G), norm(ctx, xq, L)


@lru_cache(maxsize=None)
def build_generators(p: int) -> GeneratorSet:
    ctx = ring_context(p)
    M, N, w = special_elements(p)
    xp = Polynomial.variable(ctx, p)
    wk = [w ** k for k in range(p)]
    xj = [xp ** j for j in range(p)]
    transfers = []
    for gamma in _gammas(p):
        g = Polynomial.monomial(ctx, list(gamma) + [0, 0])
        for k in range(p):
            for j in range(p):
                t = transfer(ctx, g * xj[j] * wk[k], L)
                if not t.is_zero():
                    transfers.append(((gamma, j, k), t))
    return GeneratorSet(p, [("M", M), ("N", N)], transfers)


# --- products in coordinates ----------------------------------------------


def multiply_rows(n: int, p: int, g: np.ndarray, e: int, S: np.ndarray, d2: int) -> np.ndarray:
    """Rows of (g * s) in degree e + d2 for g in degree e and rows s of S."""
    dim = graded_basis(n, e + d2).dim
    out = np.zeros((S.shape[0], dim), dtype=np.int64)
    if S.shape[0] == 0:
        return out
    pim = product_index_map(n, e, d2)
    for a in np.flatnonzero(g):
        out[:, pim[a]] += int(g[a]) * S
    return out % p


def _span(rows, p, dim):
    if rows.shape[0] == 0:
        return np.zeros((0, dim), dtype=np.int64)
    return linalg.rref(rows, p)[0]


def _check_dim(ctx, d, certify):
    dim = graded_basis(ctx.n, d).dim if d <= 60 else 10 ** 9
    if dim > CERTIFY_DIM_LIMIT and not certify:
        raise RuntimeError(
            f"degree {d} component has dimension {dim}; pass certify=True to compute it")


@dataclass
class GenerationReport:
    p: int
    rows: list = field(default_factory=list)  # (d, dim invariants, dim span, ok)

    @property
    def ok(self) -> bool:
        return all(r[3] for r in self.rows)

    def failing(self) -> list:
        return [r[0] for r in self.rows if not r[3]]


def verify_generation(p: int, d_max: int, gens: GeneratorSet | None = None) -> GenerationReport:
    """Compare, degree by degree, the span of all products of generators with
    the invariant space."""
    ctx = ring_context(p)
    gens = gens or build_generators(p)
    n = ctx.n
    vecs = [(f.degree(), graded_basis(n, f.degree()).vector(f)) for f in gens.polynomials()]
    spans = {0: np.ones((1, 1), dtype=np.int64)}
    report = GenerationReport(p, [(0, 1, 1, True)])
    for d in range(1, d_max + 1):
        _check_dim(ctx, d, False)
        dim = graded_basis(n, d).dim
        parts = [multiply_rows(n, p, v, e, spans[d - e], d - e) for e, v in vecs if e <= d]
        rows = np.vstack(parts) if parts else np.zeros((0, dim), dtype=np.int64)
        spans[d] = _span(rows, p, dim)
        inv = fixed_space_matrix(ctx, d)
        inside = linalg.RowSpace.span(inv, p, dim).contains(spans[d]).all() if spans[d].shape[0] else True
        report.rows.append((d, inv.shape[0], spans[d].shape[0],
                            bool(inside) and spans[d].shape[0] == inv.shape[0]))
    return report


# --- minimal generators ---------------------------------------------------


@dataclass
class DegreeLedger:
    p: int
    rows: list = field(default_factory=list)  # (d, dim invariants, dim decomposables, new)
    generators: list = field(default_factory=list)  # (degree, Polynomial)

    def new_counts(self) -> dict:
        return {d: new for d, _, _, new in self.rows if new}

    def degree_multiset(self) -> list:
        return sorted(d for d, _ in self.generators)

    @property
    def noether_number(self) -> int:
        return max((d for d, _ in self.generators), default=0)

    def consistent(self) -> bool:
        return all(new == inv - dec >= 0 for _, inv, dec, new in self.rows) and \
            sum(r[3] for r in self.rows) == len(self.generators)


def decomposable_rows(ctx, gens_vecs, inv_bases, d):
    """Span of g * Inv_{d - deg g} over the generators found so far."""
    n, p = ctx.n, ctx.p
    dim = graded_basis(n, d).dim
    parts = [multiply_rows(n, p, v, e, inv_bases[d - e], d - e)
             for e, v in gens_vecs if 0 < e < d]
    rows = np.vstack(parts) if parts else np.zeros((0, dim), dtype=np.int64)
    return _span(rows, p, dim)


def minimal_generators(p: int, d_max: int, seed: int | None = None,
                       certify: bool = False) -> DegreeLedger:
    """Per-degree count of minimal generators up to degree d_max.

    ``seed`` shuffles the invariant bases (and so which representatives are
    picked) without changing the counts.
    """
    ctx = ring_context(p)
    rng = random.Random(seed) if seed is not None else None
    ledger = DegreeLedger(p)
    inv_bases = {}
    gens_vecs = []
    for d in range(1, d_max + 1):
        _check_dim(ctx, d, certify)
        inv = fixed_space_matrix(ctx, d)
        if rng is not None and inv.shape[0]:
            order = list(range(inv.shape[0]))
            rng.shuffle(order)
            coef = np.array([[rng.randrange(1, p)] for _ in order], dtype=np.int64)
            inv = inv[order] * coef % p
        inv_bases[d] = inv
        dec = decomposable_rows(ctx, gens_vecs, inv_bases, d)
        dim = graded_basis(ctx.n, d).dim
        res = linalg.RowSpace.span(dec, p, dim).residual(inv)
        new_idx = linalg.rref(res.T, p)[1] if inv.shape[0] else np.zeros(0, np.int64)
        for i in new_idx:
            gens_vecs.append((d, inv[i]))
            ledger.generators.append((d, graded_basis(ctx.n, d).polynomial(ctx, inv[i])))
        ledger.rows.append((d, inv.shape[0], dec.shape[0], len(new_idx)))
    inv_bases.clear()
    return ledger


def is_decomposable(p: int, f: Polynomial, certify: bool = False) -> bool:
    """Whether f lies in the span of products of lower-degree invariants."""
    ctx = ring_context(p)
    D = f.degree()
    ledger_gens = []
    inv_bases = {}
    for d in range(1, D):
        _check_dim(ctx, d, certify)
        inv_bases[d] = fixed_space_matrix(ctx, d)
    led = minimal_generators(p, D - 1, certify=certify) if D > 1 else DegreeLedger(p)
    for d, g in led.generators:
        ledger_gens.append((d, graded_basis(ctx.n, d).vector(g)))
    _check_dim(ctx, D, certify)
    dec = decomposable_rows(ctx, ledger_gens, inv_bases, D)
    v = graded_basis(ctx.n, D).vector(f)[None, :]
    if dec.shape[0] == 0:
        return not v.any()
    return bool(linalg.RowSpace.span(dec, p).contains(v)[0])


def noether_bound(p: int) -> int:
    return 4 if p == 2 else p * p + p - 3


def witness_polynomial(p: int) -> Polynomial:
    if p < 3:
        raise ValueError("the witness needs p >= 3")
    ctx = ring_context(p)
    _, _, w = special_elements(p)
    xp = Polynomial.variable(ctx, p)
    xq = Polynomial.variable(ctx, p - 1)
    return transfer(ctx, w ** (p - 1) * xp ** (p - 1) * xq ** (p - 2), L)


def noether_witness(p: int, certify: bool | None = None) -> Polynomial:
    """z = Tr_L^G((w x_p)^(p-1) x_{p-1}^(p-2)), checked to be an indecomposable
    invariant of degree p^2+p-3 with leading monomial x_p^(p^2-1) x_{p-1}^(p-2).

    Indecomposability needs every invariant space below degree p^2+p-3; that
    is done automatically for p < 5 and only with ``certify=True`` beyond.
    """
    z = witness_polynomial(p)
    ctx = ring_context(p)
    expect = [0] * (p + 1)
    expect[p - 1] = p * p - 1
    expect[p - 2] = p - 2
    if z.degree() != p * p + p - 3:
        raise ArithmeticError(f"witness has degree {z.degree()}")
    if z.leading_monomial() != tuple(expect):
        raise ArithmeticError(f"witness leading monomial {z.leading_monomial()}")
    if not is_invariant(ctx, z, G):
        raise ArithmeticError("witness is not invariant")
    if certify is None:
        certify = p < 5
    if certify and is_decomposable(p, z, certify=True):
        raise ArithmeticError("witness is decomposable")
    return z


@dataclass
class NoetherReport:
    p: int
    number: int
    ledger: DegreeLedger
    witness: Polynomial | None


def noether_number(p: int, d_max: int | None = None, certify: bool | None = None) -> NoetherReport:
    """Noether number from the minimal-generator ledger, scanned a few degrees
    past the known bound."""
    if certify is None:
        certify = p < 5
    if not certify:
        raise RuntimeError(f"certifying p={p} is expensive; pass certify=True")
    bound = noether_bound(p)
    d_max = d_max if d_max is not None else bound + 3
    ledger = minimal_generators(p, d_max, certify=True)
    z = noether_witness(p, certify=True) if p >= 3 else None
    return NoetherReport(p, ledger.noether_number, ledger, z)


def transfer_lm_law(p: int, k: int, j: int, lexp: int = 0) -> Monomial:
    """LM(Tr_L^G(w^k x_p^j x_{p-1}^lexp)), checked against
    x_p^(k(p+1)+j-(p-1)) x_{p-1}^(p-1-k+lexp)."""
    if not (0 < k <= p - 1 and 0 <= j <= p - 1 and j + k >= p - 1):
        raise ValueError("need 0 < k < p, 0 <= j < p and j + k >= p - 1")
    if not 0 <= lexp <= p - 2:
        raise ValueError("need 0 <= lexp <= p - 2")
    ctx = ring_context(p)
    _, _, w = special_elements(p)
    xp = Polynomial.variable(ctx, p)
    f = w ** k * xp ** j
    if p >= 3 and lexp:
        f = f * Polynomial.variable(ctx, p - 1) ** lexp
    t = transfer(ctx, f, L)
    expect = [0] * (p + 1)
    expect[p - 1] = k * (p + 1) + j - (p - 1)
    if p >= 3:
        expect[p - 2] = p - 1 - k + lexp
    if t.is_zero() or t.leading_monomial() != tuple(expect):
        raise ArithmeticError(f"leading monomial law fails at k={k}, j={j}, lexp={lexp}")
    return t.leading_monomial()
