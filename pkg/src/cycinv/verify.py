"""Verification suites shared by the ``verify`` command and the test-suite.

Each suite returns a :class:`SuiteResult`; nothing here raises on a failed
check, so a run always produces a complete report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import linalg
from .context import G, GroupContext, SubgroupSpec
from .cyclic_action import (delta_apply, delta_component_matrix, is_invariant,
                            sigma_apply, sigma_component_matrix, transfer)
from .gen_series import (ai_closed, bi_closed, digits, hilbert_closed, hilbert_identity,
                         linear_system_identities, power_sum_identity, recursion_check)
from .gfpoly import Polynomial, graded_basis
from .invariant_ring import (build_generators, multiply_rows, special_elements,
                             verify_generation)
from .module_decomp import (compatible_basis, decompose_graded, decompose_graded_oracle,
                            filtration, fixed_space_matrix, length, lengths)


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checks: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        extra = f" first failure: {self.failures[0]}" if self.failures else ""
        return f"{verdict}\t{self.name}\t{self.checks} checks\t{self.seconds:.1f}s{extra}"


class _Suite:
    def __init__(self, name):
        self.result = SuiteResult(name, True)
        self._t = time.perf_counter()

    def check(self, cond, what):
        self.result.checks += 1
        if not cond:
            self.result.ok = False
            if len(self.result.failures) < 20:
                self.result.failures.append(what)

    def done(self):
        self.result.seconds = time.perf_counter() - self._t
        return self.result


def random_poly(ctx: GroupContext, rng: random.Random, degree: int, terms: int = 6,
                homogeneous: bool = True) -> Polynomial:
    out = {}
    for _ in range(terms):
        d = degree if homogeneous else rng.randint(0, degree)
        e = [0] * ctx.n
        for _ in range(d):
            e[rng.randrange(ctx.n)] += 1
        out[tuple(e)] = rng.randrange(1, ctx.p)
    return Polynomial.from_terms(ctx, out)


def _is_ring_case(ctx: GroupContext) -> bool:
    return ctx.r == 2 and ctx.n == ctx.p + 1


# --- operator identities --------------------------------------------------


def operator_identities(ctx: GroupContext, max_degree: int, seed: int = 0,
                        samples: int = 25) -> SuiteResult:
    s = _Suite("operator identities")
    rng = random.Random(seed)
    p = ctx.p
    for _ in range(samples):
        a = random_poly(ctx, rng, rng.randint(0, max(1, max_degree)), homogeneous=False)
        b = random_poly(ctx, rng, rng.randint(0, max(1, max_degree)), homogeneous=False)
        lhs = delta_apply(ctx, a * b)
        rhs = a * delta_apply(ctx, b) + delta_apply(ctx, a) * sigma_apply(ctx, b)
        s.check(lhs == rhs, "twisted derivation")
        s.check(sigma_apply(ctx, a, ctx.order) == a, "sigma^(p^r) = 1")
    for d in range(0, min(max_degree, 6) + 1):
        Dm = delta_component_matrix(ctx, d)
        for t in range(ctx.r + 1):
            q = p ** t
            P = np.eye(Dm.shape[0], dtype=np.int64)
            for _ in range(q):
                P = linalg.mod_matmul(P, Dm, p)
            S = sigma_component_matrix(ctx, d, q)
            S[np.diag_indices_from(S)] -= 1
            s.check(np.array_equal(P, S % p), f"Delta^{q} = sigma^{q} - 1 in degree {d}")
            if t < ctx.r:
                f = random_poly(ctx, rng, d)
                s.check(transfer(ctx, f, SubgroupSpec(t)) == delta_apply(ctx, f, q - 1),
                        f"transfer = Delta^{q - 1} in degree {d}")
    return s.done()


# --- length laws ----------------------------------------------------------


def _transfer_image(ctx: GroupContext, d: int) -> linalg.RowSpace:
    """Tr_L^G of the L-invariants in degree d, as a row space."""
    p = ctx.p
    DL = delta_component_matrix(ctx, d, p)
    KL = linalg.left_nullspace(DL, p)
    T = np.eye(graded_basis(ctx.n, d).dim, dtype=np.int64)
    S = sigma_component_matrix(ctx, d)
    acc = T.copy()
    for _ in range(p - 1):
        T = linalg.mod_matmul(T, S, p)
        acc = (acc + T) % p
    return linalg.RowSpace.span(linalg.mod_matmul(KL, acc, p) if KL.shape[0] else KL,
                                p, graded_basis(ctx.n, d).dim)


def length_laws(p: int, max_degree: int) -> SuiteResult:
    """The x_1-divisibility, stretching, transfer, M-power, top-norm and socle
    laws for n = p+1, r = 2, on every compatible-basis element."""
    s = _Suite("length laws")
    ctx = GroupContext(p, 2, p + 1)
    M, N, _ = special_elements(p)
    x1 = Polynomial.variable(ctx, 1)
    xq = Polynomial.variable(ctx, p + 1)
    for d in range(max_degree + 1):
        fb = compatible_basis(ctx, d)
        polys = [f for f, _ in fb]
        tags = [t for _, t in fb]
        if not polys:
            continue
        direct = lengths(ctx, polys)
        s.check(direct == tags, f"compatible-basis tags match lengths in degree {d}")
        image = _transfer_image(ctx, d)
        in_image = image.contains(filtration(ctx, d).basis.matrix(polys)) if image.dim else \
            np.zeros(len(polys), dtype=bool)
        for f, ell, tr in zip(polys, direct, in_image):
            q = f.valuation(1)
            for qq in range(1, p):
                s.check((ell >= qq * p + 1) == (q >= qq), f"x1^{qq} law, degree {d}")
            if q >= p:
                s.check(ell == p * p, f"stretch (q >= p), degree {d}")
            elif q:
                fp = f.divide_monomial([q] + [0] * p)
                s.check(ell == q * p + length(ctx, fp), f"stretch, degree {d}")
            if tr and q == 0:
                s.check(ell == p, f"transfer length, degree {d}")
            for t, bound in ((0, 1), (1, p)):
                if ell >= bound + 1:
                    ideal = range(1, ctx.n - bound + 1)
                    s.check(f.reduce_mod_variables(ideal).is_zero(), f"ideal bound t={t}, degree {d}")
            if d + p * p <= max_degree:
                s.check(length(ctx, f * N) == ell, f"l(fN) = l(f), degree {d}")
        # nonzero image elements not divisible by x_1
        if image.dim:
            for v in image.R:
                f = filtration(ctx, d).basis.polynomial(ctx, v)
                if f.valuation(1) == 0:
                    s.check(length(ctx, f) == p, f"transfer length (image basis), degree {d}")
    for j in range(0, p + 1):
        if j * p > max_degree:
            break
        Mj = M ** j
        if j <= p - 1:
            s.check(length(ctx, Mj) == j + 1, f"l(M^{j}) = {j + 1}")
        img = _transfer_image(ctx, j * p)
        member = bool(img.contains(graded_basis(ctx.n, j * p).vector(Mj)[None, :])[0]) if img.dim else False
        s.check(member == (j >= p - 1), f"M^{j} in Im Tr iff j >= p-1")
    for a in range(0, max_degree // (p * p) + 1):
        for b in range(0, p - 1):
            for c in range(0, p):
                deg = a * p * p + b * p + c
                if deg > max_degree:
                    continue
                f = N ** a * M ** b * x1 ** c
                s.check(length(ctx, f) == c * p + b + 1, f"socle law a={a} b={b} c={c}")
    for q in range(1, p):
        for i in range(0, q + 1):
            got = delta_apply(ctx, xq ** i, q * p)
            want = x1 ** q * factorial(q) if i == q else Polynomial.zero(ctx)
            s.check(got == want, f"Delta^{q * p}(x_(p+1)^{i})")
    for j in range(p):
        s.check(comb(p * j + p, p) % p == (j + 1) % p, f"Lucas count j={j}")
    return s.done()


# --- decomposition / generation / series ----------------------------------


def oracle_agreement(ctx: GroupContext, max_degree: int) -> SuiteResult:
    s = _Suite("decomposition oracle")
    oracle = decompose_graded_oracle(ctx, range(max_degree + 1))
    for d in range(max_degree + 1):
        dec = decompose_graded(ctx, d)
        s.check(dec == oracle[d], f"degree {d}: {dec.to_text()} vs {oracle[d].to_text()}")
        s.check(dec.dimension == graded_basis(ctx.n, d).dim, f"dimension count, degree {d}")
    return s.done()


def generation(p: int, max_degree: int) -> SuiteResult:
    s = _Suite("generation")
    gens = build_generators(p)
    ctx = GroupContext(p)
    for f in gens.polynomials():
        s.check(is_invariant(ctx, f, G), "generator is invariant")
    rep = verify_generation(p, max_degree, gens)
    for d, inv, span, ok in rep.rows:
        s.check(ok, f"degree {d}: span {span} of {inv}")
    return s.done()


def series_bridge(p: int, max_degree: int) -> SuiteResult:
    s = _Suite("series bridge")
    ctx = GroupContext(p)
    terms = max_degree + 1
    H = hilbert_closed(p).series(terms)
    A = {i: ai_closed(p, i).series(terms) for i in range(1, p + 1)}
    B = {i: bi_closed(p, i).series(terms) for i in range(1, p + 1)}
    for d in range(terms):
        dec = decompose_graded(ctx, d)
        s.check(H[d] == fixed_space_matrix(ctx, d).shape[0], f"Hilbert coefficient {d}")
        s.check(H[d] == dec.summands, f"summand count {d}")
        _, beta, gamma = digits(p, d)
        for i in range(1, p + 1):
            extra = 1 if (beta == p - 1 and gamma == i - 1) else 0
            s.check(A[i][d] == dec[i * p] - extra, f"a_{i}({d})")
            s.check(B[i][d] == dec[i * p], f"b_{i}({d})")
    return s.done()


def series_identities(p: int, N: int = 60) -> SuiteResult:
    s = _Suite("series identities")
    rep = recursion_check(p, N)
    s.check(rep.ok, rep.failure or "recursions")
    s.check(hilbert_identity(p), "H = x^(1-p) A_p + 1/(1-x^p)")
    first, second = linear_system_identities(p)
    s.check(first, "first linear relation")
    s.check(second, "second linear relation")
    for m in range(1, 21):
        s.check(power_sum_identity(m), f"power sum m={m}")
    return s.done()


def run_all(ctx: GroupContext, max_degree: int, seed: int = 0) -> list:
    """Every suite that applies to ``ctx``, in a fixed order."""
    results = [operator_identities(ctx, max_degree, seed)]
    ring = _is_ring_case(ctx)
    if ring:
        results.append(length_laws(ctx.p, max_degree))
        results.append(generation(ctx.p, max_degree))
    results.append(oracle_agreement(ctx, max_degree))
    if ring:
        results.append(series_bridge(ctx.p, max_degree))
        results.append(series_identities(ctx.p))
    return results


# --- conjecture probe -----------------------------------------------------


@dataclass
class ConjectureReport:
    p: int
    max_degree: int
    pairs_checked: int = 0
    monotonicity_failures: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "counterexample found" if self.counterexamples else "no counterexample found"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "max_degree": self.max_degree,
            "pairs_checked": self.pairs_checked,
            "monotonicity_failures": self.monotonicity_failures,
            "counterexamples": self.counterexamples,
            "status": self.status,
        }


def conjecture_search(ctx: GroupContext, max_degree: int) -> ConjectureReport:
    """Products f*h of compatible-basis invariants with l(f) = 0 mod p and
    deg(fh) <= max_degree; records every pair with l(fh) != 0 mod p."""
    p = ctx.p
    rep = ConjectureReport(p, max_degree)
    if max_degree < 2:
        return rep
    bases = {}
    for d in range(1, max_degree):
        fb = compatible_basis(ctx, d)
        basis = graded_basis(ctx.n, d)
        rows = basis.matrix([f for f, _ in fb])
        bases[d] = (rows, np.array([t for _, t in fb], dtype=np.int64))
    for d1 in range(1, max_degree):
        rows1, len1 = bases[d1]
        for i in np.flatnonzero(len1 % p == 0):
            for d2 in range(1, max_degree - d1 + 1):
                rows2, len2 = bases[d2]
                if rows2.shape[0] == 0:
                    continue
                prod = multiply_rows(ctx.n, p, rows1[i], d1, rows2, d2)
                got = filtration(ctx, d1 + d2).lengths_of(prod)
                rep.pairs_checked += rows2.shape[0]
                rep.monotonicity_failures += int((got < len1[i]).sum())
                for k in np.flatnonzero(got % p != 0):
                    rep.counterexamples.append({
                        "deg_f": d1, "index_f": int(i), "length_f": int(len1[i]),
                        "deg_h": d2, "index_h": int(k), "length_h": int(len2[k]),
                        "length_fh": int(got[k]),
                    })
    return rep
