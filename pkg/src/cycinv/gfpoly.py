"""Sparse polynomials over F_p in x_1..x_n, graded by total degree.

Terms are stored as packed int64 exponent keys plus residues in [1, p).  The
packing puts e_1 in the most significant field, so for monomials of equal
degree an ascending key is the same as descending grevlex (x_1 < ... < x_n).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .context import GroupContext

Monomial = tuple  # exponent vector (e_1, ..., e_n)


@dataclass(frozen=True)
class FpElement:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, o):
        if isinstance(o, FpElement):
            if o.modulus != self.modulus:
                raise ValueError("different moduli")
            return o.value
        return int(o)

    def __add__(self, o):
        return FpElement(self.value + self._other(o), self.modulus)

    def __sub__(self, o):
        return FpElement(self.value - self._other(o), self.modulus)

    def __mul__(self, o):
        return FpElement(self.value * self._other(o), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.modulus)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpElement(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self):
        return self.value


# --- key packing ----------------------------------------------------------


@lru_cache(maxsize=None)
def _layout(n: int):
    bits = 63 // n
    if bits < 2:
        raise ValueError(f"too many variables ({n}) for packed exponents")
    shifts = np.array([bits * (n - 1 - i) for i in range(n)], dtype=np.int64)
    return bits, (1 << bits) - 1, shifts


def pack(exps, n: int) -> np.ndarray:
    """Exponent rows (m, n) -> int64 keys."""
    bits, mask, shifts = _layout(n)
    e = np.asarray(exps, dtype=np.int64).reshape(-1, n)
    if e.size and (e.min() < 0 or e.max() > mask):
        raise OverflowError("exponent outside packed range")
    return (e << shifts).sum(axis=1) if e.size else np.zeros(0, np.int64)


def unpack(keys, n: int) -> np.ndarray:
    _, mask, shifts = _layout(n)
    k = np.asarray(keys, dtype=np.int64)
    return (k[:, None] >> shifts[None, :]) & mask


def unit(i: int, n: int) -> int:
    """Key of x_i (1-based)."""
    return 1 << int(_layout(n)[2][i - 1])


def key_degrees(keys, n: int) -> np.ndarray:
    return unpack(keys, n).sum(axis=1)


def _combine(keys, coeffs, p):
    """Sort by key, add duplicate coefficients mod p, drop zeros."""
    if keys.size == 0:
        return keys.astype(np.int64), coeffs.astype(np.int64)
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    c = coeffs[order]
    start = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
    k = k[start]
    c = np.add.reduceat(c % p, start) % p
    nz = c != 0
    return k[nz], c[nz]


# --- grevlex --------------------------------------------------------------


def grevlex_compare(a: Monomial, b: Monomial) -> int:
    """-1, 0 or 1 as a <, =, > b in grevlex with x_1 < x_2 < ... < x_n."""
    if len(a) != len(b):
        raise ValueError("monomials of different length")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for x, y in zip(a, b):
        if x != y:
            return -1 if x > y else 1
    return 0


def grevlex_order(exps: np.ndarray) -> np.ndarray:
    """Indices sorting exponent rows grevlex-descending."""
    e = np.asarray(exps)
    if e.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    cols = [e[:, i] for i in range(e.shape[1] - 1, -1, -1)]
    return np.lexsort(cols + [-e.sum(axis=1)])


# --- polynomials ----------------------------------------------------------


def _ring(ctx: GroupContext):
    return (ctx.p, ctx.n)


class Polynomial:
    """Immutable sparse polynomial in F_p[x_1..x_n]."""

    __slots__ = ("ctx", "keys", "coeffs", "_terms", "_hash")

    def __init__(self, ctx: GroupContext, keys=None, coeffs=None, _clean=False):
        self.ctx = ctx
        if keys is None:
            keys = np.zeros(0, np.int64)
            coeffs = np.zeros(0, np.int64)
        keys = np.asarray(keys, dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if not _clean:
            keys, coeffs = _combine(keys, coeffs, ctx.p)
        keys.flags.writeable = False
        coeffs.flags.writeable = False
        self.keys = keys
        self.coeffs = coeffs
        self._terms = None
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def constant(cls, ctx, c: int):
        return cls(ctx, [0], [c])

    @classmethod
    def one(cls, ctx):
        return cls.constant(ctx, 1)

    @classmethod
    def variable(cls, ctx, i: int):
        if not 1 <= i <= ctx.n:
            raise ValueError(f"x_{i} not in 1..{ctx.n}")
        return cls(ctx, [unit(i, ctx.n)], [1], _clean=True)

    @classmethod
    def monomial(cls, ctx, exps, c: int = 1):
        if len(exps) != ctx.n:
            raise ValueError("exponent vector has wrong length")
        return cls(ctx, pack([exps], ctx.n), [c])

    @classmethod
    def from_terms(cls, ctx, terms: dict):
        if not terms:
            return cls(ctx)
        ex = list(terms)
        return cls(ctx, pack(ex, ctx.n), [int(terms[e]) for e in ex])

    # views
    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def terms(self) -> dict:
        if self._terms is None:
            ex = unpack(self.keys, self.n)
            self._terms = {tuple(int(v) for v in row): int(c)
                           for row, c in zip(ex, self.coeffs)}
        return self._terms

    def exponents(self) -> np.ndarray:
        return unpack(self.keys, self.n)

    def __len__(self):
        return int(self.keys.size)

    def is_zero(self) -> bool:
        return self.keys.size == 0

    def __bool__(self):
        return not self.is_zero()

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return int(key_degrees(self.keys, self.n).max())

    def is_homogeneous(self) -> bool:
        if self.is_zero():
            return True
        d = key_degrees(self.keys, self.n)
        return bool((d == d[0]).all())

    def sorted_terms(self):
        """(exponent tuple, coefficient) pairs, grevlex-descending."""
        ex = self.exponents()
        return [(tuple(int(v) for v in ex[i]), int(self.coeffs[i]))
                for i in grevlex_order(ex)]

    def leading_monomial(self) -> Monomial:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading monomial")
        ex = self.exponents()
        return tuple(int(v) for v in ex[grevlex_order(ex)[0]])

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    # arithmetic
    def _check(self, other):
        if _ring(self.ctx) != _ring(other.ctx):
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer, FpElement)):
            return Polynomial.constant(self.ctx, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ctx, np.r_[self.keys, other.keys],
                          np.r_[self.coeffs, other.coeffs])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ctx, self.keys, (-self.coeffs) % self.p, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Polynomial":
        c = int(c) % self.p
        if c == 0:
            return Polynomial(self.ctx)
        return Polynomial(self.ctx, self.keys, self.coeffs * c % self.p, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FpElement)):
            return self.scale(int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(self.ctx)
        mask = _layout(self.n)[1]
        if self.degree() + other.degree() > mask:
            raise OverflowError("product degree exceeds packed exponent range")
        keys = (self.keys[:, None] + other.keys[None, :]).ravel()
        coeffs = (self.coeffs[:, None] * other.coeffs[None, :]).ravel() % self.p
        return Polynomial(self.ctx, keys, coeffs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = Polynomial.constant(self.ctx, int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (_ring(self.ctx) == _ring(other.ctx)
                and np.array_equal(self.keys, other.keys)
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_ring(self.ctx), self.keys.tobytes(), self.coeffs.tobytes()))
        return self._hash

    # divisibility helpers
    def valuation(self, i: int = 1) -> int:
        """Largest q with x_i^q dividing f (0 for f = 0)."""
        if self.is_zero():
            return 0
        return int(self.exponents()[:, i - 1].min())

    def divide_monomial(self, exps) -> "Polynomial":
        """Exact division by a monomial; raises if it does not divide."""
        e = np.asarray(exps, dtype=np.int64)
        ex = self.exponents()
        if ex.size and (ex < e[None, :]).any():
            raise ValueError("monomial does not divide polynomial")
        return Polynomial(self.ctx, self.keys - int(pack([e], self.n)[0]),
                          self.coeffs, _clean=True)

    def reduce_mod_variables(self, indices) -> "Polynomial":
        """Image in F[V]/(x_i : i in indices), i.e. drop terms involving them."""
        idx = [i - 1 for i in indices]
        if not idx or self.is_zero():
            return self
        keep = (self.exponents()[:, idx] == 0).all(axis=1)
        return Polynomial(self.ctx, self.keys[keep], self.coeffs[keep], _clean=True)

    def homogeneous_part(self, d: int) -> "Polynomial":
        keep = key_degrees(self.keys, self.n) == d
        return Polynomial(self.ctx, self.keys[keep], self.coeffs[keep], _clean=True)

    # text
    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial(p={self.p}, n={self.n}: {format_poly(self)})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a * b


def leading_monomial(f: Polynomial) -> Monomial:
    return f.leading_monomial()


# --- text format ----------------------------------------------------------


def format_monomial(exps) -> str:
    parts = []
    for i, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Terms ``c*x1^e1*...`` joined by `` + ``, grevlex-descending."""
    if f.is_zero():
        return "0"
    out = []
    for exps, c in f.sorted_terms():
        mono = format_monomial(exps)
        out.append(f"{c}*{mono}" if mono else str(c))
    return " + ".join(out)


_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?$")


def parse_poly(ctx: GroupContext, text: str) -> Polynomial:
    """Inverse of :func:`format_poly`; also accepts ``-``, implicit
    coefficients and arbitrary whitespace."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial text")
    s = s.replace("-", "+-")
    terms: dict = {}
    for chunk in s.split("+"):
        if chunk == "":
            continue
        sign = 1
        while chunk.startswith("-"):
            sign, chunk = -sign, chunk[1:]
        coeff = 1
        exps = [0] * ctx.n
        for factor in chunk.split("*"):
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            i = int(m.group(1))
            if not 1 <= i <= ctx.n:
                raise ValueError(f"variable x{i} out of range")
            exps[i - 1] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = (terms.get(key, 0) + sign * coeff) % ctx.p
    return Polynomial.from_terms(ctx, {k: v for k, v in terms.items() if v})


# --- graded components ----------------------------------------------------


def _compositions(n: int, d: int) -> np.ndarray:
    """All exponent rows of total degree d in n variables."""
    if n == 1:
        return np.array([[d]], dtype=np.int64)
    blocks = []
    for first in range(d, -1, -1):
        rest = _compositions(n - 1, d - first)
        blocks.append(np.hstack([np.full((rest.shape[0], 1), first, np.int64), rest]))
    return np.vstack(blocks)


class GradedBasis:
    """All degree-d monomials in n variables, grevlex-descending."""

    def __init__(self, n: int, d: int):
        if d < 0:
            raise ValueError("negative degree")
        self.n = n
        self.degree = d
        keys = pack(_compositions(n, d), n)
        self.keys = np.sort(keys)
        self.keys.flags.writeable = False
        self._exps = None

    @property
    def exps(self) -> np.ndarray:
        if self._exps is None:
            self._exps = unpack(self.keys, self.n)
        return self._exps

    @property
    def monomials(self) -> list:
        return [tuple(int(v) for v in row) for row in self.exps]

    def __len__(self):
        return int(self.keys.size)

    @property
    def dim(self) -> int:
        return int(self.keys.size)

    def index(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        bad = (pos >= self.keys.size)
        if bad.any() or not np.array_equal(self.keys[np.minimum(pos, self.keys.size - 1)], keys):
            raise ValueError(f"monomial not of degree {self.degree}")
        return pos

    def vector(self, f: Polynomial) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        if not f.is_zero():
            v[self.index(f.keys)] = f.coeffs
        return v

    def matrix(self, polys) -> np.ndarray:
        M = np.zeros((len(polys), self.dim), dtype=np.int64)
        for r, f in enumerate(polys):
            if not f.is_zero():
                M[r, self.index(f.keys)] = f.coeffs
        return M

    def polynomial(self, ctx: GroupContext, v) -> Polynomial:
        v = np.asarray(v, dtype=np.int64) % ctx.p
        nz = np.flatnonzero(v)
        return Polynomial(ctx, self.keys[nz], v[nz], _clean=True)

    def polynomials(self, ctx, rows) -> list:
        return [self.polynomial(ctx, r) for r in np.asarray(rows)]


@lru_cache(maxsize=64)
def graded_basis(n: int, d: int) -> GradedBasis:
    return GradedBasis(n, d)


def graded_component(ctx: GroupContext, d: int) -> GradedBasis:
    return graded_basis(ctx.n, d)


def component_dim(n: int, d: int) -> int:
    return comb(n - 1 + d, d)


def product_index_map(n: int, d1: int, d2: int) -> np.ndarray:
    """``out[i, j]`` = index in degree d1+d2 of monomial_i(d1) * monomial_j(d2)."""
    b1, b2, b = graded_basis(n, d1), graded_basis(n, d2), graded_basis(n, d1 + d2)
    return b.index((b1.keys[:, None] + b2.keys[None, :]).ravel()).reshape(b1.dim, b2.dim)
