"""Univariate rational generating functions with integer coefficients.

Covers the sequences attached to F[V_{p+1}]_n = V_{d(n)} + sum_i a_i(n) V_{ip}
(n = alpha p^2 + beta p + gamma): d(n), a_i(n), b_i(n), and the Hilbert
series of the invariant ring, both from closed forms and from the defining
recursions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd


# --- integer polynomials as coefficient lists (index = power) -------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _trim([c * v for v in a])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim(out)


def _content(a):
    g = 0
    for v in a:
        g = gcd(g, v)
    return g


class RationalGF:
    """num(x) / den(x) with den(0) != 0, in content-reduced normal form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if den[0] == 0:
            raise ValueError("denominator vanishes at x = 0")
        g = gcd(_content(num), _content(den))
        if g > 1:
            num = [v // g for v in num]
            den = [v // g for v in den]
        if den[-1] < 0:
            num, den = [-v for v in num], [-v for v in den]
        self.num = tuple(num)
        self.den = tuple(den)

    @classmethod
    def coerce(cls, v) -> "RationalGF":
        if isinstance(v, RationalGF):
            return v
        if isinstance(v, int):
            return cls([v])
        raise TypeError(f"cannot use {type(v).__name__} as a generating function")

    def __add__(self, o):
        o = RationalGF.coerce(o)
        return RationalGF(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                          _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalGF([-v for v in self.num], self.den)

    def __sub__(self, o):
        return self + (-RationalGF.coerce(o))

    def __rsub__(self, o):
        return RationalGF.coerce(o) - self

    def __mul__(self, o):
        o = RationalGF.coerce(o)
        return RationalGF(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = RationalGF.coerce(o)
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        num = _pmul(self.num, o.den)
        den = _pmul(self.den, o.num)
        # cancel common powers of x so den(0) != 0
        while den and den[0] == 0:
            if num and num[0] != 0:
                raise ValueError("quotient has a pole at x = 0")
            num, den = num[1:], den[1:]
        return RationalGF(num, den)

    def __rtruediv__(self, o):
        return RationalGF.coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalGF([1]) / (self ** (-k))
        out = RationalGF([1])
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "RationalGF":
        """x^k times self; negative k needs x^(-k) to divide the numerator."""
        if k >= 0:
            return RationalGF([0] * k + list(self.num), self.den)
        if any(self.num[: -k]):
            raise ValueError(f"x^{-k} does not divide the numerator")
        return RationalGF(self.num[-k:], self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, o):
        if isinstance(o, int):
            o = RationalGF([o])
        if not isinstance(o, RationalGF):
            return NotImplemented
        return _pmul(self.num, o.den) == _pmul(o.num, self.den)

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    def series(self, terms: int) -> list:
        """Coefficients of x^0 .. x^(terms-1), via the denominator recurrence."""
        den0 = self.den[0]
        out: list = []
        for k in range(terms):
            acc = Fraction(self.num[k] if k < len(self.num) else 0)
            for i in range(1, min(k, len(self.den) - 1) + 1):
                acc -= self.den[i] * out[k - i]
            out.append(acc / den0)
        ints = []
        for k, c in enumerate(out):
            if c.denominator != 1:
                raise ArithmeticError(f"coefficient of x^{k} is not an integer: {c}")
            ints.append(int(c))
        return ints

    def coefficient(self, k: int) -> int:
        return self.series(k + 1)[k]

    def reduced(self) -> "RationalGF":
        """Cancel the polynomial gcd (via sympy); the value is unchanged."""
        import sympy

        x = sympy.Symbol("x")
        n = sum(c * x ** i for i, c in enumerate(self.num))
        d = sum(c * x ** i for i, c in enumerate(self.den))
        q = sympy.cancel(sympy.together(n / d))
        nn, dd = sympy.fraction(q)
        nc = [int(c) for c in reversed(sympy.Poly(nn, x).all_coeffs())]
        dc = [int(c) for c in reversed(sympy.Poly(dd, x).all_coeffs())]
        if dc[0] == 0:  # cannot happen for a function regular at 0
            return self
        # sympy may leave rational content; clear it
        return RationalGF(nc, dc)

    def __repr__(self):
        return f"RationalGF(num={list(self.num)}, den={list(self.den)})"


X = RationalGF([0, 1])
ONE = RationalGF([1])


def monomial(k: int, c: int = 1) -> RationalGF:
    return RationalGF([0] * k + [c])


def geometric(k: int) -> RationalGF:
    """1 / (1 - x^k)."""
    return RationalGF([1], [1] + [0] * (k - 1) + [-1])


def one_minus(k: int) -> RationalGF:
    """1 - x^k."""
    return RationalGF([1] + [0] * (k - 1) + [-1])


def power_sum(m: int) -> RationalGF:
    """(1 - (m+1) x^m + m x^(m+1)) / (1 - x)^2."""
    num = [0] * (m + 2)
    num[0] += 1
    num[m] -= m + 1
    num[m + 1] += m
    return RationalGF(num) / one_minus(1) ** 2


# --- direct sequences -----------------------------------------------------


def digits(p: int, n: int):
    """(alpha, beta, gamma) with n = alpha p^2 + beta p + gamma."""
    gamma = n % p
    beta = (n // p) % p
    return n // (p * p), beta, gamma


def d_value(p: int, n: int) -> int:
    _, beta, gamma = digits(p, n)
    return gamma * p + beta + 1


@dataclass
class SeriesWindow:
    coefficients: list

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]


def a_recursive(p: int, N: int) -> dict:
    """a_i(n) for 0 <= n <= N from the shift recursion, the a_p recursion and
    the dimension count (which determines a_1)."""
    a = {i: [0] * (N + 1) for i in range(1, p + 1)}
    for n in range(N + 1):
        if n >= 2:
            for i in range(2, p):
                a[i][n] = a[i - 1][n - 1]
            a[p][n] = a[p][n - 1] + a[p - 1][n - 1] + (1 if n % p == 0 else 0)
        rest = comb(n + p, p) - d_value(p, n) - sum(i * p * a[i][n] for i in range(2, p + 1))
        if rest % p:
            raise ArithmeticError(f"dimension count not divisible by p at n={n}")
        a[1][n] = rest // p
    return a


def b_from_a(p: int, a: dict, N: int) -> dict:
    b = {i: list(a[i][: N + 1]) for i in a}
    for n in range(N + 1):
        _, beta, gamma = digits(p, n)
        if beta == p - 1:
            b[gamma + 1][n] += 1
    return b


# --- closed forms ---------------------------------------------------------


def d_closed(p: int) -> RationalGF:
    first = monomial(1, p) * power_sum(p - 1) * geometric(p)
    second = (RationalGF(_padd([1], _padd([0] * (p * p) + [-(p + 1)],
                                           [0] * (p * p + p) + [p])))
              / one_minus(p) ** 2 * (one_minus(p) / one_minus(1)) * geometric(p * p))
    return first + second


def ap_closed(p: int) -> RationalGF:
    tail = RationalGF(_padd(_padd([0] * (p - 1) + [1], [0] * (p * p + p - 1) + [-(p + 1)]),
                            [0] * (p * p + 2 * p - 1) + [p]))
    inner = monomial(p - 1) / one_minus(1) ** p - tail / (one_minus(p) * one_minus(p * p))
    return inner / (one_minus(p) * p)


def a1_closed(p: int) -> RationalGF:
    tail = RationalGF(_padd(_padd([1], [0] * (p * p) + [-(p + 1)]), [0] * (p * p + p) + [p]))
    inner = ONE / one_minus(1) ** p - tail / (one_minus(p) * one_minus(p * p))
    return -X * geometric(p) + one_minus(1) / (one_minus(p) * p) * inner


def ai_closed(p: int, i: int) -> RationalGF:
    if not 1 <= i <= p:
        raise ValueError(f"i must lie in 1..{p}")
    if i == p:
        return ap_closed(p)
    return a1_closed(p).shift(i - 1)


def bi_closed(p: int, i: int) -> RationalGF:
    if not 1 <= i <= p:
        raise ValueError(f"i must lie in 1..{p}")
    return ai_closed(p, i) + monomial(p * p - p + i - 1) * geometric(p * p)


def hilbert_closed(p: int) -> RationalGF:
    second = RationalGF(_padd(_padd([p - 1], [0] * p + [-p]), [0] * (p * p) + [1])) \
        / (one_minus(p) * one_minus(p * p))
    return (ONE / one_minus(1) ** p + second) / (one_minus(p) * p)


def hilbert_from_parts(p: int) -> RationalGF:
    """1/(1-x) + sum_i A_i: one socle vector per summand."""
    total = geometric(1)
    for i in range(1, p + 1):
        total = total + ai_closed(p, i)
    return total


# --- checks ---------------------------------------------------------------


@dataclass
class RecursionReport:
    p: int
    N: int
    ok: bool
    failure: str | None = None


def recursion_check(p: int, N: int) -> RecursionReport:
    """Closed-form coefficients against the recursions and the dimension count."""
    terms = N + 1
    A = {i: ai_closed(p, i).series(terms) for i in range(1, p + 1)}
    D = d_closed(p).series(terms)
    for n in range(terms):
        if D[n] != d_value(p, n):
            return RecursionReport(p, N, False, f"d({n}) = {D[n]}, expected {d_value(p, n)}")
        if n in (0, 1) and any(A[i][n] for i in range(2, p + 1)):
            return RecursionReport(p, N, False, f"a_i({n}) nonzero")
        if n >= 1:
            for i in range(2, p):
                if A[i][n] != A[i - 1][n - 1]:
                    return RecursionReport(p, N, False, f"a_{i}({n}) != a_{i - 1}({n - 1})")
        if n >= 2:
            want = A[p][n - 1] + A[p - 1][n - 1] + (1 if n % p == 0 else 0)
            if A[p][n] != want:
                return RecursionReport(p, N, False, f"a_{p}({n}) = {A[p][n]}, expected {want}")
        dim = D[n] + sum(i * p * A[i][n] for i in range(1, p + 1))
        if dim != comb(n + p, p):
            return RecursionReport(p, N, False, f"dimension count fails at n={n}")
    return RecursionReport(p, N, True)


def hilbert_identity(p: int) -> bool:
    """H = x^(1-p) A_p + 1/(1-x^p)."""
    return hilbert_closed(p) == ap_closed(p).shift(1 - p) + geometric(p)


def linear_system_identities(p: int) -> tuple:
    """Both equations tying A_1, A_p and D together."""
    A1, Ap, D = a1_closed(p), ap_closed(p), d_closed(p)
    first = -(A1.shift(p - 1)) + one_minus(1) * Ap == monomial(p) * geometric(p)
    second = power_sum(p - 1) * A1 * p + Ap * (p * p) == -D + ONE / one_minus(1) ** (p + 1)
    return first, second


def power_sum_identity(m: int) -> bool:
    direct = RationalGF([k + 1 for k in range(m)])
    return direct == power_sum(m)
