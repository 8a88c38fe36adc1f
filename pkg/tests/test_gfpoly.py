from functools import cmp_to_key
from itertools import permutations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import naive
from cycinv.context import GroupContext
from cycinv.gfpoly import (FpElement, GradedBasis, Polynomial, format_poly, graded_basis,
                           grevlex_compare, grevlex_order, pack, parse_poly,
                           product_index_map, unpack)

CTX3 = GroupContext(3)  # F_3[x1..x4]
CTX5 = GroupContext(5)


def polys(ctx, max_deg=4, max_terms=5):
    mono = st.lists(st.integers(0, max_deg), min_size=ctx.n, max_size=ctx.n).map(tuple)
    terms = st.dictionaries(mono, st.integers(1, ctx.p - 1), max_size=max_terms)
    return terms.map(lambda t: Polynomial.from_terms(ctx, t))


def as_naive(f):
    return dict(f.terms)


# --- field elements -------------------------------------------------------


def test_fp_element_arithmetic():
    a, b = FpElement(4, 7), FpElement(5, 7)
    assert int(a + b) == 2
    assert int(a * b) == 6
    assert int(a - b) == 6
    assert int(a * a.inverse()) == 1
    with pytest.raises(ZeroDivisionError):
        FpElement(0, 7).inverse()


# --- ring axioms ----------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(polys(CTX3), polys(CTX3), polys(CTX3))
def test_ring_axioms(f, g, h):
    z, one = Polynomial.zero(CTX3), Polynomial.one(CTX3)
    assert f + g == g + f
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + z == f and f * one == f and (f * z).is_zero()
    assert (f - f).is_zero()
    assert f + (-f) == z


@settings(max_examples=60, deadline=None)
@given(polys(CTX5), polys(CTX5))
def test_product_matches_naive(f, g):
    assert as_naive(f * g) == naive.pmul(as_naive(f), as_naive(g), 5)
    assert as_naive(f + g) == naive.padd(as_naive(f), as_naive(g), 5)


@settings(max_examples=30, deadline=None)
@given(polys(CTX3, max_deg=2, max_terms=3), st.integers(0, 5))
def test_power(f, k):
    want = Polynomial.one(CTX3)
    for _ in range(k):
        want = want * f
    assert f ** k == want


def test_frobenius():
    f = parse_poly(CTX3, "x1 + 2*x2*x3 + x4^2")
    cube = parse_poly(CTX3, "x1^3 + 2*x2^3*x3^3 + x4^6")
    assert f ** 3 == cube


def test_integer_scalars_and_ring_mismatch():
    f = parse_poly(CTX3, "x1 + x2")
    assert f * 3 == Polynomial.zero(CTX3)
    assert f + 3 == f
    assert 1 - f == parse_poly(CTX3, "1 + 2*x1 + 2*x2")
    with pytest.raises(ValueError):
        f + Polynomial.variable(CTX5, 1)


def test_zero_polynomial_conventions():
    z = Polynomial.zero(CTX3)
    assert z.degree() == -1
    assert format_poly(z) == "0"
    with pytest.raises(ValueError):
        z.leading_monomial()
    assert z.is_homogeneous()


# --- grevlex --------------------------------------------------------------


def test_grevlex_small_cases():
    # x1 < x2 < x3
    assert grevlex_compare((1, 0, 0), (0, 1, 0)) == -1
    assert grevlex_compare((0, 0, 1), (0, 1, 0)) == 1
    # same degree: the smaller power of x1 wins
    assert grevlex_compare((0, 2, 0), (1, 0, 1)) == 1
    # degree first
    assert grevlex_compare((5, 0, 0), (0, 0, 4)) == 1
    assert grevlex_compare((1, 1, 1), (1, 1, 1)) == 0
    with pytest.raises(ValueError):
        grevlex_compare((1, 0), (1, 0, 0))


exps3 = st.lists(st.integers(0, 5), min_size=3, max_size=3).map(tuple)


@settings(max_examples=200, deadline=None)
@given(exps3, exps3, exps3)
def test_grevlex_is_monomial_order(a, b, c):
    assert grevlex_compare(a, b) == -grevlex_compare(b, a)
    if grevlex_compare(a, b) <= 0 and grevlex_compare(b, c) <= 0:
        assert grevlex_compare(a, c) <= 0
    ac = tuple(x + y for x, y in zip(a, c))
    bc = tuple(x + y for x, y in zip(b, c))
    assert grevlex_compare(ac, bc) == grevlex_compare(a, b)
    assert grevlex_compare(ac, a) >= 0


def test_grevlex_order_agrees_with_compare():
    rows = [m for d in range(4) for m in naive.monomials(3, d)]
    want = sorted(rows, key=cmp_to_key(grevlex_compare), reverse=True)
    got = [rows[i] for i in grevlex_order(np.array(rows))]
    assert got == want


def test_leading_monomials():
    f = parse_poly(CTX3, "x1*x4 + x2*x3 + x1^2")
    # x2*x3 beats x1*x4 (less x1), both beat x1^2
    assert f.leading_monomial() == (0, 1, 1, 0)
    assert f.sorted_terms()[-1] == ((2, 0, 0, 0), 1)


# --- text format ----------------------------------------------------------


def test_format_examples():
    f = parse_poly(CTX3, "x3^3 + 2*x2^2*x3 + x1*x3^2 + x1*x2*x3")
    assert f.to_text() == "1*x3^3 + 2*x2^2*x3 + 1*x1*x3^2 + 1*x1*x2*x3"
    assert parse_poly(CTX3, " 2 - x1 ").to_text() == "2*x1 + 2"
    assert parse_poly(CTX3, "x1 - x1").is_zero()
    assert parse_poly(CTX3, "x1*x1*4").to_text() == "1*x1^2"


@pytest.mark.parametrize("bad", ["", "x5", "x0", "y1", "x1^", "2x1"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_poly(CTX3, bad)


@settings(max_examples=80, deadline=None)
@given(polys(CTX5, max_deg=6, max_terms=8))
def test_text_round_trip(f):
    assert parse_poly(CTX5, f.to_text()) == f
    assert parse_poly(CTX5, f.to_text()).to_text() == f.to_text()


# --- packing and graded bases ---------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(0, 200), min_size=6, max_size=6), min_size=1, max_size=5))
def test_pack_round_trip(rows):
    e = np.array(rows, dtype=np.int64)
    assert np.array_equal(unpack(pack(e, 6), 6), e)


@pytest.mark.parametrize("n,d", [(1, 5), (3, 0), (3, 4), (4, 7), (6, 5)])
def test_graded_basis(n, d):
    B = GradedBasis(n, d)
    assert B.dim == comb(n - 1 + d, d)
    assert sorted(map(tuple, B.exps.tolist())) == sorted(naive.monomials(n, d))
    # grevlex-descending
    rows = [tuple(r) for r in B.exps.tolist()]
    assert all(grevlex_compare(a, b) == 1 for a, b in zip(rows, rows[1:]))
    assert np.array_equal(B.index(B.keys), np.arange(B.dim))


def test_basis_vector_round_trip():
    f = parse_poly(CTX3, "x1*x2*x3 + 2*x4^3 + x2^2*x4")
    B = graded_basis(4, 3)
    assert B.polynomial(CTX3, B.vector(f)) == f


def test_vector_rejects_wrong_degree():
    with pytest.raises(ValueError):
        graded_basis(4, 3).vector(parse_poly(CTX3, "x1^2"))


def test_product_index_map():
    n, d1, d2 = 3, 2, 3
    P = product_index_map(n, d1, d2)
    B1, B2, B = graded_basis(n, d1), graded_basis(n, d2), graded_basis(n, d1 + d2)
    for i, j in [(0, 0), (1, 4), (5, 9)]:
        want = tuple(B1.exps[i] + B2.exps[j])
        assert tuple(B.exps[P[i, j]]) == want
