from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from spgraphs import series as S
from spgraphs.series import BivariateSeries as BS, DivergenceError, YPolynomial

N = 5
x = BS.x(N)
y = BS.y(N)


def poly(coeffs):
    return BS(coeffs, len(coeffs) - 1)


small = st.integers(-3, 3)
ypoly = st.dictionaries(st.integers(0, 2), small, max_size=3)
series_st = st.lists(ypoly, min_size=N + 1, max_size=N + 1).map(lambda cs: BS([YPolynomial(c) for c in cs], N))


@settings(max_examples=40, deadline=None)
@given(series_st, series_st, series_st)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == BS.zero(N)


@settings(max_examples=30, deadline=None)
@given(series_st)
def test_exp_log_roundtrip(a):
    a0 = a - BS([a[0]], N)          # no constant term
    assert S.log(S.exp(a0)) == a0
    u = 1 + a0
    assert S.exp(S.log(u)) == u
    assert (u / u) == BS.one(N)


@settings(max_examples=30, deadline=None)
@given(series_st)
def test_derivative_inverts_integral(a):
    assert S.derive_x(S.integrate_x(a)) == a


def test_products():
    assert poly([1, 1, 0]) * poly([1, -1, 0]) == poly([1, 0, -1])
    xy = BS([0, YPolynomial({1: 1}), 0], 2)
    assert xy * xy == BS([0, 0, YPolynomial({2: 1})], 2)
    assert x * BS.zero(N) == BS.zero(N)


def test_mismatched_orders_rejected():
    with pytest.raises(ValueError):
        S.add(BS.x(3), BS.x(4))


def test_division():
    assert BS.one(3) / poly([1, -1, 0, 0]) == poly([1, 1, 1, 1])
    got = BS.x(3) / (1 + BS.x(3) * BS.y(3))
    assert got == BS([0, 1, YPolynomial({1: -1}), YPolynomial({2: 1})], 3)
    with pytest.raises(ZeroDivisionError):
        BS.one(3) / BS.x(3)


def test_exp_and_log_examples():
    e = S.exp(BS.x(4))
    assert [e[n][0] for n in range(5)] == [1, 1, Fr(1, 2), Fr(1, 6), Fr(1, 24)]
    lg = S.log(BS.one(3) / poly([1, -1, 0, 0]))
    assert lg == poly([0, 1, Fr(1, 2), Fr(1, 3)])
    a = x * y + x * x
    assert S.log(S.exp(a)) == a
    with pytest.raises(ValueError):
        S.log(x)


def test_derivatives():
    a = BS([0, 0, 0, YPolynomial({2: Fr(1, 6)})], 3)
    assert S.derive_x(a) == BS([0, 0, YPolynomial({2: Fr(1, 2)})], 2)
    assert S.integrate_x(poly([0, 0, 1])) == poly([0, 0, 0, Fr(1, 3)])
    assert S.derive_y(BS([0, YPolynomial({3: 1})], 1)) == BS([0, YPolynomial({2: 3})], 1)


def test_compose():
    assert S.compose(poly([0, 0, 1, 0]), poly([0, 1, 1, 0])) == poly([0, 0, 1, 2])
    inner = S.log(1 + BS.x(6))
    assert S.compose(S.exp(BS.x(6)) - 1, inner) == BS.x(6)
    with pytest.raises(ValueError):
        S.compose(BS.x(3), 1 + BS.x(3))


def test_fixed_point_cayley():
    trees = S.solve_fixed_point(lambda s: BS.x(8) * S.exp(s), BS.zero(8), 8)
    assert trees[3] == Fr(3, 2)
    assert [trees.count(n) for n in range(1, 9)] == [n ** (n - 1) for n in range(1, 9)]
    geo = S.solve_fixed_point(lambda s: BS.x(6) + BS.x(6) * s, BS.zero(6), 6)
    assert geo == poly([0, 1, 1, 1, 1, 1, 1])


def test_fixed_point_divergence_reported():
    with pytest.raises(DivergenceError):
        S.solve_fixed_point(lambda s: 2 * s + 1, BS.zero(4), 4)


def test_evaluate_y():
    a = BS([0, YPolynomial({2: 1, 3: 1})], 1)
    assert S.evaluate_y(a, 1) == poly([0, 2])
    b = BS([YPolynomial({0: 5, 1: 2}), YPolynomial({1: 1})], 1)
    assert S.evaluate_y(b, 0) == poly([5, 0])


def test_counts_must_be_integral():
    with pytest.raises(ArithmeticError):
        BS([0, Fr(1, 3)], 1).count(1)


def test_large_kronecker_products_agree_with_schoolbook():
    # wide y-polynomials take the packed path; compare with an expansion by hand
    a = BS([YPolynomial({k: (k + 1) * 10 ** 20 for k in range(12)}) for _ in range(4)], 3)
    b = BS([YPolynomial({k: (-1) ** k * (k + 2) for k in range(12)}) for _ in range(4)], 3)
    prod = a * b
    for n in range(4):
        want: dict = {}
        for i in range(n + 1):
            for p, u in a[i].coefficients.items():
                for q, v in b[n - i].coefficients.items():
                    want[p + q] = want.get(p + q, 0) + u * v
        assert prod[n] == YPolynomial(want)
