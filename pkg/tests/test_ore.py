"""Twisted polynomials and cyclic vectors."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refrad.errors import DerivationMismatch
from refrad.newton import polygon_of
from refrad.ore import (
    Derivation,
    TwistedPoly,
    annihilator,
    companion,
    cyclic_vector,
    ore_mul,
    right_divmod,
    zero_matrix,
)
from refrad.scalar import FieldContext, Scalar

D = Derivation("X")


def ctx3():
    return FieldContext(3, 1, {"X": Fraction(1, 2)})


def same(P: TwistedPoly, Q: TwistedPoly) -> bool:
    n = max(len(P.coeffs), len(Q.coeffs))
    z = Scalar.zero(P.ctx)
    a = P.coeffs + [z] * (n - len(P.coeffs))
    b = Q.coeffs + [z] * (n - len(Q.coeffs))
    return all((x - y).is_zero() for x, y in zip(a, b))


def test_defining_relation():
    ctx = ctx3()
    X = Scalar.var(ctx, "X")
    a = X * X + Scalar.from_int(ctx, 3)
    T = TwistedPoly.T(ctx, D)
    prod = ore_mul(T, TwistedPoly.constant(ctx, D, a))
    assert same(prod, TwistedPoly(ctx, D, [D.apply(a), a]))


def test_constant_coefficients_commute():
    ctx = ctx3()
    T = TwistedPoly.T(ctx, D)
    assert same(T * T, TwistedPoly(ctx, D, [Scalar.zero(ctx), Scalar.zero(ctx), Scalar.one(ctx)]))


def test_product_of_linear_factors_and_module_action():
    ctx = ctx3()
    X = Scalar.var(ctx, "X")
    one = Scalar.one(ctx)
    a = X * X + Scalar.from_int(ctx, 3)
    b = X.inverse().scale(2) + X
    P = TwistedPoly(ctx, D, [-a, one]) * TwistedPoly(ctx, D, [-b, one])
    assert same(P, TwistedPoly(ctx, D, [a * b - D.apply(b), -(a + b), one]))
    # d e1 = b e1 + e2, d e2 = a e2: (T - a)(T - b) kills e1
    N = zero_matrix(ctx, 2)
    N[0][0], N[1][0], N[1][1] = b, one, a
    ann = annihilator(N, D, [one, Scalar.zero(ctx)])
    assert same(ann, P)


def test_derivation_mismatch():
    ctx = FieldContext(3, 1, {"X": Fraction(0), "Y": Fraction(0)})
    with pytest.raises(DerivationMismatch):
        ore_mul(TwistedPoly.T(ctx, Derivation("X")), TwistedPoly.T(ctx, Derivation("Y", 0, 1)))


def test_rank_one_cyclic_vector():
    ctx = ctx3()
    g = Scalar.var(ctx, "X", -2).scale(5)
    v, P = cyclic_vector([[g]], D)
    assert same(P, TwistedPoly(ctx, D, [-g, Scalar.one(ctx)]))


@pytest.mark.parametrize("p,n", [(2, 0), (2, 1), (3, 1)])
def test_pure_example_is_cyclic_on_e1(p, n):
    ctx = FieldContext(p, 1, {"X": Fraction(0)})
    d = p ** n
    x = Scalar.var(ctx, "X", -d).scale(Fraction(1, p))
    N = zero_matrix(ctx, d)
    for i in range(d - 1):
        N[i + 1][i] = Scalar.one(ctx)
    N[0][d - 1] = x
    v, P = cyclic_vector(N, D)
    assert v[0].valuation() == 0 and all(c.is_exact_zero() for c in v[1:])
    expected = [-x] + [Scalar.zero(ctx)] * (d - 1) + [Scalar.one(ctx)]
    assert same(P, TwistedPoly(ctx, D, expected))


def _coeff(ctx, e, c):
    return Scalar.var(ctx, "X", e).scale(c)


coeff_st = st.tuples(st.integers(-3, 3), st.integers(1, 8))


@given(st.lists(coeff_st, min_size=1, max_size=4))
def test_companion_round_trip(cs):
    ctx = ctx3()
    P = TwistedPoly(ctx, D, [_coeff(ctx, e, c) for e, c in cs] + [Scalar.one(ctx)])
    v, Q = cyclic_vector(companion(P), D)
    assert same(P, Q)
    assert polygon_of(Q.coeffs).slopes == polygon_of(P.coeffs).slopes


@given(st.lists(coeff_st, min_size=1, max_size=3), st.lists(coeff_st, min_size=1, max_size=3), st.lists(coeff_st, min_size=1, max_size=2))
def test_associativity(a, b, c):
    ctx = ctx3()
    P, Q, R = (TwistedPoly(ctx, D, [_coeff(ctx, e, k) for e, k in x]) for x in (a, b, c))
    assert same((P * Q) * R, P * (Q * R))


@given(st.lists(coeff_st, min_size=2, max_size=5), st.lists(coeff_st, min_size=1, max_size=2))
def test_right_division(a, b):
    ctx = ctx3()
    P = TwistedPoly(ctx, D, [_coeff(ctx, e, k) for e, k in a])
    Dv = TwistedPoly(ctx, D, [_coeff(ctx, e, k) for e, k in b] + [Scalar.one(ctx)])
    Q, R = right_divmod(P, Dv)
    assert R.degree < Dv.degree
    assert same(Q * Dv + R, P)
