"""Newton polygons and reduced roots."""

from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refrad.errors import EmptyPolynomial, SlopeAbsent
from refrad.newton import polygon, polygon_of, residual_roots, residue_poly_roots
from refrad.residue import ResElem
from refrad.scalar import FieldContext, Scalar, dwork_pi


def test_two_segment_hull():
    P = polygon([3, 1, 0])
    assert P.slope_multiset() == [1, 2]
    assert P.vertices == ((-2, 0), (-1, 1), (0, 3))


def test_monomial_has_infinite_slope():
    P = polygon([None, None, 0])
    assert P.slope_multiset() == [math.inf, math.inf]
    assert P.is_pure()


def test_flat_hull():
    P = polygon([0, 0, 0])
    assert P.slopes == ((0, 2),)


def test_empty_polynomial():
    with pytest.raises(EmptyPolynomial):
        polygon([])


def test_square_root_of_p():
    ctx = FieldContext(5)
    P = [Scalar.from_int(ctx, -5), Scalar.zero(ctx), Scalar.one(ctx)]
    data = residual_roots(P, Fraction(1, 2))
    F = data.field
    assert sorted(F.key(r.constant_value()) for r in data.roots_multiset()) == sorted([F.key(1), F.key(4)])
    with pytest.raises(SlopeAbsent):
        residual_roots(P, Fraction(1))


@pytest.mark.parametrize("p,i,r,alpha", [(3, 1, 2, 1), (3, 2, 1, 2), (5, 3, 3, 4)])
def test_dwork_characteristic_polynomial(p, i, r, alpha):
    w = Fraction(1, 7)
    ctx = FieldContext(p, 2, {"t": w})
    F = ctx.residue_field
    pi = dwork_pi(ctx)
    a = Scalar.lift(ctx, ResElem.const(F, F.from_int(alpha)), 0)
    g = Scalar.from_int(ctx, i) * pi * a * Scalar.var(ctx, "t", -r)
    data = residual_roots([-g, Scalar.one(ctx)], Fraction(1, p - 1) - r * w)
    zeta = pi.reduce(Fraction(1, p - 1))
    expected = ResElem.const(F, F.from_int(i * alpha)) * zeta * ResElem.var(F, "t", -r)
    assert data.roots_multiset() == [expected]


def _product(ctx, a: Scalar, b: Scalar):
    return [a * b, -(a + b), Scalar.one(ctx)]


def test_random_product_reduced_roots():
    rng = random.Random(7)
    ctx = FieldContext(3, 2)
    F = ctx.residue_field
    for _ in range(20):
        s = Fraction(rng.randrange(-6, 7), rng.choice([1, 2, 3]))
        ra, rb = F.random(rng), F.random(rng)
        if F.is_zero(ra) or F.is_zero(rb) or ra == rb:
            continue
        a = Scalar.lift(ctx, ResElem.const(F, ra), s) + Scalar.p_power(ctx, s + 1)
        b = Scalar.lift(ctx, ResElem.const(F, rb), s)
        data = residual_roots(_product(ctx, a, b), s)
        got = sorted(r.constant_value() for r in data.roots_multiset())
        assert got == sorted([ra, rb])


def _poly_mul(P, Q):
    out = [None] * (len(P) + len(Q) - 1)
    for i, x in enumerate(P):
        for j, y in enumerate(Q):
            out[i + j] = x * y if out[i + j] is None else out[i + j] + x * y
    return out


def _monic(ctx, roots):
    P = [Scalar.one(ctx)]
    for v, c in roots:
        lin = [-Scalar.lift(ctx, ResElem.const(ctx.residue_field, c), Fraction(v, 2)), Scalar.one(ctx)]
        P = _poly_mul(P, lin)
    return P


roots_strategy = st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 4)), min_size=1, max_size=2)


@given(roots_strategy, roots_strategy)
def test_slopes_are_additive_under_products(ra, rb):
    ctx = FieldContext(5)
    P, Q = _monic(ctx, ra), _monic(ctx, rb)
    lhs = Counter(polygon_of(_poly_mul(P, Q)).slope_multiset())
    rhs = Counter(polygon_of(P).slope_multiset()) + Counter(polygon_of(Q).slope_multiset())
    assert lhs == rhs


@given(roots_strategy, st.integers(1, 4))
def test_reduced_roots_invariant_under_unit_scaling(ra, unit):
    ctx = FieldContext(5)
    P = _monic(ctx, ra)
    u = Scalar.from_int(ctx, unit)
    for s in set(polygon_of(P).slope_multiset()):
        a = residual_roots(P, s).roots_multiset()
        b = residual_roots([u * c for c in P], s).roots_multiset()
        assert sorted(map(str, a)) == sorted(map(str, b))


def test_laurent_roots_of_a_nonhomogeneous_residual():
    ctx = FieldContext(3, 1, {"t": Fraction(0)})
    F = ctx.residue_field
    t = ResElem.var(F, "t")
    one = ResElem.one(F)
    a, b = t ** -1, t ** 2 + one
    E, roots = residue_poly_roots([a * b, -(a + b), one], ctx)
    assert sorted(map(str, (r for r, _ in roots))) == sorted([str(a), str(b)])


def test_laurent_roots_inseparable_square():
    ctx = FieldContext(2, 1, {"t": Fraction(0), "X": Fraction(0)})
    F = ctx.residue_field
    t, X = ResElem.var(F, "t"), ResElem.var(F, "X")
    one = ResElem.one(F)
    # (Y^2 + X^-2 t^2)(Y^2 + X^-2 t^6)
    R = [X ** -4 * t ** 8, ResElem.zero(F), X ** -2 * (t ** 6 + t ** 2), ResElem.zero(F), one]
    E, roots = residue_poly_roots(R, ctx)
    assert sorted((str(r), m) for r, m in roots) == sorted([(str(X ** -1 * t), 2), (str(X ** -1 * t ** 3), 2)])
