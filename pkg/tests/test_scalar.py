"""Leading-term scalars: valuations, graded residues and precision."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refrad.errors import GradeMismatch, NotBoundaryField, PrecisionLoss
from refrad.residue import ResElem
from refrad.scalar import FieldContext, Scalar, dwork_pi, reduce, vs_valuation


def ctx5():
    return FieldContext(5, 2, {"X": Fraction(1, 3)})


def test_reduce_single_term():
    ctx = FieldContext(5, 2)
    c = ResElem.const(ctx.residue_field, ctx.residue_field.gen())
    x = Scalar.lift(ctx, c, Fraction(1, 2))
    assert reduce(x, Fraction(1, 2)) == c


def test_reduce_below_valuation_is_a_grade_mismatch():
    ctx = FieldContext(5)
    F = ctx.residue_field
    x = Scalar.from_terms(ctx, [(1, ResElem.const(F, 2)), (2, ResElem.const(F, 3))])
    with pytest.raises(GradeMismatch):
        reduce(x, 2)


def test_cancelling_leading_residues():
    ctx = FieldContext(5, 1, {"X": Fraction(0)})
    F = ctx.residue_field
    c = ResElem.const(F, 2)
    X = Scalar.var(ctx, "X")
    a = Scalar.lift(ctx, c, 1) + X * Scalar.p_power(ctx, 2)
    b = Scalar.lift(ctx, -c, 1)
    x = a + b
    assert reduce(x, 1).is_zero()
    assert x.valuation() > 1
    assert x.valuation() == 2


def test_precision_loss_at_cap():
    ctx = FieldContext(3, default_rel=4)
    x = Scalar.one(ctx).with_cap(4)
    with pytest.raises(PrecisionLoss):
        reduce(x, 4)


def test_vs_valuation_examples():
    ctx = FieldContext(3, 1, {"t": Fraction(0)}, boundary_var="t")
    F = ctx.residue_field
    t = ResElem.var(F, "t")
    assert vs_valuation(t ** 3, ctx) == 3
    assert vs_valuation(ResElem.const(F, 2) * t ** -2 + t, ctx) == -2
    a = 4
    x = Scalar.p_power(ctx, 1) * Scalar.var(ctx, "t", a)
    assert vs_valuation(reduce(x, 1), ctx) == a


def test_vs_valuation_needs_boundary_mode():
    ctx = FieldContext(3, 1, {"t": Fraction(0)})
    with pytest.raises(NotBoundaryField):
        vs_valuation(ResElem.var(ctx.residue_field, "t"), ctx)


def test_omega_and_char_zero():
    assert FieldContext(2).omega == 1
    assert FieldContext(5).omega == Fraction(1, 4)
    assert FieldContext(0).omega == 0


def test_dwork_pi_is_a_root_of_minus_p():
    ctx = FieldContext(3, 2)
    pi = dwork_pi(ctx)
    assert pi.valuation() == Fraction(1, 2)
    lhs = pi ** 2 + Scalar.from_int(ctx, 3)
    assert lhs.valuation_bound() > 1


def _random_scalar(ctx, rng_ints):
    F = ctx.residue_field
    terms = []
    for v, c in rng_ints:
        if c % ctx.p:
            terms.append((Fraction(v, 3), ResElem.const(F, F.from_int(c)) * ResElem.var(F, "X", v % 2)))
    if not terms:
        terms = [(Fraction(0), ResElem.one(F))]
    return Scalar.from_terms(ctx, terms)


term_lists = st.lists(
    st.tuples(st.integers(-3, 6), st.integers(1, 24)), min_size=1, max_size=4, unique_by=lambda t: t[0]
)


@given(term_lists, term_lists)
def test_valuation_is_multiplicative_and_ultrametric(ta, tb):
    ctx = ctx5()
    x, y = _random_scalar(ctx, ta), _random_scalar(ctx, tb)
    vx, vy = x.valuation(), y.valuation()
    assert (x * y).valuation() == vx + vy
    s = x + y
    vs = s.valuation_bound()
    assert vs >= min(vx, vy)
    if vx != vy or not (x.reduce(vx) + y.reduce(vy)).is_zero():
        assert vs == min(vx, vy)


@given(term_lists)
def test_inverse_up_to_precision(ta):
    ctx = ctx5()
    x = _random_scalar(ctx, ta)
    e = x * x.inverse() - Scalar.one(ctx)
    assert e.valuation_bound() >= ctx.default_rel - 1


@given(term_lists)
def test_reduce_is_multiplicative(ta):
    ctx = ctx5()
    x = _random_scalar(ctx, ta)
    y = _random_scalar(ctx, list(reversed(ta)))
    vx, vy = x.valuation(), y.valuation()
    assert reduce(x * y, vx + vy) == reduce(x, vx) * reduce(y, vy)
