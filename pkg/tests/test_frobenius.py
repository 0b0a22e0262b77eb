"""Frobenius pushforward, pullback and antecedent transforms."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import FROBENIUS_CASES, context, frobenius_case_module, frobenius_case_oracle, t_power
from refrad.errors import CharZero, IndexOutOfRange, InvariantViolation, NotCritical
from refrad.fiber import analyze
from refrad.frobenius import (
    BreakVector,
    GradedResidue,
    antecedent_refined,
    antecedent_refined_critical,
    break_transforms,
    descendant,
    pullback_radii,
    pullback_refined,
    pushforward_radii,
    pushforward_refined_critical,
    pushforward_refined_visible,
)
from refrad.residue import ResElem

F_ = Fraction


def test_pushforward_examples():
    assert pushforward_radii([F_(1)], 3) == [F_(2)] * 3
    assert pushforward_radii([F_(1, 4)], 2) == [F_(2), F_(1, 2)]
    for p in (2, 3, 5):
        assert pushforward_radii([F_(1, p - 1)], p) == [F_(p, p - 1)] * p


def test_char_zero_rejected():
    with pytest.raises(CharZero):
        pushforward_radii([F_(1)], 0)


def test_pullback_interval_at_the_edge():
    (iv,) = pullback_radii([F_(3, 2)], 3)
    assert not iv.exact and iv.lo == 0 and iv.hi == F_(1, 2)


radii = st.fractions(min_value=0, max_value=4, max_denominator=12)


@given(st.lists(radii, min_size=1, max_size=4), st.sampled_from([2, 3, 5]))
def test_pushforward_multiplicity_and_pullback(rs, p):
    out = pushforward_radii(rs, p)
    assert len(out) == p * len(rs)
    back = pullback_radii(out, p)
    for r in rs:
        hits = [iv for iv in back if iv.contains(r)]
        assert len(hits) >= p


def test_antecedent_round_trip():
    ctx = context(2, 2)
    F = ctx.residue_field
    c = ResElem.const(F, F.gen()) * ResElem.var(F, "t", 3)
    data = [GradedResidue(F_(1, 3), c.pth_power())]
    up = antecedent_refined(data, 2)
    assert up == [GradedResidue(F_(2, 3), -c)]
    assert pullback_refined(up, 2) == data


def test_visible_pushforward_keeps_theta():
    ctx = context(3)
    th = t_power(ctx, 1)
    out = pushforward_refined_visible([GradedResidue(F_(-1), th)], 3)
    assert out == [GradedResidue(F_(-2), th)] * 3


@pytest.mark.parametrize("p,k", [(2, 2), (3, 1)])
def test_critical_tuple_round_trip(p, k):
    ctx = context(p, k)
    F = ctx.residue_field
    t = ResElem.var(F, "t")
    theta = t.pth_power() - t + ResElem.one(F)
    tup = pushforward_refined_critical(GradedResidue(F_(0), theta), ctx)
    assert len(tup) == p
    y = tup[0].value
    assert (y.pth_power() - y) == theta.pth_power().to_field(y.field)
    assert antecedent_refined_critical(tup, p) == [GradedResidue(F_(0), theta.to_field(y.field))]


def test_critical_rejects_zero_and_wrong_grade():
    ctx = context(3)
    F = ctx.residue_field
    with pytest.raises(InvariantViolation):
        pushforward_refined_critical(GradedResidue(F_(0), ResElem.zero(F)), ctx)
    with pytest.raises(NotCritical):
        pushforward_refined_critical(GradedResidue(F_(1, 4), ResElem.one(F)), ctx)


def test_break_transform_examples():
    rot = break_transforms([2, 3], "rotate", j0=1)
    assert rot.values == (3, 3, 2)
    s = break_transforms([3, 1], "saito", e=2, p=3)
    assert s.values == (5, 2, 4)
    assert s.log_break == 4 == 2 * BreakVector((F_(3), F_(1))).log_break
    assert break_transforms([4], "pth_root", j0=0, p=2).values == (2,)
    assert break_transforms([1, 2, 3], "forget", j0=1).values == (1, 3)
    with pytest.raises(IndexOutOfRange):
        break_transforms([1, 2], "rotate", j0=5)


@given(
    st.lists(st.integers(0, 6), min_size=1, max_size=3),
    st.integers(1, 6),
    st.sampled_from([2, 3, 5]),
    st.integers(1, 6),
)
def test_saito_scales_log_break(bj, e, p, b0):
    bv = BreakVector(tuple(F_(x) for x in [b0] + bj))
    out = break_transforms(bv, "saito", e=e, p=p)
    assert out.log_break == e * bv.log_break
    assert out.upper_bound[0] == (e % p == 0)


@pytest.mark.parametrize("p,k,s,e", FROBENIUS_CASES)
def test_rank_one_descendant_matches_law(p, k, s, e):
    V = frobenius_case_module(p, k, s, e)
    m = V.subsidiary_radii(0)
    assert m.intrinsic == (frobenius_case_oracle(p, k, s, e),)
    N, D2 = descendant(V.matrix(0), V.derivation(0))
    assert len(N) == p
    parts = analyze(N, D2, V.ctx, 2, refined=False)
    direct = sorted((q.ir for q in parts for _ in range(q.mult)), reverse=True)
    assert direct == pushforward_radii(m.intrinsic, p)
