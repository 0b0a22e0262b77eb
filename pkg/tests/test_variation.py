from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refrad.conductors import ASCharacter, dwork_isocrystal, dwork_module
from refrad.errors import NonConvexSamples, PreconditionError, SlopeOutsideLattice
from refrad.gf import GF
from refrad.parse import parse_config
from refrad.variation import (
    FamilyModule,
    FamilyScalar,
    PiecewiseAffine,
    boundary_link,
    break_decomposition,
    dichotomy_holds,
    family_direct_sum,
    fit_family,
    fit_piecewise,
    in_slope_lattice,
    pure_family,
    sample_radii,
    to_csv,
)
from refrad.ore import Derivation

from fixtures import fixture_text

F = Fraction


def test_fit_piecewise_two_pieces():
    pts = [(r, max(F(0), r - 1)) for r in (F(0), F(1, 2), F(1), F(3, 2), F(2), F(5, 2))]
    f = fit_piecewise(pts, 1, convex=True)
    assert f.breakpoints == [1]
    assert f.slopes == [0, 1]


def test_fit_piecewise_hidden_kink():
    rs = [F(0), F(1, 4), F(1, 2), F(5, 4), F(3, 2), F(7, 4)]
    f = fit_piecewise([(r, max(F(0), r - 1)) for r in rs], 1)
    assert f.breakpoints == [1]
    assert f(F(1)) == 0 and f(F(7, 4)) == F(3, 4)


def test_fit_piecewise_rejections():
    with pytest.raises(SlopeOutsideLattice):
        fit_piecewise([(0, 0), (1, F(2, 5))], 2)
    assert fit_piecewise([(0, 0), (1, F(2, 5))], 5).slopes == [F(2, 5)]
    with pytest.raises(NonConvexSamples):
        fit_piecewise([(0, 0), (1, 1), (2, 1)], 1, convex=True)
    with pytest.raises(PreconditionError):
        fit_piecewise([(0, 0)], 1)


@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=1, max_value=3, max_denominator=4),
)
def test_fit_recovers_convex_two_piece(s1, ds, c):
    # max of two lines with slopes s1 <= s1 + ds, kink at c with three samples on each side
    s2 = s1 + ds
    def g(r):
        return max(s1 * (r - c), s2 * (r - c))
    rs = [F(i, 2) for i in range(0, 9)]
    f = fit_piecewise([(r, g(r)) for r in rs], 4, convex=True)
    assert all(f(r) == g(r) for r in rs)
    assert f.is_convex()


def test_piecewise_sum_and_lattice():
    a = PiecewiseAffine.affine(0, 2, 1, 0)
    b = fit_piecewise([(0, 0), (1, 0), (2, 1)], 1)
    s = a + b
    assert s(F(2)) == 3 and s.slopes == [1, 2]
    assert in_slope_lattice(F(1, 3), 3) and not in_slope_lattice(F(1, 3), 2)
    assert in_slope_lattice(F(1, 6), 3, denominator=2)


@pytest.mark.parametrize("p,n,a,b,direction", [
    (2, 0, 2, -1, "X"),
    (3, 0, F(1, 2), -2, "X"),
    (2, 0, -1, -3, "t"),
    (3, 0, 1, -1, "t"),
])
def test_pure_family_slope(p, n, a, b, direction):
    M = pure_family(p, n, a, b, direction=direction, denominator=F(a).denominator, domain=(0, F(1, 4)))
    fns = fit_family(M)
    omega = F(1, p - 1)
    assert len(fns.f[0].pieces) == 1
    assert fns.f[0].slopes == [-F(a)]
    assert fns.f[0].pieces[0].intercept == omega - b
    rep = boundary_link(M, M.derivations[0].index)
    assert rep.holds


def test_kink_fixture():
    M = parse_config(fixture_text("family_kink.cfg")).obj
    fns = fit_family(M, radii=[F(i, 12) for i in range(1, 8)])
    # summands: ir = 3/2 and ir = 5/2 - 3r, crossing at r = 1/3
    assert fns.f[0].breakpoints == [F(1, 3)]
    assert fns.f[0].slopes == [-3, 0]
    assert fns.f[1].slopes == [0, -3]
    assert len(fns.F[1].pieces) == 1 and fns.F[1](F(1, 6)) == F(4) - F(1, 2)


def test_csv_columns():
    M = parse_config(fixture_text("family_pure.cfg")).obj
    fns = fit_family(M, radii=[F(1, 8), F(1, 4)])
    lines = to_csv(fns).splitlines()
    assert lines[0] == "r_num,r_den,i,f_num,f_den"
    # f_1(r) = 2 - r
    assert lines[1:] == ["1,8,1,15,8", "1,4,1,7,4"]


def test_break_decomposition_dwork():
    chi3 = ASCharacter(2, 1, ((3, (), 1),))
    bd = break_decomposition(dwork_module(chi3))
    assert bd.blocks == ((1, F(3)),)
    assert bd.swan == 3 and bd.artin == 4
    assert bd.certificate == "frobenius"
    A = dwork_module(ASCharacter(3, 1, ((2, (), 1),)))
    B = dwork_module(ASCharacter(3, 1, ((1, (), 1),)))
    bd = break_decomposition(family_direct_sum(A, B))
    assert bd.blocks == ((1, F(2)), (1, F(1)))
    assert bd.swan == 3


def test_trivial_family_has_swan_zero():
    zero = FamilyScalar.zero()
    M = FamilyModule(3, 1, (("t", F(0)),), (Derivation("t", 0, 0),), ((((zero,),)),), frobenius=True)
    bd = break_decomposition(M)
    assert bd.swan == 0 and bd.blocks == ((1, F(0)),)


def test_dichotomy_and_sampling():
    Fd = GF(3, 2)
    M = dwork_isocrystal(3, 2, 1, 2, [Fd.one(), Fd.gen()])
    rows = sample_radii(M, M.default_radii(3))
    for row in rows:
        assert row.intrinsic == (2 * row.r,)
    assert dichotomy_holds(rows, 0) and dichotomy_holds(rows, 1)
    with pytest.raises(PreconditionError):
        M.fiber(F(5))
