"""Finite fields, residue rational functions and their root finding."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refrad.errors import RootUndefined
from refrad.gf import (
    GF,
    distinct_degree_factorization,
    embedding,
    extension,
    is_irreducible,
    poly_mul,
    roots_in_splitting_field,
    roots_with_multiplicity,
    squarefree_decomposition,
)
from refrad.residue import ResElem


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 1), (5, 2)])
def test_field_axioms_exhaustive(p, k):
    F = GF(p, k)
    elems = list(F.elements())
    assert len(elems) == p ** k
    for a in elems[1:]:
        assert F.mul(a, F.inv(a)) == F.one()
        assert F.pow(a, p ** k - 1) == F.one()
        assert F.frobenius(F.pth_root(a)) == a


def test_irreducibility_and_factorization():
    F = GF(3)
    assert is_irreducible(F, [1, 0, 1])
    assert not is_irreducible(F, [2, 0, 1])
    f = poly_mul(F, [1, 0, 1], [2, 1])
    dd = distinct_degree_factorization(F, f)
    assert sorted(d for _, d in dd) == [1, 2]
    sq = squarefree_decomposition(F, poly_mul(F, [1, 1], [1, 1]))
    assert [m for _, m in sq] == [2]


def test_roots_with_multiplicity_gf5():
    F = GF(5)
    roots, rest = roots_with_multiplicity(F, [4, 0, 0, 0, 1])
    assert sorted(r for r, _ in roots) == [1, 2, 3, 4]
    assert rest == []


def test_splitting_field_of_x2_x_1_over_gf2():
    E, roots = roots_in_splitting_field(GF(2), [1, 1, 1], 4)
    assert E.order == 4
    assert len(roots) == 2
    for r, m in roots:
        assert m == 1
        assert E.add(E.add(E.mul(r, r), r), E.one()) == E.zero()


def test_embedding_is_a_ring_map():
    F = GF(2, 2)
    E = extension(F, 2)
    phi = embedding(F, E)
    for a in F.elements():
        for b in F.elements():
            assert phi(F.mul(a, b)) == E.mul(phi(a), phi(b))
            assert phi(F.add(a, b)) == E.add(phi(a), phi(b))


def test_residue_rational_functions_are_canonical():
    F = GF(3, 2)
    t = ResElem.var(F, "t")
    one = ResElem.one(F)
    assert (t * t - one) / (t - one) == t + one
    x = (t ** 3 + t * 2) / (t + one)
    assert x * (t + one) == t ** 3 + t * 2
    assert (x / x) == one


def test_residue_pth_roots():
    F = GF(3, 2)
    t = ResElem.var(F, "t")
    one = ResElem.one(F)
    assert ((t + one) ** 3).pth_root() == t + one
    assert (t ** 3).pth_root() == t
    with pytest.raises(RootUndefined):
        (t + one).pth_root()


def test_order_in_uses_minimum_exponent():
    F = GF(5)
    t = ResElem.var(F, "t")
    c = ResElem.const(F, 3) * t ** -2 + t
    assert c.order_in("t") == Fraction(-2)


@given(st.integers(0, 10 ** 6))
def test_random_residue_field_identities(seed):
    rng = random.Random(seed)
    F = GF(rng.choice([2, 3, 5]), rng.randrange(1, 3))
    t = ResElem.var(F, "t")

    def rnd():
        acc = ResElem.zero(F)
        for e in range(-1, 3):
            acc = acc + ResElem.monomial(F, F.random(rng), (("t", Fraction(e)),) if e else ())
        return acc

    a, b, c = rnd(), rnd(), rnd()
    assert (a + b) * c == a * c + b * c
    assert (a * b).pth_power() == a.pth_power() * b.pth_power()
    assert a.pth_power().pth_root() == a
    if not b.is_zero():
        assert (a / b) * b == a
    assert t.inverse() * t == ResElem.one(F)
