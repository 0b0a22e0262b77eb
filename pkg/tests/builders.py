"""Explicit modules shared by the test suites."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from refrad.fiber import FiberModule
from refrad.ore import Derivation, zero_matrix
from refrad.residue import ResElem
from refrad.scalar import FieldContext, Scalar


def context(p: int, k: int = 1, boundary: bool = True, **kw) -> FieldContext:
    return FieldContext(p, k, {"X": Fraction(0), "t": Fraction(0)}, boundary_var="t" if boundary else None, **kw)


def pure_module(ctx: FieldContext, n: int, g, theta: ResElem, var: str = "X", index: int = 0) -> FiberModule:
    """``d e_i = e_(i+1)``, ``d e_d = x e_1`` with ``x`` lifting ``u^(-d) theta^d`` in grade ``d*g``."""
    p = ctx.p
    d = p ** n if p else 1
    g = Fraction(g)
    x = Scalar.var(ctx, var, -d) * Scalar.lift(ctx, theta ** d, d * g)
    N = zero_matrix(ctx, d)
    for i in range(d - 1):
        N[i + 1][i] = Scalar.one(ctx)
    N[0][d - 1] = x
    return FiberModule(ctx, [Derivation(var, 0, index)], [N])


def rank_one(ctx: FieldContext, g: Scalar, var: str = "X") -> FiberModule:
    return FiberModule(ctx, [Derivation(var)], [[[g]]])


def t_power(ctx: FieldContext, e, c=1) -> ResElem:
    F = ctx.residue_field
    return ResElem.monomial(F, F.from_int(c), (("t", Fraction(e)),))


def pure_fixtures(ctx: FieldContext) -> List[FiberModule]:
    """Six rank one modules of pure radii in the visible grade ``-1/2``."""
    g = Fraction(-1, 2)
    thetas = [t_power(ctx, 1), t_power(ctx, 2), t_power(ctx, -1), t_power(ctx, 1) + t_power(ctx, 2),
              t_power(ctx, 0), t_power(ctx, 3) + t_power(ctx, 0)]
    return [pure_module(ctx, 0, g, th) for th in thetas]


def block_sum(mods: Sequence[FiberModule]) -> FiberModule:
    out = mods[0]
    for m in mods[1:]:
        out = out.direct_sum(m)
    return out


# rank one modules d e = [c] p^s X^e e along d/dX (X of weight 0), with the
# radius from closed-form solutions:
#   e = -1: the solution X^a with a = [c] p^s; for 0 < s < 1 the binomial
#           coefficients give ir = 1/(p-1) - s/p, and a unit a outside Z_p gives 1/(p-1)
#   e = -2: the solution exp(-a/X) converges for v(a T) > 1/(p-1), so ir = 1/(p-1) - s
#   s < 0:  visible, ir = 1/(p-1) - s
FROBENIUS_CASES = [
    # (p, k, s, e)
    (2, 1, Fraction(-1), -3),
    (3, 1, Fraction(-1), -2),
    (5, 1, Fraction(-1, 2), -1),
    (2, 1, Fraction(1, 2), -1),
    (3, 1, Fraction(1, 3), -1),
    (3, 1, Fraction(1, 4), -1),
    (2, 1, Fraction(1, 4), -2),
    (2, 1, Fraction(0), -2),
    (3, 1, Fraction(0), -2),
    (5, 1, Fraction(0), -2),
    (2, 2, Fraction(0), -1),
    (3, 2, Fraction(0), -1),
]


def frobenius_case_module(p: int, k: int, s: Fraction, e: int) -> FiberModule:
    ctx = FieldContext(p, k, {"X": Fraction(0)})
    F = ctx.residue_field
    c = ResElem.const(F, F.gen() if k > 1 else F.one())
    g = Scalar.lift(ctx, c, s) * Scalar.var(ctx, "X", e)
    return rank_one(ctx, g)


def frobenius_case_oracle(p: int, k: int, s: Fraction, e: int) -> Fraction:
    omega = Fraction(1, p - 1)
    if s < 0 or e == -2:
        return omega - s
    return omega - s / p


def _char(p: int, k: int, terms, basis=()):
    from refrad.conductors import ASCharacter
    return ASCharacter(p, k, tuple(terms), tuple(basis))


def character_cases():
    """Artin-Schreier characters with their reduced pole orders, reduced by hand."""
    from refrad.gf import GF
    a2 = GF(2, 2).gen()
    a3 = GF(3, 2).gen()
    one9 = GF(3, 2).one()
    return [
        (_char(2, 1, [(1, (), 1)]), 1),
        (_char(2, 1, [(3, (), 1)]), 3),
        (_char(2, 1, [(2, (), 1)]), 1),  # (1/pi)^2
        (_char(2, 2, [(4, (), a2)]), 1),  # a/pi^4 = (a^(1/4)/pi)^4
        (_char(2, 1, [(6, (), 1), (1, (), 1)]), 3),
        (_char(3, 1, [(2, (), 1)]), 2),
        (_char(3, 1, [(3, (), 1), (1, (), 1)]), 1),
        (_char(3, 1, [(6, (), 1), (1, (), 1)]), 2),
        (_char(3, 1, [(9, (), 1)]), 1),
        (_char(5, 1, [(2, (), 2), (1, (), 1)]), 2),
        (_char(5, 1, [(5, (), 1), (4, (), 1)]), 4),
        (_char(5, 1, [(10, (), 1)]), 2),
        (_char(3, 2, [(3, (), a3), (1, (), one9)]), 1),
        (_char(3, 1, [(1, (1,), 1)], ["b1"]), 1),
        (_char(2, 1, [(2, (1,), 1)], ["b1"]), 2),
        (_char(2, 1, [(2, (2,), 1)], ["b1"]), 1),  # (b1/pi)^2
        (_char(3, 1, [(3, (1,), 1)], ["b1"]), 3),
    ]
