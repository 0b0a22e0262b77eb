"""A short tour: radii, refined radii and a Frobenius descendant.

    python scripts/tour_radii.py
"""

from __future__ import annotations

from fractions import Fraction

from refrad.fiber import FiberModule
from refrad.frobenius import pushforward_radii
from refrad.ore import Derivation, zero_matrix
from refrad.residue import ResElem
from refrad.scalar import FieldContext, Scalar
from refrad.variation import fit_family, pure_family


def cyclic(ctx: FieldContext, d: int, g: Fraction, theta: ResElem) -> FiberModule:
    x = Scalar.var(ctx, "X", -d) * Scalar.lift(ctx, theta ** d, d * g)
    N = zero_matrix(ctx, d)
    for i in range(d - 1):
        N[i + 1][i] = Scalar.one(ctx)
    N[0][d - 1] = x
    return FiberModule(ctx, [Derivation("X")], [N])


def main() -> None:
    ctx = FieldContext(3, 1, {"X": Fraction(0), "t": Fraction(0)}, boundary_var="t")
    theta = ResElem.var(ctx.residue_field, "t")
    V = cyclic(ctx, 3, Fraction(-1, 3), theta)
    m = V.subsidiary_radii(0)
    print("rank 3 cyclic module over p = 3")
    print("  intrinsic radii (-log_p):", [str(x) for x in m.intrinsic])
    print("  refined radii:", [str(d.theta) for d in V.refined_radii(0)])
    print("  descendant radii by the pushforward law:", [str(x) for x in pushforward_radii(m.intrinsic, 3)])

    ctx2 = FieldContext(2, 1, {"X": Fraction(0), "t": Fraction(0)}, boundary_var="t")
    W = cyclic(ctx2, 2, Fraction(1, 4), ResElem.var(ctx2.residue_field, "t"))
    print("rank 2 module over p = 2 beyond the visible range (Frobenius descent)")
    print("  intrinsic radii:", [str(x) for x in W.subsidiary_radii(0).intrinsic])

    M = pure_family(2, 0, 2, -1, domain=(0, Fraction(1, 4)))
    fns = fit_family(M)
    print("family", M.name)
    print("  f_1 =", fns.f[0])


if __name__ == "__main__":
    main()
