"""Newton polygons, residual polynomials and reduced roots.

A polynomial ``P = sum a_i T^i`` contributes the points ``(-i, v(a_i))``; the
slopes of the lower convex hull, read left to right, are the valuations of
the roots of ``P`` with their multiplicities.  The residual polynomial along
a slope ``s`` collects the graded leading residues of the coefficients on
the corresponding segment; its roots are the reduced roots of ``P`` in the
grade-``s`` residue piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import EmptyPolynomial, PrecisionLoss, ResidueFactorizationOverflow, RootUndefined, SlopeAbsent
from .gf import Field, common_field, roots_in_splitting_field
from .residue import ONE_MONO, Monomial, ResElem, mono_exp, mono_mul, mono_pow
from .scalar import FieldContext, Scalar

INF = math.inf
Slope = Union[Fraction, float]


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``{(-i, v(a_i))}``.

    ``slopes`` lists ``(slope, multiplicity)`` left to right; an infinite
    slope stands for roots equal to zero.  When the trailing coefficients are
    only known to vanish up to a precision cap, ``zero_root_bound`` is a lower
    bound for the valuation of the corresponding roots.
    """

    vertices: Tuple[Tuple[int, Fraction], ...]
    slopes: Tuple[Tuple[Slope, int], ...]
    zero_root_bound: Optional[Fraction] = None

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.slopes)

    def slope_multiset(self) -> List[Slope]:
        out: List[Slope] = []
        for s, m in self.slopes:
            out.extend([s] * m)
        return out

    def is_pure(self) -> bool:
        return len(self.slopes) == 1

    def segment(self, slope: Slope) -> Tuple[int, int]:
        """Indices ``(i_lo, i_hi)`` of the coefficients bounding the segment of ``slope``."""
        if slope == INF:
            mult = dict(self.slopes).get(INF)
            if not mult:
                raise SlopeAbsent("no infinite slope")
            return 0, mult
        for (x1, _), (x2, _), (s, _) in zip(self.vertices, self.vertices[1:], self._finite()):
            if s == slope:
                return -x2, -x1
        raise SlopeAbsent(f"slope {slope} does not occur in the polygon")

    def _finite(self):
        return [(s, m) for s, m in self.slopes if s != INF]


def polygon(coeff_valuations: Sequence[Optional[Fraction]], caps: Optional[Sequence[Optional[Fraction]]] = None) -> NewtonPolygon:
    """Newton polygon from coefficient valuations ``v(a_0), ..., v(a_d)``.

    ``None`` marks a coefficient of infinite valuation.  ``caps`` optionally
    gives, for such coefficients, a finite lower bound on the valuation
    (a coefficient known only to vanish to precision); the hull is then
    certified against those bounds.
    """
    d = len(coeff_valuations) - 1
    if d < 0:
        raise EmptyPolynomial("polynomial without coefficients")
    vals = [None if v is None else Fraction(v) for v in coeff_valuations]
    if vals[d] is None:
        raise EmptyPolynomial("leading coefficient has infinite valuation")
    caps = list(caps) if caps is not None else [None] * (d + 1)
    j = min(i for i, v in enumerate(vals) if v is not None)
    pts = [(-i, vals[i]) for i in range(d, j - 1, -1) if vals[i] is not None]
    hull: List[Tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes: List[Tuple[Slope, int]] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = (y2 - y1) / (x2 - x1)
        m = x2 - x1
        if slopes and slopes[-1][0] == s:
            slopes[-1] = (s, slopes[-1][1] + m)
        else:
            slopes.append((s, m))
    # certify unknown coefficients strictly above the hull
    for i in range(j + 1, d):
        if vals[i] is None and caps[i] is not None:
            if caps[i] <= _hull_value(hull, -i):
                raise PrecisionLoss(f"coefficient {i} is not known precisely enough to fix the polygon")
    bound = None
    if j > 0:
        slopes.append((INF, j))
        finite_caps = [(i, Fraction(caps[i])) for i in range(j) if caps[i] is not None]
        if finite_caps:
            vj = vals[j]
            bound = min((c - vj) / (j - i) for i, c in finite_caps)
            if slopes[:-1]:
                bound = max(bound, slopes[-2][0]) if isinstance(slopes[-2][0], Fraction) else bound
    return NewtonPolygon(tuple(hull), tuple(slopes), bound)


def _hull_value(hull: Sequence[Tuple[int, Fraction]], x: int) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + (y2 - y1) * Fraction(x - x1, x2 - x1)
    return Fraction(-10 ** 9)


def polygon_of(coeffs: Sequence[Scalar]) -> NewtonPolygon:
    """Newton polygon of a polynomial with scalar coefficients (low degree first)."""
    vals = []
    caps = []
    for c in coeffs:
        v = c.valuation()
        vals.append(v)
        caps.append(None if v is not None else c.cap)
    return polygon(vals, caps)


@dataclass
class SlopeFactorData:
    """Residual polynomial and reduced roots along one slope."""

    slope: Fraction
    residual_poly: List[ResElem]
    reduced_roots: List[Tuple[ResElem, int]]
    field: Field

    def roots_multiset(self) -> List[ResElem]:
        out: List[ResElem] = []
        for r, m in self.reduced_roots:
            out.extend([r] * m)
        return out


def residual_poly(coeffs: Sequence[Scalar], slope: Fraction, poly: Optional[NewtonPolygon] = None) -> List[ResElem]:
    """Graded leading residues of the coefficients on the segment of ``slope``, made monic."""
    poly = poly or polygon_of(coeffs)
    if slope == INF:
        raise SlopeAbsent("no residual polynomial along an infinite slope")
    slope = Fraction(slope)
    i_lo, i_hi = poly.segment(slope)
    v_hi = coeffs[i_hi].valuation()
    out = []
    for l in range(i_lo, i_hi + 1):
        out.append(coeffs[l].reduce(v_hi + slope * (i_hi - l)))
    lead = out[-1]
    return [c / lead for c in out]


def residual_roots(
    coeffs: Sequence[Scalar], slope: Fraction, ctx: Optional[FieldContext] = None, poly: Optional[NewtonPolygon] = None
) -> SlopeFactorData:
    """Reduced roots of ``sum coeffs[i] T^i`` along ``slope``."""
    ctx = ctx or coeffs[0].ctx
    R = residual_poly(coeffs, slope, poly)
    F, roots = residue_poly_roots(R, ctx)
    return SlopeFactorData(Fraction(slope), R, roots, F)


# ---------------------------------------------------------------------------
# roots of polynomials over the residue ring
# ---------------------------------------------------------------------------


def residue_poly_roots(R: Sequence[ResElem], ctx: FieldContext) -> Tuple[Field, List[Tuple[ResElem, int]]]:
    """Roots with multiplicity of a monic polynomial with residue coefficients.

    Supported shapes cover every residual polynomial produced by the library:
    constant coefficients, linear polynomials, weighted-homogeneous
    polynomials (roots are a monomial times constants), inseparable
    polynomials ``S(Y^p)`` and Artin-Schreier polynomials ``Y^p + c_1 Y + c_0``
    with ``-c_1`` a ``(p-1)``-th power of a monomial.
    """
    R = list(R)
    while R and R[-1].is_zero():
        R.pop()
    if not R:
        raise EmptyPolynomial("zero residual polynomial")
    F0 = ctx.residue_field
    for c in R:
        F0 = common_field(F0, c.field)
    R = [c.to_field(F0) for c in R]
    lead = R[-1]
    if lead != ResElem.one(F0):
        R = [c / lead for c in R]
    d = len(R) - 1
    if d == 0:
        return F0, []
    # strip zero roots
    z = 0
    while R[z].is_zero():
        z += 1
    zero_roots = [(ResElem.zero(F0), z)] if z else []
    R = R[z:]
    d = len(R) - 1
    if d == 0:
        return F0, zero_roots
    if all(c.is_constant() for c in R):
        F, rts = roots_in_splitting_field(F0, [c.constant_value() for c in R], ctx.max_split_degree, ctx.seed)
        return F, zero_roots + [(ResElem.const(F, r), m) for r, m in rts]
    if d == 1:
        return F0, zero_roots + [(-R[0] / R[1], 1)]
    homog = _homogeneous_scale(R)
    if homog is not None:
        m, consts = homog
        F, rts = roots_in_splitting_field(F0, consts, ctx.max_split_degree, ctx.seed)
        mono = ResElem.monomial(F, F.one(), m)
        return F, zero_roots + [(mono.scale(r), mult) for r, mult in rts]
    p = ctx.p
    if p and all(c.is_zero() for i, c in enumerate(R) if i % p):
        try:
            S = [R[i].pth_root() for i in range(0, d + 1, p)]
        except RootUndefined:
            S = None
        if S is not None:
            F, rts = residue_poly_roots(S, ctx)
            return F, zero_roots + [(r, m * p) for r, m in rts]
    if p and d == p and all(R[i].is_zero() for i in range(2, p)):
        try:
            F, rts = _artin_schreier_roots(R[0], R[1], ctx)
            return F, zero_roots + rts
        except ResidueFactorizationOverflow:
            pass
    if all(c.is_laurent() for c in R):
        for var in sorted({n for c in R for n in c.variables()}):
            split = _split_off_scale(R, var)
            if split is None:
                continue
            m, S = split
            try:
                F, rts = _laurent_roots(S, ctx, var)
            except ResidueFactorizationOverflow:
                continue
            scale = ResElem.monomial(F, F.one(), m)
            return F, zero_roots + [(scale * r, k) for r, k in rts]
    raise ResidueFactorizationOverflow(f"cannot split the residual polynomial {[str(c) for c in R]}")


def _coefficient_at(c: ResElem, var: str, e: Fraction):
    mono = ((var, e),) if e else ONE_MONO
    return c.num.get(mono, c.field.zero())


def _taylor_shift(P: List[ResElem], a: ResElem) -> List[ResElem]:
    """Coefficients of ``P(a + Y)``."""
    zero = ResElem.zero(a.field)
    out = [zero]
    for c in reversed(P):
        nxt = [zero] * (len(out) + 1)
        for i, x in enumerate(out):
            nxt[i + 1] = nxt[i + 1] + x
            nxt[i] = nxt[i] + x * a
        nxt[0] = nxt[0] + c.to_field(a.field)
        out = nxt
    while len(out) > 1 and out[-1].is_zero():
        out.pop()
    return out


def _split_off_scale(R: Sequence[ResElem], var: str) -> Optional[Tuple[Monomial, List[ResElem]]]:
    """Write ``R(Y) = m^d S(Y/m)`` with ``m`` a monomial free of ``var`` and ``S`` involving only ``var``."""
    d = len(R) - 1
    m: Optional[Dict[str, Fraction]] = None
    for i, c in enumerate(R[:-1]):
        for mono in c.num:
            other = {n: e / (d - i) for n, e in mono if n != var}
            if m is None:
                m = other
            elif other != m:
                return None
    mono = tuple(sorted((m or {}).items()))
    S = [c.mul_monomial(mono_pow(mono, i - d)) for i, c in enumerate(R)]
    return mono, S


def _laurent_roots(R: Sequence[ResElem], ctx: FieldContext, var: str) -> Tuple[Field, List[Tuple[ResElem, int]]]:
    """Roots in ``E[var, 1/var]`` of a monic polynomial with Laurent coefficients.

    Newton-Puiseux expansion in ``var``: each step reads the next term of a
    root from a residual polynomial over the constants.  Roots outside the
    Laurent ring (fractional exponents, or degrees beyond the Cauchy bound)
    raise ``ResidueFactorizationOverflow``.
    """
    d = len(R) - 1
    top = Fraction(0)
    for i, c in enumerate(R[:-1]):
        if not c.is_zero():
            top = max(top, max(mono_exp(m, var) for m in c.num) / (d - i))
    found: List[Tuple[ResElem, int]] = []

    def solve(P: List[ResElem], prefix: ResElem, floor: Optional[Fraction]) -> None:
        z = 0
        while z < len(P) - 1 and P[z].is_zero():
            z += 1
        if z:
            found.append((prefix, z))
            P = P[z:]
        if len(P) == 1:
            return
        poly = polygon([None if c.is_zero() else c.order_in(var) for c in P])
        for slope, _ in poly.slopes:
            if slope == INF or (floor is not None and slope <= floor):
                continue
            if slope.denominator != 1 or slope > top:
                raise ResidueFactorizationOverflow("residual polynomial has roots outside the Laurent ring")
            i_lo, i_hi = poly.segment(slope)
            v_hi = P[i_hi].order_in(var)
            consts = [_coefficient_at(P[l], var, v_hi + slope * (i_hi - l)) for l in range(i_lo, i_hi + 1)]
            F0 = P[0].field
            E, rts = roots_in_splitting_field(F0, [F0.div(c, consts[-1]) for c in consts], ctx.max_split_degree, ctx.seed)
            for c, _ in rts:
                term = ResElem.monomial(E, c, ((var, slope),))
                solve(_taylor_shift(P, term), prefix.to_field(E) + term, slope)

    solve(list(R), ResElem.zero(R[0].field), None)
    if sum(m for _, m in found) != d:
        raise ResidueFactorizationOverflow("residual polynomial does not split over the Laurent ring")
    F = found[0][0].field
    for r, _ in found:
        F = common_field(F, r.field)
    return F, [(r.to_field(F), m) for r, m in found]


def _homogeneous_scale(R: Sequence[ResElem]) -> Optional[Tuple[Monomial, list]]:
    """Find a monomial ``m`` with ``R(m Z) = m^d * (constant polynomial)``."""
    d = len(R) - 1
    data = {}
    for i, c in enumerate(R):
        if c.is_zero():
            continue
        if not c.is_monomial():
            return None
        data[i] = c.monomial_data()
    idx = sorted(data)
    if len(idx) < 2:
        return None
    i0 = idx[0]
    # m^(d - i0) = mono_{i0} (leading coefficient is 1)
    m = mono_pow(data[i0][1], Fraction(1, d - i0))
    consts = []
    for i in range(d + 1):
        if i not in data:
            consts.append(None)
            continue
        kappa, mono = data[i]
        if mono_mul(mono, mono_pow(m, i - d)) != ONE_MONO:
            return None
        consts.append(kappa)
    F = R[-1].field
    return m, [F.zero() if c is None else c for c in consts]


def _laurent_norm(mono: Monomial) -> Fraction:
    return sum((abs(e) for _, e in mono), Fraction(0))


def artin_schreier_solve(b: ResElem, ctx: FieldContext) -> Tuple[Field, ResElem]:
    """One solution ``Z`` of ``Z^p - Z = b`` for a Laurent residue ``b``."""
    p = ctx.p
    if not b.is_laurent():
        raise ResidueFactorizationOverflow("Artin-Schreier equation with non-Laurent right-hand side")
    F = b.field
    Z = ResElem.zero(F)
    rest = b
    for _ in range(1000):
        nonconst = {m: c for m, c in rest.num.items() if m != ONE_MONO}
        if not nonconst:
            break
        top = max(nonconst, key=lambda m: (_laurent_norm(m), str(m)))
        kappa = nonconst[top]
        root_mono = mono_pow(top, Fraction(1, p))
        if any((e / p).denominator % p == 0 for _, e in top):
            raise ResidueFactorizationOverflow(
                "Artin-Schreier equation has no solution in the represented residue ring"
            )
        term = ResElem.monomial(F, F.pth_root(kappa), root_mono)
        Z = Z + term
        rest = rest - (term.pth_power() - term)
        F = rest.field
    c0 = rest.constant_value() if not rest.is_zero() else F.zero()
    poly = [F.neg(c0), F.neg(F.one())] + [F.zero()] * (p - 2) + [F.one()]
    E, rts = roots_in_splitting_field(F, poly, ctx.max_split_degree, ctx.seed)
    return E, Z.to_field(E) + ResElem.const(E, rts[0][0])


def _artin_schreier_roots(c0: ResElem, c1: ResElem, ctx: FieldContext) -> Tuple[Field, List[Tuple[ResElem, int]]]:
    p = ctx.p
    mneg = -c1
    if mneg.is_zero():
        raise ResidueFactorizationOverflow("degenerate Artin-Schreier shape")
    if not mneg.is_monomial():
        raise ResidueFactorizationOverflow("Artin-Schreier coefficient is not a monomial")
    kappa, mono = mneg.monomial_data()
    F = mneg.field
    E, rts = roots_in_splitting_field(F, [F.neg(kappa)] + [F.zero()] * (p - 2) + [F.one()], ctx.max_split_degree, ctx.seed)
    if not rts:
        raise ResidueFactorizationOverflow("no (p-1)-th root of the Artin-Schreier coefficient")
    m = ResElem.monomial(E, rts[0][0], mono_pow(mono, Fraction(1, p - 1)))
    # Y = m Z turns Y^p + c1 Y + c0 into m^p (Z^p - Z) + c0
    b = -(c0.to_field(E)) / (m ** p)
    E2, z = artin_schreier_solve(b, ctx)
    out = []
    for j in range(p):
        out.append(((z + ResElem.const(E2, E2.from_int(j))) * m.to_field(E2), 1))
    out.sort(key=lambda rm: rm[0].sort_key())
    return E2, out
