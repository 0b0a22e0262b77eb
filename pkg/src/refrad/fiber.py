"""Differential modules over a single nonarchimedean field.

A :class:`FiberModule` is a finite free module with commuting derivations
``d_0, ..., d_m`` given by their matrices on a fixed basis.  Radii along a
derivation are read from the Newton polygon of a cyclic twisted polynomial
in the visible range and recovered by explicit Frobenius descent beyond it.

Intrinsic radii are stored as ``ir = -log_p IR``; the refined intrinsic
radius of a part with radius ``ir`` has grade ``1/(p-1) - ir`` (``-ir`` when
``p = 0``) and is a residue in that graded piece.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CriticalRadius,
    GradeMismatch,
    InvariantViolation,
    NotIntegrable,
    NotPure,
    PrecisionLoss,
    PreconditionError,
    ResidueFactorizationOverflow,
    UnresolvedNonvisible,
)
from .frobenius import (
    GradedResidue,
    antecedent_refined,
    antecedent_refined_critical,
    decode_pushforward,
    descendant,
)
from .gf import common_field
from .newton import INF, polygon_of, residual_poly, residual_roots, residue_poly_roots
from .ore import (
    Derivation,
    Matrix,
    block_diagonal,
    cyclic_vector,
    identity_matrix,
    kron,
    mat_add,
    mat_deriv,
    mat_mul,
    mat_neg_transpose,
)
from .residue import ResElem
from .scalar import FieldContext, Scalar

Theta = Tuple[ResElem, int]


@dataclass(frozen=True)
class RadiiMultiset:
    """Subsidiary radii along one derivation.

    ``intrinsic`` lists ``-log_p`` intrinsic radii in descending order (the
    smallest radius first); ``extrinsic`` lists ``-log_p`` of the radii
    themselves, which differ by the parameter weight.
    """

    direction: int
    intrinsic: Tuple[Fraction, ...]
    parameter_weight: Fraction = Fraction(0)

    @property
    def extrinsic(self) -> Tuple[Fraction, ...]:
        return tuple(r + self.parameter_weight for r in self.intrinsic)

    @property
    def rank(self) -> int:
        return len(self.intrinsic)

    def counts(self) -> Dict[Fraction, int]:
        return dict(Counter(self.intrinsic))

    def is_pure(self) -> bool:
        return len(set(self.intrinsic)) <= 1

    def __str__(self) -> str:
        return "{" + ", ".join(f"{r}^{m}" for r, m in sorted(self.counts().items(), reverse=True)) + "}"


@dataclass(frozen=True)
class RefinedDatum:
    """A refined radius: coefficients ``theta_j`` per direction in one grade.

    ``grade`` is the valuation of the graded piece.  ``intrinsic`` marks the
    normalization ``u_j * theta_j`` (the coefficient of ``du_j/u_j``).
    """

    grade: Fraction
    coefficients: Tuple[Tuple[int, ResElem], ...]
    intrinsic: bool = True

    def __post_init__(self):
        if not any(not c.is_zero() for _, c in self.coefficients):
            raise ValueError("a refined datum needs a nonzero coefficient")

    @classmethod
    def single(cls, grade, j: int, theta: ResElem, intrinsic: bool = True) -> "RefinedDatum":
        return cls(Fraction(grade), ((j, theta),), intrinsic)

    def coefficient(self, j: int) -> ResElem:
        for i, c in self.coefficients:
            if i == j:
                return c
        raise KeyError(j)

    @property
    def theta(self) -> ResElem:
        if len(self.coefficients) != 1:
            raise ValueError("datum has several directions")
        return self.coefficients[0][1]

    def __neg__(self) -> "RefinedDatum":
        return RefinedDatum(self.grade, tuple((j, -c) for j, c in self.coefficients), self.intrinsic)

    def __str__(self) -> str:
        return f"[grade {self.grade}] " + " + ".join(f"({c}) d{j}" for j, c in self.coefficients)


@dataclass
class _Part:
    ir: Fraction
    mult: int
    thetas: Optional[List[Theta]] = None
    # intrinsic residual polynomial, kept when its roots are not representable
    residual: Optional[List[ResElem]] = None


class FiberModule:
    """Finite free module with commuting derivations given by matrices."""

    def __init__(
        self,
        ctx: FieldContext,
        derivations: Sequence[Derivation],
        matrices: Sequence[Matrix],
        check: bool = True,
        descent_depth: int = 3,
        max_descent_rank: int = 6,
    ):
        if len(derivations) != len(matrices):
            raise ValueError("one matrix per derivation")
        self.ctx = ctx
        self.derivations = list(derivations)
        self.matrices = [list(map(list, N)) for N in matrices]
        self.rank = len(matrices[0]) if matrices else 0
        self.descent_depth = descent_depth
        self.max_descent_rank = max_descent_rank
        if check:
            self.check_integrability()

    # structure ---------------------------------------------------------------
    def _index(self, j) -> int:
        if isinstance(j, Derivation):
            return self.derivations.index(j)
        for i, D in enumerate(self.derivations):
            if D.index == j:
                return i
        raise KeyError(f"no derivation with index {j}")

    def derivation(self, j) -> Derivation:
        return self.derivations[self._index(j)]

    def matrix(self, j) -> Matrix:
        return self.matrices[self._index(j)]

    def check_integrability(self) -> None:
        """``N_i N_j + d_i(N_j) = N_j N_i + d_j(N_i)`` up to precision."""
        n = len(self.derivations)
        for a in range(n):
            for b in range(a + 1, n):
                Da, Db = self.derivations[a], self.derivations[b]
                Na, Nb = self.matrices[a], self.matrices[b]
                lhs = mat_add(mat_mul(Na, Nb), mat_deriv(Nb, Da))
                rhs = mat_add(mat_mul(Nb, Na), mat_deriv(Na, Db))
                for ra, rb in zip(lhs, rhs):
                    for x, y in zip(ra, rb):
                        if not (x - y).is_zero():
                            raise NotIntegrable(f"derivations {Da} and {Db} do not commute")

    def dual(self) -> "FiberModule":
        return FiberModule(self.ctx, self.derivations, [mat_neg_transpose(N) for N in self.matrices], check=False)

    def tensor(self, other: "FiberModule") -> "FiberModule":
        if self.derivations != other.derivations:
            raise PreconditionError("tensor product needs the same derivations")
        I1 = identity_matrix(self.ctx, self.rank)
        I2 = identity_matrix(self.ctx, other.rank)
        mats = [mat_add(kron(A, I2), kron(I1, B)) for A, B in zip(self.matrices, other.matrices)]
        return FiberModule(self.ctx, self.derivations, mats, check=False)

    def direct_sum(self, other: "FiberModule") -> "FiberModule":
        if self.derivations != other.derivations:
            raise PreconditionError("direct sum needs the same derivations")
        mats = [block_diagonal([A, B]) for A, B in zip(self.matrices, other.matrices)]
        return FiberModule(self.ctx, self.derivations, mats, check=False)

    # radii ---------------------------------------------------------------------
    def subsidiary_radii(self, j=0, descent: bool = True) -> RadiiMultiset:
        D = self.derivation(j)
        parts = analyze(
            self.matrix(j), D, self.ctx, self.descent_depth if descent else 0, refined=False,
            max_rank=self.max_descent_rank,
        )
        vals: List[Fraction] = []
        for part in parts:
            vals.extend([part.ir] * part.mult)
        return RadiiMultiset(D.index, tuple(sorted(vals, reverse=True)), D.parameter_weight(self.ctx))

    def intrinsic_radii(self) -> Tuple[Fraction, ...]:
        """Aggregated multiset: at each position the smallest radius over all directions."""
        lists = [self.subsidiary_radii(D.index).intrinsic for D in self.derivations]
        return tuple(max(col) for col in zip(*lists))

    def refined_radii(self, j=0) -> List[RefinedDatum]:
        """Refined intrinsic radii along one derivation (the module must have pure radii)."""
        D = self.derivation(j)
        parts = analyze(self.matrix(j), D, self.ctx, self.descent_depth, refined=True, max_rank=self.max_descent_rank)
        if len(parts) != 1:
            raise NotPure(f"radii along {D} are not pure: {[p.ir for p in parts]}")
        part = parts[0]
        if part.thetas is None:
            if part.residual is not None:
                raise ResidueFactorizationOverflow("the residual polynomial does not split in the supported residue rings")
            raise PreconditionError("refined radii are undefined for radius 1")
        g = grade_of(part.ir, self.ctx)
        out = []
        for theta, m in part.thetas:
            out.extend([RefinedDatum.single(g, D.index, theta)] * m)
        return out

    def refined_form(self) -> RefinedDatum:
        """Refined intrinsic radius as one differential form over the dominant directions.

        Only rank 1 is supported: each direction has a single refined datum,
        and the dominant directions are those of minimal intrinsic radius.
        """
        if self.rank != 1:
            raise PreconditionError("refined forms are assembled for rank one modules")
        data = []
        for D in self.derivations:
            try:
                data.append(self.refined_radii(D.index)[0])
            except PreconditionError:
                continue
        if not data:
            raise PreconditionError("no direction carries a refined radius")
        g = min(d.grade for d in data)
        coeffs = tuple((d.coefficients[0][0], d.theta) for d in data if d.grade == g)
        return RefinedDatum(g, coeffs)

    def decompose_by_refined(self, j=0) -> List[Tuple[List[ResElem], int]]:
        """Group refined radii into Galois-conjugacy classes over the base residue field.

        Returns ``[(class members, block dimension), ...]``; dimensions sum to the rank.
        """
        data = self.refined_radii(j)
        return conjugacy_classes([d.theta for d in data], self.ctx)


def grade_of(ir: Fraction, ctx: FieldContext) -> Fraction:
    return ctx.omega - ir


def _merge(items: Sequence[Theta]) -> List[Theta]:
    out: List[Theta] = []
    for th, m in items:
        for idx, (x, k) in enumerate(out):
            if x == th:
                out[idx] = (x, k + m)
                break
        else:
            out.append((th, m))
    return out


def analyze(
    N: Matrix, D: Derivation, ctx: FieldContext, depth: int, refined: bool, max_rank: int = 6
) -> List[_Part]:
    """Radii (and optionally refined radii) of the module with matrix ``N`` along ``D``."""
    d = len(N)
    if d == 0:
        return []
    _, P = cyclic_vector(N, D)
    poly = polygon_of(P.coeffs)
    wu = D.parameter_weight(ctx)
    threshold = -wu
    omega = ctx.omega
    parts: List[_Part] = []
    nonvisible = 0
    trivial = 0
    ubar = D.parameter_residue(ctx)
    for slope, mult in poly.slopes:
        if slope == INF:
            bound = poly.zero_root_bound
            if bound is not None and bound < threshold:
                raise PrecisionLoss("zero roots are not certified beyond the visible range")
            trivial += mult
            continue
        if slope < threshold:
            ir = omega - slope - wu
            thetas = None
            resid = None
            if refined:
                try:
                    data = residual_roots(P.coeffs, slope, ctx, poly)
                    thetas = _merge([(ubar.to_field(r.field) * r, m) for r, m in data.reduced_roots])
                except ResidueFactorizationOverflow:
                    R = residual_poly(P.coeffs, slope, poly)
                    resid = [c * ubar.to_field(c.field) ** (mult - l) for l, c in enumerate(R)]
            parts.append(_Part(ir, mult, thetas, resid))
        else:
            nonvisible += mult
    if trivial:
        parts.append(_Part(Fraction(0), trivial, None))
    if nonvisible:
        if not ctx.p:
            parts.append(_Part(Fraction(0), nonvisible, None))
        else:
            parts.extend(_descend(N, D, ctx, depth, refined, parts, nonvisible, max_rank))
    merged: Dict[Fraction, _Part] = {}
    for part in parts:
        if part.ir in merged:
            old = merged[part.ir]
            th = None
            if old.thetas is not None and part.thetas is not None:
                th = _merge(old.thetas + part.thetas)
            merged[part.ir] = _Part(part.ir, old.mult + part.mult, th)
        else:
            merged[part.ir] = part
    return sorted(merged.values(), key=lambda q: q.ir, reverse=True)


def _descend(
    N: Matrix, D: Derivation, ctx: FieldContext, depth: int, refined: bool, known: List[_Part], unknown: int, max_rank: int
) -> List[_Part]:
    if depth <= 0:
        raise UnresolvedNonvisible(f"{unknown} radii lie beyond the visible range along {D}")
    p = ctx.p
    if p * len(N) > max_rank:
        raise UnresolvedNonvisible(
            f"{unknown} radii lie beyond the visible range along {D}; the descendant rank {p * len(N)} exceeds {max_rank}"
        )
    M, D2 = descendant(N, D)
    dparts = analyze(M, D2, ctx, depth - 1, refined, max_rank)
    pool: List[Fraction] = []
    for part in dparts:
        pool.extend([part.ir] * part.mult)
    visible: List[Fraction] = []
    for part in known:
        visible.extend([part.ir] * part.mult)
    # trivial parts pushed forward are accounted like the unknown ones
    trivial = sum(part.mult for part in known if part.ir == 0 and part.thetas is None)
    vis_only = [r for r in visible if r != 0] if trivial else visible
    decoded = decode_pushforward(pool, vis_only, unknown + trivial, p)
    # remove the trivial parts, which decode to radius 0
    for _ in range(trivial):
        decoded.remove(Fraction(0))
    counts = Counter(decoded)
    out = []
    crit = Fraction(1, p - 1)
    for ir, m in sorted(counts.items(), reverse=True):
        thetas = None
        if refined and ir > 0:
            if ir == crit:
                if len(counts) != 1 or known:
                    raise CriticalRadius("critical refined radii need a module with pure radii")
                src = [q for q in dparts if q.ir == Fraction(p, p - 1)]
                res = []
                for q in src:
                    if q.thetas is not None:
                        data = []
                        for th, k in q.thetas:
                            data.extend([GradedResidue(Fraction(-1), th)] * k)
                        res.extend(antecedent_refined_critical(data, p))
                    elif q.residual is not None:
                        res.extend(_critical_from_residual(q.residual, ctx))
                    else:
                        raise CriticalRadius("descendant refined data are missing at the critical radius")
            else:
                target = p * ir
                src = [q for q in dparts if q.ir == target]
                if not src or src[0].thetas is None:
                    raise UnresolvedNonvisible("descendant refined data are missing")
                data = []
                for th, k in src[0].thetas:
                    data.extend([GradedResidue(grade_of(target, ctx), th)] * k)
                res = antecedent_refined(data, p)
            thetas = _merge([(r.value, 1) for r in res])
        out.append(_Part(ir, m, thetas))
    return out


def _critical_from_residual(R: List[ResElem], ctx: FieldContext) -> List[GradedResidue]:
    """Refined radii at the critical radius from a descendant residual polynomial.

    The descendant data are the roots of ``S(Y^p - Y)``; the roots of ``S``
    are the ``p``-th powers of the refined radii.
    """
    p = ctx.p
    F = R[-1].field
    for c in R:
        F = common_field(F, c.field)
    rem = [c.to_field(F) for c in R]
    m = len(rem) - 1
    if m % p:
        raise InvariantViolation("critical descendant data come in groups of p")
    zero = ResElem.zero(F)
    # powers of W = Y^p - Y as coefficient lists
    W = [zero] * (p + 1)
    W[1] = -ResElem.one(F)
    W[p] = ResElem.one(F)
    S = [zero] * (m // p + 1)
    for k in range(m // p, -1, -1):
        s = rem[p * k]
        S[k] = s
        if s.is_zero():
            continue
        Wk = [ResElem.one(F)]
        for _ in range(k):
            Wk = _poly_mul_res(Wk, W, zero)
        for i, c in enumerate(Wk):
            rem[i] = rem[i] - s * c
    if any(not c.is_zero() for c in rem):
        raise InvariantViolation("critical descendant data do not group into Artin-Schreier cosets")
    _, roots = residue_poly_roots(S, ctx)
    out = []
    for w, k in roots:
        if w.is_zero():
            raise InvariantViolation("refined radii are nonzero")
        out.extend([GradedResidue(Fraction(0), w.pth_root())] * k)
    return out


def _poly_mul_res(a: List[ResElem], b: List[ResElem], zero: ResElem) -> List[ResElem]:
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def tensor_refined(A: Sequence[RefinedDatum], B: Sequence[RefinedDatum]) -> Tuple[int, List[ResElem]]:
    """Overlap dimension and difference multiset for ``V (x) W^dual``."""
    grades = {d.grade for d in A} | {d.grade for d in B}
    if len(grades) > 1:
        raise GradeMismatch(f"refined data in different grades {sorted(grades)}")
    overlap = 0
    diffs: List[ResElem] = []
    for a in A:
        for b in B:
            if a.theta == b.theta:
                overlap += 1
            else:
                diffs.append(a.theta - b.theta)
    return overlap, diffs


@dataclass(frozen=True)
class FrameChange:
    """Outcome of a change of frame: a datum, or a strictly larger radius."""

    grade: Fraction
    dominant: Tuple[int, ...]
    datum: Optional[RefinedDatum]

    @property
    def larger_radius(self) -> bool:
        return self.datum is None


def change_frame(data: Sequence[RefinedDatum], alphas: Sequence[Scalar]) -> FrameChange:
    """Refined datum of ``sum alpha_j d_j`` from pure data ``theta_j`` of each ``d_j``."""
    if len(data) != len(alphas):
        raise ValueError("one coefficient per datum")
    terms = []
    for d, a in zip(data, alphas):
        v = a.valuation()
        if v is None:
            continue
        terms.append((d.grade + v, d, a, v))
    if not terms:
        raise PreconditionError("all frame coefficients vanish")
    g = min(t[0] for t in terms)
    dom = [t for t in terms if t[0] == g]
    total = None
    for _, d, a, v in dom:
        c = a.reduce(v) * d.theta
        total = c if total is None else total + c
    idx = tuple(d.coefficients[0][0] for _, d, _, _ in dom)
    if total is None or total.is_zero():
        return FrameChange(g, idx, None)
    return FrameChange(g, idx, RefinedDatum(g, ((-1, total),), data[0].intrinsic))


def conjugacy_classes(thetas: Sequence[ResElem], ctx: FieldContext) -> List[Tuple[List[ResElem], int]]:
    """Orbits of the base-field Frobenius ``c -> c^q`` acting on coefficients, with counts."""
    q = ctx.residue_field.order if ctx.p else None
    remaining = list(thetas)
    out = []
    while remaining:
        th = remaining[0]
        orbit = [th]
        if q:
            F = th.field
            nxt = th.map_coefficients(lambda c: F.pow(c, q))
            while nxt != th and len(orbit) < 64:
                orbit.append(nxt)
                nxt = nxt.map_coefficients(lambda c: F.pow(c, q))
        count = 0
        for member in orbit:
            for idx in range(len(remaining) - 1, -1, -1):
                if remaining[idx] == member:
                    del remaining[idx]
                    count += 1
        out.append((orbit, count))
    return out
