"""Variation of radii over annuli and discs.

A :class:`FamilyModule` is a differential module whose matrix entries are
finite Laurent data in the radius variable ``t`` (plus other variables of
fixed weight).  Specializing ``t`` to weight ``r`` gives the fiber over the
Gauss-norm field ``F_eta`` with ``r = -log_p eta``.  Radius functions are
sampled fiberwise and reconstructed as exact piecewise-affine functions; the
structure theorems (continuity, convexity, slope lattice, monotonicity) are
checked on every reconstruction and a violation is raised, never smoothed.

All radius functions are intrinsic, ``f_i(r) = -log_p IR(M (x) F_eta; i)``,
listed from the smallest radius (largest ``f``) down.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    InvariantViolation,
    NonConvexSamples,
    NotPure,
    NotPureAtBoundary,
    NotSolvable,
    PreconditionError,
    RefradError,
    SlopeOutsideLattice,
)
from .fiber import FiberModule, RadiiMultiset, RefinedDatum
from .ore import Derivation
from .residue import Monomial, ResElem
from .scalar import FieldContext, Scalar, dwork_pi, vs_valuation

Point = Tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# piecewise-affine functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """``value(r) = slope * r + intercept`` on ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction
    slope: Fraction
    intercept: Fraction

    def __call__(self, r) -> Fraction:
        return self.slope * Fraction(r) + self.intercept


@dataclass(frozen=True)
class PiecewiseAffine:
    """Exact piecewise-affine function on a closed rational interval."""

    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a piecewise-affine function needs at least one piece")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.hi != b.lo:
                raise ValueError("pieces must be contiguous")

    @classmethod
    def affine(cls, lo, hi, slope, intercept) -> "PiecewiseAffine":
        return cls((Piece(Fraction(lo), Fraction(hi), Fraction(slope), Fraction(intercept)),))

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.pieces[0].lo, self.pieces[-1].hi

    @property
    def breakpoints(self) -> List[Fraction]:
        return [p.hi for p in self.pieces[:-1]]

    @property
    def slopes(self) -> List[Fraction]:
        return [p.slope for p in self.pieces]

    def __call__(self, r) -> Fraction:
        r = Fraction(r)
        lo, hi = self.domain
        if not lo <= r <= hi:
            raise PreconditionError(f"{r} lies outside the domain [{lo}, {hi}]")
        for piece in self.pieces:
            if r <= piece.hi:
                return piece(r)
        return self.pieces[-1](r)

    def __add__(self, other: "PiecewiseAffine") -> "PiecewiseAffine":
        if self.domain != other.domain:
            raise PreconditionError("sum of functions on different domains")
        cuts = sorted(set([self.domain[0], self.domain[1]] + self.breakpoints + other.breakpoints))
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = (lo + hi) / 2
            a = self._piece_at(mid)
            b = other._piece_at(mid)
            pieces.append(Piece(lo, hi, a.slope + b.slope, a.intercept + b.intercept))
        return PiecewiseAffine(tuple(_merge_pieces(pieces)))

    def _piece_at(self, r: Fraction) -> Piece:
        for piece in self.pieces:
            if piece.lo <= r <= piece.hi:
                return piece
        raise PreconditionError(f"{r} lies outside the domain")

    def is_continuous(self) -> bool:
        return all(a(a.hi) == b(b.lo) for a, b in zip(self.pieces, self.pieces[1:]))

    def is_convex(self) -> bool:
        s = self.slopes
        return self.is_continuous() and all(x <= y for x, y in zip(s, s[1:]))

    def is_nonincreasing(self) -> bool:
        return all(x <= 0 for x in self.slopes)

    def slopes_in_lattice(self, d: int, denominator: int = 1) -> bool:
        return all(in_slope_lattice(s, d, denominator) for s in self.slopes)

    def __str__(self) -> str:
        return "; ".join(f"[{p.lo}, {p.hi}]: {p.slope}*r + {p.intercept}" for p in self.pieces)


def in_slope_lattice(s: Fraction, d: int, denominator: int = 1) -> bool:
    """``s`` lies in ``(1/1)Z u ... u (1/d)Z`` after scaling by the tame denominator."""
    s = Fraction(s) * denominator
    return any((s * k).denominator == 1 for k in range(1, d + 1))


def _merge_pieces(pieces: Sequence[Piece]) -> List[Piece]:
    out: List[Piece] = []
    for piece in pieces:
        if out and out[-1].slope == piece.slope and out[-1].intercept == piece.intercept:
            last = out.pop()
            piece = Piece(last.lo, piece.hi, piece.slope, piece.intercept)
        out.append(piece)
    return out


def _line(a: Point, b: Point) -> Tuple[Fraction, Fraction]:
    slope = (b[1] - a[1]) / (b[0] - a[0])
    return slope, a[1] - slope * a[0]


def fit_piecewise(
    samples: Sequence[Point], d: int, denominator: int = 1, convex: bool = False
) -> PiecewiseAffine:
    """Exact piecewise-affine reconstruction of sampled values.

    Consecutive samples on a common line form one piece.  A single segment
    squeezed between two pieces whose lines meet strictly inside it is read
    as a hidden breakpoint at that intersection.  Every slope must lie in
    ``(1/1)Z u ... u (1/d)Z`` (scaled by the tame ``denominator``); with
    ``convex`` the slopes must also increase weakly.
    """
    pts = sorted((Fraction(r), Fraction(v)) for r, v in samples)
    if len(pts) < 2:
        raise PreconditionError("fitting needs at least two samples")
    if len({r for r, _ in pts}) != len(pts):
        raise PreconditionError("duplicate sample radii")
    # maximal runs of collinear consecutive samples
    runs: List[List[Point]] = [[pts[0], pts[1]]]
    for q in pts[2:]:
        run = runs[-1]
        if _line(run[-2], run[-1])[0] == _line(run[-1], q)[0]:
            run.append(q)
        else:
            runs.append([run[-1], q])
    # single-segment runs between two longer runs may hide a kink
    changed = True
    while changed:
        changed = False
        for idx in range(1, len(runs) - 1):
            mid = runs[idx]
            left, right = runs[idx - 1], runs[idx + 1]
            if len(mid) != 2 or len(left) < 3 or len(right) < 3:
                continue
            s1, c1 = _line(left[0], left[-1])
            s2, c2 = _line(right[0], right[-1])
            if s1 == s2:
                continue
            x = (c2 - c1) / (s1 - s2)
            if mid[0][0] < x < mid[1][0]:
                y = s1 * x + c1
                runs[idx - 1] = left + [(x, y)]
                runs[idx + 1] = [(x, y)] + right
                del runs[idx]
                changed = True
                break
    pieces = []
    for run in runs:
        s, c = _line(run[0], run[-1])
        pieces.append(Piece(run[0][0], run[-1][0], s, c))
    f = PiecewiseAffine(tuple(_merge_pieces(pieces)))
    for s in f.slopes:
        if not in_slope_lattice(s, d, denominator):
            raise SlopeOutsideLattice(f"slope {s} is outside (1/1)Z u ... u (1/{d})Z (denominator {denominator})")
    if convex and not f.is_convex():
        raise NonConvexSamples(f"samples violate convexity: slopes {f.slopes}")
    return f


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyTerm:
    """``scale * [coeff] * P^pval * pi^pi_power * monomial``.

    ``coeff`` lies in the residue base field and is lifted by Teichmuller;
    ``scale`` is an exact rational factor; ``pi_variant`` picks the Dwork pi.
    """

    coeff: object
    pval: Fraction
    mono: Monomial = ()
    pi_power: int = 0
    scale: Fraction = Fraction(1)
    pi_variant: int = 1

    def evaluate(self, ctx: FieldContext) -> Scalar:
        F = ctx.residue_field
        if F.is_zero(self.coeff) or self.scale == 0:
            return Scalar.zero(ctx)
        res = ResElem.monomial(F, self.coeff, self.mono)
        v = self.pval + sum((e * ctx.weight(n) for n, e in self.mono), Fraction(0))
        x = Scalar.lift(ctx, res, v)
        if self.pi_power:
            x = x * dwork_pi(ctx, self.pi_variant) ** self.pi_power
        if self.scale != 1:
            try:
                x = x.scale(Fraction(self.scale))
            except ValueError:
                # a unit denominator has an infinite p-adic expansion
                x = x * Scalar.from_fraction(ctx, Fraction(self.scale))
        return x


@dataclass(frozen=True)
class FamilyScalar:
    """A quotient of two finite sums of :class:`FamilyTerm` (denominator 1 when empty)."""

    num: Tuple[FamilyTerm, ...]
    den: Tuple[FamilyTerm, ...] = ()

    @classmethod
    def zero(cls) -> "FamilyScalar":
        return cls(())

    def is_zero(self) -> bool:
        return not self.num

    def evaluate(self, ctx: FieldContext) -> Scalar:
        acc = Scalar.zero(ctx)
        for t in self.num:
            acc = acc + t.evaluate(ctx)
        if not self.den:
            return acc
        d = Scalar.zero(ctx)
        for t in self.den:
            d = d + t.evaluate(ctx)
        return acc / d

    def variables(self) -> List[str]:
        return sorted({n for t in self.num + self.den for n, _ in t.mono})


@dataclass(frozen=True)
class FamilyModule:
    """Differential module over an annulus or disc in the radius variable.

    ``domain`` is the open interval of ``r = -log_p |t|`` on which the family
    is defined; ``disc`` records that the family extends over the centre
    ``t = 0`` (so ``r`` may grow without bound).  ``denominator`` is the tame
    exponent denominator ``e`` of ``t^(1/e)``.  ``frobenius`` declares a
    Frobenius structure, which certifies solvability.  ``window`` restricts
    the default sample radii (for instance to the visible range).
    """

    p: int
    k: int
    variables: Tuple[Tuple[str, Fraction], ...]
    derivations: Tuple[Derivation, ...]
    matrices: Tuple[Tuple[Tuple[FamilyScalar, ...], ...], ...]
    radius_var: str = "t"
    domain: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    disc: bool = False
    denominator: int = 1
    frobenius: bool = False
    default_rel: int = 8
    max_split_degree: int = 4
    seed: int = 0
    name: str = ""
    window: Optional[Tuple[Fraction, Fraction]] = None

    @property
    def rank(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0

    def context(self, r) -> FieldContext:
        r = Fraction(r)
        lo, hi = self.domain
        if not (lo < r < hi):
            raise PreconditionError(f"radius parameter {r} outside the domain ({lo}, {hi})")
        vs = [(n, w) for n, w in self.variables if n != self.radius_var] + [(self.radius_var, r)]
        return FieldContext(
            self.p, self.k, vs, default_rel=self.default_rel, max_split_degree=self.max_split_degree, seed=self.seed
        )

    def boundary_context(self) -> FieldContext:
        vs = [(n, w) for n, w in self.variables if n != self.radius_var] + [(self.radius_var, Fraction(0))]
        return FieldContext(
            self.p,
            self.k,
            vs,
            default_rel=self.default_rel,
            boundary_var=self.radius_var,
            max_split_degree=self.max_split_degree,
            seed=self.seed,
        )

    def _module(self, ctx: FieldContext) -> FiberModule:
        mats = [[[e.evaluate(ctx) for e in row] for row in N] for N in self.matrices]
        return FiberModule(ctx, list(self.derivations), mats)

    def fiber(self, r) -> FiberModule:
        return self._module(self.context(r))

    def boundary_fiber(self) -> FiberModule:
        return self._module(self.boundary_context())

    def default_radii(self, samples: int = 4) -> List[Fraction]:
        lo, hi = self.window if self.window is not None else self.domain
        return [lo + (hi - lo) * Fraction(i, samples + 1) for i in range(1, samples + 1)]

    def direction_index(self, j) -> Derivation:
        for D in self.derivations:
            if D.index == j:
                return D
        raise PreconditionError(f"no derivation with index {j}")


# ---------------------------------------------------------------------------
# sampling and fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusSample:
    """Intrinsic radii at one radius parameter; ``direction`` is ``None`` for the aggregate."""

    r: Fraction
    direction: Optional[int]
    intrinsic: Tuple[Fraction, ...]
    per_direction: Tuple[RadiiMultiset, ...] = ()


def _tagged(exc: RefradError, r: Fraction) -> RefradError:
    try:
        new = type(exc)(f"at r = {r}: {exc}")
    except TypeError:
        return exc
    return new


def sample_radii(M: FamilyModule, radii: Sequence, direction: Optional[int] = None) -> List[RadiusSample]:
    """Fiber computations at each radius parameter (all directions when ``direction`` is None)."""
    out = []
    for r in radii:
        r = Fraction(r)
        try:
            V = M.fiber(r)
            if direction is None:
                per = tuple(V.subsidiary_radii(D.index) for D in V.derivations)
                agg = tuple(max(col) for col in zip(*(m.intrinsic for m in per)))
                out.append(RadiusSample(r, None, agg, per))
            else:
                m = V.subsidiary_radii(direction)
                out.append(RadiusSample(r, direction, m.intrinsic, (m,)))
        except RefradError as exc:
            raise _tagged(exc, r) from exc
    return out


@dataclass(frozen=True)
class RadiusFunctions:
    """Fitted ``f_1..f_d`` and partial sums ``F_1..F_d``."""

    f: Tuple[PiecewiseAffine, ...]
    F: Tuple[PiecewiseAffine, ...]
    samples: Tuple[RadiusSample, ...]


def fit_family(
    M: FamilyModule, radii: Optional[Sequence] = None, direction: Optional[int] = None, samples: int = 4
) -> RadiusFunctions:
    """Sample, fit and certify the radius functions of a family.

    Certificates: continuity, convexity of each ``F_i``, slope lattice for
    every ``f_i`` and ``F_i``, and nonpositive slopes of ``F_i`` on discs.
    """
    radii = M.default_radii(samples) if radii is None else [Fraction(r) for r in radii]
    rows = sample_radii(M, radii, direction)
    d = M.rank
    fs = []
    for i in range(d):
        fs.append(fit_piecewise([(row.r, row.intrinsic[i]) for row in rows], d, M.denominator))
    Fs = []
    for i in range(d):
        pts = [(row.r, sum(row.intrinsic[: i + 1], Fraction(0))) for row in rows]
        Fi = fit_piecewise(pts, d, M.denominator, convex=True)
        if not Fi.is_continuous():
            raise InvariantViolation(f"F_{i + 1} is not continuous")
        if M.disc and (direction is None or M.direction_index(direction).var != M.radius_var):
            if not Fi.is_nonincreasing():
                raise InvariantViolation(f"F_{i + 1} has a positive slope on a disc: {Fi.slopes}")
        Fs.append(Fi)
    return RadiusFunctions(tuple(fs), tuple(Fs), tuple(rows))


def dichotomy_holds(rows: Sequence[RadiusSample], j: int) -> bool:
    """Either ``IR_{d_j} = IR`` at every sample or at none (pure directions only)."""
    flags = []
    for row in rows:
        per = {m.direction: m for m in row.per_direction}
        if j not in per:
            raise PreconditionError(f"direction {j} was not sampled")
        flags.append(per[j].intrinsic == row.intrinsic)
    return all(flags) or not any(flags)


def to_csv(fns: RadiusFunctions) -> str:
    """Columns ``r_num, r_den, i, f_num, f_den`` for every sample."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r_num", "r_den", "i", "f_num", "f_den"])
    for row in fns.samples:
        for i, v in enumerate(row.intrinsic, start=1):
            w.writerow([row.r.numerator, row.r.denominator, i, v.numerator, v.denominator])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# breaks near the outer boundary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BreakDecomposition:
    """Blocks ``(rank, break)``, Swan and (when a ``t``-derivation exists) Artin conductors."""

    blocks: Tuple[Tuple[int, Fraction], ...]
    swan: int
    artin: Optional[int]
    nonlog_blocks: Tuple[Tuple[int, Fraction], ...] = ()
    direction_breaks: Tuple[Tuple[int, Fraction], ...] = ()
    certificate: str = "empirical"

    @property
    def log_break(self) -> Fraction:
        return max(b for _, b in self.blocks)


def _first_slopes(fs: Sequence[PiecewiseAffine], what: str) -> List[Fraction]:
    out = []
    for i, f in enumerate(fs, start=1):
        piece = f.pieces[0]
        if piece.intercept != 0:
            raise NotSolvable(f"{what} f_{i} does not tend to 0 at the boundary (intercept {piece.intercept})")
        out.append(piece.slope)
    return out


def _blocks(slopes: Sequence[Fraction]) -> List[Tuple[int, Fraction]]:
    counts = Counter(slopes)
    out = []
    for b, m in sorted(counts.items(), reverse=True):
        if (b * m).denominator != 1:
            raise InvariantViolation(f"break {b} with multiplicity {m} has non-integral product")
        if b < 0:
            raise InvariantViolation(f"negative break {b}")
        out.append((m, b))
    return out


def break_decomposition(M: FamilyModule, radii: Optional[Sequence] = None, samples: int = 4) -> BreakDecomposition:
    """Differential breaks read from the slopes of ``f_i`` at the boundary ``r -> 0+``.

    The first fitted piece of each ``f_i`` must vanish at ``r = 0``
    (solvability); its slope is the break.  Extrinsic (nonlog) breaks use the
    radius of ``d/dt`` itself, ``f^(0) + r``, in the minimum over directions.
    """
    fns = fit_family(M, radii, None, samples)
    slopes = _first_slopes(fns.f, "intrinsic")
    blocks = _blocks(slopes)
    swan = sum(b * m for m, b in blocks)
    if swan.denominator != 1:
        raise InvariantViolation(f"Swan conductor {swan} is not an integer")
    # per-direction extrinsic breaks and the nonlog aggregate
    tdirs = [D for D in M.derivations if D.var == M.radius_var and D.level == 0]
    rows = fns.samples
    per_dir: Dict[int, List[Point]] = {}
    ext_rows = []
    for row in rows:
        cols = []
        for m in row.per_direction:
            shift = row.r if any(D.index == m.direction for D in tdirs) else Fraction(0)
            vals = tuple(x + shift for x in m.intrinsic)
            cols.append(vals)
            per_dir.setdefault(m.direction, []).append((row.r, vals[0]))
        ext_rows.append((row.r, tuple(max(c) for c in zip(*cols))))
    dir_breaks = []
    for j, pts in sorted(per_dir.items()):
        f = fit_piecewise(pts, M.rank, M.denominator)
        if f.pieces[0].intercept == 0:
            dir_breaks.append((j, f.pieces[0].slope))
    artin = None
    nonlog: List[Tuple[int, Fraction]] = []
    if tdirs:
        # nonlog breaks are reported only when the extrinsic fit reaches 0 at the boundary
        fhat = [fit_piecewise([(r, v[i]) for r, v in ext_rows], M.rank, M.denominator) for i in range(M.rank)]
        if all(f.pieces[0].intercept == 0 for f in fhat):
            nonlog = _blocks([f.pieces[0].slope for f in fhat])
            a = sum(b * m for m, b in nonlog)
            if a.denominator != 1:
                raise InvariantViolation(f"Artin conductor {a} is not an integer")
            artin = int(a)
    return BreakDecomposition(
        tuple(blocks),
        int(swan),
        artin,
        tuple(nonlog),
        tuple(dir_breaks),
        "frobenius" if M.frobenius else "empirical",
    )


# ---------------------------------------------------------------------------
# boundary link
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryReport:
    """Both sides of the boundary link along one direction."""

    direction: int
    refined: Tuple[RefinedDatum, ...]
    valuations: Tuple[Fraction, ...]
    negated_slopes: Tuple[Fraction, ...]

    @property
    def holds(self) -> bool:
        return sorted(self.valuations) == sorted(self.negated_slopes)


def boundary_link(M: FamilyModule, j: int, radii: Optional[Sequence] = None, samples: int = 4) -> BoundaryReport:
    """Compare ``v_s`` of the boundary refined radii with the slopes of ``f_i^(j)`` at ``r = 0``.

    Both sides use intrinsic normalizations; for ``d/dt`` the extrinsic
    versions differ from them by the same shift on both sides.
    """
    E = M.boundary_fiber()
    try:
        data = E.refined_radii(j)
    except NotPure as exc:
        raise NotPureAtBoundary(str(exc)) from exc
    except PreconditionError as exc:
        raise NotPureAtBoundary(f"no refined radii at the boundary: {exc}") from exc
    vals = tuple(vs_valuation(d.theta, E.ctx) for d in data)
    fns = fit_family(M, radii, j, samples)
    neg = tuple(-f.pieces[0].slope for f in fns.f)
    return BoundaryReport(j, tuple(data), vals, neg)


# ---------------------------------------------------------------------------
# fixture families
# ---------------------------------------------------------------------------


def pure_family(
    p: int,
    n: int,
    a,
    b,
    coeff=1,
    k: int = 1,
    direction: str = "X",
    domain: Tuple = (Fraction(0), Fraction(1)),
    disc: bool = False,
    denominator: int = 1,
    default_rel: int = 8,
) -> FamilyModule:
    """The cyclic family ``d e_i = e_(i+1)``, ``d e_d = x t^(da) u^(-d) e_1`` with ``d = p^n``.

    ``x`` lifts ``coeff^d`` at valuation ``d*b``.  Along ``d/dX`` (index 1,
    ``X`` of weight 0) the intrinsic radius is ``1/(p-1) - (a r + b)`` with
    refined radius ``coeff * t^a``; along ``d/dt`` (index 0) the entry is
    ``x t^(d(a-1))`` with the same intrinsic answer.
    """
    a, b = Fraction(a), Fraction(b)
    d = p ** n
    F = FieldContext(p, k).residue_field
    c = F.from_int(coeff) if isinstance(coeff, int) else coeff
    cd = F.pow(c, d)
    if direction == "X":
        mono: Monomial = tuple(sorted((("X", Fraction(-d)), ("t", d * a))))
        D = Derivation("X", 0, 1)
        variables = (("X", Fraction(0)), ("t", Fraction(0)))
    elif direction == "t":
        mono = (("t", d * (a - 1)),)
        D = Derivation("t", 0, 0)
        variables = (("t", Fraction(0)),)
    else:
        raise PreconditionError(f"unknown direction {direction!r}")
    mono = tuple((v, e) for v, e in mono if e != 0)
    one = FamilyScalar((FamilyTerm(F.one(), Fraction(0)),))
    zero = FamilyScalar.zero()
    N = [[zero] * d for _ in range(d)]
    for i in range(d - 1):
        N[i + 1][i] = one
    N[0][d - 1] = FamilyScalar((FamilyTerm(cd, d * b, mono),))
    return FamilyModule(
        p,
        k,
        variables,
        (D,),
        (tuple(tuple(row) for row in N),),
        domain=(Fraction(domain[0]), Fraction(domain[1])),
        disc=disc,
        denominator=denominator,
        default_rel=default_rel,
        name=f"L(p={p}, n={n}, a={a}, b={b}, {direction})",
    )


def family_direct_sum(A: FamilyModule, B: FamilyModule) -> FamilyModule:
    """Block-diagonal sum of two families over the same variables and derivations."""
    if (A.p, A.k, A.derivations, A.radius_var) != (B.p, B.k, B.derivations, B.radius_var):
        raise PreconditionError("direct sums need the same field and derivations")
    variables = tuple(dict(list(A.variables) + list(B.variables)).items())
    zero = FamilyScalar.zero()
    mats = []
    for NA, NB in zip(A.matrices, B.matrices):
        rows = [tuple(row) + (zero,) * B.rank for row in NA]
        rows += [(zero,) * A.rank + tuple(row) for row in NB]
        mats.append(tuple(rows))
    domain = (max(A.domain[0], B.domain[0]), min(A.domain[1], B.domain[1]))
    window = None
    if A.window is not None or B.window is not None:
        wa = A.window or A.domain
        wb = B.window or B.domain
        window = (max(wa[0], wb[0]), min(wa[1], wb[1]))
        if window[0] >= window[1]:
            raise PreconditionError("the sample windows do not overlap")
    return FamilyModule(
        A.p,
        A.k,
        variables,
        A.derivations,
        tuple(mats),
        A.radius_var,
        domain,
        A.disc and B.disc,
        lcm(A.denominator, B.denominator),
        A.frobenius and B.frobenius,
        max(A.default_rel, B.default_rel),
        A.max_split_degree,
        A.seed,
        f"{A.name} + {B.name}",
        window,
    )
