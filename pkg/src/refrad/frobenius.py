"""Frobenius pullback and pushforward along a derivation.

Radii are handled in the ``-log_p`` scale of intrinsic radii: ``ir = 0`` is
the maximal radius 1 and ``ir = 1/(p-1)`` is the critical radius ``omega``.
Refined intrinsic data are residues of a given grade ``g`` in the ``P^s``
basis, where ``P^1 = p`` reduces to 1, so the scalar ``1/p`` never appears in
residue formulas.

The explicit descendant of a matrix module is built on the basis
``u^k e_l`` (``0 <= k < p``) over the subfield of ``p``-th powers of the
parameter ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    CharZero,
    IndexOutOfRange,
    InvariantViolation,
    NotCritical,
    PreconditionError,
)
from .newton import artin_schreier_solve
from .ore import Derivation, Matrix, zero_matrix
from .residue import ResElem, mono_exp, mono_mul
from .scalar import FieldContext, Scalar

Radius = Fraction


def _require_p(p: int) -> None:
    if not p:
        raise CharZero("Frobenius transforms need residue characteristic p > 0")


# ---------------------------------------------------------------------------
# multiset laws
# ---------------------------------------------------------------------------


def pushforward_radii(radii: Sequence[Fraction], p: int) -> List[Fraction]:
    """Intrinsic radii of the descendant, in the ``-log_p`` scale, sorted descending."""
    _require_p(p)
    crit = Fraction(1, p - 1)
    out: List[Fraction] = []
    for r in radii:
        r = Fraction(r)
        if r < crit:
            out.append(p * r)
            out.extend([Fraction(p, p - 1)] * (p - 1))
        else:
            out.extend([r + 1] * p)
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class RadiusInterval:
    """A ``-log_p`` intrinsic radius known to lie in ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def pullback_radii(radii: Sequence[Fraction], p: int) -> List[RadiusInterval]:
    """Intrinsic radii of the pullback.

    Off the radius ``p^(-p/(p-1))`` the law is exact; at that radius only the
    lower bound on the radius is known, so an interval is reported.
    """
    _require_p(p)
    edge = Fraction(p, p - 1)
    out = []
    for r in radii:
        r = Fraction(r)
        if r == edge:
            out.append(RadiusInterval(Fraction(0), Fraction(1, p - 1)))
        elif r < edge:
            out.append(RadiusInterval(r / p, r / p))
        else:
            out.append(RadiusInterval(r - 1, r - 1))
    return sorted(out, key=lambda iv: (iv.hi, iv.lo), reverse=True)


def decode_pushforward(
    descendant: Sequence[Fraction], visible: Sequence[Fraction], unknown: int, p: int
) -> List[Fraction]:
    """Recover nonvisible radii of ``V`` from the radii of its descendant.

    ``visible`` are the radii of ``V`` already known (strictly beyond the
    critical radius) and ``unknown`` counts the remaining ones, which lie in
    ``[0, 1/(p-1)]``.
    """
    _require_p(p)
    pool = sorted((Fraction(x) for x in descendant), reverse=True)

    def take(x: Fraction, count: int) -> None:
        for _ in range(count):
            try:
                pool.remove(x)
            except ValueError:
                raise InvariantViolation(
                    f"descendant radii {descendant} are inconsistent with the pushforward law"
                ) from None

    for r in visible:
        take(Fraction(r) + 1, p)
    take(Fraction(p, p - 1), (p - 1) * unknown)
    if len(pool) != unknown:
        raise InvariantViolation("descendant rank does not match the pushforward law")
    return sorted((x / p for x in pool), reverse=True)


# ---------------------------------------------------------------------------
# refined transforms (intrinsic data)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedResidue:
    """A refined intrinsic radius: residue ``value`` of grade ``grade``."""

    grade: Fraction
    value: ResElem


def antecedent_refined(data: Sequence[GradedResidue], p: int) -> List[GradedResidue]:
    """Refined radii of ``V`` from those of its antecedent: ``theta' -> -(p theta')^(1/p)``."""
    _require_p(p)
    out = []
    for d in data:
        if d.value.is_zero():
            raise InvariantViolation("refined radii are nonzero")
        out.append(GradedResidue((d.grade + 1) / p, -(d.value.pth_root())))
    return out


def pullback_refined(data: Sequence[GradedResidue], p: int) -> List[GradedResidue]:
    """Inverse of :func:`antecedent_refined`: ``theta -> (-theta)^p / p``."""
    _require_p(p)
    out = []
    for d in data:
        if d.value.is_zero():
            raise InvariantViolation("refined radii are nonzero")
        out.append(GradedResidue(p * d.grade - 1, (-d.value).pth_power()))
    return out


def pushforward_refined_visible(data: Sequence[GradedResidue], p: int) -> List[GradedResidue]:
    """Beyond the critical radius the descendant carries ``theta/p`` with multiplicity ``p``."""
    _require_p(p)
    out = []
    for d in data:
        if d.grade >= 0:
            raise PreconditionError("the visible pushforward law needs a radius below omega")
        out.extend([GradedResidue(d.grade - 1, d.value)] * p)
    return out


def pushforward_refined_critical(datum: GradedResidue, ctx: FieldContext) -> List[GradedResidue]:
    """The ``p``-tuple ``(y/p, (y+1)/p, ...)`` with ``(y^p - y)^(1/p) = theta``."""
    p = ctx.p
    _require_p(p)
    if datum.value.is_zero():
        raise InvariantViolation("refined radii are nonzero")
    if datum.grade != 0:
        raise NotCritical(f"grade {datum.grade} is not the critical grade 0")
    E, y = artin_schreier_solve(datum.value.pth_power(), ctx)
    return [GradedResidue(Fraction(-1), y + ResElem.const(y.field, y.field.from_int(i))) for i in range(p)]


def antecedent_refined_critical(data: Sequence[GradedResidue], p: int) -> List[GradedResidue]:
    """Group grade ``-1`` descendant data into ``y + F_p`` cosets and map each to ``(y^p - y)^(1/p)``."""
    _require_p(p)
    pool = [d.value for d in data]
    if any(d.grade != -1 for d in data):
        raise NotCritical("critical descendant data live in grade -1")
    out = []
    while pool:
        y = pool[0]
        coset = [y + ResElem.const(y.field, y.field.from_int(i)) for i in range(p)]
        for c in coset:
            for idx, z in enumerate(pool):
                if z == c:
                    del pool[idx]
                    break
            else:
                raise InvariantViolation("critical descendant data do not group into Artin-Schreier cosets")
        theta = (y.pth_power() - y).pth_root()
        if theta.is_zero():
            raise InvariantViolation("refined radii are nonzero")
        out.append(GradedResidue(Fraction(0), theta))
    return out


# ---------------------------------------------------------------------------
# breaks by p-basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BreakVector:
    """Breaks ``(b_0, b_1, ..., b_m)``; ``upper_bound`` marks entries known only as bounds."""

    values: Tuple[Fraction, ...]
    upper_bound: Tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.upper_bound:
            object.__setattr__(self, "upper_bound", (False,) * len(self.values))

    @property
    def log_break(self) -> Fraction:
        return max([self.values[0] - 1] + list(self.values[1:]))

    @property
    def nonlog_break(self) -> Fraction:
        return max(self.values)


def break_transforms(
    breaks: Union[BreakVector, Sequence], op: str, j0: Optional[int] = None, e: Optional[int] = None, p: Optional[int] = None
) -> BreakVector:
    """Transform a break vector under rotation, p-th root, forgetting or a tame base change."""
    if not isinstance(breaks, BreakVector):
        breaks = BreakVector(tuple(Fraction(b) for b in breaks))
    b = list(breaks.values)
    flags = list(breaks.upper_bound)
    if any(x < 0 for x in b):
        raise PreconditionError("breaks are nonnegative")
    m = len(b) - 1

    def check(j: Optional[int], lo: int = 0) -> int:
        if j is None or not (lo <= j <= m):
            raise IndexOutOfRange(f"index {j} outside {lo}..{m}")
        return j

    if op == "rotate":
        j = check(j0, 1)
        out = list(b)
        out[0] = max(b[0], b[j])
        out.append(b[j] - 1)
        return BreakVector(tuple(out), tuple(flags + [flags[j]]))
    if op == "pth_root":
        if not p:
            raise CharZero("pth_root needs p > 0")
        j = check(j0)
        out = list(b)
        out[j] = b[j] / p
        return BreakVector(tuple(out), tuple(flags))
    if op == "forget":
        j = check(j0, 1)
        return BreakVector(tuple(b[:j] + b[j + 1:]), tuple(flags[:j] + flags[j + 1:]))
    if op == "saito":
        if e is None or e < 1:
            raise PreconditionError("saito needs a ramification index e >= 1")
        if not p:
            raise CharZero("saito needs p > 0")
        tame = e % p != 0
        out = [e * b[0] - (e - 1)] + [e * x for x in b[1:]] + [e * b[0] - e]
        fl = [flags[0] or not tame] + flags[1:] + [flags[0] or not tame]
        return BreakVector(tuple(Fraction(x) for x in out), tuple(fl))
    raise PreconditionError(f"unknown break transform {op!r}")


# ---------------------------------------------------------------------------
# explicit descendant of a matrix module
# ---------------------------------------------------------------------------


def _exponent_class(e: Fraction, step: int, p: int) -> int:
    q = Fraction(e) / step
    if q.denominator % p == 0:
        raise PreconditionError(f"exponent {e} is not in p^n Z_(p)")
    return (q.numerator * pow(q.denominator, -1, p)) % p


def split_by_class(x: Scalar, D: Derivation) -> Dict[int, Scalar]:
    """Write ``x = sum_r u^r A_r`` with ``A_r`` in the subfield of ``p``-th powers of ``u``."""
    ctx = x.ctx
    p = ctx.p
    x = x._normalized()
    if x.den is not None:
        raise PreconditionError("Frobenius descent needs series entries")
    step = D.step(ctx)
    parts: Dict[int, dict] = {}
    for (q, mono), c in x.num.items():
        e = mono_exp(mono, D.var)
        r = _exponent_class(e, step, p)
        key = (q, mono_mul(mono, ((D.var, Fraction(-r * step)),)))
        parts.setdefault(r, {})[key] = c
    out = {}
    for r, terms in parts.items():
        out[r] = Scalar(ctx, terms, x.ncap)
    if not out:
        out[0] = Scalar(ctx, {}, x.ncap)
    return out


def descendant(N: Matrix, D: Derivation) -> Tuple[Matrix, Derivation]:
    """Matrix of ``d' = d / (p u^(p-1))`` on the basis ``u^k e_l`` of the descendant."""
    ctx = N[0][0].ctx
    p = ctx.p
    _require_p(p)
    d = len(N)
    step = D.step(ctx)
    Dn = D.descend()
    Uinv = Scalar.var(ctx, D.var, -step * p)
    inv_p = Fraction(1, p)
    M = zero_matrix(ctx, p * d)
    for i in range(d):
        for l in range(d):
            parts = split_by_class(N[i][l], D)
            for r, A in parts.items():
                if A.is_exact_zero():
                    continue
                A = A.scale(inv_p)
                for k in range(p):
                    s = k + 1 - p + r
                    entry = A * Uinv if s < 0 else A
                    row = (s % p) * d + i
                    col = k * d + l
                    M[row][col] = M[row][col] + entry
    for k in range(1, p):
        for l in range(d):
            idx = k * d + l
            M[idx][idx] = M[idx][idx] + Uinv.scale(Fraction(k, p))
    return M, Dn
