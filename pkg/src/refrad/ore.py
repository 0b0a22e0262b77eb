"""Derivations of rational type, twisted polynomials and cyclic vectors.

A :class:`Derivation` acts on scalars as ``d/du`` where the parameter is
``u = X^(p^n)`` for a context variable ``X``.  Level ``n > 0`` is the
derivation left over after ``n`` Frobenius descents along ``X``.

Matrices follow one convention throughout: ``N[i][l]`` is the coefficient of
``e_i`` in ``d(e_l)``, so a coordinate vector ``w`` is differentiated as
``d(w) + N w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import CyclicSearchExhausted, DerivationMismatch, PrecisionLoss
from .residue import ResElem
from .scalar import FieldContext, Scalar

Matrix = List[List[Scalar]]
Vector = List[Scalar]


@dataclass(frozen=True)
class Derivation:
    """``d/du`` with parameter ``u = var^(p^level)``; ``index`` labels the direction.

    ``subfield`` records that the scalars it acts on only involve exponents of
    ``var`` in ``p^level Z`` (true after Frobenius descent), which keeps
    differentiation free of precision loss.
    """

    var: str
    level: int = 0
    index: int = 0
    subfield: bool = False

    def apply(self, x: Scalar) -> Scalar:
        return x.deriv(self.var, self.level, self.subfield)

    def step(self, ctx: FieldContext) -> int:
        return ctx.p ** self.level if ctx.p else 1

    def parameter(self, ctx: FieldContext) -> Scalar:
        return Scalar.var(ctx, self.var, self.step(ctx))

    def parameter_weight(self, ctx: FieldContext) -> Fraction:
        return self.step(ctx) * ctx.weight(self.var)

    def parameter_residue(self, ctx: FieldContext) -> ResElem:
        return ResElem.var(ctx.residue_field, self.var, self.step(ctx))

    def norm_valuation(self, ctx: FieldContext) -> Fraction:
        """``-log |d|`` for the operator norm ``|d| = |u|^(-1)``."""
        return -self.parameter_weight(ctx)

    def descend(self) -> "Derivation":
        return Derivation(self.var, self.level + 1, self.index, True)

    def __str__(self) -> str:
        if self.level:
            return f"d/d({self.var}^(p^{self.level}))"
        return f"d/d{self.var}"


# ---------------------------------------------------------------------------
# matrices of scalars
# ---------------------------------------------------------------------------


def zero_matrix(ctx: FieldContext, rows: int, cols: Optional[int] = None) -> Matrix:
    cols = rows if cols is None else cols
    return [[Scalar.zero(ctx) for _ in range(cols)] for _ in range(rows)]


def identity_matrix(ctx: FieldContext, d: int) -> Matrix:
    m = zero_matrix(ctx, d)
    for i in range(d):
        m[i][i] = Scalar.one(ctx)
    return m


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    ctx = A[0][0].ctx
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Scalar.zero(ctx)
            for l in range(k):
                if A[i][l].is_exact_zero() or B[l][j].is_exact_zero():
                    continue
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg_transpose(A: Matrix) -> Matrix:
    d = len(A)
    return [[-A[j][i] for j in range(d)] for i in range(d)]


def mat_apply(A: Matrix, w: Vector) -> Vector:
    ctx = w[0].ctx
    out = []
    for row in A:
        acc = Scalar.zero(ctx)
        for a, x in zip(row, w):
            if a.is_exact_zero() or x.is_exact_zero():
                continue
            acc = acc + a * x
        out.append(acc)
    return out


def mat_deriv(A: Matrix, D: Derivation) -> Matrix:
    return [[D.apply(a) for a in row] for row in A]


def kron(A: Matrix, B: Matrix) -> Matrix:
    ra, rb = len(A), len(B)
    return [[A[i // rb][j // rb] * B[i % rb][j % rb] for j in range(ra * rb)] for i in range(ra * rb)]


def differentiate_vector(N: Matrix, D: Derivation, w: Vector) -> Vector:
    """Coordinates of ``d(sum w_l e_l)``."""
    Nw = mat_apply(N, w)
    return [D.apply(x) + y for x, y in zip(w, Nw)]


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    ctx = blocks[0][0][0].ctx
    d = sum(len(b) for b in blocks)
    out = zero_matrix(ctx, d)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def solve_linear(W: Matrix, rhs: Vector) -> Optional[Vector]:
    """Solve ``W a = rhs`` by Gaussian elimination; ``None`` if ``W`` looks singular.

    Pivots are chosen among entries of minimal valuation whose leading part
    is a single monomial (so they invert as series); failing that, any entry
    of minimal valuation is accepted.
    """
    d = len(W)
    A = [list(row) + [r] for row, r in zip(W, rhs)]
    ctx = rhs[0].ctx
    for col in range(d):
        best = None
        for r in range(col, d):
            x = A[r][col]
            v = x.valuation()
            if v is None:
                continue
            good = _monomial_lead(x)
            key = (not good, v)
            if best is None or key < best[0]:
                best = (key, r)
        if best is None:
            return None
        r = best[1]
        A[col], A[r] = A[r], A[col]
        piv = A[col][col]
        try:
            inv = piv.inverse()
        except PrecisionLoss:
            return None
        A[col] = [x * inv if not x.is_exact_zero() else x for x in A[col]]
        for r2 in range(d):
            if r2 == col:
                continue
            f = A[r2][col]
            if f.is_exact_zero():
                continue
            A[r2] = [a - f * b if not b.is_exact_zero() else a for a, b in zip(A[r2], A[col])]
            A[r2][col] = Scalar.zero(ctx)
    return [A[i][d] for i in range(d)]


def _monomial_lead(x: Scalar) -> bool:
    if x.den is not None:
        return False
    v = x.valuation()
    from .scalar import _tval

    return sum(1 for k, c in x.num.items() if _tval(x.ctx, k, c) == v) == 1


# ---------------------------------------------------------------------------
# twisted polynomials
# ---------------------------------------------------------------------------


class TwistedPoly:
    """``sum coeffs[i] T^i`` in the ring with ``T a = a T + d(a)``."""

    __slots__ = ("ctx", "derivation", "coeffs")

    def __init__(self, ctx: FieldContext, derivation: Derivation, coeffs: Sequence[Scalar]):
        self.ctx = ctx
        self.derivation = derivation
        cs = list(coeffs)
        while cs and cs[-1].is_exact_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def T(cls, ctx: FieldContext, derivation: Derivation) -> "TwistedPoly":
        return cls(ctx, derivation, [Scalar.zero(ctx), Scalar.one(ctx)])

    @classmethod
    def constant(cls, ctx: FieldContext, derivation: Derivation, a: Scalar) -> "TwistedPoly":
        return cls(ctx, derivation, [a])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> Scalar:
        return self.coeffs[-1]

    def _check(self, other: "TwistedPoly") -> None:
        if self.derivation != other.derivation:
            raise DerivationMismatch(f"{self.derivation} vs {other.derivation}")

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = Scalar.zero(self.ctx)
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return TwistedPoly(self.ctx, self.derivation, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> "TwistedPoly":
        return TwistedPoly(self.ctx, self.derivation, [-c for c in self.coeffs])

    def __sub__(self, other: "TwistedPoly") -> "TwistedPoly":
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        return ore_mul(self, other)

    def left_T(self) -> "TwistedPoly":
        """``T * self``."""
        D = self.derivation
        z = Scalar.zero(self.ctx)
        out = [z] * (len(self.coeffs) + 1)
        for j, c in enumerate(self.coeffs):
            out[j + 1] = out[j + 1] + c
            out[j] = out[j] + D.apply(c)
        return TwistedPoly(self.ctx, D, out)

    def scale_left(self, a: Scalar) -> "TwistedPoly":
        return TwistedPoly(self.ctx, self.derivation, [a * c for c in self.coeffs])

    def shift(self, k: int) -> "TwistedPoly":
        """``self * T^k`` (right multiplication by ``T`` only shifts)."""
        return TwistedPoly(self.ctx, self.derivation, [Scalar.zero(self.ctx)] * k + self.coeffs)

    def valuations(self) -> List[Optional[Fraction]]:
        return [c.valuation() for c in self.coeffs]

    def __repr__(self) -> str:
        return "TwistedPoly(" + " + ".join(f"[{c}]T^{i}" for i, c in enumerate(self.coeffs)) + ")"


def ore_mul(P: TwistedPoly, Q: TwistedPoly) -> TwistedPoly:
    """Product in the twisted polynomial ring."""
    P._check(Q)
    ctx = P.ctx
    acc = TwistedPoly(ctx, P.derivation, [])
    power = Q  # T^i * Q
    for i, a in enumerate(P.coeffs):
        if i:
            power = power.left_T()
        if a.is_exact_zero():
            continue
        acc = acc + power.scale_left(a)
    return acc


def right_divmod(P: TwistedPoly, D: TwistedPoly) -> Tuple[TwistedPoly, TwistedPoly]:
    """``P = Q * D + R`` with ``deg R < deg D`` for monic ``D``."""
    P._check(D)
    ctx = P.ctx
    d = D.degree
    if d < 0:
        raise ZeroDivisionError("division by the zero twisted polynomial")
    one = Scalar.one(ctx)
    if not (D.lead() - one).is_zero():
        raise ValueError("right division is implemented for monic divisors only")
    Q = TwistedPoly(ctx, P.derivation, [])
    R = P
    while R.degree >= d:
        a = R.lead()
        k = R.degree - d
        term = TwistedPoly(ctx, P.derivation, [Scalar.zero(ctx)] * k + [a])
        Q = Q + term
        R = R - ore_mul(term, D)
        # the leading coefficient cancels up to precision
        R = TwistedPoly(ctx, P.derivation, R.coeffs[: k + d])
    return Q, R


def companion(P: TwistedPoly) -> Matrix:
    """Matrix of ``d`` on the basis ``1, T, ..., T^(d-1)`` of ``K{T}/K{T}P`` (``P`` monic)."""
    ctx = P.ctx
    d = P.degree
    N = zero_matrix(ctx, d)
    for i in range(d - 1):
        N[i + 1][i] = Scalar.one(ctx)
    for i in range(d):
        N[i][d - 1] = -P.coeffs[i]
    return N


def krylov(N: Matrix, D: Derivation, v: Vector, count: int) -> List[Vector]:
    out = [v]
    for _ in range(count - 1):
        out.append(differentiate_vector(N, D, out[-1]))
    return out


def annihilator(N: Matrix, D: Derivation, v: Vector) -> Optional[TwistedPoly]:
    """Monic ``P`` of degree ``rank`` with ``P(d) v = 0``, or ``None`` if ``v`` is not cyclic."""
    d = len(N)
    ctx = v[0].ctx
    ws = krylov(N, D, v, d + 1)
    W = [[ws[j][i] for j in range(d)] for i in range(d)]
    a = solve_linear(W, [-x for x in ws[d]])
    if a is None:
        return None
    return TwistedPoly(ctx, D, a + [Scalar.one(ctx)])


def cyclic_vector(N: Matrix, D: Derivation, attempts: int = 12) -> Tuple[Vector, TwistedPoly]:
    """A cyclic vector of the module with matrix ``N`` and its monic twisted polynomial.

    Basis vectors are tried first, then ``sum c_i u^i e_i`` with small
    integer ``c_i`` where ``u`` is the derivation parameter.
    """
    d = len(N)
    ctx = N[0][0].ctx
    zero, one = Scalar.zero(ctx), Scalar.one(ctx)
    candidates: List[Vector] = []
    for i in range(d):
        candidates.append([one if l == i else zero for l in range(d)])
    u = D.parameter(ctx)
    for c in range(1, attempts + 1):
        vec = []
        upow = one
        for i in range(d):
            vec.append(upow.scale((c + i) % 5 + 1) if i % 2 == 0 or c % 2 else upow.scale(c + i))
            upow = upow * u
        candidates.append(vec)
    for cand in candidates[: d + attempts]:
        P = annihilator(N, D, cand)
        if P is not None:
            return cand, P
    raise CyclicSearchExhausted(f"no cyclic vector found after {len(candidates)} attempts")
