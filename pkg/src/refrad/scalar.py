"""Elements of a complete nonarchimedean field as truncated leading-term expansions.

A :class:`FieldContext` fixes the residue characteristic ``p`` (prime or 0),
the residue base field ``GF(p^k)`` (or Q) and a list of named variables with
rational weights.  A variable ``X`` of weight ``w`` is a Gauss-norm
transcendental with ``v(X) = w``; its residue is ``x = X / P^w`` where ``P^s``
is the formal basis of grade ``s`` (``P^1 = p``).

A :class:`Scalar` is a quotient ``num / den`` of truncated series

    sum  c * P^q * X_1^e_1 ... X_n^e_n,      0 <= q < 1,

with coefficients in ``Z_q`` (``p > 0``) or Q (``p = 0``).  Terms of
valuation ``>= cap`` are unknown and discarded; ``cap = None`` marks an exact
finite expansion.  The denominator is absorbed whenever its leading part is
a single monomial, so in practice most scalars are plain series.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import GradeMismatch, NotBoundaryField, PrecisionLoss, RootUndefined
from .gf import Field
from .padic import QRing, ZqRing
from .residue import ONE_MONO, Monomial, ResElem, mono_exp, mono_inv, mono_mul

Key = Tuple[Fraction, Monomial]
ZERO = Fraction(0)


class FieldContext:
    """Residue characteristic, residue base field and weighted variables.

    ``boundary_var`` names the transcendental ``t`` of the boundary field
    (weight 0, residue field ``kappa((t))``); when it is ``None`` the context
    is not in boundary-field mode.
    """

    def __init__(
        self,
        p: int,
        k: int = 1,
        variables: Union[Dict[str, Fraction], Sequence[Tuple[str, Fraction]]] = (),
        default_rel: Union[int, Fraction] = 8,
        boundary_var: Optional[str] = None,
        max_split_degree: int = 4,
        seed: int = 0,
    ):
        if p < 0:
            raise ValueError("characteristic must be 0 or a prime")
        self.p = p
        self.k = k if p else 1
        self.ring = ZqRing(p, self.k) if p else QRing()
        self.residue_field: Field = self.ring.residue_field
        if isinstance(variables, dict):
            variables = list(variables.items())
        self.variables: Tuple[Tuple[str, Fraction], ...] = tuple((n, Fraction(w)) for n, w in variables)
        self.weights: Dict[str, Fraction] = dict(self.variables)
        self.default_rel = Fraction(default_rel)
        self.boundary_var = boundary_var
        if boundary_var is not None and self.weights.get(boundary_var, ZERO) != 0:
            raise ValueError("the boundary transcendental must have weight 0")
        self.max_split_degree = max_split_degree
        self.seed = seed
        self._base_cache: Dict[Key, Fraction] = {}

    @property
    def has_transcendental_t(self) -> bool:
        return self.boundary_var is not None

    @property
    def omega(self) -> Fraction:
        """``-log_p`` of the constant ``omega`` (``1/(p-1)``, or 0 when ``p = 0``)."""
        return Fraction(1, self.p - 1) if self.p else ZERO

    def weight(self, name: str) -> Fraction:
        if name not in self.weights:
            raise KeyError(f"unknown variable {name!r}")
        return self.weights[name]

    def derive(self, **changes) -> "FieldContext":
        """A copy with some attributes replaced (``variables`` may be a dict)."""
        args = dict(
            p=self.p,
            k=self.k,
            variables=self.variables,
            default_rel=self.default_rel,
            boundary_var=self.boundary_var,
            max_split_degree=self.max_split_degree,
            seed=self.seed,
        )
        args.update(changes)
        return FieldContext(**args)

    def with_variable(self, name: str, weight) -> "FieldContext":
        vs = [(n, w) for n, w in self.variables if n != name] + [(name, Fraction(weight))]
        return self.derive(variables=vs)

    def base(self, key: Key) -> Fraction:
        b = self._base_cache.get(key)
        if b is None:
            q, mono = key
            b = q + sum((e * self.weights[n] for n, e in mono), ZERO)
            self._base_cache[key] = b
        return b

    def __repr__(self) -> str:
        vs = ", ".join(f"{n}:{w}" for n, w in self.variables)
        return f"FieldContext(p={self.p}, k={self.k}, vars=[{vs}])"


# ---------------------------------------------------------------------------
# series kernels: a series is (terms, cap) with terms {key: coeff}
# ---------------------------------------------------------------------------


def _tval(ctx: FieldContext, key: Key, c) -> Fraction:
    b = ctx.base(key)
    return b + c[0] if ctx.p else b


def _rel(ctx: FieldContext, key: Key, c, cap: Optional[Fraction]) -> Optional[int]:
    if cap is None:
        return None
    return math.ceil(cap - ctx.base(key)) - c[0]


def _absprec(ctx: FieldContext, key: Key, cap: Optional[Fraction]) -> Optional[int]:
    if cap is None:
        return None
    return math.ceil(cap - ctx.base(key))


def _clean(ctx: FieldContext, terms: Dict[Key, object], cap: Optional[Fraction]) -> Dict[Key, object]:
    out = {}
    ring = ctx.ring
    if ctx.p:
        for key, c in terms.items():
            if c is None:
                continue
            if cap is not None and _tval(ctx, key, c) >= cap:
                continue
            c = ring.normalize(c[0], c[1], _rel(ctx, key, c, cap))
            if c is not None:
                out[key] = c
    else:
        for key, c in terms.items():
            if not c:
                continue
            if cap is not None and ctx.base(key) >= cap:
                continue
            out[key] = c
    return out


def _sval(ctx: FieldContext, terms: Dict[Key, object]) -> Optional[Fraction]:
    if not terms:
        return None
    return min(_tval(ctx, k, c) for k, c in terms.items())


def _min_cap(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _sadd(ctx: FieldContext, t1, cap1, t2, cap2):
    cap = _min_cap(cap1, cap2)
    ring = ctx.ring
    out = dict(t1)
    if ctx.p:
        for key, c in t2.items():
            if key in out:
                out[key] = ring.add(out[key], c, _absprec(ctx, key, cap))
            else:
                out[key] = c
    else:
        for key, c in t2.items():
            out[key] = out.get(key, 0) + c
    return _clean(ctx, out, cap), cap


def _sneg(ctx: FieldContext, terms):
    ring = ctx.ring
    return {k: ring.neg(c) for k, c in terms.items()}


def _key_mul(k1: Key, k2: Key) -> Tuple[Key, int]:
    q = k1[0] + k2[0]
    carry = 0
    if q >= 1:
        q -= 1
        carry = 1
    return (q, mono_mul(k1[1], k2[1])), carry


def _smul(ctx: FieldContext, t1, cap1, t2, cap2):
    v1 = _sval(ctx, t1)
    v2 = _sval(ctx, t2)
    if v1 is None and v2 is None:
        cap = None if cap1 is None or cap2 is None else cap1 + cap2
        return {}, cap
    if v1 is None:
        return {}, (None if cap1 is None else cap1 + v2)
    if v2 is None:
        return {}, (None if cap2 is None else cap2 + v1)
    cap = _min_cap(None if cap1 is None else cap1 + v2, None if cap2 is None else cap2 + v1)
    p = ctx.p
    if p:
        acc: Dict[Key, List] = {}
        for k1, c1 in t1.items():
            b1 = ctx.base(k1) + c1[0]
            for k2, c2 in t2.items():
                if cap is not None and b1 + ctx.base(k2) + c2[0] >= cap:
                    continue
                key, carry = _key_mul(k1, k2)
                acc.setdefault(key, []).append((c1[0] + c2[0] + carry, c1[1], c2[1]))
        ring = ctx.ring
        out = {}
        for key, items in acc.items():
            absp = _absprec(ctx, key, cap)
            amin = min(a for a, _, _ in items)
            rel = None if absp is None else absp - amin
            if rel is not None and rel <= 0:
                continue
            mod = None if rel is None else p ** rel
            total = [0] * ctx.k
            for a, u1, u2 in items:
                prod = ring._mulpoly(u1, u2, mod)
                s = p ** (a - amin)
                for i in range(ctx.k):
                    total[i] += prod[i] * s
            c = ring.normalize(amin, tuple(total), rel)
            if c is not None:
                out[key] = c
        return _clean(ctx, out, cap), cap
    out: Dict[Key, Fraction] = {}
    for k1, c1 in t1.items():
        b1 = ctx.base(k1)
        for k2, c2 in t2.items():
            if cap is not None and b1 + ctx.base(k2) >= cap:
                continue
            key = (ZERO, mono_mul(k1[1], k2[1]))
            out[key] = out.get(key, 0) + c1 * c2
    return _clean(ctx, out, cap), cap


def _sscale(ctx: FieldContext, terms, cap, x: Fraction):
    """Multiply by a rational number."""
    x = Fraction(x)
    if x == 0:
        return {}, (cap if cap is not None else None)
    ring = ctx.ring
    if ctx.p:
        vp = _vp(x, ctx.p)
        newcap = None if cap is None else cap + vp
        out = {}
        for key, c in terms.items():
            rel = _rel(ctx, key, c, cap)
            out[key] = ring.scale_fraction(c, x, rel)
        return _clean(ctx, out, newcap), newcap
    return {k: c * x for k, c in terms.items()}, cap


def _vp(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    n, d, a = x.numerator, x.denominator, 0
    while n % p == 0:
        n //= p
        a += 1
    while d % p == 0:
        d //= p
        a -= 1
    return a


def _single_term_inverse(ctx: FieldContext, key: Key, c, rel: Optional[int]):
    q, mono = key
    ring = ctx.ring
    nq = -q
    carry = 0
    if nq < 0:
        nq += 1
        carry = -1
    newkey = (nq, mono_inv(mono))
    if ctx.p:
        if rel is None:
            u = c[1]
            if u[0] in (1, -1) and all(x == 0 for x in u[1:]):
                return newkey, (-c[0] + carry, u)
            raise PrecisionLoss("exact inverse of a non-trivial p-adic unit")
        ci = ring.inv(c, rel)
        return newkey, (ci[0] + carry, ci[1])
    return newkey, 1 / c


def _sinv(ctx: FieldContext, terms, cap):
    """Inverse of a series whose leading part is a single term."""
    v = _sval(ctx, terms)
    if v is None:
        raise PrecisionLoss("inverse of a scalar that vanishes to precision")
    lead = [k for k, c in terms.items() if _tval(ctx, k, c) == v]
    if len(lead) != 1:
        raise ValueError("leading part is not a monomial")
    (lk,) = lead
    lc = terms[lk]
    if cap is None and len(terms) == 1:
        try:
            k2, c2 = _single_term_inverse(ctx, lk, lc, None)
            return {k2: c2}, None
        except PrecisionLoss:
            pass
    relprec = (cap - v) if cap is not None else ctx.default_rel
    newcap = -v + relprec
    irel = math.ceil(relprec) + 2
    ik, ic = _single_term_inverse(ctx, lk, lc, irel)
    inv_lead = ({ik: ic}, -v + relprec)
    rest = {k: c for k, c in terms.items() if k != lk}
    if not rest:
        return _clean(ctx, inv_lead[0], newcap), newcap
    # 1/(L + R) = L^{-1} * sum (-R/L)^n
    y, ycap = _smul(ctx, rest, (cap if cap is not None else v + relprec), inv_lead[0], inv_lead[1])
    y = _sneg(ctx, y)
    total = {(ZERO, ONE_MONO): ctx.ring.one()}
    tcap = relprec
    power, pcap = dict(total), tcap
    while True:
        power, pcap = _smul(ctx, power, relprec, y, relprec)
        if not power:
            break
        total, _ = _sadd(ctx, total, relprec, power, relprec)
    out, ocap = _smul(ctx, total, relprec, inv_lead[0], newcap)
    return out, newcap


def _sderiv(ctx: FieldContext, terms, cap, var: str, n: int, subfield: bool = False):
    """``(1/(p^n X^(p^n - 1))) d/dX`` applied termwise.

    Unknown terms may lose ``n`` grades of precision through the factor
    ``e/p^n``; when the series is known to involve only exponents in
    ``p^n Z`` (``subfield``) that loss cannot occur.
    """
    p = ctx.p
    step = p ** n if p else 1
    if not p and n:
        raise ValueError("Frobenius levels need p > 0")
    w = ctx.weights[var]
    shift = step * w + (0 if subfield else n)
    newcap = None if cap is None else cap - shift
    out = {}
    ring = ctx.ring
    for (q, mono), c in terms.items():
        e = mono_exp(mono, var)
        if e == 0:
            continue
        newmono = mono_mul(mono, ((var, Fraction(-step)),))
        factor = e / step
        key = (q, newmono)
        if p:
            rel = _rel(ctx, (q, mono), c, cap)
            nc = ring.scale_fraction(c, factor, None if rel is None else rel + n + 2)
        else:
            nc = c * factor
        if nc is not None:
            out[key] = nc
    return _clean(ctx, out, newcap), newcap


# ---------------------------------------------------------------------------
# the public scalar type
# ---------------------------------------------------------------------------


class Scalar:
    """Immutable element ``num / den`` of the field described by a context."""

    __slots__ = ("ctx", "num", "ncap", "den", "dcap")

    def __init__(self, ctx: FieldContext, num: Dict[Key, object], ncap: Optional[Fraction], den=None, dcap=None):
        self.ctx = ctx
        self.num = num
        self.ncap = ncap
        self.den = den
        self.dcap = dcap

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, ctx: FieldContext, cap: Optional[Fraction] = None) -> "Scalar":
        return cls(ctx, {}, None if cap is None else Fraction(cap))

    @classmethod
    def from_int(cls, ctx: FieldContext, n: int) -> "Scalar":
        c = ctx.ring.from_int(n)
        if c is None:
            return cls.zero(ctx)
        return cls(ctx, {(ZERO, ONE_MONO): c}, None)

    @classmethod
    def one(cls, ctx: FieldContext) -> "Scalar":
        return cls.from_int(ctx, 1)

    @classmethod
    def from_fraction(cls, ctx: FieldContext, x: Fraction, rel=None) -> "Scalar":
        x = Fraction(x)
        if x == 0:
            return cls.zero(ctx)
        if ctx.p == 0:
            return cls(ctx, {(ZERO, ONE_MONO): x}, None)
        try:
            c = ctx.ring.scale_fraction(ctx.ring.one(), x, None)
            return cls(ctx, {(ZERO, ONE_MONO): c}, None)
        except ValueError:
            v = Fraction(_vp(x, ctx.p))
            cap = v + (ctx.default_rel if rel is None else Fraction(rel))
            c = ctx.ring.from_fraction(x, math.ceil(cap - v) + 1)
            return cls(ctx, _clean(ctx, {(ZERO, ONE_MONO): c}, cap), cap)

    @classmethod
    def var(cls, ctx: FieldContext, name: str, exp=1) -> "Scalar":
        ctx.weight(name)
        mono = ((name, Fraction(exp)),) if exp else ONE_MONO
        return cls(ctx, {(ZERO, mono): ctx.ring.one()}, None)

    @classmethod
    def p_power(cls, ctx: FieldContext, s) -> "Scalar":
        """The formal basis element ``P^s`` (``P^1 = p``)."""
        if not ctx.p:
            if Fraction(s) != 0:
                raise ValueError("no p-power basis in residue characteristic 0")
            return cls.one(ctx)
        s = Fraction(s)
        a = math.floor(s)
        q = s - a
        return cls(ctx, {(q, ONE_MONO): (a, (1,) + (0,) * (ctx.k - 1))}, None)

    @classmethod
    def lift(cls, ctx: FieldContext, c: ResElem, v, cap=None, teichmuller: bool = True) -> "Scalar":
        """A scalar of valuation ``v`` whose grade-``v`` residue is ``c``.

        Each residue monomial ``kappa * x^E`` lifts to ``[kappa] * P^(v - E.w) * X^E``.
        """
        v = Fraction(v)
        cap = v + ctx.default_rel if cap is None else Fraction(cap)
        if c.is_zero():
            return cls.zero(ctx, cap)
        if not c.is_laurent():
            num = cls.lift(ctx, ResElem(c.field, c.num), v, cap, teichmuller)
            den = cls.lift(ctx, ResElem(c.field, c.den), 0, cap - v, teichmuller)
            return num / den
        F = ctx.residue_field
        if c.field is not F and c.field != F:
            raise ValueError(f"residue {c} does not lie in the residue base field {F}")
        terms = {}
        rel = math.ceil(cap - v) + 1
        for mono, kappa in c.num.items():
            for name, _ in mono:
                ctx.weight(name)
            s = v - sum((e * ctx.weights[n] for n, e in mono), ZERO)
            if ctx.p:
                a = math.floor(s)
                q = s - a
                coeff = ctx.ring.teichmuller(kappa, rel) if teichmuller else ctx.ring.lift_residue(kappa)
                terms[(q, mono)] = (coeff[0] + a, coeff[1])
            else:
                if s != 0:
                    raise ValueError("valuation not realizable without a p-power basis")
                terms[(ZERO, mono)] = Fraction(kappa)
        return cls(ctx, _clean(ctx, terms, cap), cap)

    @classmethod
    def from_terms(cls, ctx: FieldContext, terms: Iterable[Tuple[Fraction, ResElem]], cap=None) -> "Scalar":
        terms = list(terms)
        if not terms:
            return cls.zero(ctx, cap)
        vmin = min(Fraction(v) for v, _ in terms)
        cap = vmin + ctx.default_rel if cap is None else Fraction(cap)
        acc = cls.zero(ctx)
        for v, c in terms:
            acc = acc + cls.lift(ctx, c, v, cap)
        return acc.with_cap(cap)

    # basic properties ---------------------------------------------------------
    def is_series(self) -> bool:
        return self.den is None

    def valuation(self) -> Optional[Fraction]:
        """Exact valuation, or ``None`` when the scalar vanishes to its precision."""
        vn = _sval(self.ctx, self.num)
        if vn is None:
            return None
        if self.den is None:
            return vn
        return vn - _sval(self.ctx, self.den)

    @property
    def cap(self) -> Optional[Fraction]:
        if self.den is None:
            return self.ncap
        vn = _sval(self.ctx, self.num)
        vd = _sval(self.ctx, self.den)
        if vn is None:
            return None if self.ncap is None else self.ncap - vd
        reln = None if self.ncap is None else self.ncap - vn
        reld = None if self.dcap is None else self.dcap - vd
        rel = _min_cap(reln, reld)
        return None if rel is None else vn - vd + rel

    def valuation_bound(self) -> Fraction:
        """The valuation, or the precision cap when the scalar vanishes to precision."""
        v = self.valuation()
        if v is not None:
            return v
        c = self.cap
        if c is None:
            return Fraction(10 ** 9)
        return c

    def is_zero(self) -> bool:
        return not self.num

    def is_exact_zero(self) -> bool:
        return not self.num and self.cap is None

    def with_cap(self, cap) -> "Scalar":
        """Lower the precision cap (never raises it)."""
        if cap is None:
            return self
        cap = Fraction(cap)
        if self.den is not None:
            return self
        newcap = _min_cap(self.ncap, cap)
        return Scalar(self.ctx, _clean(self.ctx, self.num, newcap), newcap)

    def with_relative_cap(self, rel) -> "Scalar":
        v = self.valuation()
        if v is None:
            return self
        return self.with_cap(v + Fraction(rel))

    def _lift_other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return Scalar.from_int(self.ctx, other)
        if isinstance(other, Fraction):
            return Scalar.from_fraction(self.ctx, other)
        return NotImplemented

    def _normalized(self) -> "Scalar":
        if self.den is None:
            return self
        ctx = self.ctx
        vd = _sval(ctx, self.den)
        if vd is None:
            raise PrecisionLoss("denominator vanishes to precision")
        lead = [k for k, c in self.den.items() if _tval(ctx, k, c) == vd]
        if len(lead) == 1:
            inv, icap = _sinv(ctx, self.den, self.dcap)
            num, ncap = _smul(ctx, self.num, self.ncap, inv, icap)
            return Scalar(ctx, num, ncap)
        if not self.num:
            return Scalar(ctx, {}, None if self.ncap is None else self.ncap - vd)
        return self

    # arithmetic ----------------------------------------------------------------
    def __add__(self, other) -> "Scalar":
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if self.den is None and other.den is None:
            t, c = _sadd(ctx, self.num, self.ncap, other.num, other.ncap)
            return Scalar(ctx, t, c)
        n1, c1, d1, e1 = self._parts()
        n2, c2, d2, e2 = other._parts()
        a, ac = _smul(ctx, n1, c1, d2, e2)
        b, bc = _smul(ctx, n2, c2, d1, e1)
        num, ncap = _sadd(ctx, a, ac, b, bc)
        den, dcap = _smul(ctx, d1, e1, d2, e2)
        return Scalar(ctx, num, ncap, den, dcap)._normalized()

    __radd__ = __add__

    def _parts(self):
        if self.den is None:
            return self.num, self.ncap, {(ZERO, ONE_MONO): self.ctx.ring.one()}, None
        return self.num, self.ncap, self.den, self.dcap

    def __neg__(self) -> "Scalar":
        ctx = self.ctx
        return Scalar(ctx, _sneg(ctx, self.num), self.ncap, self.den, self.dcap)

    def __sub__(self, other) -> "Scalar":
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if self.den is None and other.den is None:
            t, c = _smul(ctx, self.num, self.ncap, other.num, other.ncap)
            return Scalar(ctx, t, c)
        n1, c1, d1, e1 = self._parts()
        n2, c2, d2, e2 = other._parts()
        num, ncap = _smul(ctx, n1, c1, n2, c2)
        den, dcap = _smul(ctx, d1, e1, d2, e2)
        return Scalar(ctx, num, ncap, den, dcap)._normalized()

    __rmul__ = __mul__

    def scale(self, x) -> "Scalar":
        """Multiply by a rational number."""
        ctx = self.ctx
        num, ncap = _sscale(ctx, self.num, self.ncap, Fraction(x))
        return Scalar(ctx, num, ncap, self.den, self.dcap)

    def inverse(self) -> "Scalar":
        ctx = self.ctx
        if not self.num:
            raise PrecisionLoss("inverse of a scalar that vanishes to precision")
        if self.den is None:
            v = _sval(ctx, self.num)
            lead = [k for k, c in self.num.items() if _tval(ctx, k, c) == v]
            if len(lead) == 1:
                t, c = _sinv(ctx, self.num, self.ncap)
                return Scalar(ctx, t, c)
            return Scalar(ctx, {(ZERO, ONE_MONO): ctx.ring.one()}, None, self.num, self.ncap)
        return Scalar(ctx, self.den, self.dcap, self.num, self.ncap)._normalized()

    def __truediv__(self, other) -> "Scalar":
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return self.inverse() * other

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def deriv(self, var: str, n: int = 0, subfield: bool = False) -> "Scalar":
        """Apply ``(1/(p^n X^(p^n-1))) d/dX``, the derivation with parameter ``X^(p^n)``."""
        ctx = self.ctx
        if self.den is None:
            t, c = _sderiv(ctx, self.num, self.ncap, var, n, subfield)
            return Scalar(ctx, t, c)
        n1, c1, d1, e1 = self._parts()
        dn, dnc = _sderiv(ctx, n1, c1, var, n, subfield)
        dd, ddc = _sderiv(ctx, d1, e1, var, n, subfield)
        a, ac = _smul(ctx, dn, dnc, d1, e1)
        b, bc = _smul(ctx, n1, c1, dd, ddc)
        num, ncap = _sadd(ctx, a, ac, _sneg(ctx, b), bc)
        den, dcap = _smul(ctx, d1, e1, d1, e1)
        return Scalar(ctx, num, ncap, den, dcap)._normalized()

    # residues -------------------------------------------------------------------
    def _graded_part(self, terms, v) -> ResElem:
        ctx = self.ctx
        F = ctx.residue_field
        ring = ctx.ring
        out = {}
        for key, c in terms.items():
            if _tval(ctx, key, c) == v:
                r = ring.residue_unit(c[1]) if ctx.p else c
                out[key[1]] = F.add(out.get(key[1], F.zero()), r)
        return ResElem(F, out)

    def leading_residue(self) -> ResElem:
        v = self.valuation()
        if v is None:
            raise PrecisionLoss("scalar vanishes to precision")
        return self.reduce(v)

    def reduce(self, s) -> ResElem:
        """Image of the scalar in the graded piece of valuation ``s``."""
        s = Fraction(s)
        cap = self.cap
        if cap is not None and s >= cap:
            raise PrecisionLoss(f"grade {s} is at or beyond the precision cap {cap}")
        v = self.valuation()
        F = self.ctx.residue_field
        if v is None or v > s:
            return ResElem.zero(F)
        if v < s:
            raise GradeMismatch(f"valuation {v} is below the requested grade {s}")
        num = self._graded_part(self.num, _sval(self.ctx, self.num))
        if self.den is None:
            return num
        den = self._graded_part(self.den, _sval(self.ctx, self.den))
        return num / den

    def terms(self) -> List[Tuple[Fraction, ResElem]]:
        """Graded expansion ``[(v, residue), ...]`` below the cap (Teichmuller digits)."""
        out = []
        x = self
        guard = 0
        cap = self.cap
        while x.num and guard < 64:
            v = x.valuation()
            r = x.reduce(v)
            out.append((v, r))
            x = (x - Scalar.lift(self.ctx, r, v, cap)).with_cap(cap)
            guard += 1
        return out

    def vs_valuation(self, s=None) -> Fraction:
        """Valuation in the boundary transcendental of the grade-``s`` residue."""
        return vs_valuation(self.reduce(self.valuation() if s is None else s), self.ctx)

    # display -----------------------------------------------------------------------
    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.num:
            return "0" if self.cap is None else f"O(p^{self.cap})"
        try:
            parts = [f"({r})*p^({v})" for v, r in self.terms()]
        except Exception:
            parts = [f"<{len(self.num)} terms>"]
        s = " + ".join(parts)
        if self.cap is not None:
            s += f" + O(p^{self.cap})"
        return s


def vs_valuation(c: ResElem, ctx: FieldContext) -> Fraction:
    """The canonical valuation ``v_s`` of a graded boundary residue.

    Residues are already untwisted by the ``P^s`` basis, so ``v_s`` is the
    adic valuation in the boundary transcendental (minimum exponent rule).
    """
    if not ctx.has_transcendental_t:
        raise NotBoundaryField("vs_valuation requires a boundary-field context")
    return c.order_in(ctx.boundary_var)


def reduce(x: Scalar, s) -> ResElem:
    return x.reduce(s)


def teichmuller_scalar(ctx: FieldContext, r, cap=None) -> Scalar:
    """Teichmuller lift of an element of the residue base field."""
    return Scalar.lift(ctx, ResElem.const(ctx.residue_field, r), 0, cap)


def dwork_pi(ctx: FieldContext, variant: int = 1, cap=None) -> Scalar:
    """A Dwork pi ``[variant] * zeta * P^(1/(p-1))`` with ``zeta^(p-1) = -1``.

    ``zeta`` is the Teichmuller lift of the smallest root of ``X^(p-1) + 1`` in
    the residue base field; ``variant`` selects the Dwork pi ``[i] * pi`` that
    corresponds to replacing the fixed p-th root of unity by its i-th power.
    """
    p = ctx.p
    if not p:
        raise ValueError("Dwork pi needs p > 0")
    z = dwork_zeta_residue(ctx.residue_field)
    F = ctx.residue_field
    r = F.mul(z, F.from_int(variant))
    if F.is_zero(r):
        raise ValueError("Dwork pi variant must be prime to p")
    v = Fraction(1, p - 1)
    return Scalar.lift(ctx, ResElem.const(F, r), v, cap)


def dwork_zeta_residue(F: Field):
    """Residue of ``pi / P^(1/(p-1))``: the smallest root of ``X^(p-1) + 1``."""
    from .gf import roots_with_multiplicity

    p = F.characteristic
    poly = [F.one()] + [F.zero()] * (p - 2) + [F.one()]
    roots, _ = roots_with_multiplicity(F, poly)
    if not roots:
        raise RootUndefined(
            f"{F} contains no root of X^{p - 1} + 1; use a residue field of even degree"
        )
    return roots[0][0]
