"""Residue-field elements: rational functions over a finite field or Q.

A :class:`ResElem` is a quotient of two Laurent polynomials in named
variables (``t``, ``u``, ``b1``, ...).  Exponents are rationals whose
denominators are prime to the characteristic, which models the tame
extensions ``t^{1/e}`` used by families.  Elements whose denominator is a
monomial are stored as a single Laurent polynomial, which is the canonical
form in almost every computation; genuine quotients compare by
cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import RootUndefined
from .gf import Field, common_field, embedding, poly_gcd, poly_divmod, poly_trim

Monomial = Tuple[Tuple[str, Fraction], ...]
ONE_MONO: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d: Dict[str, Fraction] = dict(a)
    for name, e in b:
        d[name] = d.get(name, Fraction(0)) + e
    return tuple(sorted((n, e) for n, e in d.items() if e != 0))


def mono_pow(a: Monomial, k) -> Monomial:
    if k == 0:
        return ONE_MONO
    return tuple((n, e * k) for n, e in a)


def mono_inv(a: Monomial) -> Monomial:
    return tuple((n, -e) for n, e in a)


def mono_exp(a: Monomial, name: str) -> Fraction:
    for n, e in a:
        if n == name:
            return e
    return Fraction(0)


def mono_fmt(a: Monomial) -> str:
    parts = []
    for n, e in a:
        if e == 1:
            parts.append(n)
        elif e.denominator == 1 and e > 0:
            parts.append(f"{n}^{e}")
        else:
            parts.append(f"{n}^({e})")
    return "*".join(parts)


class ResElem:
    """An element of ``F(x_1, ..., x_n)`` with rational exponents, immutable."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: Field, num: Dict[Monomial, object], den: Optional[Dict[Monomial, object]] = None, _raw: bool = False):
        self.field = field
        if _raw:
            self.num = num
            self.den = den if den is not None else {ONE_MONO: field.one()}
        else:
            num = {m: c for m, c in num.items() if not field.is_zero(c)}
            if den is None:
                den = {ONE_MONO: field.one()}
            else:
                den = {m: c for m, c in den.items() if not field.is_zero(c)}
                if not den:
                    raise ZeroDivisionError("residue with zero denominator")
            self.num, self.den = _normalize(field, num, den)
        self._hash = None

    # construction helpers ---------------------------------------------------
    @classmethod
    def const(cls, field: Field, c) -> "ResElem":
        return cls(field, {ONE_MONO: c})

    @classmethod
    def zero(cls, field: Field) -> "ResElem":
        return cls(field, {}, None, _raw=True)

    @classmethod
    def one(cls, field: Field) -> "ResElem":
        return cls.const(field, field.one())

    @classmethod
    def var(cls, field: Field, name: str, exp=1) -> "ResElem":
        return cls(field, {((name, Fraction(exp)),) if exp else ONE_MONO: field.one()})

    @classmethod
    def monomial(cls, field: Field, c, mono: Monomial) -> "ResElem":
        return cls(field, {tuple(sorted((n, Fraction(e)) for n, e in mono if e)): c})

    # predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_laurent(self) -> bool:
        return len(self.den) == 1 and ONE_MONO in self.den

    def is_constant(self) -> bool:
        return self.is_laurent() and all(m == ONE_MONO for m in self.num)

    def is_monomial(self) -> bool:
        return self.is_laurent() and len(self.num) == 1

    def constant_value(self):
        if self.is_zero():
            return self.field.zero()
        if not self.is_constant():
            raise ValueError("residue is not a constant")
        return self.num[ONE_MONO]

    def monomial_data(self) -> Tuple[object, Monomial]:
        if not self.is_monomial():
            raise ValueError("residue is not a monomial")
        (m, c), = self.num.items()
        return c, m

    def variables(self) -> List[str]:
        names = set()
        for part in (self.num, self.den):
            for m in part:
                names.update(n for n, _ in m)
        return sorted(names)

    # field handling -------------------------------------------------------------
    def to_field(self, F: Field) -> "ResElem":
        if F is self.field:
            return self
        emb = embedding(self.field, F) if F.is_finite() else (lambda a: a)
        num = {m: emb(c) for m, c in self.num.items()}
        den = {m: emb(c) for m, c in self.den.items()}
        return ResElem(F, num, den, _raw=True)

    def _coerce(self, other) -> Tuple["ResElem", "ResElem"]:
        if not isinstance(other, ResElem):
            other = ResElem.const(self.field, self.field.from_int(int(other)))
        if other.field is self.field:
            return self, other
        F = common_field(self.field, other.field)
        return self.to_field(F), other.to_field(F)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "ResElem":
        a, b = self._coerce(other)
        F = a.field
        if a.is_laurent() and b.is_laurent():
            return ResElem(F, _padd(F, a.num, b.num))
        num = _padd(F, _pmul(F, a.num, b.den), _pmul(F, b.num, a.den))
        return ResElem(F, num, _pmul(F, a.den, b.den))

    __radd__ = __add__

    def __neg__(self) -> "ResElem":
        F = self.field
        return ResElem(F, {m: F.neg(c) for m, c in self.num.items()}, dict(self.den), _raw=True)

    def __sub__(self, other) -> "ResElem":
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other) -> "ResElem":
        return (-self) + other

    def __mul__(self, other) -> "ResElem":
        a, b = self._coerce(other)
        F = a.field
        if a.is_laurent() and b.is_laurent():
            return ResElem(F, _pmul(F, a.num, b.num))
        return ResElem(F, _pmul(F, a.num, b.num), _pmul(F, a.den, b.den))

    __rmul__ = __mul__

    def inverse(self) -> "ResElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero residue")
        return ResElem(self.field, dict(self.den), dict(self.num))

    def __truediv__(self, other) -> "ResElem":
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "ResElem":
        return self.inverse() * other

    def __pow__(self, k: int) -> "ResElem":
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_monomial():
            c, m = self.monomial_data()
            return ResElem(self.field, {mono_pow(m, k): self.field.pow(c, k)}, None, _raw=True)
        result = ResElem.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "ResElem":
        F = self.field
        return ResElem(F, {m: F.mul(x, c) for m, x in self.num.items()}, dict(self.den))

    def mul_monomial(self, mono: Monomial) -> "ResElem":
        if not mono:
            return self
        return ResElem(self.field, {mono_mul(m, mono): c for m, c in self.num.items()}, dict(self.den))

    def map_coefficients(self, fn) -> "ResElem":
        """Apply a field automorphism coefficientwise."""
        F = self.field
        num = {m: fn(c) for m, c in self.num.items()}
        den = {m: fn(c) for m, c in self.den.items()}
        return ResElem(F, num, den)

    # Frobenius ----------------------------------------------------------------
    def pth_power(self) -> "ResElem":
        p = self.field.characteristic
        if p == 0:
            raise RootUndefined("Frobenius is undefined in characteristic 0")
        F = self.field
        num = {mono_pow(m, p): F.frobenius(c) for m, c in self.num.items()}
        den = {mono_pow(m, p): F.frobenius(c) for m, c in self.den.items()}
        return ResElem(F, num, den, _raw=True)

    def pth_root(self) -> "ResElem":
        """Inverse Frobenius; defined iff every exponent numerator is divisible by p."""
        F = self.field
        p = F.characteristic
        if p == 0:
            raise RootUndefined("p-th roots are undefined in characteristic 0")
        out = []
        for part in (self.num, self.den):
            d = {}
            for m, c in part.items():
                for _, e in m:
                    if e.numerator % p:
                        raise RootUndefined(f"{self} is not a p-th power")
                d[mono_pow(m, Fraction(1, p))] = F.pth_root(c)
            out.append(d)
        return ResElem(F, out[0], out[1], _raw=True)

    # valuations ----------------------------------------------------------------
    def order_in(self, name: str) -> Fraction:
        """Adic valuation in the variable ``name`` (the minimum exponent rule)."""
        if self.is_zero():
            raise ValueError("order of zero residue")
        return min(mono_exp(m, name) for m in self.num) - min(mono_exp(m, name) for m in self.den)

    # comparison ----------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, ResElem):
            if isinstance(other, int):
                other = ResElem.const(self.field, self.field.from_int(other))
            else:
                return NotImplemented
        try:
            a, b = self._coerce(other)
        except ValueError:
            return False
        F = a.field
        if a.is_laurent() and b.is_laurent():
            return a.num == b.num
        return _padd(F, _pmul(F, a.num, b.den), _pneg(F, _pmul(F, b.num, a.den))) == {}

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __hash__(self) -> int:
        # equal elements may live in different (embedded) fields, so only the
        # support of a Laurent element enters the hash
        if self._hash is None:
            if self.is_laurent():
                self._hash = hash(("res", frozenset(self.num)))
            else:
                self._hash = hash("frac")
        return self._hash

    def sort_key(self):
        F = self.field
        items = sorted(self.num.items())
        return tuple((m, F.key(c) if hasattr(F, "key") else c) for m, c in items)

    # display -------------------------------------------------------------------
    def _fmt_part(self, part: Dict[Monomial, object]) -> str:
        F = self.field
        terms = []
        for m in sorted(part, key=_mono_order, reverse=True):
            c = part[m]
            cs = F.fmt(c)
            ms = mono_fmt(m)
            if not ms:
                terms.append(cs)
            elif cs == "1":
                terms.append(ms)
            else:
                if "+" in cs or " " in cs:
                    cs = f"({cs})"
                terms.append(f"{cs}*{ms}")
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        if self.is_laurent():
            return self._fmt_part(self.num)
        return f"({self._fmt_part(self.num)})/({self._fmt_part(self.den)})"

    def __repr__(self) -> str:
        return f"ResElem({self})"


def _mono_order(m: Monomial):
    return tuple((n, e) for n, e in m)


def _padd(F: Field, a: Dict, b: Dict) -> Dict:
    out = dict(a)
    for m, c in b.items():
        if m in out:
            s = F.add(out[m], c)
            if F.is_zero(s):
                del out[m]
            else:
                out[m] = s
        else:
            out[m] = c
    return out


def _pneg(F: Field, a: Dict) -> Dict:
    return {m: F.neg(c) for m, c in a.items()}


def _pmul(F: Field, a: Dict, b: Dict) -> Dict:
    out: Dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            c = F.mul(c1, c2)
            if m in out:
                s = F.add(out[m], c)
                if F.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
    return out


def _normalize(F: Field, num: Dict, den: Dict) -> Tuple[Dict, Dict]:
    one = {ONE_MONO: F.one()}
    if not num:
        return {}, one
    if len(den) == 1:
        (m, c), = den.items()
        ci = F.inv(c)
        mi = mono_inv(m)
        return {mono_mul(k, mi): F.mul(v, ci) for k, v in num.items()}, one
    # shift so that the denominator has minimal exponent zero in each variable
    names = set()
    for part in (num, den):
        for m in part:
            names.update(n for n, _ in m)
    shift = tuple(sorted((n, -min(mono_exp(m, n) for m in den)) for n in names))
    shift = tuple((n, e) for n, e in shift if e != 0)
    if shift:
        num = {mono_mul(m, shift): c for m, c in num.items()}
        den = {mono_mul(m, shift): c for m, c in den.items()}
    # univariate integral case: cancel the polynomial gcd
    num, den = _cancel_univariate(F, num, den)
    if len(den) > 1:
        q = _exact_quotient(F, num, den, sorted(names))
        if q is not None:
            return q, one
    if len(den) == 1:
        return _normalize(F, num, den)
    lead = den[max(den, key=_mono_order)]
    li = F.inv(lead)
    return ({m: F.mul(c, li) for m, c in num.items()}, {m: F.mul(c, li) for m, c in den.items()})


def _exact_quotient(F: Field, num: Dict, den: Dict, names: List[str], limit: int = 400) -> Optional[Dict]:
    """``num / den`` as a Laurent polynomial when the division is exact, else ``None``."""

    def key(m: Monomial):
        return tuple(mono_exp(m, n) for n in names)

    d_hi = max(den, key=key)
    d_lo = min(den, key=key)
    floor = tuple(a - b for a, b in zip(key(min(num, key=key)), key(d_lo)))
    inv = F.inv(den[d_hi])
    rem = dict(num)
    quot: Dict = {}
    for _ in range(limit):
        if not rem:
            return quot
        m = max(rem, key=key)
        qm = mono_mul(m, mono_inv(d_hi))
        if key(qm) < floor:
            return None
        c = F.mul(rem[m], inv)
        quot[qm] = c
        rem = _padd(F, rem, _pneg(F, _pmul(F, {qm: c}, den)))
    return None


def _cancel_univariate(F: Field, num: Dict, den: Dict) -> Tuple[Dict, Dict]:
    names = set()
    for part in (num, den):
        for m in part:
            names.update(n for n, _ in m)
    if len(names) != 1:
        return num, den
    (name,) = names
    exps = [mono_exp(m, name) for part in (num, den) for m in part]
    if any(e.denominator != 1 for e in exps):
        return num, den
    lo = min(exps)

    def to_poly(part):
        deg = max(int(mono_exp(m, name) - lo) for m in part)
        coeffs = [F.zero()] * (deg + 1)
        for m, c in part.items():
            coeffs[int(mono_exp(m, name) - lo)] = c
        return coeffs

    pn, pd = to_poly(num), to_poly(den)
    g = poly_gcd(F, pn, pd)
    if len(g) <= 1:
        return num, den
    qn = poly_divmod(F, pn, g)[0]
    qd = poly_divmod(F, pd, g)[0]

    def from_poly(coeffs):
        out = {}
        for i, c in enumerate(coeffs):
            if not F.is_zero(c):
                e = Fraction(i) + lo
                out[((name, e),) if e != 0 else ONE_MONO] = c
        return out

    return from_poly(poly_trim(F, qn)), from_poly(poly_trim(F, qd))


def residue_sum(items: Iterable[ResElem], field: Field) -> ResElem:
    acc = ResElem.zero(field)
    for x in items:
        acc = acc + x
    return acc
