"""Coefficient rings for scalars: unramified p-adic integers or the rationals.

For residue characteristic ``p > 0`` the coefficients of a scalar live in the
unramified extension ``Z_q`` (``q = p^k``), presented as ``Z_p[x]/(f)`` where
``f`` is the integer lift of the defining polynomial of ``GF(p^k)``.  A
nonzero coefficient is a pair ``(a, u)``: the p-adic valuation ``a`` and a
unit ``u`` given as an integer coefficient tuple.  Units are only meaningful
modulo ``p^R`` where the relative precision ``R`` is supplied by the caller,
because the owning scalar knows its own precision cap.

For residue characteristic 0 the coefficients are exact ``Fraction`` values
with trivial valuation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from .gf import QQ, Field, GF

Coeff = Tuple[int, Tuple[int, ...]]


class ZqRing:
    """Arithmetic on ``(valuation, unit)`` pairs over ``Z_q``."""

    def __init__(self, p: int, k: int = 1):
        self.p = p
        self.k = k
        self.residue_field: Field = GF(p, k)
        if k == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(int(c) for c in self.residue_field.modulus)
        self.q = p ** k

    # helpers -----------------------------------------------------------------
    def _reduce_poly(self, c: list, mod: Optional[int]) -> Tuple[int, ...]:
        k = self.k
        f = self.modulus
        for d in range(len(c) - 1, k - 1, -1):
            x = c[d]
            if x:
                c[d] = 0
                for i in range(k):
                    c[d - k + i] -= x * f[i]
        out = c[:k] + [0] * (k - len(c))
        if mod is None:
            return tuple(out)
        return tuple(x % mod for x in out)

    def _mulpoly(self, u: Tuple[int, ...], v: Tuple[int, ...], mod: Optional[int]) -> Tuple[int, ...]:
        if self.k == 1:
            return ((u[0] * v[0]) % mod,) if mod is not None else (u[0] * v[0],)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    prod[i + j] += x * y
        return self._reduce_poly(prod, mod)

    def normalize(self, a: int, u: Tuple[int, ...], rel: int) -> Optional[Coeff]:
        """Strip p-factors from ``u``; ``None`` when the coefficient vanishes to precision."""
        p = self.p
        if rel is None:
            if all(x == 0 for x in u):
                return None
            while all(x % p == 0 for x in u):
                u = tuple(x // p for x in u)
                a += 1
            return (a, tuple(u))
        if rel <= 0:
            return None
        mod = p ** rel
        u = tuple(x % mod for x in u)
        while all(x % p == 0 for x in u):
            if all(x == 0 for x in u):
                return None
            u = tuple(x // p for x in u)
            a += 1
            rel -= 1
            if rel <= 0:
                return None
        return (a, tuple(x % (p ** rel) for x in u))

    # arithmetic ----------------------------------------------------------------
    def from_int(self, n: int) -> Optional[Coeff]:
        if n == 0:
            return None
        a = 0
        while n % self.p == 0:
            n //= self.p
            a += 1
        return (a, (n,) + (0,) * (self.k - 1))

    def from_fraction(self, x: Fraction, rel: int) -> Optional[Coeff]:
        x = Fraction(x)
        if x == 0:
            return None
        num, den = x.numerator, x.denominator
        a = 0
        while num % self.p == 0:
            num //= self.p
            a += 1
        while den % self.p == 0:
            den //= self.p
            a -= 1
        mod = self.p ** max(rel, 1)
        u = (num * pow(den, -1, mod)) % mod
        return (a, (u,) + (0,) * (self.k - 1))

    def one(self) -> Coeff:
        return (0, (1,) + (0,) * (self.k - 1))

    def mul(self, c1: Coeff, c2: Coeff, rel: Optional[int]) -> Optional[Coeff]:
        if rel is None:
            return (c1[0] + c2[0], self._mulpoly(c1[1], c2[1], None))
        if rel <= 0:
            return None
        mod = self.p ** rel
        return (c1[0] + c2[0], self._mulpoly(c1[1], c2[1], mod))

    def add(self, c1: Coeff, c2: Coeff, absprec: Optional[int]) -> Optional[Coeff]:
        """Sum with absolute p-adic precision ``absprec`` (result known mod p^absprec)."""
        a = min(c1[0], c2[0])
        rel = None if absprec is None else absprec - a
        if rel is not None and rel <= 0:
            return None
        p = self.p
        s1 = p ** (c1[0] - a)
        s2 = p ** (c2[0] - a)
        u = tuple(x * s1 + y * s2 for x, y in zip(c1[1], c2[1]))
        return self.normalize(a, u, rel)

    def neg(self, c: Coeff) -> Coeff:
        return (c[0], tuple(-x for x in c[1]))

    def scale_int(self, c: Coeff, n: int, rel: int) -> Optional[Coeff]:
        d = self.from_int(n)
        if d is None:
            return None
        return self.normalize(c[0] + d[0], tuple(x * d[1][0] for x in c[1]), rel)

    def scale_fraction(self, c: Coeff, x: Fraction, rel: int) -> Optional[Coeff]:
        x = Fraction(x)
        if rel is None:
            den = x.denominator
            while den % self.p == 0:
                den //= self.p
            if den != 1:
                raise ValueError("exact scaling by a fraction with a p-adic unit denominator")
            num, a = x.numerator, 0
            den = x.denominator
            while den % self.p == 0:
                den //= self.p
                a -= 1
            if num == 0:
                return None
            return self.normalize(c[0] + a, tuple(y * num for y in c[1]), None)
        d = self.from_fraction(x, rel + 2)
        if d is None:
            return None
        return self.normalize(c[0] + d[0], tuple(y * d[1][0] for y in c[1]), rel)

    def unit_inverse(self, u: Tuple[int, ...], rel: int) -> Tuple[int, ...]:
        p = self.p
        F = self.residue_field
        r = self.residue_unit(u)
        ri = F.inv(r)
        x = self._lift_residue(ri)
        prec = 1
        while prec < rel:
            prec = min(2 * prec, rel)
            mod = p ** prec
            ux = self._mulpoly(u, x, mod)
            two_minus = tuple(((2 if i == 0 else 0) - y) % mod for i, y in enumerate(ux))
            x = self._mulpoly(x, two_minus, mod)
        return tuple(y % (p ** rel) for y in x)

    def inv(self, c: Coeff, rel: int) -> Coeff:
        return (-c[0], self.unit_inverse(c[1], rel))

    # residues and lifts ------------------------------------------------------------
    def residue_unit(self, u: Tuple[int, ...]):
        if self.k == 1:
            return u[0] % self.p
        return tuple(x % self.p for x in u)

    def _lift_residue(self, r) -> Tuple[int, ...]:
        if self.k == 1:
            return (int(r),)
        return tuple(int(x) for x in r)

    def teichmuller(self, r, rel: int) -> Optional[Coeff]:
        """Teichmuller lift of a nonzero residue, to relative precision ``rel``."""
        F = self.residue_field
        if F.is_zero(r):
            return None
        mod = self.p ** rel
        x = self._lift_residue(r)
        # x -> x^q converges to the Teichmuller representative, one digit per step
        for _ in range(rel):
            y = (1,) + (0,) * (self.k - 1)
            base = x
            n = self.q
            while n:
                if n & 1:
                    y = self._mulpoly(y, base, mod)
                base = self._mulpoly(base, base, mod)
                n >>= 1
            x = y
        return (0, x)

    def lift_residue(self, r) -> Optional[Coeff]:
        """Plain integer lift of a residue (used where only the residue matters)."""
        F = self.residue_field
        if F.is_zero(r):
            return None
        return (0, self._lift_residue(r))

    def unit_key(self, u: Tuple[int, ...], rel: int) -> Tuple[int, ...]:
        return tuple(x % (self.p ** rel) for x in u)


class QRing:
    """Exact rational coefficients for residue characteristic 0."""

    p = 0
    k = 1
    residue_field: Field = QQ

    def normalize(self, a, u, rel):
        return u if u != 0 else None

    def from_int(self, n: int):
        return Fraction(n) if n else None

    def from_fraction(self, x: Fraction, rel: int = 0):
        return Fraction(x) if x else None

    def one(self):
        return Fraction(1)

    def mul(self, c1, c2, rel: int = 0):
        r = c1 * c2
        return r if r else None

    def add(self, c1, c2, absprec: int = 0):
        r = c1 + c2
        return r if r else None

    def neg(self, c):
        return -c

    def scale_int(self, c, n: int, rel: int = 0):
        r = c * n
        return r if r else None

    def scale_fraction(self, c, x: Fraction, rel: int = 0):
        r = c * x
        return r if r else None

    def inv(self, c, rel: int = 0):
        return 1 / c

    def teichmuller(self, r, rel: int = 0):
        return Fraction(r) if r else None

    def lift_residue(self, r):
        return Fraction(r) if r else None
