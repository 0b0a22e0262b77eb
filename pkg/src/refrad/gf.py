"""Finite fields, the rational field, and univariate polynomial algebra over them.

Residue fields are modelled as towers: the prime field ``F_p``, a base field
``GF(p^k) = F_p[x]/(f)`` and splitting extensions ``GF(p^k)[y]/(g)`` built on
demand.  Defining polynomials are the lexicographically smallest monic
irreducibles, so every construction is deterministic.  Elements are plain
hashable Python values (``int`` for ``F_p``, tuples for extensions,
``Fraction`` for the rationals) and all arithmetic goes through the field
object.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import gcd as igcd
from typing import Dict, Iterator, List, Sequence, Tuple

from .errors import ResidueFactorizationOverflow, RootUndefined

Poly = List  # coefficient list, lowest degree first, no trailing zeros


class Field:
    """Common interface; subclasses implement the primitive operations."""

    characteristic: int = 0

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_finite(self) -> bool:
        return self.characteristic > 0

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def from_int(self, n: int):
        raise NotImplementedError


class RationalField(Field):
    """The field Q, used as residue field when the residue characteristic is 0."""

    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def from_int(self, n: int):
        return Fraction(n)

    def fmt(self, a) -> str:
        return str(a)

    def key(self, a):
        return (a.numerator, a.denominator)

    def contains(self, other: "Field") -> bool:
        return isinstance(other, RationalField)

    def embed(self, a, source: "Field"):
        return Fraction(a)

    def pth_root(self, a):
        raise RootUndefined("p-th roots are undefined in characteristic 0")

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


QQ = RationalField()


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.degree = 1
        self.base = None
        self.absolute_degree = 1

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def index(self, a) -> int:
        return a

    def element(self, i: int):
        return i % self.p

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def frobenius(self, a):
        return a

    def pth_root(self, a):
        return a

    def fmt(self, a) -> str:
        return str(a)

    def key(self, a):
        return (a,)

    def tower(self) -> List["Field"]:
        return [self]

    def contains(self, other: Field) -> bool:
        return other in self.tower()

    def embed(self, a, source: Field):
        if source is self or source == self:
            return a
        raise ValueError("cannot embed into the prime field")

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


class ExtensionField(Field):
    """``base[y]/(modulus)`` with elements stored as coefficient tuples."""

    def __init__(self, base: Field, modulus: Sequence, name: str = "x"):
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.characteristic = base.characteristic
        self.absolute_degree = base.absolute_degree * self.degree
        self.order = base.order ** self.degree
        self.name = name
        self._zero = tuple(base.zero() for _ in range(self.degree))
        self._one = (base.one(),) + self._zero[1:]
        self._inv_cache: Dict[tuple, tuple] = {}

    # basic arithmetic -----------------------------------------------------
    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        if self.degree == 1:
            return (self.base.neg(self.modulus[0]),)
        return (self.base.zero(), self.base.one()) + self._zero[2:]

    def from_base(self, b):
        return (b,) + self._zero[1:]

    def from_int(self, n: int):
        return self.from_base(self.base.from_int(n))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        m = self.degree
        prod = [B.zero()] * (2 * m - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if B.is_zero(y):
                    continue
                prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        mod = self.modulus
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if B.is_zero(c):
                continue
            prod[d] = B.zero()
            for i in range(m):
                prod[d - m + i] = B.sub(prod[d - m + i], B.mul(c, mod[i]))
        return tuple(prod[:m])

    def inv(self, a):
        if a == self._zero:
            raise ZeroDivisionError("inverse of zero")
        hit = self._inv_cache.get(a)
        if hit is not None:
            return hit
        B = self.base
        # extended Euclid in B[y]
        r0, r1 = list(self.modulus), poly_trim(B, list(a))
        s0, s1 = [], [B.one()]
        while len(r1) > 1:
            q, r = poly_divmod(B, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(B, s0, poly_mul(B, q, s1))
        c = B.inv(r1[0])
        res = poly_scale(B, s1, c)
        out = tuple(res[i] if i < len(res) else B.zero() for i in range(self.degree))
        if len(self._inv_cache) < 100000:
            self._inv_cache[a] = out
        return out

    # enumeration and encoding ---------------------------------------------
    def elements(self) -> Iterator[tuple]:
        for combo in product(list(self.base.elements()), repeat=self.degree):
            yield tuple(reversed(combo))

    def index(self, a) -> int:
        q = self.base.order
        n = 0
        for x in reversed(a):
            n = n * q + self.base.index(x)
        return n

    def element(self, i: int):
        q = self.base.order
        out = []
        for _ in range(self.degree):
            out.append(self.base.element(i % q))
            i //= q
        return tuple(out)

    def random(self, rng: random.Random):
        return tuple(self.base.random(rng) for _ in range(self.degree))

    def frobenius(self, a):
        return self.pow(a, self.characteristic)

    def pth_root(self, a):
        # Frobenius has order absolute_degree on the whole field
        return self.pow(a, self.characteristic ** (self.absolute_degree - 1))

    def fmt(self, a) -> str:
        B = self.base
        parts = []
        for i, c in enumerate(a):
            if B.is_zero(c):
                continue
            cs = B.fmt(c)
            if " " in cs or "+" in cs:
                cs = f"({cs})"
            if i == 0:
                parts.append(cs)
            elif cs == "1":
                parts.append(self.name if i == 1 else f"{self.name}^{i}")
            else:
                parts.append(f"{cs}*{self.name}" if i == 1 else f"{cs}*{self.name}^{i}")
        return " + ".join(parts) if parts else "0"

    def key(self, a):
        return (self.index(a),)

    # towers -----------------------------------------------------------------
    def tower(self) -> List[Field]:
        return self.base.tower() + [self]

    def contains(self, other: Field) -> bool:
        if other is self:
            return True
        return other in self.tower() or _embedding_known(other, self)

    def embed(self, a, source: Field):
        """Map ``a`` from ``source`` (a subfield in the canonical sense) into self."""
        if source is self:
            return a
        if source == self:
            return a
        tw = self.tower()
        if source in tw:
            x = a
            idx = tw.index(source)
            for f in tw[idx + 1:]:
                x = f.from_base(x)
            return x
        emb = embedding(source, self)
        return emb(a)

    def __repr__(self) -> str:
        return f"GF({self.characteristic}^{self.absolute_degree})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtensionField)
            and other.modulus == self.modulus
            and other.base == self.base
        )

    def __hash__(self) -> int:
        return hash((self.base, self.modulus))


# ---------------------------------------------------------------------------
# polynomial helpers over an arbitrary Field (coefficients low -> high)
# ---------------------------------------------------------------------------


def poly_trim(F: Field, a: list) -> list:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def poly_add(F: Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero()
        y = b[i] if i < len(b) else F.zero()
        out.append(F.add(x, y))
    return poly_trim(F, out)


def poly_neg(F: Field, a: list) -> list:
    return [F.neg(x) for x in a]


def poly_sub(F: Field, a: list, b: list) -> list:
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F: Field, a: list, c) -> list:
    return poly_trim(F, [F.mul(x, c) for x in a])


def poly_mul(F: Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F: Field, a: list, b: list) -> Tuple[list, list]:
    b = poly_trim(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = poly_trim(F, list(a))
    if len(a) < len(b):
        return [], a
    inv_lead = F.inv(b[-1])
    q = [F.zero()] * (len(a) - len(b) + 1)
    r = list(a)
    db = len(b) - 1
    for i in range(len(a) - len(b), -1, -1):
        c = F.mul(r[i + db], inv_lead)
        q[i] = c
        if F.is_zero(c):
            continue
        for j in range(db + 1):
            r[i + j] = F.sub(r[i + j], F.mul(c, b[j]))
    return poly_trim(F, q), poly_trim(F, r[:db])


def poly_mod(F: Field, a: list, b: list) -> list:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: Field, a: list) -> list:
    a = poly_trim(F, a)
    if not a:
        return a
    return poly_scale(F, a, F.inv(a[-1]))


def poly_gcd(F: Field, a: list, b: list) -> list:
    a, b = poly_trim(F, a), poly_trim(F, b)
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_deriv(F: Field, a: list) -> list:
    return poly_trim(F, [F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def poly_eval(F: Field, a: list, x):
    acc = F.zero()
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_powmod(F: Field, a: list, n: int, m: list) -> list:
    result = [F.one()]
    base = poly_mod(F, a, m)
    while n:
        if n & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        n >>= 1
    return result


def poly_map(F: Field, a: list, fn) -> list:
    return poly_trim(F, [fn(x) for x in a])


def _poly_pth_root(F: Field, a: list) -> list:
    p = F.characteristic
    out = []
    for i in range(0, len(a), p):
        out.append(F.pth_root(a[i]))
    return poly_trim(F, out)


def squarefree_decomposition(F: Field, f: list) -> List[Tuple[list, int]]:
    """Return ``[(g, e), ...]`` with ``f = lead * prod g^e`` and each g squarefree monic."""
    f = poly_monic(F, f)
    if len(f) <= 1:
        return []
    p = F.characteristic
    df = poly_deriv(F, f)
    if not df:
        return [(g, e * p) for g, e in squarefree_decomposition(F, _poly_pth_root(F, f))]
    out = []
    c = poly_gcd(F, f, df)
    w = poly_divmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if len(z) > 1:
            out.append((poly_monic(F, z), i))
        i += 1
        w = y
        c = poly_divmod(F, c, y)[0]
    if len(c) > 1:
        if p == 0:
            raise AssertionError("unexpected inseparable part in characteristic 0")
        out.extend((g, e * p) for g, e in squarefree_decomposition(F, _poly_pth_root(F, c)))
    return out


def distinct_degree_factorization(F: Field, f: list) -> List[Tuple[list, int]]:
    """Squarefree monic ``f`` over a finite field -> [(product of irreducibles of degree d, d)]."""
    q = F.order
    out = []
    f = poly_monic(F, f)
    x = [F.zero(), F.one()]
    h = list(x)
    d = 0
    while len(f) > 1:
        d += 1
        if 2 * d > len(f) - 1:
            out.append((f, len(f) - 1))
            break
        h = poly_powmod(F, h, q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = poly_divmod(F, f, g)[0]
            h = poly_mod(F, h, f) if len(f) > 1 else h
    return out


def _split_linear(F: Field, f: list, rng: random.Random) -> List:
    """Roots of a monic squarefree polynomial that splits into linear factors over F."""
    n = len(f) - 1
    if n == 0:
        return []
    if n == 1:
        return [F.neg(f[0])]
    q = F.order
    p = F.characteristic
    while True:
        if p == 2:
            a = [F.zero(), F.random(rng)]
            # absolute trace map x + x^2 + ... + x^(2^(N-1))
            N = F.absolute_degree
            t = poly_mod(F, a, f)
            acc = list(t)
            for _ in range(N - 1):
                t = poly_mod(F, poly_mul(F, t, t), f)
                acc = poly_add(F, acc, t)
            g = poly_gcd(F, f, acc)
        else:
            a = [F.random(rng), F.one()]
            t = poly_powmod(F, a, (q - 1) // 2, f)
            g = poly_gcd(F, f, poly_sub(F, t, [F.one()]))
        if 0 < len(g) - 1 < n:
            h = poly_divmod(F, f, g)[0]
            return _split_linear(F, g, rng) + _split_linear(F, poly_monic(F, h), rng)


def _rational_roots(f: list) -> List[Fraction]:
    f = [Fraction(c) for c in f]
    den = 1
    for c in f:
        den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    shift = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        shift += 1
    roots: List[Fraction] = [Fraction(0)] if shift else []
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> List[int]:
        ds = []
        i = 1
        while i * i <= n:
            if n % i == 0:
                ds.append(i)
                ds.append(n // i)
            i += 1
        return ds

    cand = set()
    for num in divisors(a0):
        for d in divisors(an):
            cand.add(Fraction(num, d))
            cand.add(Fraction(-num, d))
    for c in sorted(cand):
        if poly_eval(QQ, [Fraction(x) for x in ints], c) == 0:
            roots.append(c)
    return roots


def roots_with_multiplicity(F: Field, f: list, seed: int = 0) -> Tuple[List[Tuple[object, int]], List[int]]:
    """Roots of ``f`` in ``F`` with multiplicities plus the degrees of unsplit irreducible factors.

    The second component lists, with repetition, the degrees of irreducible
    factors of degree > 1 (one entry per factor counted with multiplicity);
    their least common multiple is the splitting degree over ``F``.
    """
    f = poly_trim(F, f)
    if len(f) <= 1:
        return [], []
    rng = random.Random(seed)
    if not F.is_finite():
        sqf = squarefree_decomposition(F, f)
        found = []
        rest = []
        for g, e in sqf:
            rts = _rational_roots(g)
            found.extend((r, e) for r in rts)
            deg_left = len(g) - 1 - len(rts)
            if deg_left:
                rest.extend([deg_left] * e)
        return found, rest
    found = []
    rest: List[int] = []
    for g, e in squarefree_decomposition(F, f):
        for part, d in distinct_degree_factorization(F, g):
            if d == 1:
                for r in _split_linear(F, part, rng):
                    found.append((r, e))
            else:
                k = (len(part) - 1) // d
                rest.extend([d] * (k * e))
    found.sort(key=lambda re: F.index(re[0]))
    return found, rest


def is_irreducible(F: Field, f: list) -> bool:
    f = poly_monic(F, f)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    parts = distinct_degree_factorization(F, f)
    if len(squarefree_decomposition(F, f)) != 1 or squarefree_decomposition(F, f)[0][1] != 1:
        return False
    return len(parts) == 1 and parts[0][1] == n


def first_irreducible(F: Field, n: int) -> list:
    """Lexicographically smallest monic irreducible of degree n over F (by element index)."""
    if n == 1:
        return [F.zero(), F.one()]
    q = F.order
    for i in range(q ** n):
        coeffs = []
        j = i
        for _ in range(n):
            coeffs.append(F.element(j % q))
            j //= q
        cand = coeffs + [F.one()]
        if F.is_zero(cand[0]):
            continue
        if is_irreducible(F, cand):
            return cand
    raise AssertionError("no irreducible polynomial found")


_PRIME_FIELDS: Dict[int, PrimeField] = {}
_BASE_FIELDS: Dict[Tuple[int, int], Field] = {}
_EXTENSIONS: Dict[Tuple[int, int], ExtensionField] = {}
_EMBEDDINGS: Dict[Tuple[int, int], object] = {}


def prime_field(p: int) -> PrimeField:
    if p not in _PRIME_FIELDS:
        _PRIME_FIELDS[p] = PrimeField(p)
    return _PRIME_FIELDS[p]


def GF(p: int, k: int = 1) -> Field:
    """The base field GF(p^k) with its canonical defining polynomial."""
    key = (p, k)
    if key not in _BASE_FIELDS:
        Fp = prime_field(p)
        if k == 1:
            _BASE_FIELDS[key] = Fp
        else:
            _BASE_FIELDS[key] = ExtensionField(Fp, first_irreducible(Fp, k), name="a")
    return _BASE_FIELDS[key]


def extension(F: Field, m: int) -> Field:
    """The degree-m extension of a base field (or of an extension, re-rooted at its base).

    Extensions are always built directly over the base field of the tower so
    that two requests for the same absolute degree return the same object.
    """
    if m == 1:
        return F
    base = _root_base(F)
    rel = (F.absolute_degree // base.absolute_degree) * m
    key = (id(base), rel)
    if key not in _EXTENSIONS:
        _EXTENSIONS[key] = ExtensionField(base, first_irreducible(base, rel), name="y")
    return _EXTENSIONS[key]


def _root_base(F: Field) -> Field:
    if isinstance(F, ExtensionField) and getattr(F, "name", "") == "y":
        return F.base
    return F


def _embedding_known(small: Field, big: Field) -> bool:
    try:
        embedding(small, big)
        return True
    except ValueError:
        return False


def embedding(small: Field, big: Field):
    """Canonical embedding of ``small`` into ``big`` over their common base field."""
    if small is big or small == big:
        return lambda a: a
    sb, bb = _root_base(small), _root_base(big)
    if sb is not bb:
        if small in big.tower():
            return lambda a: big.embed(a, small)
        raise ValueError(f"no embedding {small} -> {big}")
    if small is sb:
        return lambda a: big.embed(a, small)
    if big.absolute_degree % small.absolute_degree:
        raise ValueError(f"no embedding {small} -> {big}")
    key = (id(small), id(big))
    if key not in _EMBEDDINGS:
        # send the generator of small to the smallest root of its modulus in big
        mod = [big.from_base(c) for c in small.modulus]
        rts, _ = roots_with_multiplicity(big, mod)
        if not rts:
            raise ValueError(f"no embedding {small} -> {big}")
        r = rts[0][0]
        powers = [big.one()]
        for _ in range(small.degree - 1):
            powers.append(big.mul(powers[-1], r))

        def emb(a, powers=powers):
            acc = big.zero()
            for c, pw in zip(a, powers):
                acc = big.add(acc, big.mul(big.from_base(c), pw))
            return acc

        _EMBEDDINGS[key] = emb
    return _EMBEDDINGS[key]


def common_field(F: Field, G: Field) -> Field:
    if F is G or F == G:
        return F
    if not F.is_finite() or not G.is_finite():
        if F.is_finite() != G.is_finite():
            raise ValueError("mixing characteristic zero and positive characteristic")
        return F
    if F.contains(G):
        return F
    if G.contains(F):
        return G
    base = _root_base(F)
    if _root_base(G) is not base:
        raise ValueError(f"fields {F} and {G} share no canonical overfield")
    a = F.absolute_degree // base.absolute_degree
    b = G.absolute_degree // base.absolute_degree
    lcm = a * b // igcd(a, b)
    return extension(base, lcm)


def splitting_degree(degrees: Sequence[int]) -> int:
    m = 1
    for d in degrees:
        m = m * d // igcd(m, d)
    return m


def roots_in_splitting_field(
    F: Field, f: list, max_degree: int, seed: int = 0
) -> Tuple[Field, List[Tuple[object, int]]]:
    """All roots of f (with multiplicity), constructing an extension of F if needed."""
    found, rest = roots_with_multiplicity(F, f, seed)
    if not rest:
        return F, found
    if not F.is_finite():
        raise ResidueFactorizationOverflow(
            "irrational roots over Q are outside the supported residue fields"
        )
    m = splitting_degree(rest)
    if m > max_degree:
        raise ResidueFactorizationOverflow(
            f"splitting degree {m} exceeds the configured bound {max_degree}"
        )
    E = extension(F, m)
    emb = embedding(F, E)
    g = [emb(c) for c in f]
    found_e, rest_e = roots_with_multiplicity(E, g, seed)
    if rest_e:
        raise AssertionError("polynomial failed to split in its splitting field")
    return E, found_e
