"""Artin-Schreier characters, their Dwork isocrystals and conductors.

A character is given by ``z^p - z = f`` with ``f`` a finite sum of monomials
``c * b^e * pi^(-n)`` over ``GF(p^k)``, where ``b_1..b_m`` lift a p-basis of
the residue field.  Its Dwork isocrystal is the rank one module
``d + i*pi_D*dF`` with ``F`` the Teichmuller lift of ``f`` and ``pi_D`` a
Dwork pi; in the family variable ``t`` (the lift of the uniformizer) all
radius computations go through the generic fiber pipeline.

For odd ``p`` a Dwork pi needs a residue field of even degree, so the
isocrystal is built over ``GF(p^(2k))`` when ``k`` is odd and results are
mapped back to ``GF(p^k)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    InvariantViolation,
    NotReduced,
    ParamMismatch,
    PreconditionError,
    TameCharacter,
)
from .gf import GF, Field, roots_with_multiplicity
from .ore import Derivation
from .residue import Monomial, ResElem
from .scalar import FieldContext, dwork_zeta_residue
from .variation import FamilyModule, FamilyScalar, FamilyTerm

Term = Tuple[int, Tuple[int, ...], object]


def _vp(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ASCharacter:
    """``z^p - z = f`` composed with the ``index``-th power.

    ``terms`` holds ``(n, e, c)`` for the monomial ``c * b^e * pi^(-n)``
    with ``n >= 1``; like monomials are combined and zero coefficients
    dropped.  An empty ``f`` (possible only after reduction) is the trivial
    character.
    """

    p: int
    k: int
    terms: Tuple[Term, ...]
    basis: Tuple[str, ...] = ()
    index: int = 1

    def __post_init__(self):
        if self.p < 2:
            raise PreconditionError("Artin-Schreier characters need p > 0")
        if not 1 <= self.index < self.p:
            raise PreconditionError(f"character index {self.index} outside 1..{self.p - 1}")
        F = self.field
        acc: Dict[Tuple[int, Tuple[int, ...]], object] = {}
        for n, e, c in self.terms:
            e = tuple(int(x) for x in e)
            if len(e) != len(self.basis):
                raise PreconditionError(f"exponent vector {e} does not match the p-basis {self.basis}")
            if int(n) < 1:
                raise PreconditionError("monomials need a pole in pi (n >= 1)")
            key = (int(n), e)
            acc[key] = F.add(acc.get(key, F.zero()), c)
        terms = tuple(sorted((n, e, c) for (n, e), c in acc.items() if not F.is_zero(c)))
        object.__setattr__(self, "terms", terms)

    @property
    def field(self) -> Field:
        return GF(self.p, self.k)

    @property
    def is_trivial(self) -> bool:
        return not self.terms

    @property
    def pole_order(self) -> int:
        return max((n for n, _, _ in self.terms), default=0)

    def power(self, i: int) -> "ASCharacter":
        """``chi^i``; raises for ``p | i`` (the trivial character has no index)."""
        j = (self.index * i) % self.p
        if j == 0:
            raise TameCharacter(f"chi^{i} is trivial")
        return ASCharacter(self.p, self.k, self.terms, self.basis, j)

    def scaled(self, i: int) -> "ASCharacter":
        """The character of ``i * f`` with the same index."""
        F = self.field
        c = F.from_int(i)
        return ASCharacter(self.p, self.k, tuple((n, e, F.mul(c, a)) for n, e, a in self.terms), self.basis, self.index)

    def __str__(self) -> str:
        F = self.field
        parts = []
        for n, e, c in self.terms:
            bs = "".join(f"*{b}^{x}" for b, x in zip(self.basis, e) if x)
            parts.append(f"({F.fmt(c)}){bs}*pi^-{n}")
        f = " + ".join(parts) if parts else "0"
        return f"z^{self.p} - z = {f}" + (f" (index {self.index})" if self.index != 1 else "")


def _killable(n: int, e: Tuple[int, ...], p: int) -> bool:
    return n % p == 0 and all(x % p == 0 for x in e)


def is_reduced(chi: ASCharacter) -> bool:
    return not any(_killable(n, e, chi.p) for n, e, _ in chi.terms)


def reduce_AS(chi: ASCharacter) -> ASCharacter:
    """Replace ``c^p * (b^e pi^(-n))^p`` by ``c * b^e pi^(-n)`` until no such monomial is left.

    Each step subtracts ``g^p - g`` with ``g = c^(1/p) b^(e/p) pi^(-n/p)``,
    so the character is unchanged.
    """
    p = chi.p
    F = chi.field
    cur = chi
    while True:
        kill = [(n, e, c) for n, e, c in cur.terms if _killable(n, e, p)]
        if not kill:
            return cur
        n, e, c = max(kill, key=lambda t: (t[0], t[1]))
        rest = [t for t in cur.terms if (t[0], t[1]) != (n, e)]
        rest.append((n // p, tuple(x // p for x in e), F.pth_root(c)))
        cur = ASCharacter(p, chi.k, tuple(rest), chi.basis, chi.index)


# ---------------------------------------------------------------------------
# residue fields for the Dwork pi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _FieldBridge:
    small: Field
    big: Field
    k_big: int
    forward: Dict[object, object]
    backward: Dict[object, object]

    def up(self, c):
        return self.forward[self.small.key(c)]

    def down_res(self, x: ResElem) -> ResElem:
        def back(c):
            key = self.big.key(c)
            if key not in self.backward:
                raise InvariantViolation("coefficient outside the character's residue field")
            return self.backward[key]

        if x.field is self.small:
            return x
        num = {m: back(c) for m, c in x.num.items()}
        den = None if x.den is None else {m: back(c) for m, c in x.den.items()}
        return ResElem(self.small, num, den)


@functools.lru_cache(maxsize=None)
def _bridge(p: int, k: int) -> _FieldBridge:
    small = GF(p, k)
    try:
        dwork_zeta_residue(small)
        k_big = k
    except PreconditionError:
        k_big = 2 * k
    big = GF(p, k_big)
    if big is small:
        fw = {small.key(a): a for a in small.elements()}
        return _FieldBridge(small, big, k_big, fw, dict(fw))
    if k == 1:
        image = lambda a: big.from_int(a)  # noqa: E731
    else:
        roots, _ = roots_with_multiplicity(big, [big.from_base(c) for c in small.modulus])
        if not roots:
            raise InvariantViolation(f"GF({p}^{k}) does not embed in GF({p}^{k_big})")
        r = roots[0][0]

        def image(a):
            acc, pw = big.zero(), big.one()
            for c in a:
                acc = big.add(acc, big.mul(big.from_base(c), pw))
                pw = big.mul(pw, r)
            return acc

    fw, bw = {}, {}
    for a in small.elements():
        b = image(a)
        fw[small.key(a)] = b
        bw[big.key(b)] = a
    return _FieldBridge(small, big, k_big, fw, bw)


# ---------------------------------------------------------------------------
# Dwork isocrystals
# ---------------------------------------------------------------------------


def _mono(exps: Dict[str, Fraction]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exps.items() if e != 0))


def _window(chi: ASCharacter) -> Tuple[Fraction, Fraction]:
    """Radii where every direction of the reduced isocrystal is visible."""
    N = chi.pole_order
    omega = Fraction(1, chi.p - 1)
    lo = (omega + 1 + _vp(N, chi.p)) / N
    return lo, lo + 1


def dwork_module(chi: ASCharacter, variant: int = 1, default_rel: int = 4) -> FamilyModule:
    """The rank one family ``d + index * pi_D * dF`` over the annulus in ``t``.

    Derivations: ``d/dt`` (index 0) and ``d/db_j`` (index ``j``).  ``variant``
    uses the Dwork pi ``[variant] * pi`` in place of ``pi``.
    """
    if chi.is_trivial:
        raise TameCharacter("the trivial character has no Dwork isocrystal")
    if not is_reduced(chi):
        raise NotReduced(f"{chi} has p-th power monomials; apply reduce_AS first")
    if variant % chi.p == 0:
        raise PreconditionError("the Dwork pi variant must be prime to p")
    br = _bridge(chi.p, chi.k)
    i = chi.index
    t_terms: List[FamilyTerm] = []
    b_terms: List[List[FamilyTerm]] = [[] for _ in chi.basis]
    for n, e, c in chi.terms:
        cc = br.up(c)
        exps = {b: Fraction(x) for b, x in zip(chi.basis, e) if x}
        t_mono = _mono({**exps, "t": Fraction(-n - 1)})
        t_terms.append(FamilyTerm(cc, Fraction(0), t_mono, 1, Fraction(-n * i), variant))
        for j, (b, x) in enumerate(zip(chi.basis, e)):
            if x:
                mono = _mono({**exps, "t": Fraction(-n), b: Fraction(x - 1)})
                b_terms[j].append(FamilyTerm(cc, Fraction(0), mono, 1, Fraction(x * i), variant))
    derivs = [Derivation("t", 0, 0)] + [Derivation(b, 0, j + 1) for j, b in enumerate(chi.basis)]
    mats = [((FamilyScalar(tuple(t_terms)),),)]
    for terms in b_terms:
        mats.append(((FamilyScalar(tuple(terms)),),))
    variables = (("t", Fraction(0)),) + tuple((b, Fraction(0)) for b in chi.basis)
    lo, hi = _window(chi)
    return FamilyModule(
        chi.p,
        br.k_big,
        variables,
        tuple(derivs),
        tuple(mats),
        domain=(Fraction(0), hi + 1),
        frobenius=True,
        default_rel=default_rel,
        name=str(chi),
        window=(lo, hi),
    )


def dwork_isocrystal(
    p: int, k: int, i: int, r: int, alphas: Sequence, variant: int = 1, default_rel: int = 4
) -> FamilyModule:
    """``d w = i pi T^(-r) (1 + p pi T^(-r) S)^(-1) w (x) dS`` with ``S = sum alpha_j delta_j``.

    Derivations ``d/d delta_j`` (index ``j``) act on weight-zero variables
    ``delta_0..delta_m``; ``t`` carries the radius.  The window is the
    range ``1/(p-1) < r*s < p/(p-1)`` where the radius is read directly.
    """
    F = GF(p, k)
    try:
        dwork_zeta_residue(F)
    except PreconditionError as exc:
        raise PreconditionError(f"GF({p}^{k}) has no Dwork pi residue; use an even degree") from exc
    if not 1 <= i < p:
        raise PreconditionError(f"index {i} outside 1..{p - 1}")
    if r < 1:
        raise PreconditionError("the pole exponent r must be positive")
    names = [f"d{j}" for j in range(len(alphas))]
    den = [FamilyTerm(F.one(), Fraction(0))]
    for a, d in zip(alphas, names):
        den.append(FamilyTerm(a, Fraction(1), tuple(sorted(((d, Fraction(1)), ("t", Fraction(-r))))), 1, Fraction(1), variant))
    mats = []
    for a in alphas:
        num = (FamilyTerm(a, Fraction(0), (("t", Fraction(-r)),), 1, Fraction(i), variant),)
        mats.append(((FamilyScalar(num, tuple(den)),),))
    omega = Fraction(1, p - 1)
    lo, hi = omega / r, p * omega / r
    return FamilyModule(
        p,
        k,
        tuple((d, Fraction(0)) for d in names) + (("t", Fraction(0)),),
        tuple(Derivation(d, 0, j) for j, d in enumerate(names)),
        tuple(mats),
        domain=(lo, hi),
        frobenius=True,
        default_rel=default_rel,
        name=f"E_{i}(p={p}, r={r})",
    )


# ---------------------------------------------------------------------------
# refined conductors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RefinedConductor:
    """A break and a differential form ``sum coeff * basis``.

    Log forms use ``dlog t`` (for ``dpi/pi``) and ``d b_j``; nonlog forms use
    ``d t`` and ``d b_j``.  Coefficients carry the factor ``t^(-b)``.
    ``normalized`` records that the Dwork pi has been divided out.
    """

    break_: Fraction
    form: Tuple[Tuple[str, ResElem], ...]
    log: bool = True
    normalized: bool = True

    def __post_init__(self):
        if not self.form or all(c.is_zero() for _, c in self.form):
            raise InvariantViolation("refined conductors are nonzero forms")
        if self.break_ <= 0:
            raise InvariantViolation("refined conductors have positive break")

    def coefficient(self, basis: str) -> ResElem:
        for b, c in self.form:
            if b == basis:
                return c
        return ResElem.zero(self.form[0][1].field)

    def times(self, i: int) -> "RefinedConductor":
        F = self.form[0][1].field
        c = F.from_int(i)
        form = tuple((b, x.scale(c)) for b, x in self.form if not F.is_zero(c))
        return RefinedConductor(self.break_, form, self.log, self.normalized)

    def to_json(self) -> dict:
        return {
            "break": str(self.break_),
            "log": self.log,
            "form": [{"basis": b, "coeff": str(c)} for b, c in self.form],
        }

    def __str__(self) -> str:
        return " + ".join(f"({c}) {b}" for b, c in self.form)


def _pi_residue(ctx: FieldContext, variant: int) -> ResElem:
    F = ctx.residue_field
    z = F.mul(dwork_zeta_residue(F), F.from_int(variant))
    return ResElem.const(F, z)


def _refined(chi: ASCharacter, variant: int, normalizer: Optional[int], log: bool) -> RefinedConductor:
    red = reduce_AS(chi)
    if red.is_trivial:
        raise TameCharacter("the character is unramified (f reduces to 0)")
    M = dwork_module(red, variant)
    lo, hi = M.window
    br = _bridge(chi.p, chi.k)
    r0 = (lo + hi) / 2
    rows = _direction_rows(M, r0, log)
    top = max(ir for _, ir, _, _ in rows)
    b = top / r0
    if log and b != red.pole_order:
        raise InvariantViolation(f"log break {b} differs from the reduced pole order {red.pole_order}")
    if not log:
        # the nonlog break is read directly only if the dominant radius is linear through 0
        r1 = (lo + 3 * hi) / 4
        if max(ir for _, ir, _, _ in _direction_rows(M, r1, log)) / r1 != b:
            raise PreconditionError("the nonlog break is not read directly from the Dwork model")
    ctx = M.context(r0)
    zeta = _pi_residue(ctx, variant if normalizer is None else normalizer)
    form = []
    for basis, ir, theta, u in rows:
        if ir != top:
            continue
        c = theta / zeta
        if basis != "dlog t":
            c = c / u
        form.append((basis, br.down_res(c)))
    return RefinedConductor(b, tuple(form), log, True)


def _direction_rows(M: FamilyModule, r: Fraction, log: bool) -> List[Tuple[str, Fraction, ResElem, ResElem]]:
    """``(basis, -log radius, intrinsic theta, parameter)`` per direction with a refined radius."""
    V = M.fiber(r)
    F = V.ctx.residue_field
    rows = []
    for D in V.derivations:
        if all(e.is_zero() for row in M.matrices[D.index] for e in row):
            continue
        data = V.refined_radii(D.index)
        if len(data) != 1:
            raise InvariantViolation("rank one modules have one refined radius")
        d = data[0]
        ir = V.ctx.omega - d.grade
        if D.var == "t":
            rows.append(("dlog t" if log else "d t", ir if log else ir + r, d.theta, ResElem.var(F, "t")))
        else:
            rows.append((f"d {D.var}", ir, d.theta, ResElem.var(F, D.var)))
    return rows


def refined_swan(chi: ASCharacter, variant: int = 1, normalizer: Optional[int] = None) -> RefinedConductor:
    """``rsw(chi) = (1/pi) * theta`` read from the Dwork isocrystal in the visible range.

    ``variant`` selects the Dwork pi used to build the isocrystal and
    ``normalizer`` the one divided out (by default the same one).
    """
    return _refined(chi, variant, normalizer, True)


def refined_artin(chi: ASCharacter, variant: int = 1, normalizer: Optional[int] = None) -> RefinedConductor:
    """Nonlog analogue: dominant directions by extrinsic radii, basis ``dt`` and ``db_j``.

    Only the case read directly from the Dwork model is covered (no
    perfection base change).
    """
    return _refined(chi, variant, normalizer, False)


def df_oracle(chi: ASCharacter) -> RefinedConductor:
    """The classical refined Swan conductor ``index * d(f)`` of the reduced top part."""
    red = reduce_AS(chi)
    if red.is_trivial:
        raise TameCharacter("the character is unramified (f reduces to 0)")
    F = red.field
    N = red.pole_order
    idx = F.from_int(red.index)
    comps: Dict[str, ResElem] = {"dlog t": ResElem.zero(F)}
    for b in red.basis:
        comps[f"d {b}"] = ResElem.zero(F)
    for n, e, c in red.terms:
        if n != N:
            continue
        mono: Monomial = tuple(sorted([("t", Fraction(-n))] + [(b, Fraction(x)) for b, x in zip(red.basis, e) if x]))
        term = ResElem.monomial(F, F.mul(idx, c), mono)
        comps["dlog t"] = comps["dlog t"] + term.scale(F.from_int(-n))
        for b, x in zip(red.basis, e):
            if x:
                comps[f"d {b}"] = comps[f"d {b}"] + term.scale(F.from_int(x)) / ResElem.var(F, b)
    form = tuple((k, v) for k, v in comps.items() if not v.is_zero())
    return RefinedConductor(Fraction(N), form, True, True)


# ---------------------------------------------------------------------------
# multi-index levels
# ---------------------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class MultiIndexLevel:
    """``(i_1, ..., i_(m+1))`` ordered lexicographically from the last entry."""

    values: Tuple[Fraction, ...]
    log: bool = True

    def _key(self):
        return tuple(reversed(self.values))

    def __lt__(self, other: "MultiIndexLevel") -> bool:
        if len(self.values) != len(other.values):
            raise ParamMismatch("levels of different lengths are incomparable")
        return self._key() < other._key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiIndexLevel):
            return NotImplemented
        return self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    @property
    def break_(self) -> Fraction:
        return self.values[-1]


def multi_valuation(x: ResElem, params: Sequence[str]) -> Tuple[Fraction, ...]:
    """``(v_1, ..., v_(m+1))`` of a Laurent residue: ``v_(m+1)`` is the order in ``params[0]``,
    then the order of its leading coefficient in ``params[1]``, and so on."""
    if x.is_zero():
        raise PreconditionError("the zero element has no valuation")
    if not x.is_laurent():
        raise PreconditionError("multi-index valuations are computed for Laurent residues")
    monos = [dict(m) for m in x.num]
    out = []
    for name in params:
        e = min(m.get(name, Fraction(0)) for m in monos)
        out.append(Fraction(e))
        monos = [m for m in monos if m.get(name, Fraction(0)) == e]
    return tuple(reversed(out))


def filtration_level(rc: RefinedConductor, local_params: Sequence[str], basis: Sequence[str] = ()) -> MultiIndexLevel:
    """``-v_log`` (or ``-v_nlog``) of the form: the lexicographic minimum over its coefficients.

    ``local_params`` lists ``t_0, ..., t_m`` (``t_0`` is the uniformizer);
    other variables of the coefficients must be named in ``basis``.
    """
    if not local_params:
        raise ParamMismatch("at least the uniformizer is needed")
    allowed = set(local_params) | set(basis)
    vals = []
    for _, c in rc.form:
        if c.is_zero():
            continue
        extra = set(c.variables()) - allowed
        if extra:
            raise ParamMismatch(f"variables {sorted(extra)} are neither local parameters nor p-basis elements")
        vals.append(multi_valuation(c, local_params))
    v = min(vals, key=lambda t: tuple(reversed(t)))
    level = MultiIndexLevel(tuple(-x for x in v), rc.log)
    if rc.log and level.break_ != rc.break_:
        raise ParamMismatch(f"level {level.values} does not end with the break {rc.break_}")
    return level
