"""Parsers and emitters for scalar literals and job configs.

Scalar literals (see the README for the full grammar)::

    [t^3 + 2t]*p^(1/2) + 3*X^-1 - pi*[a]*t^(-2)
    [1] / ([1] + p*t^-1)

``[...]`` holds a residue literal over the declared GF(p^k) (the generator
of GF(p^k) for k > 1 is ``a``); it is lifted coefficientwise by Teichmuller
lifts.  Integers and ``(m/n)`` outside brackets are exact rational factors,
``p^q`` is the p-power basis element, ``pi`` the Dwork pi and bare names
are the lifted variables.

Configs are line based: ``key = value`` pairs, ``[derivation]`` sections
and indented matrix rows with entries separated by ``;``.  Every error
carries the line and column of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .conductors import ASCharacter, dwork_isocrystal
from .errors import ParseError, PreconditionError
from .fiber import FiberModule
from .gf import GF, Field
from .ore import Derivation
from .residue import Monomial, ResElem
from .scalar import FieldContext
from .variation import FamilyModule, FamilyScalar, FamilyTerm

RESERVED = {"p", "pi"}
GENERATOR = "a"


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str, line: int = 1, col0: int = 1) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(Token("INT", m.group(1), col0 + m.start(1)))
        elif m.group(2) is not None:
            out.append(Token("NAME", m.group(2), col0 + m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()[],":
                raise ParseError(f"unexpected character {ch!r}", line, col0 + m.start(3))
            out.append(Token("OP", ch, col0 + m.start(3)))
        pos = m.end()
    out.append(Token("END", "", col0 + len(text)))
    return out


class _Cursor:
    def __init__(self, tokens: List[Token], line: int):
        self.toks = tokens
        self.i = 0
        self.line = line

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.peek(text):
            self.fail(f"expected {text!r}")
        return self.take()

    def fail(self, msg: str):
        t = self.tok
        got = "end of input" if t.kind == "END" else repr(t.text)
        raise ParseError(f"{msg}, found {got}", self.line, t.col)

    def done(self) -> None:
        if self.tok.kind != "END":
            self.fail("unexpected trailing input")


def _exponent(cur: _Cursor) -> Fraction:
    """``[-]INT`` or ``( [-]INT [/ INT] )``."""
    if cur.peek("("):
        cur.take()
        sign = -1 if cur.peek("-") and cur.take() else 1
        if cur.tok.kind != "INT":
            cur.fail("expected an integer exponent")
        num = int(cur.take().text)
        den = 1
        if cur.peek("/"):
            cur.take()
            if cur.tok.kind != "INT":
                cur.fail("expected a denominator")
            at = cur.take()
            den = int(at.text)
            if den == 0:
                raise ParseError("zero denominator", cur.line, at.col)
        cur.expect(")")
        return sign * Fraction(num, den)
    sign = -1 if cur.peek("-") and cur.take() else 1
    if cur.tok.kind != "INT":
        cur.fail("expected an exponent")
    return sign * Fraction(int(cur.take().text))


# ---------------------------------------------------------------------------
# residue literals
# ---------------------------------------------------------------------------


class _ResidueParser:
    def __init__(self, cur: _Cursor, F: Field, names: Sequence[str]):
        self.cur = cur
        self.F = F
        self.names = set(names)
        self.has_gen = F.degree > 1 if hasattr(F, "degree") else False

    def sum(self) -> ResElem:
        cur = self.cur
        neg = cur.peek("-") and bool(cur.take())
        acc = self.prod()
        if neg:
            acc = -acc
        while cur.peek("+") or cur.peek("-"):
            op = cur.take().text
            t = self.prod()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_atom(self) -> bool:
        t = self.cur.tok
        return t.kind in ("INT", "NAME") or (t.kind == "OP" and t.text == "(")

    def prod(self) -> ResElem:
        acc = self.power()
        while True:
            if self.cur.peek("*"):
                self.cur.take()
                acc = acc * self.power()
            elif self._starts_atom():
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> ResElem:
        cur = self.cur
        t = cur.tok
        if t.kind == "NAME" and t.text in self.names:
            cur.take()
            e = _exponent(cur) if cur.peek("^") and cur.take() else Fraction(1)
            return ResElem.var(self.F, t.text, e)
        base = self.atom()
        if cur.peek("^"):
            cur.take()
            at = cur.tok
            e = _exponent(cur)
            if e.denominator != 1:
                raise ParseError("fractional powers apply to variables only", cur.line, at.col)
            if e < 0 and base.is_zero():
                raise ParseError("zero to a negative power", cur.line, at.col)
            base = base ** int(e)
        return base

    def atom(self) -> ResElem:
        cur = self.cur
        t = cur.tok
        if t.kind == "INT":
            cur.take()
            return ResElem.const(self.F, self.F.from_int(int(t.text)))
        if t.kind == "NAME":
            if t.text == GENERATOR and self.has_gen:
                cur.take()
                return ResElem.const(self.F, self.F.gen())
            cur.fail(f"unknown name {t.text!r} (declared: {', '.join(sorted(self.names)) or 'none'})")
        if cur.peek("("):
            cur.take()
            x = self.sum()
            cur.expect(")")
            return x
        cur.fail("expected a residue term")


def parse_residue(text: str, F: Field, names: Sequence[str] = (), line: int = 1, col: int = 1) -> ResElem:
    """A residue literal such as ``t^3 + 2t`` or ``(1 + a)*b1^(-1)``."""
    cur = _Cursor(tokenize(text, line, col), line)
    x = _ResidueParser(cur, F, names).sum()
    cur.done()
    return x


def parse_field_element(text: str, F: Field, line: int = 1, col: int = 1):
    x = parse_residue(text, F, (), line, col)
    if x.is_zero():
        return F.zero()
    return x.constant_value()


# ---------------------------------------------------------------------------
# scalar literals
# ---------------------------------------------------------------------------


def _scalar_sum(cur: _Cursor, F: Field, names: Sequence[str]) -> List[FamilyTerm]:
    terms: List[FamilyTerm] = []
    sign = 1
    if cur.peek("-"):
        cur.take()
        sign = -1
    terms.extend(_scalar_term(cur, F, names, sign))
    while cur.peek("+") or cur.peek("-"):
        sign = 1 if cur.take().text == "+" else -1
        terms.extend(_scalar_term(cur, F, names, sign))
    return terms


def _scalar_term(cur: _Cursor, F: Field, names: Sequence[str], sign: int) -> List[FamilyTerm]:
    scale = Fraction(sign)
    res = ResElem.one(F)
    q = Fraction(0)
    pi = 0
    mono: Dict[str, Fraction] = {}
    while True:
        t = cur.tok
        if t.kind == "INT":
            cur.take()
            scale *= int(t.text)
        elif cur.peek("("):
            cur.take()
            neg = cur.peek("-") and bool(cur.take())
            if cur.tok.kind != "INT":
                cur.fail("expected a rational factor (m/n)")
            num = int(cur.take().text)
            cur.expect("/")
            if cur.tok.kind != "INT":
                cur.fail("expected a denominator")
            at = cur.take()
            den = int(at.text)
            if den == 0:
                raise ParseError("zero denominator", cur.line, at.col)
            cur.expect(")")
            scale *= Fraction(-num if neg else num, den)
        elif cur.peek("["):
            cur.take()
            r = _ResidueParser(cur, F, names).sum()
            cur.expect("]")
            res = res * r
        elif t.kind == "NAME" and t.text == "p":
            cur.take()
            q += _exponent(cur) if cur.peek("^") and cur.take() else Fraction(1)
        elif t.kind == "NAME" and t.text == "pi":
            cur.take()
            e = Fraction(1)
            if cur.peek("^"):
                cur.take()
                at = cur.tok
                e = _exponent(cur)
                if e.denominator != 1:
                    raise ParseError("powers of pi are integers", cur.line, at.col)
            pi += int(e)
        elif t.kind == "NAME" and t.text in names:
            cur.take()
            e = _exponent(cur) if cur.peek("^") and cur.take() else Fraction(1)
            mono[t.text] = mono.get(t.text, Fraction(0)) + e
        elif t.kind == "NAME":
            cur.fail(f"unknown name {t.text!r}")
        else:
            cur.fail("expected a factor")
        if cur.peek("*"):
            cur.take()
            continue
        break
    if not res.is_laurent():
        raise ParseError("bracketed residues must be Laurent polynomials", cur.line, cur.tok.col)
    out = []
    if scale == 0:
        return out
    for m, c in sorted(res.num.items()):
        full = dict(mono)
        for n, e in m:
            full[n] = full.get(n, Fraction(0)) + e
        mm: Monomial = tuple(sorted((n, e) for n, e in full.items() if e != 0))
        out.append(FamilyTerm(c, q, mm, pi, scale))
    return out


def parse_scalar(text: str, F: Field, names: Sequence[str], line: int = 1, col: int = 1) -> FamilyScalar:
    """Parse a scalar literal into exact term data (evaluated later in a context)."""
    bad = RESERVED & set(names)
    if bad:
        raise ParseError(f"variable names {sorted(bad)} are reserved", line, col)
    cur = _Cursor(tokenize(text, line, col), line)
    if cur.tok.kind == "END":
        cur.fail("empty scalar literal")
    num = _scalar_sum(cur, F, names)
    den: List[FamilyTerm] = []
    if cur.peek("/"):
        cur.take()
        cur.expect("(")
        at = cur.tok
        den = _scalar_sum(cur, F, names)
        cur.expect(")")
        if not den:
            raise ParseError("division by zero", line, at.col)
    cur.done()
    return FamilyScalar(tuple(num), tuple(den))


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"({x.numerator}/{x.denominator})"


def _fmt_exp(x: Fraction) -> str:
    if x.denominator == 1 and x >= 0:
        return str(x.numerator)
    return f"({x.numerator}/{x.denominator})" if x.denominator != 1 else f"({x.numerator})"


def emit_term(t: FamilyTerm, F: Field) -> str:
    parts = []
    if t.scale != 1:
        parts.append(_fmt_fraction(abs(t.scale)) if t.scale.denominator != 1 else str(abs(t.scale.numerator)))
    parts.append(f"[{F.fmt(t.coeff)}]")
    if t.pval:
        parts.append(f"p^{_fmt_exp(t.pval)}")
    if t.pi_power:
        parts.append(f"pi^{_fmt_exp(Fraction(t.pi_power))}")
    for n, e in t.mono:
        parts.append(n if e == 1 else f"{n}^{_fmt_exp(e)}")
    return "*".join(parts)


def emit_scalar(x: FamilyScalar, F: Field) -> str:
    """Canonical literal for parsed scalar data (``parse_scalar`` inverts it)."""

    def part(terms: Sequence[FamilyTerm]) -> str:
        if not terms:
            return "0"
        s = ""
        for i, t in enumerate(terms):
            body = emit_term(t, F)
            neg = t.scale < 0
            if i == 0:
                s = ("-" if neg else "") + body
            else:
                s += (" - " if neg else " + ") + body
        return s

    s = part(x.num)
    if x.den:
        s += f" / ({part(x.den)})"
    return s


# ---------------------------------------------------------------------------
# configs
# ---------------------------------------------------------------------------


@dataclass
class Entry:
    value: str
    line: int
    col: int
    rows: List[Tuple[str, int, int]] = field(default_factory=list)


@dataclass
class Section:
    name: str
    line: int
    entries: Dict[str, Entry] = field(default_factory=dict)


def _split_lines(text: str) -> List[Section]:
    sections = [Section("", 0)]
    current_matrix: Optional[Entry] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indented = body[0] in " \t"
        if indented and current_matrix is not None:
            col = len(body) - len(body.lstrip()) + 1
            current_matrix.rows.append((body.strip(), lineno, col))
            continue
        current_matrix = None
        stripped = body.strip()
        lead = len(body) - len(body.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, len(body) + 1)
            sections.append(Section(stripped[1:-1].strip(), lineno))
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno, lead + 1)
        key, _, val = stripped.partition("=")
        key = key.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", key):
            raise ParseError(f"invalid key {key!r}", lineno, lead + 1)
        vcol = lead + stripped.index("=") + 2 + (len(val) - len(val.lstrip()))
        sec = sections[-1]
        if key in sec.entries:
            raise ParseError(f"duplicate key {key!r}", lineno, lead + 1)
        entry = Entry(val.strip(), lineno, vcol)
        sec.entries[key] = entry
        if key == "matrix" and not entry.value:
            current_matrix = entry
    return sections


def _need(sec: Section, key: str) -> Entry:
    if key not in sec.entries:
        raise ParseError(f"missing key {key!r}" + (f" in [{sec.name}]" if sec.name else ""), max(sec.line, 1), 1)
    return sec.entries[key]


def _int(e: Entry) -> int:
    try:
        return int(e.value)
    except ValueError:
        raise ParseError(f"expected an integer, found {e.value!r}", e.line, e.col) from None


def _frac(text: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational number, found {text.strip()!r}", line, col) from None


def _bool(e: Entry) -> bool:
    v = e.value.lower()
    if v in ("yes", "true", "1"):
        return True
    if v in ("no", "false", "0"):
        return False
    raise ParseError(f"expected yes/no, found {e.value!r}", e.line, e.col)


def _list(e: Entry) -> List[Tuple[str, int]]:
    out = []
    col = e.col
    for piece in e.value.split(","):
        lead = len(piece) - len(piece.lstrip())
        if piece.strip():
            out.append((piece.strip(), col + lead))
        col += len(piece) + 1
    return out


def _variables(e: Entry) -> List[Tuple[str, Fraction]]:
    out = []
    for item, col in _list(e):
        name, sep, w = item.partition(":")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise ParseError(f"expected 'name:weight', found {item!r}", e.line, col)
        if name in RESERVED or name == GENERATOR:
            raise ParseError(f"variable name {name!r} is reserved", e.line, col)
        out.append((name, _frac(w, e.line, col + len(name) + 1)))
    return out


def _field(sec: Section) -> Tuple[int, int, Field]:
    p = _int(_need(sec, "p"))
    k = _int(sec.entries["k"]) if "k" in sec.entries else 1
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        e = _need(sec, "p")
        raise ParseError(f"p = {p} is not a prime", e.line, e.col)
    if k < 1:
        e = sec.entries["k"]
        raise ParseError("k must be positive", e.line, e.col)
    return p, k, GF(p, k)


def _derivations(sections: Sequence[Section], F: Field, names: Sequence[str]):
    derivs = []
    mats = []
    for idx, sec in enumerate(s for s in sections if s.name.split()[0:1] == ["derivation"]):
        var = _need(sec, "var")
        if var.value not in names:
            raise ParseError(f"unknown variable {var.value!r}", var.line, var.col)
        level = _int(sec.entries["level"]) if "level" in sec.entries else 0
        index = _int(sec.entries["index"]) if "index" in sec.entries else idx
        derivs.append(Derivation(var.value, level, index))
        m = _need(sec, "matrix")
        if not m.rows:
            raise ParseError("matrix rows must follow 'matrix =' on indented lines", m.line, m.col)
        rows = []
        for text, line, col in m.rows:
            row = []
            c = col
            for cell in text.split(";"):
                lead = len(cell) - len(cell.lstrip())
                row.append(parse_scalar(cell.strip(), F, names, line, c + lead))
                c += len(cell) + 1
            rows.append(tuple(row))
        d = len(rows)
        for (text, line, col), row in zip(m.rows, rows):
            if len(row) != d:
                raise ParseError(f"matrix rows must have {d} entries", line, col)
        mats.append(tuple(rows))
    if not derivs:
        raise ParseError("at least one [derivation] section is required", 1, 1)
    ranks = {len(N) for N in mats}
    if len(ranks) != 1:
        raise ParseError("all matrices must have the same size", 1, 1)
    return tuple(derivs), tuple(mats)


@dataclass(frozen=True)
class ModuleConfig:
    """A differential module over one fixed field."""

    p: int
    k: int
    variables: Tuple[Tuple[str, Fraction], ...]
    derivations: Tuple[Derivation, ...]
    matrices: Tuple[Tuple[Tuple[FamilyScalar, ...], ...], ...]
    boundary: Optional[str] = None
    precision: int = 8

    def context(self, seed: int = 0, max_split_degree: int = 4) -> FieldContext:
        return FieldContext(
            self.p, self.k, self.variables, default_rel=self.precision, boundary_var=self.boundary,
            max_split_degree=max_split_degree, seed=seed,
        )

    def build(self, seed: int = 0, max_split_degree: int = 4) -> FiberModule:
        ctx = self.context(seed, max_split_degree)
        mats = [[[e.evaluate(ctx) for e in row] for row in N] for N in self.matrices]
        return FiberModule(ctx, list(self.derivations), mats)


@dataclass(frozen=True)
class DworkConfig:
    p: int
    k: int
    index: int
    r: int
    alphas: Tuple[object, ...]

    def build(self) -> FamilyModule:
        return dwork_isocrystal(self.p, self.k, self.index, self.r, self.alphas)


@dataclass(frozen=True)
class Config:
    kind: str  # module | family | character | dwork
    obj: object
    local_params: Tuple[str, ...] = ()


def parse_config(text: str) -> Config:
    """Parse a job config; raises ParseError with line and column on any problem."""
    sections = _split_lines(text)
    top = sections[0]
    kind_e = _need(top, "kind")
    kind = kind_e.value
    known = {"module", "family", "character", "dwork"}
    if kind not in known:
        raise ParseError(f"unknown kind {kind!r} (expected one of {sorted(known)})", kind_e.line, kind_e.col)
    for sec in sections[1:]:
        if sec.name.split()[0:1] != ["derivation"]:
            raise ParseError(f"unknown section [{sec.name}]", sec.line, 1)
    p, k, F = _field(top)
    try:
        if kind == "module":
            return Config(kind, _module(top, sections, p, k, F))
        if kind == "family":
            return Config(kind, _family(top, sections, p, k, F))
        if kind == "character":
            chi = _character(top, p, k, F)
            lp = tuple(x for x, _ in _list(top.entries["local_params"])) if "local_params" in top.entries else ("t",)
            return Config(kind, chi, lp)
        return Config(kind, _dwork(top, p, k, F))
    except ParseError:
        raise
    except (PreconditionError, ValueError) as exc:
        raise ParseError(f"invalid {kind}: {exc}", kind_e.line, kind_e.col) from exc


def _module(top: Section, sections, p, k, F) -> ModuleConfig:
    variables = _variables(_need(top, "variables"))
    names = [n for n, _ in variables]
    derivs, mats = _derivations(sections, F, names)
    boundary = top.entries["boundary"].value if "boundary" in top.entries else None
    if boundary is not None and boundary not in names:
        e = top.entries["boundary"]
        raise ParseError(f"unknown boundary variable {boundary!r}", e.line, e.col)
    prec = _int(top.entries["precision"]) if "precision" in top.entries else 8
    return ModuleConfig(p, k, tuple(variables), derivs, mats, boundary, prec)


def _interval(e: Entry) -> Tuple[Fraction, Fraction]:
    items = _list(e)
    if len(items) != 2:
        raise ParseError("expected 'lo, hi'", e.line, e.col)
    lo, hi = (_frac(x, e.line, c) for x, c in items)
    if lo >= hi:
        raise ParseError("empty interval", e.line, e.col)
    return lo, hi


def _family(top: Section, sections, p, k, F) -> FamilyModule:
    radius = top.entries["radius"].value if "radius" in top.entries else "t"
    variables = _variables(top.entries["variables"]) if "variables" in top.entries else []
    variables = [(n, w) for n, w in variables if n != radius] + [(radius, Fraction(0))]
    names = [n for n, _ in variables]
    derivs, mats = _derivations(sections, F, names)
    domain = _interval(_need(top, "domain"))
    window = _interval(top.entries["window"]) if "window" in top.entries else None
    return FamilyModule(
        p,
        k,
        tuple(variables),
        derivs,
        mats,
        radius_var=radius,
        domain=domain,
        disc=_bool(top.entries["disc"]) if "disc" in top.entries else False,
        denominator=_int(top.entries["denominator"]) if "denominator" in top.entries else 1,
        frobenius=_bool(top.entries["frobenius"]) if "frobenius" in top.entries else False,
        default_rel=_int(top.entries["precision"]) if "precision" in top.entries else 8,
        name=top.entries["name"].value if "name" in top.entries else "",
        window=window,
    )


def _character(top: Section, p, k, F) -> ASCharacter:
    basis = tuple(x for x, _ in _list(top.entries["basis"])) if "basis" in top.entries else ()
    for b, col in (_list(top.entries["basis"]) if "basis" in top.entries else []):
        if b in RESERVED or b == GENERATOR or b == "t" or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", b):
            raise ParseError(f"invalid p-basis name {b!r}", top.entries["basis"].line, col)
    e = _need(top, "f")
    f = parse_residue(e.value, F, ("pi",) + basis, e.line, e.col)
    if f.is_zero():
        raise ParseError("f must be nonzero", e.line, e.col)
    if not f.is_laurent():
        raise ParseError("f must be a Laurent polynomial", e.line, e.col)
    terms = []
    for mono, c in f.num.items():
        d = dict(mono)
        n = -d.pop("pi", Fraction(0))
        exps = [d.get(b, Fraction(0)) for b in basis]
        if n.denominator != 1 or any(x.denominator != 1 for x in exps):
            raise ParseError("exponents of f must be integers", e.line, e.col)
        if n < 1:
            raise ParseError("every monomial of f needs a pole in pi", e.line, e.col)
        terms.append((int(n), tuple(int(x) for x in exps), c))
    index = _int(top.entries["index"]) if "index" in top.entries else 1
    return ASCharacter(p, k, tuple(terms), basis, index)


def _dwork(top: Section, p, k, F) -> DworkConfig:
    index = _int(top.entries["index"]) if "index" in top.entries else 1
    r = _int(_need(top, "r"))
    e = _need(top, "alphas")
    alphas = tuple(parse_field_element(x, F, e.line, c) for x, c in _list(e))
    if not alphas:
        raise ParseError("at least one alpha is needed", e.line, e.col)
    return DworkConfig(p, k, index, r, alphas)


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def _emit_derivations(derivs, mats, F) -> List[str]:
    out = []
    for D, N in zip(derivs, mats):
        out += ["", "[derivation]", f"var = {D.var}", f"level = {D.level}", f"index = {D.index}", "matrix ="]
        for row in N:
            out.append("    " + " ; ".join(emit_scalar(e, F) for e in row))
    return out


def _emit_vars(vs) -> str:
    return ", ".join(f"{n}:{w}" for n, w in vs)


def emit_config(cfg: Config) -> str:
    """Canonical config text; ``parse_config(emit_config(c))`` reproduces ``c``."""
    o = cfg.obj
    if cfg.kind == "module":
        F = GF(o.p, o.k)
        lines = ["kind = module", f"p = {o.p}", f"k = {o.k}", f"variables = {_emit_vars(o.variables)}"]
        if o.boundary:
            lines.append(f"boundary = {o.boundary}")
        lines.append(f"precision = {o.precision}")
        lines += _emit_derivations(o.derivations, o.matrices, F)
    elif cfg.kind == "family":
        F = GF(o.p, o.k)
        others = [(n, w) for n, w in o.variables if n != o.radius_var]
        lines = ["kind = family", f"p = {o.p}", f"k = {o.k}", f"radius = {o.radius_var}"]
        if others:
            lines.append(f"variables = {_emit_vars(others)}")
        lines += [f"domain = {o.domain[0]}, {o.domain[1]}"]
        if o.window is not None:
            lines.append(f"window = {o.window[0]}, {o.window[1]}")
        lines += [
            f"disc = {'yes' if o.disc else 'no'}",
            f"denominator = {o.denominator}",
            f"frobenius = {'yes' if o.frobenius else 'no'}",
            f"precision = {o.default_rel}",
        ]
        if o.name:
            lines.append(f"name = {o.name}")
        lines += _emit_derivations(o.derivations, o.matrices, F)
    elif cfg.kind == "character":
        F = o.field
        lines = ["kind = character", f"p = {o.p}", f"k = {o.k}"]
        if o.basis:
            lines.append(f"basis = {', '.join(o.basis)}")
        lines.append(f"index = {o.index}")
        parts = []
        for n, e, c in o.terms:
            mono = "".join(f"*{b}^({x})" for b, x in zip(o.basis, e) if x)
            parts.append(f"({F.fmt(c)}){mono}*pi^({-n})")
        lines.append(f"f = {' + '.join(parts)}")
        lines.append(f"local_params = {', '.join(cfg.local_params)}")
    else:
        F = GF(o.p, o.k)
        lines = [
            "kind = dwork", f"p = {o.p}", f"k = {o.k}", f"index = {o.index}", f"r = {o.r}",
            f"alphas = {', '.join(F.fmt(a) for a in o.alphas)}",
        ]
    return "\n".join(lines) + "\n"
