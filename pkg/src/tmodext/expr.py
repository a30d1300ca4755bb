"""Expression language for coefficients and skew polynomials.

Grammar (usual precedence, ``^`` binds tightest and chains left to right)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT | '^' '-' INT | '^' '(' ['-'] INT ')')*
    atom   := INT | NAME | '(' expr ')'

``x^(k)`` is the Frobenius twist, ``x^n`` a power.  ``T`` is tau and ``S``
is sigma.  Products are non-commutative and evaluated left to right; ``f/g``
right-multiplies by the inverse of a degree-0 ``g``.  Twists and negative
powers apply to coefficients only.

The printers emit text that parses back to the identical value.
"""

from __future__ import annotations

import re

from .errors import InputError, ParseError
from .field import GENERATOR, THETA, RationalCoeff, mono_deg
from .skew import Side, SkewPoly

RESERVED = frozenset({THETA, GENERATOR, "T", "S"})

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text, where):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("INT", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("NAME", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError("unexpected character", line=1, column=start + 1, token=ch, where=where)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


def check_symbols(symbols, field=None):
    """Validate declared symbol names; returns them as a frozenset."""
    out = set()
    for s in symbols:
        if not isinstance(s, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", s):
            raise InputError(f"invalid symbol name {s!r}")
        if s in RESERVED:
            raise InputError(f"'{s}' is reserved and cannot be declared as a symbol")
        if field is not None and field.e > 1 and s == field.generator:
            raise InputError(f"'{s}' names the generator of F_q and cannot be declared as a symbol")
        out.add(s)
    return frozenset(out)


class _Parser:
    def __init__(self, text, field, symbols, side, allow_c, where):
        self.text = text
        self.field = field
        self.symbols = symbols
        self.side = side
        self.allow_c = allow_c
        self.where = where
        self.toks = _tokenize(text, where)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, line=1, column=tok[2] + 1, token=tok[1] or "<end>", where=self.where)

    def expect(self, kind):
        t = self.peek()
        if t[0] != kind:
            raise self.error(f"expected {kind!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "EOF":
            raise self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "EOF":
            raise self.error("unexpected token")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            w = self.unary()
            if op[0] == "*":
                v = v * w
            else:
                if not w.is_constant():
                    raise self.error("division is only defined by degree-0 coefficients", op)
                c = w.constant_term()
                if c.is_zero():
                    raise self.error("division by zero", op)
                v = v * SkewPoly.constant(c.inverse(), self.side)
        return v

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        while self.peek()[0] == "^":
            op = self.take()
            t = self.peek()
            if t[0] == "(":
                self.take()
                neg = False
                if self.peek()[0] == "-":
                    self.take()
                    neg = True
                k = int(self.expect("INT")[1])
                self.expect(")")
                k = -k if neg else k
                if not v.is_constant():
                    raise self.error("twists apply to coefficients, not to skew polynomials", op)
                v = SkewPoly.constant(v.constant_term().twist(k), self.side) if not v.is_zero() else v
            else:
                neg = False
                if t[0] == "-":
                    self.take()
                    neg = True
                n = int(self.expect("INT")[1])
                if neg:
                    if not v.is_constant() or v.is_zero():
                        raise self.error("negative powers apply to nonzero coefficients only", op)
                    v = SkewPoly.constant(v.constant_term() ** (-n), self.side)
                else:
                    acc = SkewPoly.one(self.field, self.side)
                    for _ in range(n):
                        acc = acc * v
                    v = acc
        return v

    def atom(self):
        t = self.take()
        F, side = self.field, self.side
        if t[0] == "INT":
            return SkewPoly.constant(RationalCoeff.from_int(int(t[1]), F), side)
        if t[0] == "NAME":
            name = t[1]
            if name in ("T", "S"):
                want = side.symbol
                if name != want:
                    raise self.error(f"'{name}' is not the generator of the {side.name.lower()} ring", t)
                return SkewPoly.gen(F, side)
            if name == THETA:
                return SkewPoly.constant(RationalCoeff.theta(F), side)
            if name == GENERATOR:
                if not self.allow_c:
                    raise self.error(f"'{GENERATOR}' is reserved for the extension generator", t)
                return SkewPoly.constant(RationalCoeff.var(GENERATOR, F), side)
            if F.e > 1 and name == F.generator:
                return SkewPoly.constant(RationalCoeff.from_scalar(F.p, F), side)
            if name not in self.symbols:
                raise self.error(f"undeclared symbol '{name}'", t)
            return SkewPoly.constant(RationalCoeff.var(name, F), side)
        if t[0] == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise self.error("expected a number, a name or '('", t)


def parse_skew(text, field, symbols=(), side=Side.TAU, allow_c=False, where=None):
    if not isinstance(text, str):
        if isinstance(text, int):
            text = str(text)
        else:
            raise ParseError("expression must be a string", where=where, token=repr(text))
    return _Parser(text, field, frozenset(symbols), side, allow_c, where).parse()


def parse_coeff(text, field, symbols=(), allow_c=False, where=None):
    v = parse_skew(text, field, symbols, Side.TAU, allow_c, where)
    if not v.is_constant():
        raise ParseError("expected a coefficient (no T/S)", where=where, token=text)
    return v.constant_term()


def parse_matrix(rows, field, symbols=(), side=Side.TAU, allow_c=False, where=None):
    from .tmodule import SkewMatrix

    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError("a matrix is a list of rows (lists of strings)", where=where)
    out = []
    for i, row in enumerate(rows):
        out.append(
            [
                parse_skew(e, field, symbols, side, allow_c, where=f"{where or 'matrix'}[{i + 1}][{j + 1}]")
                for j, e in enumerate(row)
            ]
        )
    return SkewMatrix(out, field, side)


# ---------------------------------------------------------------------------
# Printing


def _scalar_str(c, F):
    """Symmetric-residue text of an encoded F_q scalar."""
    if F.e == 1:
        v = c if c <= F.p // 2 else c - F.p
        return str(v)
    terms = []
    for i, d in reversed(list(enumerate(F.digits(c)))):
        if not d:
            continue
        d = d if d <= F.p // 2 else d - F.p
        g = "" if i == 0 else (F.generator if i == 1 else f"{F.generator}^{i}")
        if not g:
            terms.append(str(d))
        elif d == 1:
            terms.append(g)
        elif d == -1:
            terms.append("-" + g)
        else:
            terms.append(f"{d}*{g}")
    return _join(terms) if terms else "0"


def _join(terms):
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def _mono_str(m):
    parts = []
    for (name, tw), e in m:
        s = name if tw == 0 else f"{name}^({tw})"
        if e != 1:
            s += f"^{e}"
        parts.append(s)
    return "*".join(parts)


def _term_key(m):
    return (-mono_deg(m), m)


def _poly_terms(poly, F):
    terms = []
    for m in sorted(poly, key=_term_key):
        c = poly[m]
        cs = _scalar_str(c, F)
        ms = _mono_str(m)
        if not ms:
            terms.append(cs)
            continue
        multi = F.e > 1 and (" + " in cs or " - " in cs)
        if cs == "1":
            terms.append(ms)
        elif cs == "-1":
            terms.append("-" + ms)
        elif multi:
            terms.append(f"({cs})*{ms}")
        else:
            terms.append(f"{cs}*{ms}")
    return terms


def _poly_str(poly, F):
    return _join(_poly_terms(poly, F)) if poly else "0"


def _is_single_factor(poly, F):
    if len(poly) != 1:
        return False
    (m, c), = poly.items()
    return c == 1 and len(m) == 1


def format_coeff(x):
    F = x.field
    num = _poly_str(x.num, F)
    if x.is_polynomial():
        return num
    den = _poly_str(x.den, F)
    if len(x.num) > 1 or (F.e > 1 and len(x.num) == 1 and (" + " in num[1:] or " - " in num[1:])):
        num = f"({num})"
    if not _is_single_factor(x.den, F):
        den = f"({den})"
    return f"{num}/{den}"


def _is_compound(s):
    return " + " in s or " - " in s


def format_skew(f):
    if f.is_zero():
        return "0"
    g = f.side.symbol
    terms = []
    for k, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        cs = format_coeff(c if isinstance(c, RationalCoeff) else c.to_rational())
        if k == 0:
            terms.append(cs)
            continue
        power = g if k == 1 else f"{g}^{k}"
        if cs == "1":
            terms.append(power)
        elif cs == "-1":
            terms.append("-" + power)
        elif _is_compound(cs):
            terms.append(f"({cs})*{power}")
        else:
            terms.append(f"{cs}*{power}")
    # A compound constant term is safe unparenthesized: it is the first summand.
    return _join(terms)


def format_matrix(M):
    if M.rows == 0:
        return "[]"
    cells = [[format_skew(e) for e in row] for row in M.entries]
    return "\n".join("[" + ", ".join(r) + "]" for r in cells)


def matrix_to_json(M):
    return [[format_skew(e) for e in row] for row in M.entries]
