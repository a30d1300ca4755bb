"""Exact arithmetic in F_q(x^(k)): rational functions over a finite field in
formally Frobenius-twisted indeterminates.

Every pair ``(name, k)`` is an independent indeterminate standing for
``name^(q^k)``.  The Frobenius twist shifts all indices by the same amount
and fixes F_q pointwise, so it is a field automorphism of the generic model.
``specialize`` maps back into F_q(theta, symbols) by ``x^(k) -> x^(q^k)``.

Polynomials are sparse dicts ``{monomial: scalar}``.  A monomial is a tuple of
``((name, twist), exponent)`` pairs sorted by variable.  Scalars are ints in
``range(q)``; for ``e > 1`` an int encodes the base-p digit vector of a
polynomial in the generator of F_q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import reduce

from .errors import (
    FieldMismatchError,
    InputError,
    SpecializationError,
    UnsupportedValuationError,
)

THETA = "theta"
GENERATOR = "c"

INF = math.inf


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    """The base field F_q, q = p^e.

    ``modulus`` lists the coefficients (low to high, monic, degree e) of the
    irreducible polynomial defining F_q over F_p; it is required when e > 1.
    ``generator`` names its root in printed and parsed expressions.
    """

    p: int
    e: int = 1
    modulus: tuple = ()
    generator: str = "z"
    _tables: tuple = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise InputError(f"p must be prime, got {self.p!r}")
        if not isinstance(self.e, int) or self.e < 1:
            raise InputError(f"e must be a positive integer, got {self.e!r}")
        if self.e == 1:
            object.__setattr__(self, "modulus", ())
            return
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise InputError(
                f"modulus for e={self.e} must be monic of degree {self.e} (coefficients low to high)"
            )
        if self.q > 1 << 16:
            raise InputError("F_q with e > 1 is limited to q <= 65536")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "_tables", _build_tables(self.p, self.e, mod))

    @property
    def q(self):
        return self.p**self.e

    # Scalar arithmetic on encoded F_q elements.

    def from_int(self, n):
        return n % self.p

    def add(self, x, y):
        if self.e == 1:
            return (x + y) % self.p
        p = self.p
        out, place = 0, 1
        while x or y:
            out += ((x % p + y % p) % p) * place
            x //= p
            y //= p
            place *= p
        return out

    def neg(self, x):
        if self.e == 1:
            return -x % self.p
        p = self.p
        out, place = 0, 1
        while x:
            out += (-(x % p) % p) * place
            x //= p
            place *= p
        return out

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.e == 1:
            return x * y % self.p
        if not x or not y:
            return 0
        exp, log = self._tables
        return exp[(log[x] + log[y]) % (self.q - 1)]

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.e == 1:
            return pow(x, -1, self.p)
        exp, log = self._tables
        return exp[(-log[x]) % (self.q - 1)]

    def digits(self, x):
        """Base-p digits of an encoded scalar, low to high."""
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return out


def _build_tables(p, e, mod):
    q = p**e

    def times_z(digits):
        # Multiply by the generator z and reduce modulo the monic modulus.
        top = digits[-1]
        shifted = [0] + digits[:-1]
        return [(s - top * m) % p for s, m in zip(shifted, mod[:-1])]

    def encode(digits):
        return sum(d * p**i for i, d in enumerate(digits))

    def decode(x):
        return [(x // p**i) % p for i in range(e)]

    def mul_poly(a, b):
        acc = [0] * e
        cur = list(a)
        for coeff in b:
            if coeff:
                acc = [(u + coeff * v) % p for u, v in zip(acc, cur)]
            cur = times_z(cur)
        return acc

    # Search for a primitive element; failing means the modulus is reducible.
    for g in range(2, q):
        gd = decode(g)
        exp = [0] * (q - 1)
        log = {}
        cur = [1] + [0] * (e - 1)
        ok = True
        for i in range(q - 1):
            enc = encode(cur)
            if enc in log or enc == 0:
                ok = False
                break
            exp[i] = enc
            log[enc] = i
            cur = mul_poly(cur, gd)
        if ok and encode(cur) == 1:
            return tuple(exp), log
    raise InputError(f"modulus {list(mod)} is not irreducible over F_{p}")


# ---------------------------------------------------------------------------
# Sparse monomials and polynomials

ONE_MONO = ()


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_div(m1, m2):
    """m1 / m2 if m2 divides m1, else None."""
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def mono_deg(m):
    return sum(e for _, e in m)


def mono_key(m):
    """Graded-lex key; among equal degrees the largest (name, twist) variable is most significant."""
    return (mono_deg(m), tuple(reversed(m)))


def leading(f):
    m = max(f, key=mono_key)
    return m, f[m]


def poly_vars(f):
    out = set()
    for m in f:
        for v, _ in m:
            out.add(v)
    return out


def padd(f, g, F):
    if not f:
        return g
    if not g:
        return f
    out = dict(f)
    for m, c in g.items():
        s = F.add(out.get(m, 0), c)
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def pneg(f, F):
    return {m: F.neg(c) for m, c in f.items()}


def psub(f, g, F):
    return padd(f, pneg(g, F), F)


def pscale(f, c, F):
    if not c:
        return {}
    if c == 1:
        return f
    return {m: F.mul(a, c) for m, a in f.items()}


def pmul(f, g, F):
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = mono_mul(m1, m2)
            s = F.add(out.get(m, 0), F.mul(c1, c2))
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def pmul_term(f, mono, c, F):
    return {mono_mul(m, mono): F.mul(a, c) for m, a in f.items()} if c else {}


def pconst(c):
    return {ONE_MONO: c} if c else {}


def is_const(f):
    return not f or (len(f) == 1 and ONE_MONO in f)


def pdiv_exact(f, g, F):
    """Exact quotient f / g; raises ArithmeticError when g does not divide f."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    if len(g) == 1:
        (mg, cg), = g.items()
        inv = F.inv(cg)
        out = {}
        for m, c in f.items():
            mq = mono_div(m, mg)
            if mq is None:
                raise ArithmeticError("inexact polynomial division")
            out[mq] = F.mul(c, inv)
        return out
    lm_g, lc_g = leading(g)
    inv = F.inv(lc_g)
    r = dict(f)
    quo = {}
    while r:
        lm_r, lc_r = leading(r)
        mq = mono_div(lm_r, lm_g)
        if mq is None:
            raise ArithmeticError("inexact polynomial division")
        cq = F.mul(lc_r, inv)
        quo[mq] = cq
        r = psub(r, pmul_term(g, mq, cq, F), F)
    return quo


def pmonic(f, F):
    if not f:
        return f
    _, lc = leading(f)
    return pscale(f, F.inv(lc), F) if lc != 1 else f


def _mono_gcd(monos):
    it = iter(monos)
    common = dict(next(it))
    for m in it:
        if not common:
            break
        md = dict(m)
        common = {v: min(e, md[v]) for v, e in common.items() if v in md}
    return tuple(sorted(common.items()))


def _univ(f, x):
    """View f as a polynomial in x: list indexed by degree of coefficient polys."""
    parts = {}
    for m, c in f.items():
        k = 0
        rest = []
        for v, e in m:
            if v == x:
                k = e
            else:
                rest.append((v, e))
        parts.setdefault(k, {})[tuple(rest)] = c
    out = [{} for _ in range(max(parts) + 1)]
    for k, p in parts.items():
        out[k] = p
    return out


def _from_univ(u, x):
    out = {}
    for k, p in enumerate(u):
        if not p:
            continue
        xm = ((x, k),) if k else ()
        for m, c in p.items():
            out[mono_mul(m, xm)] = c
    return out


def _prem(a, b, F):
    db = len(b) - 1
    lcb = b[-1]
    a = list(a)
    while a and len(a) - 1 >= db:
        lca = a[-1]
        shift = len(a) - 1 - db
        new = [pmul(t, lcb, F) for t in a]
        for i, t in enumerate(b):
            new[i + shift] = psub(new[i + shift], pmul(lca, t, F), F)
        while new and not new[-1]:
            new.pop()
        a = new
    return a


def _content(u, F):
    return reduce(lambda x, y: pgcd(x, y, F), u[1:], u[0]) if u else {}


def _primitive(u, F):
    nz = [t for t in u if t]
    cont = _content(nz, F)
    if is_const(cont):
        return u
    return [pdiv_exact(t, cont, F) if t else {} for t in u]


def _dense(f, x):
    """Coefficient list (low to high) of a polynomial in the single variable x."""
    out = [0] * (max(dict(m).get(x, 0) for m in f) + 1)
    for m, c in f.items():
        out[m[0][1] if m else 0] = c
    return out


def _dense_rem(a, b, F):
    a = list(a)
    inv = F.inv(b[-1])
    db = len(b) - 1
    while len(a) - 1 >= db:
        q = F.mul(a[-1], inv)
        shift = len(a) - 1 - db
        if q:
            for i, t in enumerate(b):
                if t:
                    a[i + shift] = F.sub(a[i + shift], F.mul(q, t))
        while a and not a[-1]:
            a.pop()
    return a


def _dense_gcd(f, g, x, F):
    """Euclid over F_q for univariate polynomials."""
    a, b = _dense(f, x), _dense(g, x)
    while b:
        a, b = b, _dense_rem(a, b, F)
    return {((x, k),) if k else ONE_MONO: c for k, c in enumerate(a) if c}


def pgcd(f, g, F):
    """Monic (grlex leading coefficient 1) gcd of two polynomials."""
    if not f:
        return pmonic(g, F)
    if not g:
        return pmonic(f, F)
    if is_const(f) or is_const(g):
        return {ONE_MONO: 1}
    if len(f) == 1 or len(g) == 1:
        return {_mono_gcd(list(f) + list(g)): 1}
    if f == g:
        return pmonic(f, F)
    # Pull out monomial content first; it is cheap and common.
    mf, mg = _mono_gcd(f), _mono_gcd(g)
    mono_part = _mono_gcd([mf, mg])
    if mf:
        f = pdiv_exact(f, {mf: 1}, F)
    if mg:
        g = pdiv_exact(g, {mg: 1}, F)
    vf, vg = poly_vars(f), poly_vars(g)
    if vf == vg and len(vf) == 1:
        res = _dense_gcd(f, g, next(iter(vf)), F)
    elif vf != vg:
        # A variable private to one operand can only divide the gcd through
        # the coefficients of that operand.
        only = sorted(vf ^ vg)[0]
        big, small = (f, g) if only in vf else (g, f)
        acc = small
        for coeff in _univ(big, only):
            if coeff:
                acc = pgcd(acc, coeff, F)
                if is_const(acc):
                    break
        res = acc
    else:
        x = min(vf, key=lambda v: max(len(_univ(f, v)), len(_univ(g, v))))
        uf, ug = _univ(f, x), _univ(g, x)
        cf, cg = _content([t for t in uf if t], F), _content([t for t in ug if t], F)
        cont = pgcd(cf, cg, F)
        a, b = _primitive(uf, F), _primitive(ug, F)
        if len(a) < len(b):
            a, b = b, a
        while True:
            r = _prem(a, b, F)
            if not r:
                break
            if len(r) == 1:
                b = [{ONE_MONO: 1}]
                break
            a, b = b, _primitive(r, F)
        res = pmul(_from_univ(_primitive(b, F), x), cont, F)
    res = pmonic(res, F)
    return pmul(res, {mono_part: 1}, F) if mono_part else res


def ptwist(f, k):
    if not k:
        return f
    return {tuple(((n, t + k), e) for (n, t), e in m): c for m, c in f.items()}


def preflect(f):
    return {tuple(sorted(((n, -t), e) for (n, t), e in m)): c for m, c in f.items()}


def pspecialize(f, F):
    q = F.q
    out = {}
    for m, c in f.items():
        d = {}
        for (n, t), e in m:
            if t < 0:
                raise SpecializationError(
                    f"cannot specialize {n}^({t}): negative twist has no rational image"
                )
            d[(n, 0)] = d.get((n, 0), 0) + e * q**t
        key = tuple(sorted(d.items()))
        s = F.add(out.get(key, 0), c)
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def psubst(f, var, value, F):
    """Substitute ``var -> value`` (a RationalCoeff) in polynomial f."""
    out = RationalCoeff.zero(F)
    for m, c in f.items():
        term = RationalCoeff({tuple(x for x in m if x[0] != var): c}, {ONE_MONO: 1}, F, _canonical=True)
        for v, e in m:
            if v == var:
                term = term * value**e
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Rational functions


def _frozen(f):
    return frozenset(f.items())


class RationalCoeff:
    """An element num/den of F_q(x^(k)) kept in canonical form.

    Canonical means: gcd(num, den) = 1, the grlex-leading coefficient of den
    is 1, and zero is 0/1.  Instances are immutable; do not mutate
    ``num``/``den``.
    """

    __slots__ = ("num", "den", "field", "_hash")

    def __init__(self, num, den, field, _canonical=False):
        if not isinstance(field, FieldParams):
            raise TypeError("field must be FieldParams")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den, field)
        self.num = num
        self.den = den
        self.field = field
        self._hash = None

    # Constructors

    @classmethod
    def zero(cls, F):
        return cls({}, {ONE_MONO: 1}, F, _canonical=True)

    @classmethod
    def one(cls, F):
        return cls({ONE_MONO: 1}, {ONE_MONO: 1}, F, _canonical=True)

    @classmethod
    def from_int(cls, n, F):
        return cls(pconst(F.from_int(n)), {ONE_MONO: 1}, F, _canonical=True)

    @classmethod
    def from_scalar(cls, s, F):
        """Wrap an already-encoded F_q element."""
        return cls(pconst(s), {ONE_MONO: 1}, F, _canonical=True)

    @classmethod
    def var(cls, name, F, twist=0):
        return cls({(((name, twist), 1),): 1}, {ONE_MONO: 1}, F, _canonical=True)

    @classmethod
    def theta(cls, F, twist=0):
        return cls.var(THETA, F, twist)

    # Predicates

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {ONE_MONO: 1} and self.den == {ONE_MONO: 1}

    def is_scalar(self):
        """True for elements of F_q."""
        return is_const(self.num) and is_const(self.den)

    def scalar(self):
        """The F_q value of a scalar element (encoded int)."""
        if not self.is_scalar():
            raise ValueError("not an F_q scalar")
        return self.num.get(ONE_MONO, 0)

    def is_polynomial(self):
        return self.den == {ONE_MONO: 1}

    def variables(self):
        return poly_vars(self.num) | poly_vars(self.den)

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, RationalCoeff):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError("operands live over different base fields")
            return other
        if isinstance(other, int):
            return RationalCoeff.from_int(other, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = padd(self.num, other.num, F)
            if is_const(self.den):
                return RationalCoeff(num, self.den, F, _canonical=True) if num else RationalCoeff.zero(F)
            return RationalCoeff(num, self.den, F)
        if is_const(self.den) or is_const(other.den):
            g = {ONE_MONO: 1}
        else:
            g = pgcd(self.den, other.den, F)
        if is_const(g):
            # Coprime denominators: the sum of reduced fractions is reduced.
            num = padd(pmul(self.num, other.den, F), pmul(other.num, self.den, F), F)
            if not num:
                return RationalCoeff.zero(F)
            return RationalCoeff(num, pmul(self.den, other.den, F), F, _canonical=True)._renormalize()
        d1, d2 = pdiv_exact(self.den, g, F), pdiv_exact(other.den, g, F)
        num = padd(pmul(self.num, d2, F), pmul(other.num, d1, F), F)
        if not num:
            return RationalCoeff.zero(F)
        den = pmul(self.den, d2, F)
        # Any common factor of num and den already divides g.
        h = pgcd(num, g, F)
        if not is_const(h):
            num, den = pdiv_exact(num, h, F), pdiv_exact(den, h, F)
        return RationalCoeff(num, den, F, _canonical=True)._renormalize()

    __radd__ = __add__

    def _renormalize(self):
        """Scale so the denominator's leading coefficient is 1 (in place, before sharing)."""
        _, lc = leading(self.den)
        if lc != 1:
            inv = self.field.inv(lc)
            self.num = pscale(self.num, inv, self.field)
            self.den = pscale(self.den, inv, self.field)
        return self

    def __neg__(self):
        return RationalCoeff(pneg(self.num, self.field), self.den, self.field, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not self.num or not other.num:
            return RationalCoeff.zero(F)
        if other.is_one():
            return self
        if self.is_one():
            return other
        if is_const(self.den) and is_const(other.den):
            # Both polynomial (denominators are normalized to 1).
            return RationalCoeff(pmul(self.num, other.num, F), self.den, F, _canonical=True)
        # Cross-cancel before multiplying to keep the final gcd small.
        g1 = pgcd(self.num, other.den, F)
        g2 = pgcd(other.num, self.den, F)
        n1, d2 = (pdiv_exact(self.num, g1, F), pdiv_exact(other.den, g1, F)) if not is_const(g1) else (self.num, other.den)
        n2, d1 = (pdiv_exact(other.num, g2, F), pdiv_exact(self.den, g2, F)) if not is_const(g2) else (other.num, self.den)
        num, den = pmul(n1, n2, F), pmul(d1, d2, F)
        _, lc = leading(den)
        if lc != 1:
            inv = F.inv(lc)
            num, den = pscale(num, inv, F), pscale(den, inv, F)
        return RationalCoeff(num, den, F, _canonical=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in the coefficient field")
        F = self.field
        num, den = self.den, self.num
        _, lc = leading(den)
        if lc != 1:
            inv = F.inv(lc)
            num, den = pscale(num, inv, F), pscale(den, inv, F)
        return RationalCoeff(num, den, F, _canonical=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        F = self.field
        result = RationalCoeff.one(F)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # Frobenius and friends

    def twist(self, k):
        if not k or self.is_scalar():
            return self
        return RationalCoeff(ptwist(self.num, k), ptwist(self.den, k), self.field, _canonical=True)

    def reflect(self):
        """Negate every twist index (x^(k) -> x^(-k)); a field automorphism."""
        if self.is_scalar():
            return self
        return RationalCoeff(preflect(self.num), preflect(self.den), self.field)

    def specialize(self):
        F = self.field
        return RationalCoeff(pspecialize(self.num, F), pspecialize(self.den, F), F)

    def substitute(self, var, value):
        """Substitute the indeterminate ``var = (name, twist)`` by ``value``."""
        if var not in self.variables():
            return self
        F = self.field
        return psubst(self.num, var, value, F) / psubst(self.den, var, value, F)

    def valuation_at_infinity(self):
        """deg_theta(den) - deg_theta(num); +inf for zero."""
        if not self.num:
            return INF
        bad = self.variables() - {(THETA, 0)}
        if bad:
            names = ", ".join(f"{n}^({t})" if t else n for n, t in sorted(bad))
            raise UnsupportedValuationError(
                f"valuation at infinity needs a specialized expression in theta alone; found {names}"
            )
        return max(mono_deg(m) for m in self.den) - max(mono_deg(m) for m in self.num)

    # Comparison and display

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalCoeff.from_int(other, self.field)
        if not isinstance(other, RationalCoeff):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_frozen(self.num), _frozen(self.den)))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __str__(self):
        from .expr import format_coeff

        return format_coeff(self)

    def __repr__(self):
        return f"RationalCoeff({self})"


def _canonicalize(num, den, F):
    if not num:
        return {}, {ONE_MONO: 1}
    if not is_const(den):
        g = pgcd(num, den, F)
        if not is_const(g):
            num, den = pdiv_exact(num, g, F), pdiv_exact(den, g, F)
    _, lc = leading(den)
    if lc != 1:
        inv = F.inv(lc)
        num, den = pscale(num, inv, F), pscale(den, inv, F)
    return num, den


# Functional API


def _check(x, y):
    if x.field != y.field:
        raise FieldMismatchError("operands live over different base fields")


def field_add(x, y):
    _check(x, y)
    return x + y


def field_mul(x, y):
    _check(x, y)
    return x * y


def field_neg(x):
    return -x


def field_inv(x):
    return x.inverse()


def twist(x, k):
    return x.twist(k)


def specialize(x, params=None):
    if params is not None and params != x.field:
        raise FieldMismatchError("specialization parameters differ from the value's field")
    return x.specialize()


def valuation_at_infinity(x):
    return x.valuation_at_infinity()
