"""K-linear combinations of twists of the generator c.

Everything the reduction touches is of the form sum_k w_k c^(k) with w_k in
K.  Keeping the w_k separate means the rational arithmetic never sees c.
A ``LinearForm`` behaves like a coefficient inside ``SkewPoly``: it can be
added to other forms, multiplied by elements of K on either side and twisted.
"""

from __future__ import annotations

from .errors import InternalInvariantError
from .field import GENERATOR, ONE_MONO, RationalCoeff


class LinearForm:
    __slots__ = ("terms", "field")

    def __init__(self, terms, field):
        self.terms = {k: w for k, w in terms.items() if not w.is_zero()}
        self.field = field

    @classmethod
    def generator(cls, field, twist=0):
        return cls({twist: RationalCoeff.one(field)}, field)

    @classmethod
    def from_rational(cls, x):
        """Split a RationalCoeff that is additive in c; raises if it is not."""
        F = x.field
        if any(v[0] == GENERATOR for m in x.den for v, _ in m):
            raise InternalInvariantError(f"generator symbol in a denominator: {x}")
        den = RationalCoeff(x.den, {ONE_MONO: 1}, F, _canonical=True)
        parts = {}
        for mono, coef in x.num.items():
            gens = [(v, e) for v, e in mono if v[0] == GENERATOR]
            if len(gens) != 1 or gens[0][1] != 1:
                raise InternalInvariantError(f"value is not additive in the generator: {x}")
            rest = tuple(ve for ve in mono if ve[0][0] != GENERATOR)
            parts.setdefault(gens[0][0][1], {})[rest] = coef
        return cls(
            {k: RationalCoeff(p, {ONE_MONO: 1}, F, _canonical=True) / den for k, p in parts.items()}, F
        )

    def to_rational(self):
        out = RationalCoeff.zero(self.field)
        for k, w in sorted(self.terms.items()):
            out = out + w * RationalCoeff.var(GENERATOR, self.field, k)
        return out

    # Coefficient protocol used by SkewPoly

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return False

    def is_scalar(self):
        return False

    def twist(self, k):
        if not k:
            return self
        return LinearForm({t + k: w.twist(k) for t, w in self.terms.items()}, self.field)

    def variables(self):
        out = {(GENERATOR, k) for k in self.terms}
        for w in self.terms.values():
            out |= w.variables()
        return out

    def __add__(self, other):
        if isinstance(other, LinearForm):
            out = dict(self.terms)
            for k, w in other.terms.items():
                out[k] = out[k] + w if k in out else w
            return LinearForm(out, self.field)
        if isinstance(other, RationalCoeff) and other.is_zero():
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({k: -w for k, w in self.terms.items()}, self.field)

    def __sub__(self, other):
        if isinstance(other, (LinearForm, RationalCoeff)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalCoeff):
            if other.is_zero():
                return LinearForm({}, self.field)
            if other.is_one():
                return self
            return LinearForm({k: w * other for k, w in self.terms.items()}, self.field)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalCoeff):
            return self * other.inverse()
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, LinearForm):
            return self.terms == other.terms
        if isinstance(other, RationalCoeff):
            return other.is_zero() and not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return str(self.to_rational())

    def __repr__(self):
        return f"LinearForm({self})"
