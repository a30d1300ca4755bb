"""Twisted polynomial rings K{tau} and K{sigma}.

Multiplication follows ``tau u = u^(1) tau`` and ``sigma x = x^(-1) sigma``.
Coefficients are written on the left: ``f = sum f_i * tau^i``.
"""

from __future__ import annotations

import enum
import math

from .errors import FieldMismatchError, SideMismatchError
from .field import RationalCoeff


class Side(enum.Enum):
    TAU = 1
    SIGMA = -1

    @property
    def sign(self):
        return self.value

    @property
    def symbol(self):
        return "T" if self is Side.TAU else "S"

    @property
    def other(self):
        return Side.SIGMA if self is Side.TAU else Side.TAU

    @classmethod
    def parse(cls, text):
        t = str(text).lower()
        if t in ("tau", "t"):
            return cls.TAU
        if t in ("sigma", "s"):
            return cls.SIGMA
        raise ValueError(f"unknown side {text!r} (expected 'tau' or 'sigma')")


NEG_INF = -math.inf


class SkewPoly:
    """An element of K{tau} or K{sigma} with trimmed dense coefficients."""

    __slots__ = ("coeffs", "side", "field", "_hash")

    def __init__(self, coeffs, field, side=Side.TAU):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.side = side
        self.field = field
        self._hash = None

    # Constructors

    @classmethod
    def zero(cls, field, side=Side.TAU):
        return cls((), field, side)

    @classmethod
    def one(cls, field, side=Side.TAU):
        return cls((RationalCoeff.one(field),), field, side)

    @classmethod
    def constant(cls, c, side=Side.TAU):
        return cls((c,), c.field, side)

    @classmethod
    def monomial(cls, c, k, side=Side.TAU):
        """c * tau^k (or c * sigma^k)."""
        z = RationalCoeff.zero(c.field)
        return cls([z] * k + [c], c.field, side)

    @classmethod
    def gen(cls, field, side=Side.TAU, k=1):
        return cls.monomial(RationalCoeff.one(field), k, side)

    # Accessors

    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, n):
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return RationalCoeff.zero(self.field)

    def constant_term(self):
        return self.coefficient(0)

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else RationalCoeff.zero(self.field)

    def is_constant(self):
        return len(self.coeffs) <= 1

    # Arithmetic

    def _same(self, other):
        if other.side is not self.side:
            raise SideMismatchError(
                f"cannot combine a {self.side.name.lower()} polynomial with a {other.side.name.lower()} one"
            )
        if other.field != self.field:
            raise FieldMismatchError("skew polynomials over different base fields")

    def _lift(self, other):
        if isinstance(other, SkewPoly):
            self._same(other)
            return other
        if isinstance(other, (RationalCoeff, int)):
            if isinstance(other, int):
                other = RationalCoeff.from_int(other, self.field)
            return SkewPoly.constant(other, self.side)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return SkewPoly(out, self.field, self.side)

    __radd__ = __add__

    def __neg__(self):
        return SkewPoly([-c for c in self.coeffs], self.field, self.side)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return SkewPoly.zero(self.field, self.side)
        s = self.side.sign
        zero = RationalCoeff.zero(self.field)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, fi in enumerate(self.coeffs):
            if fi.is_zero():
                continue
            for j, gj in enumerate(other.coeffs):
                if gj.is_zero():
                    continue
                out[i + j] = out[i + j] + fi * gj.twist(s * i)
        return SkewPoly(out, self.field, self.side)

    def __rmul__(self, other):
        # Left scalar multiplication c * f.
        if isinstance(other, int):
            other = RationalCoeff.from_int(other, self.field)
        if isinstance(other, RationalCoeff):
            return self.scale_left(other)
        return NotImplemented

    def scale_left(self, c):
        if c.is_zero():
            return SkewPoly.zero(self.field, self.side)
        if c.is_one():
            return self
        return SkewPoly([c * a for a in self.coeffs], self.field, self.side)

    def shift(self, k):
        """Right multiplication by tau^k (resp. sigma^k)."""
        if not k or not self.coeffs:
            return self
        z = RationalCoeff.zero(self.field)
        return SkewPoly([z] * k + list(self.coeffs), self.field, self.side)

    def map_coeffs(self, fn):
        return SkewPoly([fn(c) for c in self.coeffs], self.field, self.side)

    def apply_at(self, x):
        """Evaluate as an additive polynomial: sum_i f_i * x^(s*i)."""
        s = self.side.sign
        out = RationalCoeff.zero(self.field)
        if x.is_zero():
            return out
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = out + c * x.twist(s * i)
        return out

    def adjoint(self):
        """(sum a_i tau^i)^sigma = sum a_i^(-i) sigma^i, and the inverse map on the sigma side."""
        s = self.side.sign
        return SkewPoly(
            [c.twist(-s * i) for i, c in enumerate(self.coeffs)], self.field, self.side.other
        )

    def reflect(self):
        """Mirror into the other ring: swap tau/sigma and negate every twist index."""
        return SkewPoly([c.reflect() for c in self.coeffs], self.field, self.side.other)

    def twist(self, k):
        return self.map_coeffs(lambda c: c.twist(k))

    def variables(self):
        out = set()
        for c in self.coeffs:
            out |= c.variables()
        return out

    # Comparison and display

    def __eq__(self, other):
        if isinstance(other, (int, RationalCoeff)):
            other = self._lift(other)
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.side is other.side and self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.side, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        from .expr import format_skew

        return format_skew(self)

    def __repr__(self):
        return f"SkewPoly({self})"


def p_mult(f, g):
    if f.side is not g.side:
        raise SideMismatchError("p_mult operands must share a side")
    return f * g


def p_add(f, g):
    if f.side is not g.side:
        raise SideMismatchError("p_add operands must share a side")
    return f + g


def deg(f):
    return f.deg()


def coefficient(f, n):
    return f.coefficient(n)


def constant_term(f):
    return f.constant_term()


def adjoint_to_sigma(f):
    if f.side is not Side.TAU:
        raise SideMismatchError("adjoint_to_sigma expects a tau polynomial")
    return f.adjoint()


def adjoint_to_tau(g):
    if g.side is not Side.SIGMA:
        raise SideMismatchError("adjoint_to_tau expects a sigma polynomial")
    return g.adjoint()


def apply_at(f, x):
    return f.apply_at(x)
