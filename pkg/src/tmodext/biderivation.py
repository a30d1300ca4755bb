"""Biderivations Der(Phi, Psi), stored through delta_t alone.

A biderivation delta satisfies delta(ab) = Psi_a delta(b) + delta(a) Phi_b and
is determined by the e x d matrix delta_t.
"""

from __future__ import annotations

from .errors import ShapeError, SideMismatchError
from .tmodule import SkewMatrix, t_power_action


class Biderivation:
    __slots__ = ("source", "target", "delta_t")

    def __init__(self, source, target, delta_t):
        if delta_t.shape != (target.dim, source.dim):
            raise ShapeError(
                f"delta_t must be {target.dim}x{source.dim} (target x source), got {delta_t.rows}x{delta_t.cols}"
            )
        if not (delta_t.side is source.side is target.side):
            raise SideMismatchError("biderivation and modules must live on one side")
        self.source = source
        self.target = target
        self.delta_t = delta_t

    def __add__(self, other):
        return Biderivation(self.source, self.target, self.delta_t + other.delta_t)

    def __eq__(self, other):
        return (
            isinstance(other, Biderivation)
            and self.source == other.source
            and self.target == other.target
            and self.delta_t == other.delta_t
        )

    def __hash__(self):
        return hash(self.delta_t)

    def __repr__(self):
        return f"Biderivation({self.delta_t.rows}x{self.delta_t.cols})"


def inner(U, phi, psi):
    """delta^(U)_t = U Phi_t - Psi_t U."""
    if U.shape != (psi.dim, phi.dim):
        raise ShapeError(f"U must be {psi.dim}x{phi.dim}, got {U.rows}x{U.cols}")
    return Biderivation(phi, psi, U @ phi.t - psi.t @ U)


def evaluate(delta, a):
    """delta(a) for a = sum a_k t^k given as F_q scalars (low to high).

    Uses delta(t^k) = Psi_t delta(t^(k-1)) + delta_t Phi_(t^(k-1)) and delta(1) = 0.
    """
    from .field import RationalCoeff

    phi, psi = delta.source, delta.target
    F, side = phi.field, phi.side
    acc = SkewMatrix.zeros(psi.dim, phi.dim, F, side)
    value = SkewMatrix.zeros(psi.dim, phi.dim, F, side)  # delta(t^0)
    phi_power = SkewMatrix.identity(phi.dim, F, side)  # Phi_(t^0)
    for k, ak in enumerate(a):
        if k:
            value = psi.t @ value + delta.delta_t @ phi_power
            phi_power = phi.t @ phi_power
        if ak:
            acc = acc + value.scale_left(RationalCoeff.from_scalar(ak, F))
    return acc


def t_action(module, a):
    """Module action Phi_a."""
    return t_power_action(module, a)


def is_in_der0(delta):
    """True iff every entry of delta_t has zero constant term."""
    return all(e.constant_term().is_zero() for r in delta.delta_t.entries for e in r)
