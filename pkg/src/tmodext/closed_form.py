"""Closed-form Pi_t for an extension of one Drinfeld module by another.

For phi_t = theta + sum a_i tau^i (degree n) and psi_t = theta + sum b_j tau^j
(degree m) with r = n - m > 0, Ext^1(phi, psi) has basis tau^0..tau^(n-1) and
Pi_t can be written down directly.  Column i < r is theta at row i plus
b_j tau^j at row i + j.  Column r + l (0 <= l < m) is built from helper
polynomials d_k = d_{r+l, n+k}, k = l..0, given by the downward recursion

    a_n^(k) d_k = b_{m-l+k} tau^(m-l+k) - sum_{i=k+1}^{l} a_{n+k-i}^(i) d_i
                  + sum_{i=k+r}^{l} b_{n+k-i} tau^(n+k-i) d_i

The last ("feedback") sum can only be nonempty when m > r.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List

from .errors import HypothesisError, UnsupportedValuationError
from .field import INF, THETA, RationalCoeff, mono_deg, pspecialize
from .reduction import ExtResult, GeneratorIndex
from .skew import Side, SkewPoly
from .tmodule import DrinfeldModule, SkewMatrix, TModule

NO_FEEDBACK = "no_feedback"
FEEDBACK = "feedback"


class DrinfeldPair:
    """phi (degree n) and psi (degree m) with r = n - m > 0."""

    def __init__(self, phi, psi):
        phi = DrinfeldModule.from_module(phi)
        psi = DrinfeldModule.from_module(psi)
        if phi.side is not Side.TAU or psi.side is not Side.TAU:
            raise HypothesisError("closed forms are stated for tau-side Drinfeld modules")
        self.phi = phi
        self.psi = psi
        self.n = phi.deg_tau
        self.m = psi.deg_tau
        self.r = self.n - self.m
        if self.r <= 0:
            raise HypothesisError(f"closed forms need deg phi > deg psi, got n={self.n}, m={self.m}")
        self.field = phi.field

    def a(self, i):
        return self.phi.poly.coefficient(i) if 1 <= i <= self.n else RationalCoeff.zero(self.field)

    def b(self, j):
        return self.psi.poly.coefficient(j) if 1 <= j <= self.m else RationalCoeff.zero(self.field)

    def case(self):
        if self.m < self.r:
            return "m<r"
        if self.m == self.r:
            return "m=r"
        return "m>r"

    def cells(self):
        """(case, sub-case) for every column r + l."""
        return [(self.case(), "r+l<=m" if self.r + l <= self.m else "r+l>m") for l in range(self.m)]


def _bt(pair, j):
    """b_j * tau^j."""
    return SkewPoly.monomial(pair.b(j), j) if 1 <= j <= pair.m else SkewPoly.zero(pair.field)


def d_polys(pair, l, case=None):
    """{k: d_{r+l, n+k}} for k = l..0.

    ``case`` selects the recursion: NO_FEEDBACK drops the feedback sum,
    FEEDBACK keeps it.  Default: FEEDBACK exactly when m > r.
    """
    if not 0 <= l < pair.m:
        raise ValueError(f"l must lie in 0..{pair.m - 1}, got {l}")
    if case is None:
        case = FEEDBACK if pair.m > pair.r else NO_FEEDBACK
    n, m, r = pair.n, pair.m, pair.r
    an = pair.a(n)
    d: Dict[int, SkewPoly] = {}
    for k in range(l, -1, -1):
        acc = _bt(pair, m - l + k)
        for i in range(k + 1, l + 1):
            acc = acc - d[i].scale_left(pair.a(n + k - i).twist(i))
        if case == FEEDBACK:
            for i in range(k + r, l + 1):
                acc = acc + _bt(pair, n + k - i) * d[i]
        d[k] = acc.scale_left(an.twist(k).inverse())
    return d


def column(pair, g):
    """Coordinates of t * tau^g in the basis tau^0..tau^(n-1)."""
    n, m, r = pair.n, pair.m, pair.r
    F = pair.field
    zero = SkewPoly.zero(F)
    theta = RationalCoeff.theta(F)
    out = [zero] * n
    if g < r:
        out[g] = SkewPoly.constant(theta)
        for j in range(1, m + 1):
            out[g + j] = _bt(pair, j)
        return out
    l = g - r
    d = d_polys(pair, l)
    for j in range(n):
        acc = zero
        if j == g:
            acc = acc + SkewPoly.constant(theta)
        if g < j <= g + m:
            acc = acc + _bt(pair, j - g)
        if 1 <= j <= l:
            acc = acc + d[j].scale_left(theta - theta.twist(j))
        for k in range(max(0, j - m), min(l, j - 1) + 1):
            acc = acc + _bt(pair, j - k) * d[k]
        for k in range(0, min(l, j - 1) + 1):
            acc = acc - d[k].scale_left(pair.a(j - k).twist(k))
        out[j] = acc
    return out


def pi_matrix(pair):
    """Pi_t from the closed formulas, packaged like an algorithmic result."""
    if not isinstance(pair, DrinfeldPair):
        pair = DrinfeldPair(*pair)
    n = pair.n
    cols = [column(pair, g) for g in range(n)]
    M = SkewMatrix([[cols[c][rw] for c in range(n)] for rw in range(n)], pair.field, Side.TAU)
    pi = TModule(M)
    return ExtResult(
        pi=pi,
        bounds=[[n]],
        ordering=[GeneratorIndex(0, 0, k) for k in range(n)],
        traces=[[] for _ in range(n)],
        reduced=[],
        method="closed-form",
        source=pair.phi,
        target=pair.psi,
        extra={"case": pair.case(), "cells": pair.cells(), "strict": False, "dropped": []},
    )


def rank_formula(pair_or_nm, m=None):
    """2m when m <= r, else 3m (r = n - m)."""
    if isinstance(pair_or_nm, DrinfeldPair):
        n, m = pair_or_nm.n, pair_or_nm.m
    else:
        n = pair_or_nm
    r = n - m
    if r <= 0 or m < 1:
        raise HypothesisError(f"rank formula needs n > m >= 1, got n={n}, m={m}")
    return 2 * m if m <= r else 3 * m


# ---------------------------------------------------------------------------
# Integrality at infinity


@dataclass
class IntegralityReport:
    conditions: Dict[str, bool]
    conditions_hold: bool
    integral: object  # True/False, or None when the conditions fail
    violations: List[tuple] = dc_field(default_factory=list)
    note: str = ""


def _v(x):
    return x.valuation_at_infinity()


def _specialized_valuation(x):
    """Valuation at infinity of the specialization of x.

    deg(den) - deg(num) does not change under cancellation, so the
    (expensive, high-degree) reduction to lowest terms is skipped.
    """
    F = x.field
    num = pspecialize(x.num, F)
    if not num:
        return INF
    return max(mono_deg(m) for m in pspecialize(x.den, F)) - max(mono_deg(m) for m in num)


def _check_specialized(pair):
    for poly in (pair.phi.poly, pair.psi.poly):
        for c in poly.coeffs[1:]:
            bad = c.variables() - {(THETA, 0)}
            if bad:
                raise UnsupportedValuationError(
                    "integrality needs coefficients in F_q(theta) only; found "
                    + ", ".join(f"{nm}^({tw})" if tw else nm for nm, tw in sorted(bad))
                )


def integrality_conditions(pair):
    """Conditions on the tau^(>=1) coefficients under the valuation at infinity.

    (i)   v(b_j) >= 0 for all j;
    (ii)  v(a_i) >= 0 for i < n;
    (iii) v(a_n) < min{v(b_1), q^i v(a_(n-i)), v(b_(m+1-i)) / q^(m-i) : 1 <= i <= m-1}.
    theta itself (v = -1) is excluded from (i) and (ii).
    """
    _check_specialized(pair)
    q = pair.field.q
    n, m = pair.n, pair.m
    c1 = all(_v(pair.b(j)) >= 0 for j in range(1, m + 1))
    c2 = all(_v(pair.a(i)) >= 0 for i in range(1, n))
    bound = [_v(pair.b(1))]
    for i in range(1, m):
        bound.append(q**i * _v(pair.a(n - i)))
        bound.append(_v(pair.b(m + 1 - i)) / q ** (m - i))
    c3 = _v(pair.a(n)) < min(bound)
    return {"i": c1, "ii": c2, "iii": c3}


def check_integrality(pair, pi=None):
    """Evaluate the conditions; when they hold, scan Pi_t for non-integral coefficients.

    Pi_t is computed in the generic model and specialized.  The diagonal
    theta of the constant term is excluded from the scan (v(theta) = -1 always).
    """
    if not isinstance(pair, DrinfeldPair):
        pair = DrinfeldPair(*pair)
    conds = integrality_conditions(pair)
    holds = all(conds.values())
    if not holds:
        return IntegralityReport(conds, False, None, note="conditions not met; nothing asserted")
    if pi is None:
        pi = pi_matrix(pair).pi
    theta = RationalCoeff.theta(pair.field)
    violations = []
    for i, row in enumerate(pi.t.entries):
        for j, entry in enumerate(row):
            for k, c in enumerate(entry.coeffs):
                if i == j and k == 0:
                    c = c - theta
                if c.is_zero():
                    continue
                val = _specialized_valuation(c)
                if val < 0:
                    violations.append((i, j, k, c.specialize(), val))
    return IntegralityReport(
        conds,
        True,
        not violations,
        violations,
        note="diagonal theta excluded from the scan",
    )
