"""Random instance generators shared by the unit and acceptance tests."""

import random

from tmodext.field import FieldParams, RationalCoeff
from tmodext.skew import Side, SkewPoly
from tmodext.tmodule import DrinfeldModule, SkewMatrix, TModule, kmat_det

SYMBOLS = ("a", "b")


def rand_coeff(F, rng, p_sym=0.25, p_theta=0.2, nonzero=False):
    """Small element of K: an F_p constant, optionally plus theta and a symbol."""
    while True:
        x = RationalCoeff.from_int(rng.randrange(F.p), F)
        if rng.random() < p_sym:
            x = x + RationalCoeff.var(rng.choice(SYMBOLS), F) * RationalCoeff.from_int(rng.randrange(1, F.p), F)
        if rng.random() < p_theta:
            x = x + RationalCoeff.theta(F)
        if not nonzero or not x.is_zero():
            return x


def rand_unit(F, rng):
    return RationalCoeff.from_int(rng.randrange(1, F.p), F)


def rand_field(rng, primes=(2, 3, 5)):
    return FieldParams(rng.choice(primes))


def _strictly_lower_constants(d, F, rng):
    return [[rand_unit(F, rng) if i > j and rng.random() < 0.5 else RationalCoeff.zero(F) for j in range(d)] for i in range(d)]


def _invertible_constants(d, F, rng):
    while True:
        A = [[RationalCoeff.from_int(rng.randrange(F.p), F) for _ in range(d)] for _ in range(d)]
        if not kmat_det(A, F).is_zero():
            return A


def rand_tmodule(F, rng, dim, deg, leading=None, density=0.35, side=Side.TAU, **coeff_kw):
    """theta*I + strictly lower N + sum_{k=1}^{deg} A_k tau^k with A_deg = ``leading``.

    ``leading`` defaults to a random nonzero constant matrix, so deg_tau is exactly ``deg``.
    """
    zero = RationalCoeff.zero(F)
    N = _strictly_lower_constants(dim, F, rng)
    if leading is None:
        while True:
            leading = [[rand_unit(F, rng) if rng.random() < 0.5 else zero for _ in range(dim)] for _ in range(dim)]
            if any(not x.is_zero() for row in leading for x in row):
                break
    entries = []
    for i in range(dim):
        row = []
        for j in range(dim):
            c = [RationalCoeff.theta(F) + N[i][j] if i == j else N[i][j]]
            for k in range(1, deg):
                c.append(rand_coeff(F, rng, **coeff_kw) if rng.random() < density else zero)
            if deg >= 1:
                c.append(leading[i][j])
            row.append(SkewPoly(c, F, Side.TAU))
        entries.append(row)
    M = SkewMatrix(entries, F, Side.TAU)
    if side is Side.SIGMA:
        M = M.reflect()
    return TModule(M)


def invertible_pair(rng, max_dim=3, max_deg=6, max_size=12, primes=(2, 3, 5)):
    """(Phi, Psi) with Phi strictly pure and deg Phi > deg Psi; size d*e*n of Pi_t <= max_size."""
    F = rand_field(rng, primes)
    while True:
        d, e = rng.randint(1, max_dim), rng.randint(1, max_dim)
        n = rng.randint(1, max_deg)
        if d * e * n <= max_size:
            break
    m = rng.randint(0, n - 1)
    phi = rand_tmodule(F, rng, d, n, leading=_invertible_constants(d, F, rng))
    psi = rand_tmodule(F, rng, e, m) if m else _constant_module(F, rng, e)
    return phi, psi


def _constant_module(F, rng, dim):
    """A degree-0 t-module theta*I + N."""
    N = _strictly_lower_constants(dim, F, rng)
    entries = [
        [SkewPoly([RationalCoeff.theta(F) + N[i][j] if i == j else N[i][j]], F) for j in range(dim)]
        for i in range(dim)
    ]
    return TModule(SkewMatrix(entries, F))


def _drinfeld_entry(F, rng, deg, **coeff_kw):
    c = [RationalCoeff.theta(F)] + [rand_coeff(F, rng, **coeff_kw) for _ in range(1, deg)] + [rand_unit(F, rng)]
    return SkewPoly(c, F)


def _lower_triangular_module(F, rng, degs, off_deg=2, **coeff_kw):
    d = len(degs)
    zero = SkewPoly.zero(F)
    entries = []
    for i in range(d):
        row = []
        for j in range(d):
            if i == j:
                row.append(_drinfeld_entry(F, rng, degs[i], **coeff_kw))
            elif i > j:
                k = rng.randint(0, off_deg)
                row.append(SkewPoly([rand_coeff(F, rng, **coeff_kw) for _ in range(k + 1)], F))
            else:
                row.append(zero)
        entries.append(row)
    return TModule(SkewMatrix(entries, F))


def triangular_pair(rng, max_dim=3, max_deg=6, max_size=12, primes=(2, 3, 5)):
    """Lower-triangular Phi, Psi with Drinfeld diagonals and every deg Phi[j,j] > deg Psi[i,i]."""
    F = rand_field(rng, primes)
    while True:
        d, e = rng.randint(1, max_dim), rng.randint(1, max_dim)
        psi_degs = [rng.randint(1, max_deg - 1) for _ in range(e)]
        lo = max(psi_degs) + 1
        if lo > max_deg:
            continue
        phi_degs = [rng.randint(lo, max_deg) for _ in range(d)]
        if e * sum(phi_degs) <= max_size:
            break
    return _lower_triangular_module(F, rng, phi_degs), _lower_triangular_module(F, rng, psi_degs)


def dual_pair(rng, **kw):
    """(Phi, Psi) with deg Psi > deg Phi and Psi^sigma strictly pure."""
    phi, psi = invertible_pair(rng, **kw)
    # Reflecting through the adjoint turns a strictly pure source into a strictly pure target.
    return TModule(psi.t.adjoint().reflect()), TModule(phi.t.adjoint().reflect())


def drinfeld_pair(rng, primes=(2, 3, 5), max_n=6, symbolic_lead_max_n=4):
    """Random Drinfeld modules phi (degree n) and psi (degree m < n).

    The top coefficient of phi is symbolic only for n <= symbolic_lead_max_n:
    a symbolic a_n divides every closed-form helper polynomial and the
    expressions grow too quickly beyond that.
    """
    F = rand_field(rng, primes)
    n = rng.randint(2, max_n)
    m = rng.randint(1, n - 1)
    a = [RationalCoeff.theta(F)] + [rand_coeff(F, rng) for _ in range(n - 1)]
    a.append(rand_coeff(F, rng, nonzero=True) if n <= symbolic_lead_max_n else rand_unit(F, rng))
    b = [RationalCoeff.theta(F)] + [rand_coeff(F, rng) for _ in range(m - 1)] + [rand_coeff(F, rng, nonzero=True)]
    return DrinfeldModule(SkewPoly(a, F)), DrinfeldModule(SkewPoly(b, F))


def rng_for(seed):
    return random.Random(seed)
