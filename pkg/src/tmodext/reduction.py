"""t-reduction: normal forms of biderivations modulo inner ones, and Pi_t.

For modules Phi (source, d-dim) and Psi (target, e-dim) every class in
Ext^1(Phi, Psi) has a unique representative delta_t whose (i, j) entry has
tau-degree below a bound N[i, j].  The generators are E_ij * c * tau^k with
k < N[i, j], ordered i-major, then j, then k.  Column g of Pi_t holds the
coordinates of the reduced form of Psi_t * (generator g), with the symbol c
turned back into tau.  Values linear in c are carried as ``LinearForm``s.

Two executable cases are implemented:

* invertible: deg Phi > deg Psi and the leading matrix A_n of Phi is
  invertible; every bound equals n.
* triangular: Phi and Psi are lower-triangular with Drinfeld modules on the
  diagonal and deg Phi[j, j] > deg Psi[i, i]; N[i, j] = deg Phi[j, j].

Reversed degrees are handled by the adjoint route ``extension_dual``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import List, NamedTuple, Optional

from .errors import (
    DualityNeededError,
    Ext0InconsistencyError,
    HypothesisError,
    InputError,
    InternalInvariantError,
    ShapeError,
    UnsupportedInstanceError,
)
from .field import GENERATOR, RationalCoeff
from .linear import LinearForm
from .skew import Side, SkewPoly
from .tmodule import (
    SkewMatrix,
    TModule,
    is_strictly_pure,
    kmat_inverse,
    kmat_mul,
    kmat_zero,
)


class GeneratorIndex(NamedTuple):
    """Generator E_ij * c * tau^k (0-based i, j)."""

    i: int
    j: int
    k: int


class TraceStep(NamedTuple):
    """One subtraction of the inner biderivation delta^(multiplier * tau^shift * U).

    ``U`` is a constant e x d matrix over K; ``(i, j)`` is the entry whose
    leading term was cancelled.
    """

    i: int
    j: int
    shift: int
    multiplier: RationalCoeff
    U: list


@dataclass
class Ext0Split:
    s: int
    deleted: List[int]
    pi0: TModule


@dataclass
class ExtResult:
    pi: TModule
    bounds: List[List[int]]
    ordering: List[GeneratorIndex]
    traces: List[List[TraceStep]]
    reduced: List[SkewMatrix]
    method: str
    source: TModule
    target: TModule
    ext0: Optional[Ext0Split] = None
    extra: dict = dc_field(default_factory=dict)

    @property
    def side(self):
        return self.pi.side

    @property
    def dim(self):
        return self.pi.dim


# ---------------------------------------------------------------------------
# Helpers


def _generator(F):
    return LinearForm.generator(F)


def _check_no_generator(*modules):
    for m in modules:
        if any(name == GENERATOR for name, _ in m.t.variables()):
            raise InputError(f"the symbol '{GENERATOR}' is reserved for the extension generator")


def _threads():
    try:
        return max(1, int(os.environ.get("TMODEXT_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _inner_step(V, G0, phi, psi):
    return V - (G0 @ phi.t - psi.t @ G0)


def _scaled_constant_matrix(U, a, shift, side, F):
    """The skew matrix a * tau^shift * U for a constant matrix U."""
    mono = SkewPoly.monomial(a, shift, side)
    return SkewMatrix(
        [[mono * SkewPoly.constant(x, side) if not x.is_zero() else SkewPoly.zero(F, side) for x in row] for row in U],
        F,
        side,
        len(U),
        len(U[0]) if U else 0,
    )


def _out_of_bounds(V, bounds):
    return [
        (i, j)
        for i in range(V.rows)
        for j in range(V.cols)
        if V.entries[i][j].deg() >= bounds[i][j]
    ]


# ---------------------------------------------------------------------------
# Reduction kernels


def reduce_invertible(V, phi, psi, A_inv=None, strict=False):
    """Reduce V modulo inner biderivations until every entry has degree < deg Phi.

    Sweeps entries (i ascending, j ascending) and cancels the top coefficient
    a*tau^r' of entry (i, j) with delta^(E_ij a tau^(r'-n) A_inv).  A
    cancellation can raise the degree of an entry visited earlier in the same
    row, so sweeps repeat until nothing is out of bounds; ``strict`` performs
    one sweep only and fails if that was not enough.
    """
    n, m = phi.deg_tau, psi.deg_tau
    if n <= m:
        raise DualityNeededError(
            f"invertible reduction needs deg Phi > deg Psi, got {n} <= {m}; use extension_dual"
        )
    F, side = phi.field, phi.side
    if A_inv is None:
        A_inv = kmat_inverse(phi.leading, F)
    bounds = [[n] * phi.dim for _ in range(psi.dim)]
    trace = []
    while True:
        for i in range(psi.dim):
            for j in range(phi.dim):
                while True:
                    entry = V.entries[i][j]
                    r = entry.deg()
                    if r < n:
                        break
                    a = entry.coefficient(r)
                    U = kmat_zero(psi.dim, phi.dim, F)
                    U[i] = list(A_inv[j])
                    G0 = _scaled_constant_matrix(U, a, r - n, side, F)
                    V = _inner_step(V, G0, phi, psi)
                    trace.append(TraceStep(i, j, r - n, a, U))
                    if V.entries[i][j].deg() >= r:
                        raise InternalInvariantError(
                            f"reduction step at ({i + 1},{j + 1}) failed to lower the degree {r}"
                        )
        if strict or not _out_of_bounds(V, bounds):
            return V, trace


def _check_triangular(mod, name):
    t = mod.t
    for i in range(mod.dim):
        for j in range(i + 1, mod.dim):
            if not t.entries[i][j].is_zero():
                raise ShapeError(f"{name} is not lower-triangular: entry ({i + 1},{j + 1}) is nonzero")
        d = t.entries[i][i]
        theta = RationalCoeff.theta(mod.field)
        if d.constant_term() != theta or d.deg() < 1:
            raise ShapeError(
                f"{name}[{i + 1},{i + 1}] is not a Drinfeld module (constant term theta, degree >= 1)"
            )


def triangular_bounds(phi, psi):
    return [[phi.t.entries[j][j].deg() for j in range(phi.dim)] for _ in range(psi.dim)]


def _check_triangular_hypotheses(phi, psi):
    _check_triangular(phi, "Phi")
    _check_triangular(psi, "Psi")
    for i in range(psi.dim):
        for j in range(phi.dim):
            dp, ds = phi.t.entries[j][j].deg(), psi.t.entries[i][i].deg()
            if dp <= ds:
                raise HypothesisError(
                    f"triangular reduction needs deg Phi[{j + 1},{j + 1}] > deg Psi[{i + 1},{i + 1}], "
                    f"got {dp} <= {ds}"
                )


def reduce_triangular(V, phi, psi, strict=False, check=True):
    """Reduction for lower-triangular modules with Drinfeld diagonals.

    Entry (i, j) is reduced below deg Phi[j, j] with
    delta^(E_ij a tau^(r'-r)), a = top coefficient / lead(Phi[j, j])^(r'-r).
    Sweep order is i ascending, j descending; one sweep suffices for these
    shapes, and the fixpoint loop is kept as a safeguard.  ``strict`` stops
    after one sweep regardless.
    """
    if check:
        _check_triangular_hypotheses(phi, psi)
    F, side = phi.field, phi.side
    s = side.sign
    bounds = triangular_bounds(phi, psi)
    leads = [phi.t.entries[j][j].leading_coefficient() for j in range(phi.dim)]
    trace = []
    while True:
        for i in range(psi.dim):
            for j in reversed(range(phi.dim)):
                rj = bounds[i][j]
                while True:
                    entry = V.entries[i][j]
                    r = entry.deg()
                    if r < rj:
                        break
                    a = entry.coefficient(r) / leads[j].twist(s * (r - rj))
                    U = kmat_zero(psi.dim, phi.dim, F)
                    U[i][j] = RationalCoeff.one(F)
                    G0 = _scaled_constant_matrix(U, a, r - rj, side, F)
                    V = _inner_step(V, G0, phi, psi)
                    trace.append(TraceStep(i, j, r - rj, a, U))
                    if V.entries[i][j].deg() >= r:
                        raise InternalInvariantError(
                            f"reduction step at ({i + 1},{j + 1}) failed to lower the degree {r}"
                        )
        if strict or not _out_of_bounds(V, bounds):
            return V, trace


def replay_trace(trace, phi, psi):
    """Sum of the inner biderivations recorded in a trace."""
    F, side = phi.field, phi.side
    acc = SkewMatrix.zeros(psi.dim, phi.dim, F, side)
    for step in trace:
        G0 = _scaled_constant_matrix(step.U, step.multiplier, step.shift, side, F)
        acc = acc + (G0 @ phi.t - psi.t @ G0)
    return acc


# ---------------------------------------------------------------------------
# From reduced matrices to Pi_t columns


def generator_ordering(bounds):
    return [
        GeneratorIndex(i, j, k)
        for i, row in enumerate(bounds)
        for j, b in enumerate(row)
        for k in range(b)
    ]


def coefficient_form(V, bounds, dropped=None):
    """Flatten V: row i, then column j, then k = 0..bounds[i][j]-1.

    Out-of-bound coefficients are an error unless ``dropped`` is a list, in
    which case they are discarded (the single-sweep convention) and
    recorded there as ``(i, j, k, coefficient)``.
    """
    out = []
    for i, row in enumerate(bounds):
        for j, b in enumerate(row):
            entry = V.entries[i][j]
            if entry.deg() >= b:
                if dropped is None:
                    raise InternalInvariantError(
                        f"entry ({i + 1},{j + 1}) has degree {entry.deg()} >= bound {b}; reduction incomplete"
                    )
                dropped.extend(
                    (i, j, k, entry.coefficient(k))
                    for k in range(b, entry.deg() + 1)
                    if not entry.coefficient(k).is_zero()
                )
            out.extend(entry.coefficient(k) for k in range(b))
    return out


def substitute_generator(values, side=Side.TAU):
    """Rewrite sum_k w_k c^(k) as sum_k w_k tau^k (c^(-k) -> sigma^k on the sigma side)."""
    return [_substitute_one(v, side) for v in values]


def _substitute_one(x, side):
    F = x.field
    if x.is_zero():
        return SkewPoly.zero(F, side)
    form = x if isinstance(x, LinearForm) else LinearForm.from_rational(x)
    s = side.sign
    coeffs = {}
    for twist, w in form.terms.items():
        k = s * twist
        if k < 0:
            raise InternalInvariantError(f"generator twist {twist} has no {side.name.lower()} power: {x}")
        coeffs[k] = w
    zero = RationalCoeff.zero(F)
    return SkewPoly([coeffs.get(k, zero) for k in range(max(coeffs) + 1)], F, side)


def _assemble(phi, psi, bounds, reduce_fn, method, strict):
    F, side = phi.field, phi.side
    ordering = generator_ordering(bounds)
    c = _generator(F)

    def column(g):
        E = SkewMatrix.elementary(psi.dim, phi.dim, g.i, g.j, SkewPoly.monomial(c, g.k, side))
        V = psi.t @ E
        red, trace = reduce_fn(V, strict)
        dropped = [] if strict else None
        coords = coefficient_form(red, bounds, dropped)
        return V, red, trace, substitute_generator(coords, side), dropped or []

    cols = _ordered_map(column, ordering)
    size = len(ordering)
    entries = [[cols[col][3][row] for col in range(size)] for row in range(size)]
    M = SkewMatrix(entries, F, side, size, size)
    try:
        pi = TModule(M)
    except InputError as exc:
        raise InternalInvariantError(f"computed Pi_t is not a t-module: {exc}") from exc
    return ExtResult(
        pi=pi,
        bounds=bounds,
        ordering=ordering,
        traces=[c[2] for c in cols],
        reduced=[c[1] for c in cols],
        method=method,
        source=phi,
        target=psi,
        extra={
            "originals": [c[0] for c in cols],
            "strict": strict,
            # (column, i, j, k, coefficient) discarded by strict single-sweep mode
            "dropped": [(col, *d) for col, c in enumerate(cols) for d in c[4]],
        },
    )


def _zero_result(phi, psi, method):
    F, side = phi.field, phi.side
    pi = TModule(SkewMatrix.zeros(0, 0, F, side))
    bounds = [[0] * phi.dim for _ in range(psi.dim)]
    return ExtResult(
        pi, bounds, [], [], [], method, phi, psi, extra={"originals": [], "strict": False, "dropped": []}
    )


def check_invertible_hypotheses(phi, psi):
    if phi.side is not psi.side:
        raise InputError("Phi and Psi live on different sides")
    if phi.deg_tau <= psi.deg_tau:
        raise DualityNeededError(
            f"the invertible method needs deg Phi > deg Psi, got {phi.deg_tau} <= {psi.deg_tau}; "
            "try extension_dual (reversed degrees) or extension_triangular"
        )
    if not is_strictly_pure(phi):
        raise HypothesisError(
            "the invertible method needs Phi strictly pure (invertible leading matrix); "
            "try extension_triangular"
        )


def extension_invertible(phi, psi, strict=False):
    """Pi_t for deg Phi > deg Psi with Phi strictly pure."""
    _check_no_generator(phi, psi)
    if phi.dim == 0 or psi.dim == 0:
        return _zero_result(phi, psi, "inverse")
    check_invertible_hypotheses(phi, psi)
    A_inv = kmat_inverse(phi.leading, phi.field)
    bounds = [[phi.deg_tau] * phi.dim for _ in range(psi.dim)]

    def red(V, strict):
        return reduce_invertible(V, phi, psi, A_inv, strict=strict)

    res = _assemble(phi, psi, bounds, red, "inverse", strict)
    res.extra["A_inv"] = A_inv
    return res


def extension_triangular(phi, psi, strict=False):
    """Pi_t for lower-triangular Phi, Psi with Drinfeld diagonals."""
    _check_no_generator(phi, psi)
    if phi.side is not psi.side:
        raise InputError("Phi and Psi live on different sides")
    if phi.dim == 0 or psi.dim == 0:
        return _zero_result(phi, psi, "triangular")
    _check_triangular_hypotheses(phi, psi)
    bounds = triangular_bounds(phi, psi)

    def red(V, strict):
        return reduce_triangular(V, phi, psi, strict=strict, check=False)

    return _assemble(phi, psi, bounds, red, "triangular", strict)


def extension_dual(phi, psi, strict=False):
    """Reversed degrees: run the invertible pipeline on (Psi^sigma, Phi^sigma).

    The result is a t^sigma-module structure (side SIGMA).
    """
    _check_no_generator(phi, psi)
    if phi.deg_tau == psi.deg_tau:
        raise UnsupportedInstanceError(
            f"deg Phi = deg Psi = {phi.deg_tau}: neither deg Phi > deg Psi (invertible method) "
            "nor deg Psi > deg Phi (dual method) holds"
        )
    if psi.deg_tau < phi.deg_tau:
        raise HypothesisError(
            "the dual method needs deg Psi > deg Phi; use extension_invertible for this pair"
        )
    src = TModule(psi.t.adjoint())
    tgt = TModule(phi.t.adjoint())
    if not is_strictly_pure(src):
        raise HypothesisError("the dual method needs Psi^sigma strictly pure (invertible leading matrix)")
    res = extension_invertible(src, tgt, strict=strict)
    res.method = "dual"
    res.extra["tau_source"] = phi
    res.extra["tau_target"] = psi
    return res


def pair_count(phi, psi, A_inv=None):
    """Number of (i, j) with E_ij A_inv N_Phi = N_Psi E_ij A_inv."""
    F = phi.field
    if A_inv is None:
        A_inv = kmat_inverse(phi.leading, F)
    s = 0
    for i in range(psi.dim):
        for j in range(phi.dim):
            U = kmat_zero(psi.dim, phi.dim, F)
            U[i] = list(A_inv[j])
            if kmat_mul(U, phi.N, F) == kmat_mul(psi.N, U, F):
                s += 1
    return s


def split_ext0(result, phi=None, psi=None):
    """Split off the G_a^s quotient of Ext^1 (invertible-method results only).

    The deleted coordinates are the k = 0 positions whose Pi_t row is theta
    on the diagonal and zero elsewhere; their count must equal the pair count.
    """
    if result.method not in ("inverse", "dual"):
        raise HypothesisError("the Ext_0 split is available for invertible-method results only")
    phi = phi or result.source
    psi = psi or result.target
    s = pair_count(phi, psi, result.extra.get("A_inv"))
    pi = result.pi
    F = pi.field
    theta = SkewPoly.constant(RationalCoeff.theta(F), pi.side)
    deleted = []
    for p, g in enumerate(result.ordering):
        if g.k != 0:
            continue
        row = pi.t.entries[p]
        if row[p] == theta and all(e.is_zero() for q, e in enumerate(row) if q != p):
            deleted.append(p)
    if len(deleted) != s:
        raise Ext0InconsistencyError(
            f"pair count s = {s} but {len(deleted)} coordinates have theta-only rows "
            f"({[d + 1 for d in deleted]}); no consistent G_a^s quotient found"
        )
    keep = [p for p in range(pi.dim) if p not in deleted]
    try:
        pi0 = TModule(pi.t.submatrix(keep, keep))
    except InputError as exc:
        raise InternalInvariantError(f"Ext_0 minor is not a t-module: {exc}") from exc
    split = Ext0Split(s, deleted, pi0)
    result.ext0 = split
    return split


def extension_auto(phi, psi, strict=False):
    """Try the invertible method, then triangular, then dual."""
    reasons = []
    for name, fn in (("inverse", extension_invertible), ("triangular", extension_triangular), ("dual", extension_dual)):
        try:
            return fn(phi, psi, strict=strict)
        except (HypothesisError, ShapeError) as exc:
            reasons.append(f"{name}: {exc}")
    raise UnsupportedInstanceError("no method applies:\n  " + "\n  ".join(reasons))


def is_strictly_lower_triangular(K):
    return all(K[i][j].is_zero() for i in range(len(K)) for j in range(i, len(K)))


def nilpotent_part_is_strictly_lower(pi):
    return is_strictly_lower_triangular(pi.N)
