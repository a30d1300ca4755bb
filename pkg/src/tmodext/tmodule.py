"""Matrices over K{tau}/K{sigma} and validated t-modules.

A t-module of dimension d is given by the matrix Phi_t whose constant term is
theta*I + N with N nilpotent.  ``TModule`` caches N, deg_tau and the leading
coefficient matrix A_n.
"""

from __future__ import annotations

from .errors import InternalInvariantError, InvalidTModuleError, ShapeError, SideMismatchError
from .field import THETA, RationalCoeff
from .skew import NEG_INF, Side, SkewPoly


class SkewMatrix:
    """A rows x cols grid of SkewPoly sharing one side and base field."""

    __slots__ = ("rows", "cols", "entries", "side", "field")

    def __init__(self, entries, field, side=Side.TAU, rows=None, cols=None):
        entries = tuple(tuple(r) for r in entries)
        self.rows = len(entries) if rows is None else rows
        self.cols = (len(entries[0]) if entries else 0) if cols is None else cols
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ShapeError("ragged matrix: every row must have the same length")
        for r in entries:
            for e in r:
                if e.side is not side:
                    raise SideMismatchError("matrix entries must all live on the same side")
        self.entries = entries
        self.side = side
        self.field = field

    # Constructors

    @classmethod
    def zeros(cls, rows, cols, field, side=Side.TAU):
        z = SkewPoly.zero(field, side)
        return cls([[z] * cols for _ in range(rows)], field, side, rows, cols)

    @classmethod
    def identity(cls, n, field, side=Side.TAU):
        z, o = SkewPoly.zero(field, side), SkewPoly.one(field, side)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], field, side, n, n)

    @classmethod
    def elementary(cls, rows, cols, i, j, poly):
        """The matrix with ``poly`` at (i, j) and zeros elsewhere (0-based)."""
        z = SkewPoly.zero(poly.field, poly.side)
        return cls(
            [[poly if (a, b) == (i, j) else z for b in range(cols)] for a in range(rows)],
            poly.field,
            poly.side,
            rows,
            cols,
        )

    @classmethod
    def from_constants(cls, kmat, field, side=Side.TAU, rows=None, cols=None):
        return cls(
            [[SkewPoly.constant(c, side) for c in row] for row in kmat], field, side, rows, cols
        )

    @classmethod
    def block(cls, blocks, field, side=Side.TAU):
        """Assemble from a grid of SkewMatrix blocks."""
        rows = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ShapeError("blocks in one block-row must share a height")
            for r in range(h):
                rows.append([e for b in brow for e in b.entries[r]])
        ncols = sum(b.cols for b in blocks[0]) if blocks else 0
        return cls(rows, field, side, len(rows), ncols)

    # Accessors

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def deg(self):
        """Maximum entry degree; -inf for the zero matrix."""
        return max((e.deg() for r in self.entries for e in r), default=NEG_INF)

    def constant_matrix(self):
        return [[e.constant_term() for e in r] for r in self.entries]

    def coefficient_matrix(self, k):
        return [[e.coefficient(k) for e in r] for r in self.entries]

    def is_zero(self):
        return all(e.is_zero() for r in self.entries for e in r)

    def variables(self):
        out = set()
        for r in self.entries:
            for e in r:
                out |= e.variables()
        return out

    # Arithmetic

    def _check(self, other):
        if other.side is not self.side:
            raise SideMismatchError("matrices live on different sides")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape} matrices")
        return SkewMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.field, self.side, self.rows, self.cols,
        )

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = SkewPoly.zero(self.field, self.side)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    b = other.entries[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SkewMatrix(out, self.field, self.side, self.rows, other.cols)

    def map_entries(self, fn):
        return SkewMatrix(
            [[fn(e) for e in r] for r in self.entries], self.field, self.side, self.rows, self.cols
        )

    def scale_left(self, c):
        return self.map_entries(lambda e: e.scale_left(c))

    def transpose(self):
        return SkewMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field, self.side, self.cols, self.rows,
        )

    def adjoint(self):
        """Entrywise adjoint followed by transpose; lands on the other side."""
        return SkewMatrix(
            [[self.entries[i][j].adjoint() for i in range(self.rows)] for j in range(self.cols)],
            self.field, self.side.other, self.cols, self.rows,
        )

    def reflect(self):
        return SkewMatrix(
            [[e.reflect() for e in r] for r in self.entries],
            self.field, self.side.other, self.rows, self.cols,
        )

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return SkewMatrix(
            [[self.entries[i][j] for j in cols] for i in rows],
            self.field, self.side, len(rows), len(cols),
        )

    def __eq__(self, other):
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        return self.side is other.side and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.side, self.entries))

    def __str__(self):
        from .expr import format_matrix

        return format_matrix(self)

    def __repr__(self):
        return f"SkewMatrix({self.rows}x{self.cols})"


def t_mult(X, Y):
    return X @ Y


# ---------------------------------------------------------------------------
# Matrices over K


def kmat_zero(r, c, F):
    z = RationalCoeff.zero(F)
    return [[z] * c for _ in range(r)]


def kmat_identity(n, F):
    z, o = RationalCoeff.zero(F), RationalCoeff.one(F)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def kmat_mul(A, B, F):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    z = RationalCoeff.zero(F)
    out = []
    for row in A:
        r = []
        for j in range(cols):
            acc = z
            for k in range(inner):
                if not row[k].is_zero() and not B[k][j].is_zero():
                    acc = acc + row[k] * B[k][j]
            r.append(acc)
        out.append(r)
    return out


def kmat_is_zero(A):
    return all(x.is_zero() for r in A for x in r)


def kmat_is_nilpotent(A, F):
    n = len(A)
    if n == 0:
        return True
    P = A
    for _ in range(n - 1):
        P = kmat_mul(P, A, F)
    return kmat_is_zero(P)


def kmat_det(A, F):
    n = len(A)
    M = [list(r) for r in A]
    det = RationalCoeff.one(F)
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            return RationalCoeff.zero(F)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if M[r][col].is_zero():
                continue
            f = M[r][col] * inv
            M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def kmat_inverse(A, F):
    """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
    n = len(A)
    M = [list(r) + row for r, row in zip(A, kmat_identity(n, F))]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [r[n:] for r in M]


# ---------------------------------------------------------------------------
# t-modules


class TModule:
    """A validated t-module (or t^sigma-module when ``side`` is SIGMA)."""

    __slots__ = ("t", "dim", "N", "deg_tau", "leading")

    def __init__(self, t_matrix):
        t = t_matrix
        if t.rows != t.cols:
            raise InvalidTModuleError(f"t-matrix must be square, got {t.rows}x{t.cols}")
        F = t.field
        C = t.constant_matrix()
        theta = RationalCoeff.theta(F)
        for row in C:
            for x in row:
                twisted = [v for v in x.variables() if v[0] == THETA and v[1] != 0]
                if twisted:
                    raise InvalidTModuleError(
                        "the constant term may not contain twisted theta "
                        f"(found theta^({twisted[0][1]}))"
                    )
        N = [[x - theta if i == j else x for j, x in enumerate(row)] for i, row in enumerate(C)]
        if not kmat_is_nilpotent(N, F):
            raise InvalidTModuleError("constant term minus theta*I is not nilpotent")
        self.t = t
        self.dim = t.rows
        self.N = N
        self.deg_tau = t.deg() if t.rows else 0
        self.leading = t.coefficient_matrix(self.deg_tau) if t.rows else []

    @property
    def side(self):
        return self.t.side

    @property
    def field(self):
        return self.t.field

    def is_drinfeld(self):
        return self.dim == 1 and self.N[0][0].is_zero() and self.deg_tau >= 1

    def __eq__(self, other):
        return isinstance(other, TModule) and self.t == other.t

    def __hash__(self):
        return hash(self.t)

    def __repr__(self):
        return f"TModule(dim={self.dim}, deg={self.deg_tau}, side={self.side.name.lower()})"


class DrinfeldModule(TModule):
    """A one-dimensional t-module theta + a_1 tau + ... + a_n tau^n with n >= 1."""

    __slots__ = ()

    def __init__(self, t_matrix):
        if isinstance(t_matrix, SkewPoly):
            t_matrix = SkewMatrix([[t_matrix]], t_matrix.field, t_matrix.side)
        super().__init__(t_matrix)
        if self.dim != 1:
            raise InvalidTModuleError("a Drinfeld module is 1x1")
        if not self.N[0][0].is_zero():
            raise InvalidTModuleError("a Drinfeld module has constant term exactly theta")
        if self.deg_tau < 1:
            raise InvalidTModuleError("a Drinfeld module has tau-degree at least 1")

    @classmethod
    def from_module(cls, m):
        return m if isinstance(m, cls) else cls(m.t)

    @property
    def poly(self):
        return self.t.entries[0][0]

    @property
    def rank(self):
        return self.deg_tau


def validate_tmodule(M):
    return TModule(M)


def leading_matrix(phi):
    return phi.leading


def is_strictly_pure(phi):
    if phi.dim == 0:
        return True
    return not kmat_det(phi.leading, phi.field).is_zero()


def adjoint(phi):
    return TModule(phi.t.adjoint())


def is_morphism(f, source, target):
    if f.shape != (target.dim, source.dim):
        raise ShapeError(
            f"a morphism {source.dim}-dim -> {target.dim}-dim must be {target.dim}x{source.dim}, got {f.rows}x{f.cols}"
        )
    return f @ source.t == target.t @ f


def assemble_triangular(quotient, sub, delta_t):
    """The block matrix [[quotient, 0], [delta, sub]] as a t-module."""
    if hasattr(delta_t, "delta_t"):
        delta_t = delta_t.delta_t
    if delta_t.shape != (sub.dim, quotient.dim):
        raise ShapeError(
            f"delta must be {sub.dim}x{quotient.dim} (sub x quotient), got {delta_t.rows}x{delta_t.cols}"
        )
    F, side = quotient.field, quotient.side
    top = SkewMatrix.zeros(quotient.dim, sub.dim, F, side)
    M = SkewMatrix.block([[quotient.t, top], [delta_t, sub.t]], F, side)
    try:
        return TModule(M)
    except InvalidTModuleError as exc:
        raise InternalInvariantError(f"assembled extension is not a t-module: {exc}") from exc


def direct_sum(modules, field=None, side=Side.TAU):
    modules = list(modules)
    if not modules:
        if field is None:
            raise ValueError("direct_sum of nothing needs an explicit field")
        return TModule(SkewMatrix.zeros(0, 0, field, side))
    F, side = modules[0].field, modules[0].side
    out = modules[0]
    for m in modules[1:]:
        z = SkewMatrix.zeros(m.dim, out.dim, F, side)
        out = assemble_triangular(out, m, z)
    return out


def t_power_action(phi, a):
    """Phi_a for a = sum a_k t^k given as F_q scalars, low to high."""
    F, side = phi.field, phi.side
    acc = SkewMatrix.zeros(phi.dim, phi.dim, F, side)
    power = SkewMatrix.identity(phi.dim, F, side)
    for k, ak in enumerate(a):
        if k:
            power = phi.t @ power
        if ak:
            acc = acc + power.scale_left(RationalCoeff.from_scalar(ak, F))
    return acc
