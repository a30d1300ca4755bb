import random

import pytest

from conftest import F3
from generators import rand_tmodule
from tmodext.biderivation import Biderivation, evaluate, inner, is_in_der0, t_action
from tmodext.errors import InvalidTModuleError, ShapeError
from tmodext.expr import parse_matrix
from tmodext.field import FieldParams
from tmodext.skew import Side
from tmodext.tmodule import (
    DrinfeldModule,
    SkewMatrix,
    TModule,
    assemble_triangular,
    direct_sum,
    is_morphism,
    is_strictly_pure,
    leading_matrix,
    t_mult,
)

S = ("a", "b")
F2 = FieldParams(2)


def mat(rows, F=F3, side=Side.TAU):
    return parse_matrix(rows, F, S, side)


def test_validation_caches():
    phi = TModule(mat([["theta", "T^3"], ["1+T^3", "theta"]]))
    assert phi.dim == 2 and phi.deg_tau == 3
    assert [[str(x) for x in r] for r in phi.N] == [["0", "0"], ["1", "0"]]
    assert [[str(x) for x in r] for r in leading_matrix(phi)] == [["0", "1"], ["1", "0"]]
    assert is_strictly_pure(phi)


@pytest.mark.parametrize(
    "rows",
    [
        [["theta", "1"], ["1", "theta"]],  # N not nilpotent
        [["theta + 1", "0"], ["0", "theta"]],  # constant term is not theta*I + nilpotent
        [["theta^(1)", "0"], ["0", "theta"]],  # twisted theta
        [["theta", "T"]],  # not square
        [["a", "0"], ["0", "theta"]],
    ],
)
def test_invalid_modules(rows):
    with pytest.raises(InvalidTModuleError):
        TModule(mat(rows))


def test_not_strictly_pure():
    phi = TModule(mat([["theta + T^2", "0"], ["1", "theta + T"]]))
    assert not is_strictly_pure(phi)


def test_t_mult_associative_and_distributive():
    rng = random.Random(3)
    for _ in range(20):
        A, B, C = (rand_tmodule(F3, rng, 2, rng.randint(0, 3)).t for _ in range(3))
        assert t_mult(t_mult(A, B), C) == t_mult(A, t_mult(B, C))
        assert t_mult(A, B + C) == t_mult(A, B) + t_mult(A, C)


def test_shape_errors():
    with pytest.raises(ShapeError):
        SkewMatrix.identity(2, F3) @ SkewMatrix.identity(3, F3)


def test_morphism_to_lower_triangular_form():
    upsilon = TModule(mat([["theta", "T"], ["T", "theta"]]))
    lower = TModule(mat([["theta + T", "0"], ["T", "theta - T"]]))
    f = mat([["1", "1"], ["0", "1"]])
    assert is_morphism(f, upsilon, lower)
    assert not is_morphism(f, lower, upsilon)
    # The adjoint reverses the arrow.
    assert is_morphism(f.adjoint(), TModule(lower.t.adjoint()), TModule(upsilon.t.adjoint()))


def test_adjoint_is_involution_on_modules():
    rng = random.Random(4)
    for _ in range(20):
        phi = rand_tmodule(F3, rng, rng.randint(1, 3), rng.randint(1, 4))
        sig = TModule(phi.t.adjoint())
        assert sig.side is Side.SIGMA
        assert TModule(sig.t.adjoint()) == phi


def test_direct_sum_and_zero_module():
    phi = TModule(mat([["theta + T"]]))
    psi = TModule(mat([["theta + a*T^2"]]))
    zero = direct_sum([], field=F3)
    assert zero.dim == 0
    s = direct_sum([zero, phi, psi])
    assert s.t == mat([["theta + T", "0"], ["0", "theta + a*T^2"]])


def test_assemble_triangular_from_biderivation():
    phi = TModule(mat([["theta + T^2"]]))
    psi = TModule(mat([["theta + T"]]))
    delta = Biderivation(phi, psi, mat([["a*T"]]))
    ext = assemble_triangular(phi, psi, delta)
    assert ext.t == mat([["theta + T^2", "0"], ["a*T", "theta + T"]])


def test_drinfeld_module():
    phi = DrinfeldModule(mat([["theta + a*T + T^3"]]))
    assert phi.rank == 3 and str(phi.poly) == "theta + a*T + T^3"
    with pytest.raises(InvalidTModuleError):
        DrinfeldModule(mat([["theta"]]))


def _polys_upto(q, deg):
    out = [[]]
    for _ in range(deg + 1):
        out = [p + [c] for p in out for c in range(q)]
    return out


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def test_biderivation_identity_small():
    phi = TModule(mat([["theta + T^2"]], F2))
    psi = TModule(mat([["theta + T"]], F2))
    delta = Biderivation(phi, psi, parse_matrix([["theta*T"]], F2))
    polys = _polys_upto(2, 2)
    for a in polys:
        for b in polys:
            lhs = evaluate(delta, _pmul(a, b, 2))
            rhs = t_action(psi, a) @ evaluate(delta, b) + evaluate(delta, a) @ t_action(phi, b)
            assert lhs == rhs


def test_inner_biderivation_values():
    rng = random.Random(7)
    phi = rand_tmodule(F3, rng, 2, 2)
    psi = rand_tmodule(F3, rng, 1, 1)
    U = mat([["a", "T"]])
    d = inner(U, phi, psi)
    for a in ([0, 1], [1, 2, 1], [0, 0, 0, 1]):
        assert evaluate(d, a) == U @ t_action(phi, a) - t_action(psi, a) @ U


def test_der0_membership():
    phi = TModule(mat([["theta + T^2"]]))
    psi = TModule(mat([["theta + T"]]))
    assert is_in_der0(Biderivation(phi, psi, mat([["a*T"]])))
    assert not is_in_der0(Biderivation(phi, psi, mat([["a"]])))
