import random

import pytest

import goldens as G
from generators import dual_pair, invertible_pair, triangular_pair
from tmodext.errors import DualityNeededError, HypothesisError, InputError, ShapeError, UnsupportedInstanceError
from tmodext.expr import parse_matrix
from tmodext.field import FieldParams
from tmodext.reduction import (
    extension_auto,
    extension_dual,
    extension_invertible,
    extension_triangular,
    pair_count,
    replay_trace,
    split_ext0,
)
from tmodext.skew import Side
from tmodext.tmodule import SkewMatrix, TModule

F3 = FieldParams(3)
F5 = FieldParams(5)
AB = ("a", "b")


def module(rows, F=F3, symbols=AB):
    return TModule(parse_matrix(rows, F, symbols))


@pytest.fixture(scope="module")
def inv_pair():
    return module(G.INV_PHI), module(G.INV_PSI)


def test_strict_mode_reproduces_reference(inv_pair):
    res = extension_invertible(*inv_pair, strict=True)
    assert res.pi.t == parse_matrix(G.INV_PI, F3, AB)
    # The single sweep leaves one out-of-bound term, discarded by the coefficient form.
    ((col, i, j, k, x),) = res.extra["dropped"]
    assert (col, i, j, k, str(x)) == (5, 0, 0, 3, "c^(4)")


def test_fixpoint_differs_only_in_column_six(inv_pair):
    res = extension_invertible(*inv_pair)
    ref = parse_matrix(G.INV_PI, F3, AB)
    diff = {(i, j) for i in range(12) for j in range(12) if res.pi.t[i, j] != ref[i, j]}
    assert diff == {(r, 5) for r in G.INV_PI_COLUMN6_FIXPOINT}
    for r, text in G.INV_PI_COLUMN6_FIXPOINT.items():
        assert res.pi.t[r, 5] == parse_matrix([[text]], F3, AB)[0, 0]
    assert res.extra["dropped"] == []
    for V in res.reduced:
        assert all(e.deg() < 3 for row in V.entries for e in row)


def test_unit_specialization_strict():
    res = extension_invertible(module(G.UNIT_PHI), module(G.UNIT_PSI), strict=True)
    assert res.pi.t == parse_matrix(G.UNIT_PI, F3, ())


def test_ext0_split():
    res = extension_invertible(module(G.UNIT_PHI), module(G.UNIT_PSI))
    split = split_ext0(res)
    assert split.s == 1 and split.deleted == [3]
    assert split.pi0.dim == 11
    keep = [p for p in range(12) if p != 3]
    assert split.pi0.t == res.pi.t.submatrix(keep, keep)


def test_pair_count_matches_unique_pair():
    phi, psi = module(G.UNIT_PHI), module(G.UNIT_PSI)
    assert pair_count(phi, psi) == 1


def test_triangular_reference():
    phi = module(G.TRI_PHI, F5, ("a",))
    psi = module(G.TRI_PSI, F5, ("a",))
    ref = parse_matrix(G.TRI_PI, F5, ("a",))
    assert extension_triangular(phi, psi).pi.t == ref
    assert extension_triangular(phi, psi, strict=True).pi.t == ref
    assert extension_triangular(phi, psi).bounds == [[3, 2], [3, 2]]


def test_ordering_is_row_major(inv_pair):
    res = extension_invertible(*inv_pair)
    assert [tuple(g) for g in res.ordering[:4]] == [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0)]


def test_replay_reconstructs_originals(inv_pair):
    phi, psi = inv_pair
    res = extension_invertible(phi, psi)
    for V, red, trace in zip(res.extra["originals"], res.reduced, res.traces):
        assert V - red == replay_trace(trace, phi, psi)


def test_random_instances_replay():
    rng = random.Random(11)
    for gen, fn in ((invertible_pair, extension_invertible), (triangular_pair, extension_triangular)):
        for _ in range(15):
            phi, psi = gen(rng)
            res = fn(phi, psi)
            for V, red, trace in zip(res.extra["originals"], res.reduced, res.traces):
                assert V - red == replay_trace(trace, res.source, res.target)


def test_hypothesis_errors():
    phi, psi = module(G.INV_PHI), module(G.INV_PSI)
    with pytest.raises(DualityNeededError):
        extension_invertible(psi, phi)
    not_pure = module([["theta + T^3", "0"], ["0", "theta + T"]])
    with pytest.raises(HypothesisError):
        extension_invertible(not_pure, module([["theta"]]))
    with pytest.raises(UnsupportedInstanceError):
        extension_dual(phi, phi)
    with pytest.raises(HypothesisError):
        extension_dual(phi, psi)


def test_triangular_shape_errors():
    with pytest.raises(ShapeError):
        extension_triangular(module(G.INV_PHI), module(G.INV_PSI))
    low = module([["theta + T", "0"], ["1", "theta + T^3"]])
    with pytest.raises(HypothesisError):
        extension_triangular(low, module([["theta + T^2"]]))


def test_generator_symbol_rejected():
    phi = TModule(parse_matrix([["theta + c*T^2"]], F3, (), allow_c=True))
    with pytest.raises(InputError):
        extension_invertible(phi, module([["theta + T"]]))


def test_zero_dimensional_target():
    phi = module(G.INV_PHI)
    zero = TModule(SkewMatrix.zeros(0, 0, F3))
    res = extension_invertible(phi, zero)
    assert res.pi.dim == 0


def test_auto_dispatch():
    assert extension_auto(module(G.INV_PHI), module(G.INV_PSI)).method == "inverse"
    tri = extension_auto(module(G.TRI_PHI, F5, ("a",)), module(G.TRI_PSI, F5, ("a",)))
    assert tri.method == "triangular"
    dual = extension_auto(module([["theta + T"]]), module([["theta + T^3"]]))
    assert dual.method == "dual" and dual.side is Side.SIGMA
    with pytest.raises(UnsupportedInstanceError):
        extension_auto(module([["theta + T"]]), module([["theta + a*T"]]))


def test_dual_is_mirror_of_tau_side():
    rng = random.Random(5)
    for _ in range(10):
        phi, psi = invertible_pair(rng)
        tau_res = extension_invertible(phi, psi)
        mphi = TModule(psi.t.adjoint().reflect())
        mpsi = TModule(phi.t.adjoint().reflect())
        dual_res = extension_dual(mphi, mpsi)
        assert dual_res.pi.t == tau_res.pi.t.reflect()


def test_dual_generator_pairs():
    rng = random.Random(9)
    for _ in range(5):
        phi, psi = dual_pair(rng)
        assert psi.deg_tau > phi.deg_tau
        assert extension_dual(phi, psi).side is Side.SIGMA


def test_threads_do_not_change_output(inv_pair, monkeypatch):
    base = extension_invertible(*inv_pair)
    monkeypatch.setenv("TMODEXT_THREADS", "4")
    assert extension_invertible(*inv_pair).pi.t == base.pi.t



def test_pair_count_zero_nilpotents():
    phi = module([["theta + T^3", "0"], ["0", "theta + T^3"]])
    psi = module([["theta + T", "0", "0"], ["0", "theta", "0"], ["0", "0", "theta + T^2"]])
    assert pair_count(phi, psi) == 6
    carlitz_by_rank2 = extension_invertible(module([["theta + a*T + T^2"]]), module([["theta + T"]]))
    assert split_ext0(carlitz_by_rank2).s == 1
