import random

import pytest

from generators import drinfeld_pair
from tmodext.closed_form import (
    FEEDBACK,
    NO_FEEDBACK,
    DrinfeldPair,
    check_integrality,
    d_polys,
    integrality_conditions,
    pi_matrix,
    rank_formula,
)
from tmodext.errors import HypothesisError, UnsupportedValuationError
from tmodext.expr import parse_skew
from tmodext.field import FieldParams
from tmodext.reduction import extension_invertible
from tmodext.tmodule import DrinfeldModule

F2 = FieldParams(2)
F3 = FieldParams(3)


def drin(text, F=F3, symbols=("a", "b", "a1", "a2", "a3", "b1", "b2")):
    return DrinfeldModule(parse_skew(text, F, symbols))


def pair(phi_text, psi_text, F=F3):
    return DrinfeldPair(drin(phi_text, F), drin(psi_text, F))


@pytest.mark.parametrize(
    "phi, psi, case",
    [
        ("theta + a1*T + a2*T^2 + a3*T^3", "theta + b1*T", "m<r"),
        ("theta + a1*T + a2*T^2 + a3*T^3 + T^4", "theta + b1*T + b2*T^2", "m=r"),
        ("theta + a1*T + a2*T^2 + a3*T^3", "theta + b1*T + b2*T^2", "m>r"),
    ],
)
def test_symbolic_cases_match_algorithm(phi, psi, case):
    p = pair(phi, psi)
    assert p.case() == case
    assert pi_matrix(p).pi.t == extension_invertible(p.phi, p.psi).pi.t


def test_cells():
    p = pair("theta + a1*T + T^5", "theta + b1*T + T^3")
    assert p.cells() == [("m>r", "r+l<=m"), ("m>r", "r+l<=m"), ("m>r", "r+l>m")]
    assert pi_matrix(p).pi.t == extension_invertible(p.phi, p.psi).pi.t


def test_feedback_matters_when_m_exceeds_r():
    p = pair("theta + a1*T + a2*T^2 + a3*T^3", "theta + b1*T + b2*T^2")
    assert d_polys(p, 1) == d_polys(p, 1, FEEDBACK)
    assert d_polys(p, 1, NO_FEEDBACK) != d_polys(p, 1, FEEDBACK)


def test_random_pairs_match_algorithm():
    rng = random.Random(21)
    for _ in range(30):
        phi, psi = drinfeld_pair(rng)
        p = DrinfeldPair(phi, psi)
        assert pi_matrix(p).pi.t == extension_invertible(phi, psi).pi.t


def test_requires_r_positive():
    with pytest.raises(HypothesisError):
        pair("theta + T", "theta + T^2")


@pytest.mark.parametrize("n, m, rank", [(2, 1, 2), (3, 1, 2), (4, 2, 4), (3, 2, 6), (6, 5, 15), (6, 3, 6)])
def test_rank_formula(n, m, rank):
    assert rank_formula(n, m) == rank


def test_rank_formula_domain():
    with pytest.raises(HypothesisError):
        rank_formula(2, 2)


def test_integrality_conditions_fail_then_nothing_asserted():
    p = pair("theta + theta*T + T^2", "theta + T", F2)
    rep = check_integrality(p)
    assert not rep.conditions_hold and rep.integral is None


def test_integrality_holds_with_theta_leading_coefficient():
    rep = check_integrality(pair("theta + T + theta*T^3", "theta + T", F2))
    assert rep.conditions_hold and rep.integral


def test_integrality_counterexample():
    """Conditions hold but one coefficient has a pole at infinity."""
    p = pair("theta + T^3", "theta + 1/theta*T + 1/theta*T^2", F2)
    assert integrality_conditions(p) == {"i": True, "ii": True, "iii": True}
    rep = check_integrality(p)
    assert rep.integral is False
    (i, j, k, value, v), = rep.violations
    assert (i, j, k, v) == (1, 2, 2, -1)
    assert str(value) == "(theta^4 + theta^3 + 1)/theta^3"


def test_integrality_rejects_symbols():
    with pytest.raises(UnsupportedValuationError):
        integrality_conditions(pair("theta + a*T^2", "theta + T"))


def test_closed_form_constant_term_is_theta_identity():
    rng = random.Random(33)
    for _ in range(10):
        p = DrinfeldPair(*drinfeld_pair(rng))
        pi = pi_matrix(p).pi
        assert all(x.is_zero() for row in pi.N for x in row)
