"""Exact computation of Ext^1 of Anderson t-modules over F_q[t].

The main entry points are ``extension_invertible``, ``extension_triangular``,
``extension_dual`` and the closed forms in ``closed_form``.  Values live in a
generic twisted model of K = F_q(theta, symbols) and are printed in a textual
grammar that ``parse_skew`` reads back.
"""

from .biderivation import Biderivation, evaluate, inner, is_in_der0, t_action
from .closed_form import (
    DrinfeldPair,
    IntegralityReport,
    check_integrality,
    d_polys,
    integrality_conditions,
    pi_matrix,
    rank_formula,
)
from .errors import (
    DualityNeededError,
    Ext0InconsistencyError,
    FieldMismatchError,
    HypothesisError,
    InputError,
    InternalInvariantError,
    InvalidTModuleError,
    ParseError,
    ShapeError,
    SideMismatchError,
    SpecializationError,
    TModExtError,
    UnsupportedInstanceError,
    UnsupportedValuationError,
)
from .expr import format_coeff, format_matrix, format_skew, parse_coeff, parse_matrix, parse_skew
from .field import (
    FieldParams,
    RationalCoeff,
    field_add,
    field_inv,
    field_mul,
    field_neg,
    specialize,
    twist,
    valuation_at_infinity,
)
from .latex import coeff_latex, matrix_latex, skew_latex
from .linear import LinearForm
from .reduction import (
    Ext0Split,
    ExtResult,
    GeneratorIndex,
    TraceStep,
    extension_auto,
    extension_dual,
    extension_invertible,
    extension_triangular,
    pair_count,
    reduce_invertible,
    reduce_triangular,
    replay_trace,
    split_ext0,
)
from .skew import Side, SkewPoly, adjoint_to_sigma, adjoint_to_tau, apply_at, p_add, p_mult
from .tmodule import (
    DrinfeldModule,
    SkewMatrix,
    TModule,
    adjoint,
    assemble_triangular,
    direct_sum,
    is_morphism,
    is_strictly_pure,
    leading_matrix,
    t_mult,
    validate_tmodule,
)

__version__ = "0.1.0"
