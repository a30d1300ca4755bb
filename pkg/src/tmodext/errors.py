"""Exception hierarchy.

The CLI maps each family onto its own exit code, so user-facing problems
(unmet hypotheses, bad input) are distinguishable from engine bugs.
"""


class TModExtError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class HypothesisError(TModExtError):
    """The instance does not satisfy the hypotheses of the requested method."""

    exit_code = 2


class DualityNeededError(HypothesisError):
    """deg_tau Phi <= deg_tau Psi: only the adjoint (sigma-side) route applies."""


class UnsupportedInstanceError(HypothesisError):
    """No implemented method is known to be executable on this instance."""


class Ext0InconsistencyError(HypothesisError):
    """The pair-count s disagrees with the structurally detectable G_a^s quotient."""


class InputError(TModExtError, ValueError):
    """Malformed or invalid user input."""

    exit_code = 3


class ParseError(InputError):
    """Syntax error in JSON or in an expression.

    ``line`` and ``column`` are 1-based; ``token`` is the offending text.
    """

    def __init__(self, message, *, line=None, column=None, token=None, where=None):
        self.line = line
        self.column = column
        self.token = token
        self.where = where
        parts = []
        if where:
            parts.append(where)
        if line is not None:
            parts.append(f"line {line}")
        if column is not None:
            parts.append(f"column {column}")
        loc = ", ".join(parts)
        text = f"{loc}: {message}" if loc else message
        if token is not None:
            text += f" (at {token!r})"
        super().__init__(text)


class InvalidTModuleError(InputError):
    """A matrix fails the t-module axioms (shape, theta*I + nilpotent constant term)."""


class ShapeError(InputError):
    """Dimension mismatch between matrices or modules."""


class SideMismatchError(InputError):
    """Mixing tau-side and sigma-side objects."""


class FieldMismatchError(InputError):
    """Mixing values over different base fields."""


class SpecializationError(InputError):
    """x^(k) with k < 0 has no image in F_q(theta, symbols)."""


class UnsupportedValuationError(InputError):
    """The valuation at infinity is only defined for univariate theta-expressions."""


class InternalInvariantError(TModExtError):
    """An invariant the algorithms guarantee was violated (a bug)."""

    exit_code = 4
