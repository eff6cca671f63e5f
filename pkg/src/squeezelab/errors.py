"""Exception hierarchy.

Parameter guard failures derive from :class:`ParameterError` (a ``ValueError``);
numerical failures derive from :class:`NumericalError`. The CLI maps the two
families to distinct exit codes.
"""


class SqueezeLabError(Exception):
    """Base class for all library errors."""

    tag = "error"


class ParameterError(SqueezeLabError, ValueError):
    tag = "invalid-parameter"


class NumericalError(SqueezeLabError, ArithmeticError):
    tag = "numeric-failure"


class ZeroState(NumericalError):
    tag = "zero-state"


class DegenerateSuperposition(ZeroState):
    tag = "degenerate-superposition"


class CutoffTooSmall(NumericalError):
    tag = "cutoff-too-small"


class NonConvergence(NumericalError):
    tag = "non-convergence"


class IllConditionedOverlap(NumericalError):
    tag = "ill-conditioned-overlap"


class AlphaTooLarge(ParameterError):
    tag = "alpha-too-large"


class RTooLarge(ParameterError):
    tag = "r-too-large"
