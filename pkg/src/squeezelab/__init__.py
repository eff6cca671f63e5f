"""Squeezed-state superpositions in truncated Fock space.

Builds squeezed, coherent, cat and photon-added states and their
superpositions, measures quadrature and higher-order squeezing, optimizes
superposition weights, and evaluates normal-ordered energy-density profiles.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    AlphaTooLarge,
    CutoffTooSmall,
    DegenerateSuperposition,
    IllConditionedOverlap,
    NonConvergence,
    NumericalError,
    ParameterError,
    RTooLarge,
    SqueezeLabError,
    ZeroState,
)
from .fock import FockState, MomentTable, TwoModeFockState, inner_product, moment, normalize, two_mode_moment
from .states import (
    PacsParam,
    SqueezeParam,
    SuperpositionSpec,
    cat,
    coherent,
    first_kind_superposition,
    generalized_superposition,
    pacs,
    squeezed_vacuum,
    two_mode_first_kind,
    two_mode_squeezed_vacuum,
)
from .squeezing import (
    hillery_report,
    hong_mandel_moment,
    principal_report,
    quadrature_variance,
    two_mode_principal_report,
    two_mode_variance,
)
from .energy import EnergyDensityConfig, negativity_report, t00, t00_profile
from .optimizer import OptimizationProblem, minimize_eigen, minimize_simplex, objective
