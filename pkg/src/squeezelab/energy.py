"""Normal-ordered energy density of a single excited field mode.

For a massless scalar field restricted to one plane-wave mode, the vacuum
subtracted energy density reduces to

    <:T00:>(theta) = 2 K00 (<a^dag a> - Re(<a^2> e^{2 i theta}))

with ``K00 = k0^2 / (2 omega L^3)`` and ``theta`` the spacetime phase of the
mode. The minimum over ``theta`` is ``2 K00 (<a^dag a> - |<a^2>|)``, so
negativity is decided from two moments rather than from grid sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ParameterError
from .fock import FockState, moment
from .series import sum_series
from .squeezing import principal_report

__all__ = [
    "EnergyDensityConfig",
    "EnergyDensityProfile",
    "NegativityReport",
    "t00",
    "t00_profile",
    "closed_form_t00",
    "negativity_report",
    "CLOSED_FORM_FAMILIES",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EnergyDensityConfig:
    """Prefactor ``K00`` and the grid of spacetime phases to sample."""

    k00: float = 1.0
    theta_grid: tuple = field(default_factory=lambda: tuple(np.linspace(0.0, TWO_PI, 64, endpoint=False)))

    def __post_init__(self):
        if not (self.k00 > 0 and math.isfinite(self.k00)):
            raise ParameterError("k00 must be positive and finite")
        grid = tuple(float(t) for t in self.theta_grid)
        if grid:
            arr = np.asarray(grid)
            if arr[0] < 0 or arr[-1] > TWO_PI or np.any(np.diff(arr) <= 0):
                raise ParameterError("theta_grid must be strictly increasing within [0, 2 pi]")
        object.__setattr__(self, "theta_grid", grid)

    @classmethod
    def uniform(cls, points: int = 64, k00: float = 1.0) -> "EnergyDensityConfig":
        """``points`` equally spaced phases covering ``[0, 2 pi)``."""
        if points < 0:
            raise ParameterError("grid size must be nonnegative")
        return cls(k00=k00, theta_grid=tuple(np.linspace(0.0, TWO_PI, points, endpoint=False)))


@dataclass(frozen=True)
class EnergyDensityProfile:
    theta: np.ndarray
    values: np.ndarray
    min_value: float
    min_theta: float
    ever_negative: bool


@dataclass(frozen=True)
class NegativityReport:
    squeezed: bool
    ever_negative: bool
    consistent_with_paper_claim: bool
    zero_mean: bool

    def __iter__(self):
        return iter((self.squeezed, self.ever_negative, self.consistent_with_paper_claim))


def _mode_moments(state: FockState, tol: Tolerances) -> tuple[float, complex]:
    return moment(state, 1, 1, tol).real, moment(state, 0, 2, tol)


def t00(state: FockState, theta: float, cfg: EnergyDensityConfig = EnergyDensityConfig(), tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    n, second = _mode_moments(state, tol)
    return float(2.0 * cfg.k00 * (n - (second * np.exp(2j * theta)).real))


def t00_profile(state: FockState, cfg: EnergyDensityConfig = EnergyDensityConfig(), tol: Tolerances = DEFAULT_TOLERANCES) -> EnergyDensityProfile:
    """Energy density over ``cfg.theta_grid`` with the analytic minimum."""
    n, second = _mode_moments(state, tol)
    theta = np.asarray(cfg.theta_grid, dtype=float)
    values = 2.0 * cfg.k00 * (n - (second * np.exp(2j * theta)).real)
    min_value = 2.0 * cfg.k00 * (n - abs(second))
    min_theta = (-np.angle(second) / 2.0) % math.pi if abs(second) > 0 else 0.0
    return EnergyDensityProfile(
        theta=theta,
        values=values,
        min_value=float(min_value),
        min_theta=float(min_theta),
        ever_negative=bool(min_value < -1e-12 * cfg.k00),
    )


CLOSED_FORM_FAMILIES = ("coherent", "even_cat", "svs", "first_kind_svs_l2")


def _first_kind_l2_series(r: float, tol: Tolerances) -> float:
    # sum_n n (4n)!/((2n)!)^2 (tanh r / 2)^(4n), in log form
    t = math.tanh(r)
    if t == 0.0:
        return 0.0
    log_q = 4.0 * math.log(t / 2.0)

    def term(n):
        n = n.astype(float)
        with np.errstate(divide="ignore"):
            log_n = np.where(n > 0, np.log(np.maximum(n, 1.0)), -np.inf)
        return np.exp(log_n + gammaln(4 * n + 1) - 2 * gammaln(2 * n + 1) + n * log_q)

    return sum_series(term, tol.series_term_tol)


def closed_form_t00(family: str, param: float, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Closed-form ``<:T00:>`` in units of ``K00`` for real parameters.

    ``param`` is the real coherent amplitude for ``coherent`` and ``even_cat``,
    and the real squeezing parameter for ``svs`` and ``first_kind_svs_l2``.
    The last family is phase independent.
    """
    c2 = math.cos(2.0 * theta)
    if family == "coherent":
        return 2.0 * param**2 * (1.0 - c2)
    if family == "even_cat":
        x = param**2
        if x == 0:
            return 0.0
        return 2.0 * x * math.tanh(x) * (1.0 - c2 / math.tanh(x))
    if family == "svs":
        return 2.0 * math.sinh(param) * (math.cosh(param) * c2 + math.sinh(param))
    if family == "first_kind_svs_l2":
        sech = 1.0 / math.cosh(param)
        prefactor = 16.0 * sech / (1.0 + math.sqrt(1.0 / math.cosh(2.0 * param)))
        return prefactor * _first_kind_l2_series(param, tol)
    raise ParameterError(f"unknown closed-form family {family!r}; expected one of {CLOSED_FORM_FAMILIES}")


def negativity_report(state: FockState, tol: Tolerances = DEFAULT_TOLERANCES) -> NegativityReport:
    """Compare the squeezing decision with the sign of the minimal energy density.

    For states with ``<a> = 0`` the two decisions coincide by construction, so
    ``consistent_with_paper_claim`` must be true there; for displaced states it
    is only reported.
    """
    quad = principal_report(state, tol)
    profile = t00_profile(state, EnergyDensityConfig(theta_grid=()), tol)
    zero_mean = abs(moment(state, 0, 1, tol)) < 1e-10
    ever_negative = profile.min_value < -tol.decision_slack
    return NegativityReport(
        squeezed=quad.squeezed,
        ever_negative=bool(ever_negative),
        consistent_with_paper_claim=bool(quad.squeezed == ever_negative),
        zero_mean=bool(zero_mean),
    )
