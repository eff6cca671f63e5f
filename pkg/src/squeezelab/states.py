"""Constructors for the state families and their superpositions.

Every public constructor returns a normalized :class:`~squeezelab.fock.FockState`
(or :class:`~squeezelab.fock.TwoModeFockState`) whose cutoff is chosen
automatically unless ``cutoff`` is given. After normalization the global phase
is fixed so that the largest-magnitude amplitude is real and nonnegative.

Superpositions are always assembled from the physical component kets, never
from phase-fixed representatives, so relative phases between components are
the ones written in the defining formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.special import gammaln

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import AlphaTooLarge, DegenerateSuperposition, ParameterError, RTooLarge, ZeroState
from .fock import FockState, TwoModeFockState, fix_global_phase, truncate_series
from .series import log_central_binomial_ratio, sum_series

__all__ = [
    "SqueezeParam",
    "PacsParam",
    "SuperpositionSpec",
    "FAMILIES",
    "coherent",
    "squeezed_vacuum",
    "pacs",
    "cat",
    "first_kind_superposition",
    "generalized_superposition",
    "two_mode_squeezed_vacuum",
    "two_mode_first_kind",
    "svs_overlap_oracle",
    "first_kind_normalization_oracle",
    "laguerre",
]

TWO_PI = 2.0 * math.pi

MAX_ALPHA_COHERENT = 20.0
MAX_ALPHA = 10.0
MAX_R = 3.0
MAX_M = 20

Generator = Callable[[int], np.ndarray]


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing parameter ``xi = r exp(i phase)``."""

    r: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ParameterError(f"squeezing parameter r must be >= 0, got {self.r}")
        if not math.isfinite(self.phase):
            raise ParameterError("squeeze phase must be finite")
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)

    @property
    def xi(self) -> complex:
        return cmath.rect(self.r, self.phase)

    def rotated(self, angle: float) -> "SqueezeParam":
        return SqueezeParam(self.r, self.phase + angle)


@dataclass(frozen=True)
class PacsParam:
    """Photon-added coherent state ``|alpha, m>``."""

    alpha: complex
    m: int = 0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ParameterError(f"added-photon count must be a nonnegative integer, got {self.m}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "m", int(self.m))

    def rotated(self, angle: float) -> "PacsParam":
        return PacsParam(self.alpha * cmath.exp(1j * angle), self.m)


FAMILIES = ("squeezed-vacuum", "pacs", "coherent-cat", "two-mode-squeezed-vacuum")


@dataclass(frozen=True)
class SuperpositionSpec:
    """Weighted superposition ``sum_j a_j |Phi_j>`` of one family of states.

    ``components`` holds ``(weight, params)`` pairs. The parameter record type
    depends on ``family``: :class:`SqueezeParam` for squeezed vacua (single or
    two-mode), :class:`PacsParam` for PACS, and a complex amplitude for coherent
    states (the building blocks of cat states).
    """

    components: tuple
    family: str = "squeezed-vacuum"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        comps = tuple((complex(w), p) for w, p in self.components)
        if not comps:
            raise ParameterError("a superposition needs at least one component")
        if all(w == 0 for w, _ in comps):
            raise DegenerateSuperposition("all superposition weights are zero")
        expected = {
            "squeezed-vacuum": SqueezeParam,
            "two-mode-squeezed-vacuum": SqueezeParam,
            "pacs": PacsParam,
        }.get(self.family)
        for _, p in comps:
            if expected is not None and not isinstance(p, expected):
                raise ParameterError(f"{self.family} components need {expected.__name__} parameters")
            if expected is None and not isinstance(p, (int, float, complex)):
                raise ParameterError("coherent-cat components need complex amplitudes")
        object.__setattr__(self, "components", comps)

    @classmethod
    def real_squeezed_vacua(cls, r_list: Sequence[float], weights: Sequence[float]) -> "SuperpositionSpec":
        if len(r_list) != len(weights):
            raise ParameterError("r_list and weights must have the same length")
        return cls(tuple((w, SqueezeParam(r)) for r, w in zip(r_list, weights)))


# -- amplitude generators ------------------------------------------------------
# Each generator returns the exact (analytically normalized) amplitudes of the
# physical ket for n = 0..L, without any global-phase fixing.


def _coherent_gen(alpha: complex) -> Generator:
    alpha = complex(alpha)

    def gen(length: int) -> np.ndarray:
        n = np.arange(length + 1)
        out = np.zeros(length + 1, dtype=complex)
        if alpha == 0:
            out[0] = 1.0
            return out
        log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        return np.exp(log_mag + 1j * n * cmath.phase(alpha))

    return gen


def _svs_gen(p: SqueezeParam) -> Generator:
    t = math.tanh(p.r)

    def gen(length: int) -> np.ndarray:
        out = np.zeros(length + 1, dtype=complex)
        if t == 0.0:
            out[0] = 1.0
            return out
        m = np.arange(length // 2 + 1)
        # sqrt((2m)!)/(2^m m!) = exp(0.5 * log_central_binomial_ratio(m))
        log_mag = -0.5 * math.log(math.cosh(p.r)) + m * math.log(t) + 0.5 * log_central_binomial_ratio(m)
        phase = m * (p.phase + math.pi)
        out[2 * m] = np.exp(log_mag + 1j * phase)
        return out

    return gen


def laguerre(m: int, x: float) -> float:
    """Laguerre polynomial ``L_m(x)`` by the three-term recurrence."""
    if m < 0:
        raise ParameterError("Laguerre order must be nonnegative")
    prev, cur = 1.0, 1.0 - x
    if m == 0:
        return prev
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def _pacs_gen(p: PacsParam) -> Generator:
    alpha, m = p.alpha, p.m
    x = abs(alpha) ** 2
    log_norm = -x / 2 - 0.5 * (math.log(laguerre(m, -x)) + math.lgamma(m + 1))

    def gen(length: int) -> np.ndarray:
        out = np.zeros(length + 1, dtype=complex)
        if length < m:
            return out
        n = np.arange(length - m + 1)
        if alpha == 0:
            out[m] = 1.0
            return out
        log_mag = log_norm + n * math.log(abs(alpha)) + 0.5 * gammaln(n + m + 1) - gammaln(n + 1)
        out[m:] = np.exp(log_mag + 1j * n * cmath.phase(alpha))
        return out

    return gen


def _tmsv_diag_gen(p: SqueezeParam) -> Generator:
    t = math.tanh(p.r)

    def gen(length: int) -> np.ndarray:
        n = np.arange(length + 1)
        out = np.zeros(length + 1, dtype=complex)
        if t == 0.0:
            out[0] = 1.0
            return out
        log_mag = -math.log(math.cosh(p.r)) + n * math.log(t)
        return np.exp(log_mag + 1j * n * (p.phase + math.pi))

    return gen


def _weighted(gens: Sequence[Generator], weights: Sequence[complex]) -> Generator:
    def gen(length: int) -> np.ndarray:
        total = np.zeros(length + 1, dtype=complex)
        for w, g in zip(weights, gens):
            total += w * g(length)
        return total

    return gen


# -- guards -------------------------------------------------------------------


def _check_r(r: float) -> None:
    if r > MAX_R:
        raise RTooLarge(f"r = {r} exceeds the supported maximum {MAX_R}")


def _check_alpha(alpha: complex, limit: float) -> None:
    if not cmath.isfinite(complex(alpha)):
        raise ParameterError("alpha must be finite")
    if abs(alpha) > limit:
        raise AlphaTooLarge(f"|alpha| = {abs(alpha):g} exceeds the supported maximum {limit:g}")


def _check_pacs(p: PacsParam) -> None:
    _check_alpha(p.alpha, MAX_ALPHA)
    if p.m > MAX_M:
        raise ParameterError(f"m = {p.m} exceeds the supported maximum {MAX_M}")


def _as_squeeze(xi) -> SqueezeParam:
    if isinstance(xi, SqueezeParam):
        return xi
    if isinstance(xi, complex):
        return SqueezeParam(abs(xi), cmath.phase(xi))
    return SqueezeParam(float(xi))


# -- finishing ----------------------------------------------------------------


def _series(gen: Generator, cutoff: int | None, tol: Tolerances) -> np.ndarray:
    try:
        return truncate_series(gen, cutoff, tol)
    except ZeroState as exc:
        # an exactly cancelling superposition never reaches the norm check
        raise DegenerateSuperposition(str(exc)) from None


def _finish(gen: Generator, cutoff: int | None, tol: Tolerances) -> FockState:
    amps = _series(gen, cutoff, tol)
    norm = np.linalg.norm(amps)
    if norm < tol.degenerate_norm:
        raise DegenerateSuperposition(f"superposition norm {norm:.3e} is numerically zero")
    return FockState(fix_global_phase(amps / norm))


def _finish_two_mode(gen: Generator, cutoff: int | None, tol: Tolerances) -> TwoModeFockState:
    diag = _series(gen, cutoff, tol)
    norm = np.linalg.norm(diag)
    if norm < tol.degenerate_norm:
        raise DegenerateSuperposition(f"superposition norm {norm:.3e} is numerically zero")
    return TwoModeFockState(np.diag(fix_global_phase(diag / norm)))


# -- public constructors ------------------------------------------------------


def coherent(alpha: complex, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    _check_alpha(alpha, MAX_ALPHA_COHERENT)
    return _finish(_coherent_gen(alpha), cutoff, tol)


def squeezed_vacuum(xi, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    """Squeezed vacuum ``S(xi)|0>``; ``xi`` may be a :class:`SqueezeParam` or a real r."""
    p = _as_squeeze(xi)
    _check_r(p.r)
    return _finish(_svs_gen(p), cutoff, tol)


def pacs(p: PacsParam, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    """m-photon-added coherent state, normalized with ``L_m(-|alpha|^2)``."""
    _check_pacs(p)
    return _finish(_pacs_gen(p), cutoff, tol)


_CAT_WEIGHTS = {"even": 1.0, "odd": -1.0, "yurke_stoler": 1j}


def cat(alpha: complex, kind: str = "even", cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    """Cat state ``|alpha> + w |-alpha>`` with ``w`` = 1, -1 or i."""
    kind = kind.replace("-", "_")
    if kind not in _CAT_WEIGHTS:
        raise ParameterError(f"unknown cat kind {kind!r}; expected even, odd or yurke_stoler")
    _check_alpha(alpha, MAX_ALPHA)
    spec = SuperpositionSpec(((1.0, complex(alpha)), (_CAT_WEIGHTS[kind], -complex(alpha))), family="coherent-cat")
    return generalized_superposition(spec, cutoff, tol)


def _component_gen(family: str, params) -> Generator:
    if family == "squeezed-vacuum":
        _check_r(params.r)
        return _svs_gen(params)
    if family == "pacs":
        _check_pacs(params)
        return _pacs_gen(params)
    if family == "coherent-cat":
        _check_alpha(params, MAX_ALPHA)
        return _coherent_gen(params)
    _check_r(params.r)
    return _tmsv_diag_gen(params)


def generalized_superposition(
    spec: SuperpositionSpec, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES
):
    """Normalized ``sum_j a_j |Phi_j>`` for the components in ``spec``.

    Returns a :class:`TwoModeFockState` for the two-mode family and a
    :class:`FockState` otherwise.
    """
    gens = [_component_gen(spec.family, p) for _, p in spec.components]
    weights = [w for w, _ in spec.components]
    gen = _weighted(gens, weights)
    if spec.family == "two-mode-squeezed-vacuum":
        return _finish_two_mode(gen, cutoff, tol)
    return _finish(gen, cutoff, tol)


def _first_kind_spec(base, l: int, family: str) -> SuperpositionSpec:
    if int(l) != l or l < 1:
        raise ParameterError(f"number of superposed states must be a positive integer, got {l}")
    return SuperpositionSpec(tuple((1.0, base.rotated(TWO_PI * j / l)) for j in range(int(l))), family=family)


def first_kind_superposition(base, l: int, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    """Equal-weight superposition of ``base`` rotated by the l-th roots of unity.

    ``base`` is a :class:`SqueezeParam` (the squeeze phase is rotated) or a
    :class:`PacsParam` (alpha is rotated, m is kept).
    """
    if isinstance(base, SqueezeParam):
        family = "squeezed-vacuum"
    elif isinstance(base, PacsParam):
        family = "pacs"
    else:
        raise ParameterError("first-kind superpositions take SqueezeParam or PacsParam bases")
    return generalized_superposition(_first_kind_spec(base, l, family), cutoff, tol)


def two_mode_squeezed_vacuum(xi, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> TwoModeFockState:
    p = _as_squeeze(xi)
    _check_r(p.r)
    return _finish_two_mode(_tmsv_diag_gen(p), cutoff, tol)


def two_mode_first_kind(xi, l: int, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> TwoModeFockState:
    p = _as_squeeze(xi)
    return generalized_superposition(_first_kind_spec(p, l, "two-mode-squeezed-vacuum"), cutoff, tol)


# -- closed-form oracles --------------------------------------------------------


def svs_overlap_oracle(r1: float, r2: float) -> float:
    """Overlap ``<xi(r1)|xi(r2)>`` of two real-parameter squeezed vacua."""
    return 1.0 / math.sqrt(math.cosh(r1 - r2))


def first_kind_normalization_oracle(r: float, l: int, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Normalization constant of the first-kind squeezed-vacuum superposition.

    This is the constant multiplying the ``|2lm>`` series, i.e. it absorbs the
    ``l / sqrt(cosh r)`` prefactor of the summed components.
    """
    t = math.tanh(r)
    if t == 0.0:
        return 1.0
    log_t = math.log(t)

    def term(m):
        k = l * m
        return np.exp(log_central_binomial_ratio(k) + 2 * k * log_t)

    return sum_series(term, tol.series_term_tol) ** -0.5
