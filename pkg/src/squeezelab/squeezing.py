"""Quadrature and higher-order squeezing diagnostics.

Quadratures follow ``X = (a + a^dag)/2`` and ``P = (a - a^dag)/(2i)`` with
vacuum variance 1/4. The rotated quadrature is
``X_phi = (a e^{-i phi} + a^dag e^{i phi}) / 2`` so ``phi = pi/2`` gives ``P``.

Two-mode states are analysed through the collective mode ``c = (a + b)/sqrt(2)``,
whose quadrature ``(c + c^dag)/2`` is the effective quadrature ``X1`` and whose
``phi = pi/2`` quadrature is ``X2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DegenerateSuperposition, ParameterError
from .fock import (
    FockState,
    TwoModeFockState,
    _apply_two_mode,
    _check_headroom,
    annihilate,
    create,
    moment,
    padded,
    two_mode_moment,
)
from .series import log_central_binomial_ratio, sum_series
from .states import first_kind_normalization_oracle

__all__ = [
    "QuadratureReport",
    "HigherOrderReport",
    "HilleryReport",
    "VACUUM_VARIANCE",
    "vacuum_benchmark",
    "quadrature_variance",
    "principal_report",
    "hong_mandel_moment",
    "hillery_report",
    "two_mode_variance",
    "two_mode_principal_report",
    "two_mode_hong_mandel_moment",
    "two_mode_hillery_report",
    "first_kind_variance_oracle",
    "generalized_variance_oracle",
    "two_mode_first_kind_variance_oracle",
]

VACUUM_VARIANCE = 0.25
MAX_HONG_MANDEL_ORDER = 8


@dataclass(frozen=True)
class QuadratureReport:
    var_x: float
    var_p: float
    principal_variance: float
    principal_angle: float
    squeezed: bool


@dataclass(frozen=True)
class HigherOrderReport:
    order: int
    moment: float
    vacuum_benchmark: float
    squeezed: bool


@dataclass(frozen=True)
class HilleryReport:
    var_y1: float
    var_y2: float
    bound: float
    squeezed: bool

    def __iter__(self):
        return iter((self.var_y1, self.var_y2, self.bound, self.squeezed))


def vacuum_benchmark(order: int) -> float:
    """Vacuum value ``(order - 1)!! / 4^(order/2)`` of ``<(Delta X)^order>``."""
    if order % 2 or order < 2:
        raise ParameterError("order must be an even integer >= 2")
    double_fact = math.prod(range(order - 1, 0, -2))
    return double_fact / 4 ** (order // 2)


# -- moment-level formulas shared by single- and two-mode paths -----------------


def _variance_from_moments(mean: complex, n: float, second: complex, phi: float) -> float:
    cov = second - mean * mean
    return 0.25 * (1.0 + 2.0 * (n - abs(mean) ** 2) + 2.0 * (cov * np.exp(-2j * phi)).real)


def _principal_from_moments(mean: complex, n: float, second: complex, slack: float) -> QuadratureReport:
    cov = second - mean * mean
    var_x = _variance_from_moments(mean, n, second, 0.0)
    var_p = _variance_from_moments(mean, n, second, math.pi / 2)
    principal = 0.25 * (1.0 + 2.0 * (n - abs(mean) ** 2) - 2.0 * abs(cov))
    # X_phi is minimized where Re(cov e^{-2i phi}) = -|cov|
    angle = ((np.angle(cov) + math.pi) / 2.0) % math.pi if abs(cov) > 0 else 0.0
    return QuadratureReport(
        var_x=float(var_x),
        var_p=float(var_p),
        principal_variance=float(principal),
        principal_angle=float(angle),
        squeezed=bool(principal < VACUUM_VARIANCE - slack),
    )


def _hillery_from_moments(n: float, second: complex, fourth: complex, nn: float, slack: float) -> HilleryReport:
    # a^2 a^dag^2 = a^dag^2 a^2 + 4 a^dag a + 2
    symmetric = 2.0 * nn + 4.0 * n + 2.0
    var_y1 = 0.25 * (2.0 * fourth.real + symmetric) - second.real ** 2
    var_y2 = 0.25 * (-2.0 * fourth.real + symmetric) - second.imag ** 2
    bound = n + 0.5
    return HilleryReport(
        var_y1=float(var_y1),
        var_y2=float(var_y2),
        bound=float(bound),
        squeezed=bool(min(var_y1, var_y2) < bound - slack),
    )


def _central_power_moment(
    ket: np.ndarray,
    lower: Callable[[np.ndarray], np.ndarray],
    lift: Callable[[np.ndarray], np.ndarray],
    order: int,
    phi: float,
) -> float:
    """``<(X_phi - <X_phi>)^order>`` by repeated banded application of X_phi.

    ``ket`` must already be padded by at least ``order // 2`` levels.
    """
    rot = np.exp(-1j * phi)

    def apply_x(v):
        return 0.5 * (rot * lower(v) + np.conj(rot) * lift(v))

    mean = np.vdot(ket, apply_x(ket)).real
    v = ket
    for _ in range(order // 2):
        v = apply_x(v) - mean * v
    return float(np.vdot(v, v).real)


# -- single mode ----------------------------------------------------------------


def quadrature_variance(state: FockState, phi: float = 0.0, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Variance of the rotated quadrature ``X_phi``."""
    mean = moment(state, 0, 1, tol)
    n = moment(state, 1, 1, tol).real
    second = moment(state, 0, 2, tol)
    return float(_variance_from_moments(mean, n, second, phi))


def principal_report(state: FockState, tol: Tolerances = DEFAULT_TOLERANCES) -> QuadratureReport:
    """X and P variances plus the minimum over all quadrature angles."""
    mean = moment(state, 0, 1, tol)
    n = moment(state, 1, 1, tol).real
    second = moment(state, 0, 2, tol)
    return _principal_from_moments(mean, n, second, tol.decision_slack)


def hong_mandel_moment(state: FockState, n: int, phi: float = 0.0, tol: Tolerances = DEFAULT_TOLERANCES) -> HigherOrderReport:
    """Hong-Mandel ``2n``-th order central moment of ``X_phi`` against the vacuum.

    Squeezed to order ``2n`` when ``<(Delta X_phi)^{2n}> < (2n-1)!!/4^n``.
    """
    order = 2 * int(n)
    if n < 1 or order > MAX_HONG_MANDEL_ORDER:
        raise ParameterError(f"Hong-Mandel order 2n must lie in [2, {MAX_HONG_MANDEL_ORDER}]")
    _check_headroom(state.amplitudes, order, tol)
    value = _central_power_moment(padded(state.amplitudes, n), annihilate, create, order, phi)
    bench = vacuum_benchmark(order)
    return HigherOrderReport(order, value, bench, bool(value < bench - tol.decision_slack))


def hillery_report(state: FockState, tol: Tolerances = DEFAULT_TOLERANCES) -> HilleryReport:
    """Amplitude-squared squeezing of ``Y1 = (a^2 + a^dag^2)/2``, ``Y2 = (a^2 - a^dag^2)/2i``.

    The bound ``<a^dag a> + 1/2`` comes from ``[Y1, Y2] = i(2 a^dag a + 1)``.
    """
    n = moment(state, 1, 1, tol).real
    second = moment(state, 0, 2, tol)
    fourth = moment(state, 0, 4, tol)
    nn = moment(state, 2, 2, tol).real
    return _hillery_from_moments(n, second, fourth, nn, tol.decision_slack)


# -- two modes ------------------------------------------------------------------

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _collective_ops():
    def lower(mat):
        return _INV_SQRT2 * (_apply_two_mode(mat, "a", False) + _apply_two_mode(mat, "b", False))

    def lift(mat):
        return _INV_SQRT2 * (_apply_two_mode(mat, "a", True) + _apply_two_mode(mat, "b", True))

    return lower, lift


def _collective_moment(ket: np.ndarray, p: int, q: int) -> complex:
    lower, _ = _collective_ops()
    left, right = ket, ket
    for _ in range(p):
        left = lower(left)
    for _ in range(q):
        right = lower(right)
    return complex(np.vdot(left, right))


# X1 = (a + a^dag + b + b^dag) / 2^{3/2};  X2 = (a - a^dag + b - b^dag) / (i 2^{3/2})
_S = 2.0 ** -1.5
_EFFECTIVE_QUADRATURES = {
    "X1": [(_S, "a"), (_S, "ad"), (_S, "b"), (_S, "bd")],
    "X2": [(-1j * _S, "a"), (1j * _S, "ad"), (-1j * _S, "b"), (1j * _S, "bd")],
}


def two_mode_variance(state: TwoModeFockState, which: str = "X1", tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Variance of the effective two-mode quadrature ``X1`` or ``X2``."""
    try:
        terms = _EFFECTIVE_QUADRATURES[which.upper()]
    except KeyError:
        raise ParameterError("which must be 'X1' or 'X2'") from None
    mean = sum(c * two_mode_moment(state, [op], tol) for c, op in terms)
    square = sum(c1 * c2 * two_mode_moment(state, [o1, o2], tol) for c1, o1 in terms for c2, o2 in terms)
    return float((square - mean * mean).real)


def _collective_ket(state: TwoModeFockState, extra: int, tol: Tolerances) -> np.ndarray:
    _check_headroom(state.amplitudes, extra, tol)
    return padded(state.amplitudes, extra)


def two_mode_principal_report(state: TwoModeFockState, tol: Tolerances = DEFAULT_TOLERANCES) -> QuadratureReport:
    """Principal squeezing of the collective mode; ``var_x``/``var_p`` are X1/X2."""
    ket = _collective_ket(state, 2, tol)
    mean = _collective_moment(ket, 0, 1)
    n = _collective_moment(ket, 1, 1).real
    second = _collective_moment(ket, 0, 2)
    return _principal_from_moments(mean, n, second, tol.decision_slack)


def two_mode_hong_mandel_moment(
    state: TwoModeFockState, n: int, phi: float = 0.0, tol: Tolerances = DEFAULT_TOLERANCES
) -> HigherOrderReport:
    order = 2 * int(n)
    if n < 1 or order > MAX_HONG_MANDEL_ORDER:
        raise ParameterError(f"Hong-Mandel order 2n must lie in [2, {MAX_HONG_MANDEL_ORDER}]")
    ket = _collective_ket(state, order, tol)
    lower, lift = _collective_ops()
    value = _central_power_moment(ket, lower, lift, order, phi)
    bench = vacuum_benchmark(order)
    return HigherOrderReport(order, value, bench, bool(value < bench - tol.decision_slack))


def two_mode_hillery_report(state: TwoModeFockState, tol: Tolerances = DEFAULT_TOLERANCES) -> HilleryReport:
    ket = _collective_ket(state, 4, tol)
    n = _collective_moment(ket, 1, 1).real
    second = _collective_moment(ket, 0, 2)
    fourth = _collective_moment(ket, 0, 4)
    nn = _collective_moment(ket, 2, 2).real
    return _hillery_from_moments(n, second, fourth, nn, tol.decision_slack)


# -- closed-form series oracles -------------------------------------------------


def first_kind_variance_oracle(r: float, l: int, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Quadrature variance (equal for X and P) of the first-kind squeezed-vacuum superposition."""
    if l < 2:
        raise ParameterError("the first-kind oracle needs l >= 2")
    t = math.tanh(r)
    if t == 0.0:
        return VACUUM_VARIANCE
    norm_sq = first_kind_normalization_oracle(r, l, tol) ** 2
    log_t = math.log(t)

    def term(m):
        k = l * m
        return 2.0 * k * np.exp(log_central_binomial_ratio(k) + 2 * k * log_t)

    return VACUUM_VARIANCE + 0.5 * norm_sq * sum_series(term, tol.series_term_tol)


def generalized_variance_oracle(r_list, a_list, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """X variance of a real-weight superposition of real squeezed vacua, by series."""
    r = np.asarray(r_list, dtype=float)
    a = np.asarray(a_list, dtype=float)
    if r.shape != a.shape or r.ndim != 1 or r.size == 0:
        raise ParameterError("r_list and a_list must be nonempty and of equal length")
    overlap = 1.0 / np.sqrt(np.cosh(r[:, None] - r[None, :]))
    denom = a @ overlap @ a
    if not np.isfinite(denom) or denom <= 0:
        raise DegenerateSuperposition("superposition weights give a non-positive norm")
    t = np.tanh(r)
    c = np.cosh(r)
    pair_w = np.outer(a, a) / np.sqrt(np.outer(c, c))
    pair_t = np.outer(t, t)
    pair_s = t[:, None] + t[None, :]

    def term(n):
        n = n[:, None, None]
        vals = pair_w * pair_t**n * np.exp(log_central_binomial_ratio(n)) * (4 * n - (2 * n + 1) * pair_s)
        return vals.sum(axis=(1, 2))

    return VACUUM_VARIANCE + 0.25 * sum_series(term, tol.series_term_tol) / denom


def two_mode_first_kind_variance_oracle(r: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Effective-quadrature variance of the ``|xi> + |-xi>`` two-mode superposition."""
    t4 = math.tanh(r) ** 4
    if t4 == 0.0:
        return VACUUM_VARIANCE
    norm_sum = sum_series(lambda n: t4 ** n.astype(float), tol.series_term_tol)
    weighted = sum_series(lambda n: 4.0 * n * t4 ** n.astype(float), tol.series_term_tol)
    # (2N / cosh r)^2 = 1 / norm_sum
    return 0.25 * (1.0 + weighted / norm_sum)
