"""Truncated single- and two-mode Fock space.

States are dense complex amplitude arrays indexed by photon number, starting
at ``n = 0``. Every function here is pure; state objects are frozen and their
arrays are marked read-only.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import CutoffTooSmall, ParameterError, ZeroState

__all__ = [
    "FockState",
    "TwoModeFockState",
    "MomentTable",
    "normalize",
    "inner_product",
    "moment",
    "moment_table",
    "two_mode_moment",
    "photon_number_distribution",
    "annihilate",
    "create",
    "padded",
    "vacuum",
    "number_state",
    "truncate_series",
]


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ParameterError(f"expected a {ndim}-d amplitude array, got shape {arr.shape}")
    if arr.size == 0:
        raise ParameterError("amplitude array is empty")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FockState:
    """Single-mode pure state ``sum_n c_n |n>`` truncated at ``cutoff``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, 1))

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fingerprint(self) -> str:
        return hashlib.sha1(self.amplitudes.tobytes()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"FockState(cutoff={self.cutoff}, norm={self.norm:.12g})"


@dataclass(frozen=True, eq=False)
class TwoModeFockState:
    """Two-mode pure state ``sum_{n,m} c_{n,m} |n, m>``; rows index mode a."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, 2))

    @property
    def cutoff(self) -> tuple[int, int]:
        rows, cols = self.amplitudes.shape
        return rows - 1, cols - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"TwoModeFockState(cutoff={self.cutoff}, norm={self.norm:.12g})"


@dataclass(frozen=True)
class MomentTable:
    """Normally ordered moments ``<a^dag^p a^q>`` for ``p + q <= max_order``."""

    entries: dict = field(repr=False)
    fingerprint: str
    max_order: int

    def __getitem__(self, pq: tuple[int, int]) -> complex:
        return self.entries[pq]


def normalize(state, tol: Tolerances = DEFAULT_TOLERANCES):
    """Scale a state to unit norm by a positive real factor.

    Works for both :class:`FockState` and :class:`TwoModeFockState`; the global
    phase is left untouched.
    """
    amps = state.amplitudes
    if np.max(np.abs(amps)) < tol.zero_floor:
        raise ZeroState("cannot normalize a state with all amplitudes zero")
    return type(state)(amps / np.linalg.norm(amps))


def inner_product(s1: FockState, s2: FockState) -> complex:
    """Return ``<s1|s2>``, zero-padding the shorter amplitude vector."""
    n = min(s1.amplitudes.shape[0], s2.amplitudes.shape[0])
    # Entries past the shorter cutoff pair with zeros, so they drop out.
    return complex(np.vdot(s1.amplitudes[:n], s2.amplitudes[:n]))


def annihilate(vec: np.ndarray) -> np.ndarray:
    """Apply ``a`` to an amplitude vector, keeping its length."""
    out = np.zeros_like(vec)
    out[:-1] = np.sqrt(np.arange(1, vec.shape[0])) * vec[1:]
    return out


def create(vec: np.ndarray) -> np.ndarray:
    """Apply ``a^dag`` to an amplitude vector, keeping its length.

    Exact only when the top entry of ``vec`` is zero; callers pad first.
    """
    out = np.zeros_like(vec)
    out[1:] = np.sqrt(np.arange(1, vec.shape[0])) * vec[:-1]
    return out


def padded(amplitudes: np.ndarray, extra: int) -> np.ndarray:
    """Append ``extra`` zero levels along every axis."""
    return np.pad(np.asarray(amplitudes, dtype=complex), [(0, extra)] * np.ndim(amplitudes))


def _lowered(vec: np.ndarray, k: int) -> np.ndarray:
    # a^k |psi>, shrinking the vector by one level per application
    out = np.asarray(vec, dtype=complex)
    for _ in range(k):
        out = np.sqrt(np.arange(1, out.shape[0])) * out[1:]
    return out


def _check_headroom(amplitudes: np.ndarray, levels: int, tol: Tolerances) -> None:
    if levels <= 0:
        return
    if amplitudes.ndim == 1:
        top = np.sum(np.abs(amplitudes[-levels:]) ** 2)
    else:
        mass = np.abs(amplitudes) ** 2
        top = mass[-levels:, :].sum() + mass[:-levels, -levels:].sum()
    if top > tol.tail_tol:
        raise CutoffTooSmall(
            f"mass {top:.3e} in the top {levels} levels exceeds tail_tol {tol.tail_tol:g}"
        )


def moment(state: FockState, p: int, q: int, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Normally ordered moment ``<a^dag^p a^q>``.

    Evaluated as ``<a^p psi | a^q psi>``, which only lowers photon number and is
    therefore exact on the truncated space. ``CutoffTooSmall`` is raised when the
    top ``p + q`` levels carry more than ``tail_tol`` probability, since then the
    truncated vector is unlikely to represent the intended state.
    """
    if p < 0 or q < 0:
        raise ParameterError("moment orders must be nonnegative")
    amps = state.amplitudes
    _check_headroom(amps, p + q, tol)
    left = _lowered(amps, p)
    right = _lowered(amps, q)
    n = min(left.shape[0], right.shape[0])
    if n <= 0:
        return 0j
    return complex(np.vdot(left[:n], right[:n]))


def moment_table(state: FockState, max_order: int = 4, tol: Tolerances = DEFAULT_TOLERANCES) -> MomentTable:
    entries = {}
    for p in range(max_order + 1):
        for q in range(max_order + 1 - p):
            entries[(p, q)] = moment(state, p, q, tol)
    return MomentTable(entries=entries, fingerprint=state.fingerprint(), max_order=max_order)


def photon_number_distribution(state: FockState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


_TOKENS = {
    "a": ("a", False),
    "ad": ("a", True),
    "a+": ("a", True),
    "a†": ("a", True),
    "b": ("b", False),
    "bd": ("b", True),
    "b+": ("b", True),
    "b†": ("b", True),
}


def _parse_word(word) -> list[tuple[str, bool]]:
    if isinstance(word, str):
        word = word.split()
    try:
        return [_TOKENS[tok] for tok in word]
    except KeyError as exc:
        raise ParameterError(f"unknown ladder-operator token {exc.args[0]!r}") from None


def _apply_two_mode(mat: np.ndarray, mode: str, dagger: bool) -> np.ndarray:
    axis = 0 if mode == "a" else 1
    moved = np.moveaxis(mat, axis, 0)
    out = np.zeros_like(moved)
    root = np.sqrt(np.arange(1, moved.shape[0]))[:, None]
    if dagger:
        out[1:] = root * moved[:-1]
    else:
        out[:-1] = root * moved[1:]
    return np.moveaxis(out, 0, axis)


def two_mode_moment(state: TwoModeFockState, word, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Expectation of an operator product over ``{a, a^dag, b, b^dag}``.

    ``word`` is a sequence of tokens (``"a"``, ``"ad"``, ``"b"``, ``"bd"``) or a
    whitespace-separated string of them, read left to right as a product, so the
    rightmost operator acts first. The state is padded by the word length, which
    makes the result exact for the truncated state.
    """
    ops = _parse_word(word)
    if len(ops) > 4:
        raise ParameterError("operator words longer than 4 are not supported")
    amps = state.amplitudes
    _check_headroom(amps, len(ops), tol)
    ket = padded(amps, len(ops))
    bra = ket.copy()
    for mode, dagger in reversed(ops):
        ket = _apply_two_mode(ket, mode, dagger)
    return complex(np.vdot(bra, ket))


def vacuum(cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    amps = np.zeros((tol.margin if cutoff is None else cutoff) + 1, dtype=complex)
    amps[0] = 1.0
    return FockState(amps)


def number_state(n: int, cutoff: int | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FockState:
    if n < 0:
        raise ParameterError("photon number must be nonnegative")
    size = (n + tol.margin if cutoff is None else cutoff) + 1
    if size <= n:
        raise CutoffTooSmall(f"cutoff {cutoff} cannot hold |{n}>")
    amps = np.zeros(size, dtype=complex)
    amps[n] = 1.0
    return FockState(amps)


def _truncation_point(mass: np.ndarray, tol: Tolerances) -> int | None:
    """Smallest ``k`` whose moment-weighted tail beyond ``k`` is below tail_tol.

    The tail is weighted by ``(n + 1)^3`` so that moments up to order six stay
    converged, not only the norm. Returns ``None`` if no such ``k`` exists in
    the supplied range (with room for the margin).
    """
    n = np.arange(mass.shape[0])
    weighted = mass * (n + 1.0) ** 3
    # tail[k] = sum over n > k
    tail = np.concatenate([np.cumsum(weighted[::-1])[::-1][1:], [0.0]])
    ok = np.nonzero(tail < tol.tail_tol)[0]
    if ok.size == 0:
        return None
    k = int(ok[0])
    if k + tol.margin > mass.shape[0] - 1:
        return None
    return k


def truncate_series(
    generator: Callable[[int], np.ndarray],
    cutoff: int | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    start: int = 64,
) -> np.ndarray:
    """Pick a cutoff for a state whose amplitudes come from ``generator``.

    ``generator(L)`` must return the (unnormalized is fine) amplitudes for
    ``n = 0..L``. Without an override, the amplitude range is doubled until the
    weighted tail criterion holds, up to ``tol.max_cutoff``. With an override the
    requested cutoff is honoured unless it would drop more than ``tail_tol`` of
    probability, in which case ``CutoffTooSmall`` is raised.
    """
    length = start
    while True:
        length = min(length, tol.max_cutoff)
        amps = np.asarray(generator(length), dtype=complex)
        mass = np.abs(amps) ** 2
        total = mass.sum()
        if total <= 0:
            raise ZeroState("series has no weight")
        k = _truncation_point(mass / total, tol)
        if k is not None:
            auto = k + tol.margin
            break
        if length >= tol.max_cutoff:
            raise CutoffTooSmall(f"series not converged within cutoff cap {tol.max_cutoff}")
        length *= 2
    if cutoff is None:
        return amps[: auto + 1]
    if cutoff < 0:
        raise ParameterError("cutoff must be nonnegative")
    if cutoff >= auto:
        return np.asarray(generator(cutoff), dtype=complex) if cutoff > length else amps[: cutoff + 1]
    keep = max(cutoff - tol.margin, -1)
    lost = (mass[keep + 1 :].sum()) / total
    if lost >= tol.tail_tol:
        raise CutoffTooSmall(f"cutoff {cutoff} drops probability {lost:.3e}")
    return amps[: cutoff + 1]


def fix_global_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude amplitude is real and nonnegative."""
    flat = amplitudes.ravel()
    idx = int(np.argmax(np.abs(flat)))
    pivot = flat[idx]
    if pivot == 0:
        return amplitudes
    return amplitudes * (abs(pivot) / pivot)


def superpose(vectors: Iterable[np.ndarray], weights: Sequence[complex]) -> np.ndarray:
    """Weighted sum of amplitude arrays of possibly different sizes."""
    vectors = [np.asarray(v, dtype=complex) for v in vectors]
    shape = tuple(max(v.shape[ax] for v in vectors) for ax in range(vectors[0].ndim))
    total = np.zeros(shape, dtype=complex)
    for w, v in zip(weights, vectors):
        total[tuple(slice(0, s) for s in v.shape)] += w * v
    return total
