"""Summation helpers for the closed-form series oracles."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.special import gammaln

from .errors import NonConvergence

CHUNK = 512


def log_central_binomial_ratio(k):
    """``log((2k)! / (2^{2k} (k!)^2))``, overflow-free for large ``k``."""
    k = np.asarray(k, dtype=float)
    return gammaln(2 * k + 1) - 2 * k * np.log(2.0) - 2 * gammaln(k + 1)


def sum_series(
    term: Callable[[np.ndarray], np.ndarray],
    term_tol: float = 1e-16,
    max_terms: int = 100_000,
) -> float:
    """Sum ``term(m)`` for ``m = 0, 1, ...`` until the terms die out.

    ``term`` is evaluated on integer arrays in chunks. Summation stops at the
    first index past the largest term whose magnitude is below ``term_tol``.
    """
    total = 0.0
    peak = 0.0
    start = 0
    while start < max_terms:
        m = np.arange(start, min(start + CHUNK, max_terms))
        values = np.asarray(term(m), dtype=float)
        mags = np.abs(values)
        running_peak = np.maximum.accumulate(np.maximum(mags, peak))
        # terms must have started shrinking before we accept a small one
        done = np.nonzero((mags < term_tol) & (mags < running_peak))[0]
        if done.size:
            stop = int(done[0]) + 1
            return float(total + values[:stop].sum())
        total += values.sum()
        peak = running_peak[-1]
        start += CHUNK
    raise NonConvergence(f"series did not converge within {max_terms} terms")
