"""Centralized numerical tolerances."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    norm_tol: float = 1e-12
    moment_tol: float = 1e-9
    tail_tol: float = 1e-12
    # Zero-amplitude floor used by normalize().
    zero_floor: float = 1e-300
    # Superpositions whose summed norm falls below this are rejected.
    degenerate_norm: float = 1e-10
    # Slack for strict squeezing decisions (coherent states sit on 1/4).
    decision_slack: float = 1e-9
    series_term_tol: float = 1e-16
    max_cutoff: int = 4096
    # Levels kept beyond the truncation point so moments up to order 8
    # never touch the edge of the space.
    margin: int = 8


DEFAULT_TOLERANCES = Tolerances()
