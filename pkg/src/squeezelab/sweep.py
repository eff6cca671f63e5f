"""The grid of states used for the squeezing versus energy-density sweep."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .config import DEFAULT_TOLERANCES, Tolerances
from .energy import negativity_report, t00_profile, EnergyDensityConfig
from .fock import FockState, vacuum
from .optimizer import TABLE1, OptimizationProblem, minimize_eigen
from .squeezing import principal_report
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
)

R_GRID = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)
ALPHA_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0)
# |alpha| values at which m-PACS (m = 1..5) are quadrature squeezed
PACS_ALPHA_GRID = (1.25, 1.5, 2.0, 2.5, 3.0)
PACS_M = (1, 2, 3, 4, 5)
L_VALUES = (2, 3, 4)


@dataclass(frozen=True)
class LabeledState:
    family: str
    params: str
    state: FockState


def acceptance_states(tol: Tolerances = DEFAULT_TOLERANCES, include_pacs: bool = True) -> Iterator[LabeledState]:
    yield LabeledState("vacuum", "", vacuum(tol=tol))
    for a in ALPHA_GRID:
        yield LabeledState("coherent", f"alpha={a}", coherent(a, tol=tol))
        for kind in ("even", "odd", "yurke_stoler"):
            yield LabeledState(f"{kind.replace('_', '-')}-cat", f"alpha={a}", cat(a, kind, tol=tol))
    for r in R_GRID:
        yield LabeledState("svs", f"r={r}", squeezed_vacuum(SqueezeParam(r), tol=tol))
        for l in L_VALUES:
            yield LabeledState("first-kind-svs", f"r={r};l={l}", first_kind_superposition(SqueezeParam(r), l, tol=tol))
    for idx, row in enumerate(TABLE1, start=1):
        spec = SuperpositionSpec.real_squeezed_vacua(row.r_list, row.printed_weights)
        yield LabeledState("generalized-svs", f"table1-row{idx};printed", generalized_superposition(spec, tol=tol))
        best = minimize_eigen(OptimizationProblem(row.r_list), tol)
        spec = SuperpositionSpec.real_squeezed_vacua(row.r_list, best.weights)
        yield LabeledState("generalized-svs", f"table1-row{idx};optimal", generalized_superposition(spec, tol=tol))
    if include_pacs:
        for m in PACS_M:
            for a in PACS_ALPHA_GRID:
                yield LabeledState("pacs", f"alpha={a};m={m}", pacs(PacsParam(a, m), tol=tol))
                for l in L_VALUES:
                    yield LabeledState(
                        "first-kind-pacs", f"alpha={a};m={m};l={l}", first_kind_superposition(PacsParam(a, m), l, tol=tol)
                    )


def negativity_sweep(tol: Tolerances = DEFAULT_TOLERANCES) -> list[dict]:
    """One record per acceptance state comparing squeezing with energy-density sign."""
    rows = []
    for item in acceptance_states(tol):
        quad = principal_report(item.state, tol)
        prof = t00_profile(item.state, EnergyDensityConfig(theta_grid=()), tol)
        neg = negativity_report(item.state, tol)
        rows.append(
            {
                "family": item.family,
                "params": item.params,
                "zero_mean": neg.zero_mean,
                "principal_variance": quad.principal_variance,
                "squeezed": neg.squeezed,
                "min_t00": prof.min_value,
                "ever_negative": neg.ever_negative,
                "consistent": neg.consistent_with_paper_claim,
                # the equivalence is only a theorem for zero-mean states
                "asserted": neg.zero_mean,
            }
        )
    return rows
