"""End-to-end acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N [PASS|FAIL]`` line; the lines are repeated
in a summary section at the end of the pytest run. Criteria that cannot be met
are evaluated as stated and left failing.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from squeezelab.energy import EnergyDensityConfig, closed_form_t00, t00_profile
from squeezelab.fock import inner_product, moment, vacuum
from squeezelab.optimizer import TABLE1, OptimizationProblem, minimize_eigen, objective, reproduce_table1
from squeezelab.squeezing import (
    first_kind_variance_oracle,
    generalized_variance_oracle,
    hillery_report,
    hong_mandel_moment,
    principal_report,
    quadrature_variance,
    two_mode_first_kind_variance_oracle,
    two_mode_hillery_report,
    two_mode_hong_mandel_moment,
    two_mode_principal_report,
    two_mode_variance,
)
from squeezelab.states import (
    PacsParam,
    SqueezeParam,
    SuperpositionSpec,
    cat,
    coherent,
    first_kind_normalization_oracle,
    first_kind_superposition,
    generalized_superposition,
    pacs,
    squeezed_vacuum,
    svs_overlap_oracle,
    two_mode_first_kind,
    two_mode_squeezed_vacuum,
)
from squeezelab.sweep import ALPHA_GRID, L_VALUES, PACS_ALPHA_GRID, PACS_M, R_GRID, acceptance_states, negativity_sweep

SLACK = 1e-9
TABLE_TOL = 5e-4
ORACLE_TOL = 1e-7
HM_PHI_GRID = np.linspace(0.0, math.pi, 16, endpoint=False)
THETA_GRID = EnergyDensityConfig.uniform(64)


def test_criterion_1_table_reproduction(criterion):
    start = time.perf_counter()
    rows = reproduce_table1(seed=0)
    elapsed = time.perf_counter() - start
    problems = []
    for row in rows:
        if abs(row["variance_at_printed_weights"] - row["printed_variance"]) > TABLE_TOL:
            problems.append(
                f"row {row['row']}: printed weights give {row['variance_at_printed_weights']:.6f}, "
                f"printed {row['printed_variance']}"
            )
        if row["eigen_variance"] > row["printed_variance"] + TABLE_TOL:
            problems.append(f"row {row['row']}: eigen {row['eigen_variance']:.6f}")
    if elapsed >= 10.0:
        problems.append(f"runtime {elapsed:.1f}s")
    eig = ", ".join(f"{r['eigen_variance']:.6f}" for r in rows)
    detail = f"eigen minima {eig}; {elapsed:.1f}s" + ("; " + "; ".join(problems) if problems else "")
    assert criterion(1, "table reproduction", not problems, detail), detail


def test_criterion_2_higher_order_values(criterion):
    row = TABLE1[2]
    optimal = minimize_eigen(OptimizationProblem(row.r_list)).weights
    measured = {}
    for label, weights in (("printed", row.printed_weights), ("optimal", optimal)):
        state = generalized_superposition(SuperpositionSpec.real_squeezed_vacua(row.r_list, weights))
        measured[label] = (hong_mandel_moment(state, 2).moment, hong_mandel_moment(state, 3).moment)
    passed = any(abs(m4 - 0.0068) <= TABLE_TOL and abs(m6 - 0.1857) <= TABLE_TOL for m4, m6 in measured.values())
    detail = "; ".join(f"{k} weights: 4th {v[0]:.6f}, 6th {v[1]:.6f}" for k, v in measured.items())
    detail += " (targets 0.0068, 0.1857)"
    assert criterion(2, "higher-order values", passed, detail), detail


def _first_kind_cases():
    for l in L_VALUES:
        for r in R_GRID:
            yield f"svs r={r} l={l}", first_kind_superposition(SqueezeParam(r), l), False
            yield f"tmsv r={r} l={l}", two_mode_first_kind(r, l), True
        for m in PACS_M:
            for a in PACS_ALPHA_GRID:
                yield f"pacs a={a} m={m} l={l}", first_kind_superposition(PacsParam(a, m), l), False


def test_criterion_3_vanishing_squeezing(criterion):
    # the grid of PACS amplitudes must be one where the base PACS is squeezed
    assert all(principal_report(pacs(PacsParam(a, m))).squeezed for m in PACS_M for a in PACS_ALPHA_GRID)
    counts = {"principal": 0, "hong-mandel": 0, "hillery": 0}
    examples = []
    total = 0
    for label, state, two_mode in _first_kind_cases():
        total += 1
        quad = two_mode_principal_report(state) if two_mode else principal_report(state)
        hm = two_mode_hong_mandel_moment if two_mode else hong_mandel_moment
        hil = two_mode_hillery_report(state) if two_mode else hillery_report(state)
        if quad.principal_variance < 0.25 - SLACK:
            counts["principal"] += 1
            examples.append(f"{label} principal {quad.principal_variance:.4g}")
        worst = None
        for n in (2, 3):
            for phi in HM_PHI_GRID:
                rep = hm(state, n, phi)
                gap = rep.moment - rep.vacuum_benchmark
                if gap < -SLACK and (worst is None or gap < worst[0]):
                    worst = (gap, n, phi)
        if worst:
            counts["hong-mandel"] += 1
            examples.append(f"{label} HM{2 * worst[1]} below vacuum by {-worst[0]:.3g} at phi={worst[2]:.3f}")
        if hil.squeezed:
            counts["hillery"] += 1
            if counts["hillery"] <= 2:
                examples.append(f"{label} hillery Y var {min(hil.var_y1, hil.var_y2):.4g} < {hil.bound:.4g}")
    passed = not any(counts.values())
    detail = f"{total} states; violations {counts}"
    if examples:
        detail += "; e.g. " + " | ".join(examples[:6])
    assert criterion(3, "vanishing squeezing", passed, detail), detail


def test_criterion_4_oracle_equivalence(criterion):
    errors = {}

    def track(name, oracle, brute):
        errors[name] = max(errors.get(name, 0.0), abs(oracle - brute))

    for l in L_VALUES:
        for r in R_GRID:
            state = first_kind_superposition(SqueezeParam(r), l)
            # the vacuum amplitude of the normalized state is N_l itself
            track("normalization", first_kind_normalization_oracle(r, l), abs(state.amplitudes[0]))
            track("first-kind variance", first_kind_variance_oracle(r, l), quadrature_variance(state))
    rng = np.random.default_rng(4)
    weight_sets = [(row.r_list, row.printed_weights) for row in TABLE1]
    weight_sets += [(row.r_list, minimize_eigen(OptimizationProblem(row.r_list)).weights) for row in TABLE1]
    weight_sets += [((0.25, 0.75, 1.5), tuple(rng.uniform(-3, 3, 3))) for _ in range(8)]
    for r_list, weights in weight_sets:
        brute = quadrature_variance(generalized_superposition(SuperpositionSpec.real_squeezed_vacua(r_list, weights)))
        track("generalized variance", generalized_variance_oracle(r_list, weights), brute)
    for r in R_GRID:
        track("two-mode variance", two_mode_first_kind_variance_oracle(r), two_mode_variance(two_mode_first_kind(r, 2)))
        n = moment(first_kind_superposition(SqueezeParam(r), 2), 1, 1).real
        track("l=2 energy density", closed_form_t00("first_kind_svs_l2", r, 0.0), 2.0 * n)
    grid = (0.0,) + R_GRID
    for r1 in grid:
        for r2 in grid:
            track("overlap kernel", svs_overlap_oracle(r1, r2), inner_product(squeezed_vacuum(r1), squeezed_vacuum(r2)).real)
    passed = all(err < ORACLE_TOL for err in errors.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errors.items())
    assert criterion(4, "oracle equivalence", passed, detail), detail


def test_criterion_5_energy_closed_forms(criterion):
    worst = 0.0
    theta = np.asarray(THETA_GRID.theta_grid)
    cases = []
    for a in ALPHA_GRID:
        cases += [("coherent", a, coherent(a)), ("even_cat", a, cat(a, "even"))]
    for r in R_GRID:
        cases += [("svs", r, squeezed_vacuum(r)), ("first_kind_svs_l2", r, first_kind_superposition(SqueezeParam(r), 2))]
    for family, param, state in cases:
        values = t00_profile(state, THETA_GRID).values
        ref = np.array([closed_form_t00(family, param, t) for t in theta])
        worst = max(worst, float(np.max(np.abs(values - ref))))
    vac = t00_profile(vacuum(), THETA_GRID)
    vac_zero = bool(np.all(vac.values == 0.0))
    coh = t00_profile(coherent(1.0), THETA_GRID)
    coh_ok = abs(coh.min_value) < 1e-12 and coh.min_theta == 0.0 and abs(coh.values[0]) < 1e-12
    passed = worst < ORACLE_TOL * THETA_GRID.k00 and vac_zero and coh_ok
    detail = f"max deviation {worst:.1e} over {len(cases)} states; vacuum zero {vac_zero}; coherent minimum at 0 {coh_ok}"
    assert criterion(5, "energy-density closed forms", passed, detail), detail


def test_criterion_6_squeezing_negativity_equivalence(criterion):
    rows = negativity_sweep()
    asserted = [r for r in rows if r["asserted"]]
    bad = [f"{r['family']} {r['params']}" for r in asserted if not r["consistent"]]
    displaced = [r for r in rows if not r["asserted"]]
    reported = sum(not r["consistent"] for r in displaced)
    detail = f"{len(asserted)} zero-mean states, {len(bad)} exceptions; {len(displaced)} displaced states reported ({reported} inconsistent)"
    if bad:
        detail += "; " + ", ".join(bad[:5])
    assert criterion(6, "squeezing/negativity equivalence", not bad, detail), detail


def test_criterion_7_uncertainty_floor(criterion):
    products = []
    for item in acceptance_states():
        rep = principal_report(item.state)
        products.append((rep.var_x * rep.var_p, f"{item.family} {item.params}"))
    for r in R_GRID:
        for l in (1,) + L_VALUES:
            t = two_mode_first_kind(r, l) if l > 1 else two_mode_squeezed_vacuum(r)
            products.append((two_mode_variance(t, "X1") * two_mode_variance(t, "X2"), f"tmsv r={r} l={l}"))
    low = min(products)
    passed = low[0] >= 1 / 16 - SLACK
    detail = f"{len(products)} states; smallest product {low[0]:.12f} ({low[1]})"
    assert criterion(7, "uncertainty floor", passed, detail), detail


def test_criterion_8_determinism(criterion, tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        subprocess.run(
            [sys.executable, "-m", "squeezelab", "table1", "--seed", "7", "--output", str(path)],
            check=True,
        )
        outputs.append(path.read_bytes())
    passed = outputs[0] == outputs[1] and len(outputs[0]) > 0
    detail = f"{len(outputs[0])} bytes, identical {outputs[0] == outputs[1]}"
    assert criterion(8, "determinism", passed, detail), detail
