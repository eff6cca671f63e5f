import math

import numpy as np
import pytest

from squeezelab.errors import IllConditionedOverlap, ParameterError
from squeezelab.optimizer import (
    TABLE1,
    OptimizationProblem,
    minimize_eigen,
    minimize_simplex,
    nelder_mead,
    objective,
    reproduce_table1,
    worker_count,
)
from squeezelab.squeezing import generalized_variance_oracle

SVS1 = math.exp(-2) / 4


def test_objective_single():
    assert objective(OptimizationProblem((1.0,)), [1.0]) == pytest.approx(SVS1, abs=1e-12)


def test_objective_row_two():
    assert objective(OptimizationProblem((0.5, 1.0)), [-0.32678, 1.0]) == pytest.approx(0.0268, abs=5e-4)


def test_objective_zero_weight_drops_component():
    assert objective(OptimizationProblem((0.5, 1.0)), [0.0, 1.0]) == pytest.approx(SVS1, abs=1e-12)


def test_objective_shape_check():
    with pytest.raises(ParameterError):
        objective(OptimizationProblem((0.5, 1.0)), [1.0])


def test_problem_validation():
    with pytest.raises(ParameterError):
        OptimizationProblem(())
    with pytest.raises(ParameterError):
        OptimizationProblem((0.5,), gauge=3)
    with pytest.raises(ParameterError):
        OptimizationProblem((4.0,))


def test_nelder_mead_rosenbrock():
    rosen = lambda x: (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
    out = nelder_mead(rosen, np.array([-1.2, 1.0]))
    assert out.converged
    np.testing.assert_allclose(out.x, [1, 1], atol=1e-5)


def test_simplex_trivial():
    res = minimize_simplex(OptimizationProblem((1.0,)))
    assert res.variance == pytest.approx(SVS1, abs=1e-12)
    assert res.weights == (1.0,)


def test_simplex_row_three_weights():
    res = minimize_simplex(OptimizationProblem((0.5, 0.8, 1.0)))
    assert res.variance <= 0.0188 + 5e-4
    # the optimum has a positive first weight
    np.testing.assert_allclose(res.weights, (0.2317, -1.0103, 1.0), atol=2e-2)


def test_simplex_row_four():
    assert minimize_simplex(OptimizationProblem((0.5, 0.7, 0.8, 1.0))).variance <= 0.0151 + 5e-4


def test_simplex_is_deterministic():
    p = OptimizationProblem((0.5, 0.8, 1.0), seed=11)
    assert minimize_simplex(p) == minimize_simplex(p)


def test_simplex_independent_of_thread_count(monkeypatch):
    p = OptimizationProblem((0.5, 0.7, 0.8, 1.0), seed=3)
    monkeypatch.setenv("SQUEEZELAB_THREADS", "1")
    one = minimize_simplex(p)
    monkeypatch.setenv("SQUEEZELAB_THREADS", "4")
    assert minimize_simplex(p) == one


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("SQUEEZELAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("SQUEEZELAB_THREADS", "many")
    with pytest.raises(ParameterError):
        worker_count()


def test_eigen_trivial():
    assert minimize_eigen(OptimizationProblem((1.0,))).variance == pytest.approx(SVS1, abs=1e-12)


def test_eigen_row_two_global():
    p = OptimizationProblem((0.5, 1.0))
    eig = minimize_eigen(p)
    assert eig.variance <= 0.0268 + 5e-4
    assert eig.variance <= minimize_simplex(p).variance + 1e-9
    assert objective(p, eig.weights) == pytest.approx(eig.variance, abs=1e-10)


def test_eigen_duplicate_entries():
    with pytest.raises(IllConditionedOverlap):
        minimize_eigen(OptimizationProblem((0.5, 0.5)))


@pytest.mark.parametrize("row", TABLE1, ids=lambda r: f"l{len(r.r_list)}")
def test_eigen_agrees_with_series_oracle(row):
    eig = minimize_eigen(OptimizationProblem(row.r_list))
    assert generalized_variance_oracle(row.r_list, eig.weights) == pytest.approx(eig.variance, abs=1e-9)


def test_reproduce_table1_rows():
    rows = reproduce_table1(seed=7)
    assert [r["row"] for r in rows] == [1, 2, 3, 4]
    for r, ref in zip(rows, (0.0338, 0.0268, 0.0188, 0.0151)):
        assert r["pass"]
        assert r["eigen_variance"] == pytest.approx(ref, abs=5e-4)
        assert r["simplex_variance"] == pytest.approx(r["eigen_variance"], abs=1e-9)
    assert [r["printed_weights_pass"] for r in rows] == [True, True, False, True]
