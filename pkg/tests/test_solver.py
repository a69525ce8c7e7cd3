import warnings

import numpy as np
import pytest

from cnmf2d.divergence import D_beta
from cnmf2d.model import ModelDims, init_random, reconstruct
from cnmf2d.simulation import gen_ground_truth
from cnmf2d.solver import (
    ConvergenceTrace,
    MonotonicityWarning,
    NumericalAbort,
    SolverConfig,
    cost_at,
    solve,
)
from cnmf2d.model import w_norms
from oracles import D_beta_loop

PAPER = ModelDims(K=10, N=25, I=5, L=2, M=2)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolverConfig(tol=-1)
    with pytest.raises(ValueError):
        SolverConfig(beta=0.0, floor=0.0)
    with pytest.raises(ValueError):
        SolverConfig(normalize_every=0)


def test_cost_at():
    rng = np.random.default_rng(0)
    W, H = rng.random((2, 4, 2)) + 0.1, rng.random((2, 2, 5)) + 0.1
    V = rng.uniform(0.1, 2, (4, 5))
    U = reconstruct(W, H)
    assert cost_at(V, W, H, 1.0) == D_beta(V, U, 1.0)
    assert cost_at(U, W, H, 0.5) == 0.0
    assert cost_at(V, W, H, 0.5) == pytest.approx(D_beta_loop(V, U, 0.5), rel=1e-12)


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0])
def test_fixed_point_run(beta):
    W0, H0 = init_random(PAPER, 1)
    V = reconstruct(W0, H0)
    W, H, trace = solve(V, W0, H0, SolverConfig(beta=beta, max_iters=5))
    np.testing.assert_allclose(W, W0, rtol=1e-12)
    np.testing.assert_allclose(H, H0, rtol=1e-12)
    assert max(trace.costs) < 1e-20
    assert not trace.stopped_early


def test_early_stop_on_first_iteration():
    W0, H0 = init_random(PAPER, 2)
    _, _, V = gen_ground_truth(PAPER, 3)
    W, H, trace = solve(V, W0, H0, SolverConfig(tol=1e30, max_iters=50))
    assert trace.stopped_early
    assert trace.iterations_run == 1
    np.testing.assert_array_equal(W, W0)
    np.testing.assert_array_equal(H, H0)


def test_early_stop_mid_run():
    W0, H0 = init_random(PAPER, 2)
    _, _, V = gen_ground_truth(PAPER, 3)
    _, _, full = solve(V, W0, H0, SolverConfig(max_iters=60))
    tol = full.costs[20] * 1.0000001
    _, _, trace = solve(V, W0, H0, SolverConfig(max_iters=60, tol=tol))
    assert trace.stopped_early
    assert trace.costs[-1] < tol
    assert all(c >= tol for c in trace.costs[:-1])
    assert trace.costs == full.costs[: trace.iterations_run]


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 1.5, 2.0])
def test_trace_monotone(beta):
    _, _, V = gen_ground_truth(PAPER, 4)
    W0, H0 = init_random(PAPER, 5)
    with warnings.catch_warnings():
        warnings.simplefilter("error", MonotonicityWarning)
        W, H, trace = solve(V, W0, H0, SolverConfig(beta=beta, max_iters=300, check_nonneg=True))
    c = trace.as_array()
    assert trace.iterations_run == 300 and len(c) == 300
    assert np.all(np.isfinite(c)) and np.all(c >= 0)
    assert np.all(c[1:] <= c[:-1] * (1 + 1e-9))
    assert trace.final_cost <= c[-1] * (1 + 1e-9)
    assert trace.final_cost == cost_at(V, W, H, beta)


def test_deterministic():
    _, _, V = gen_ground_truth(PAPER, 6)
    W0, H0 = init_random(PAPER, 7)
    a = solve(V, W0, H0, SolverConfig(max_iters=40))
    b = solve(V, W0, H0, SolverConfig(max_iters=40))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    assert a[2].costs == b[2].costs


def test_normalize_every_keeps_unit_norms():
    _, _, V = gen_ground_truth(PAPER, 8)
    W0, H0 = init_random(PAPER, 9)
    W, H, trace = solve(V, W0, H0, SolverConfig(max_iters=10, normalize_every=5))
    np.testing.assert_allclose(w_norms(W), 1.0, rtol=1e-12)


def test_callback_sees_every_iteration():
    _, _, V = gen_ground_truth(PAPER, 8)
    W0, H0 = init_random(PAPER, 9)
    seen = []
    _, _, trace = solve(V, W0, H0, SolverConfig(max_iters=7), callback=lambda t, W, H, c: seen.append((t, c)))
    assert seen == list(zip(range(1, 8), trace.costs))


def test_input_validation():
    W0, H0 = init_random(PAPER, 0)
    V = np.ones((PAPER.K, PAPER.N))
    with pytest.raises(ValueError, match="strictly positive"):
        solve(V, np.zeros_like(W0), H0)
    with pytest.raises(ValueError):
        solve(V[:, :-1], W0, H0)
    bad = V.copy()
    bad[0, 0] = -1
    with pytest.raises(ValueError, match="negative"):
        solve(bad, W0, H0)


def test_numerical_abort_names_iteration():
    W0, H0 = init_random(PAPER, 0)
    V = np.full((PAPER.K, PAPER.N), 1e300)
    with pytest.raises(NumericalAbort) as info:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            solve(V, W0, H0, SolverConfig(beta=2.0, max_iters=10))
    assert info.value.iteration is not None
    assert f"iteration {info.value.iteration}" in str(info.value)


def test_trace_csv(tmp_path):
    trace = ConvergenceTrace(costs=[3.0, 2.5, 0.1])
    trace.write_csv(tmp_path / "trace.csv")
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines == ["iter,cost", "1,3", "2,2.5", "3,0.10000000000000001"]
