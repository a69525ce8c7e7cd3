import numpy as np
import pytest

import cnmf2d.simulation as sim
from cnmf2d.model import ModelDims, reconstruct
from cnmf2d.simulation import (
    EnsembleError,
    ExperimentPlan,
    ensemble_stats,
    gen_ground_truth,
    run_ensemble,
    timing_report,
    write_curves,
)

TINY = ModelDims(K=4, N=6, I=2, L=2, M=2)


def test_ground_truth_distributions():
    big = ModelDims(K=100, N=100, I=10, L=100, M=100)
    W, H, _ = gen_ground_truth(big, 0)
    assert W.size == 10**5 and H.size == 10**5
    assert 1.97 <= W.mean() <= 2.03
    assert 0.497 <= H.mean() <= 0.503
    assert H.min() >= 0 and H.max() < 1
    assert W.min() >= 0


def test_ground_truth_is_exact_model():
    W, H, V = gen_ground_truth(ModelDims(K=10, N=25, I=5), 1)
    assert V.shape == (10, 25)
    assert np.all(V >= 0)
    np.testing.assert_array_equal(V, reconstruct(W, H))
    W2, H2, V2 = gen_ground_truth(ModelDims(K=10, N=25, I=5), 1)
    np.testing.assert_array_equal(V, V2)


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan(n_inits=0)
    with pytest.raises(ValueError):
        ExperimentPlan(betas=())
    assert ExperimentPlan().ensemble_size == 30


def test_degenerate_ensemble():
    plan = ExperimentPlan(dims=TINY, betas=(1.0,), n_matrices=1, n_inits=1, iters=20)
    st = run_ensemble(plan)[1.0]
    assert st.ensemble_size == 1
    np.testing.assert_array_equal(st.mean, st.costs[0])
    np.testing.assert_array_equal(st.std, 0.0)


def test_duplicate_runs_have_zero_spread():
    row = np.linspace(5, 1, 10)
    st = ensemble_stats(np.vstack([row, row]))
    np.testing.assert_array_equal(st.std, 0.0)
    np.testing.assert_array_equal(st.mean, row)


def test_stats_match_two_pass_oracle():
    plan = ExperimentPlan(dims=TINY, betas=(0.5,), n_matrices=3, n_inits=2, iters=15)
    st = run_ensemble(plan)[0.5]
    C = st.costs
    n = C.shape[0]
    for t in range(C.shape[1]):
        col = [float(x) for x in C[:, t]]
        mean = sum(col) / n
        var = sum((x - mean) ** 2 for x in col) / n
        assert st.mean[t] == pytest.approx(mean, rel=1e-12)
        assert st.std[t] == pytest.approx(var**0.5, rel=1e-12, abs=1e-300)


def test_ensemble_reproducible_and_order_independent():
    plan = ExperimentPlan(dims=TINY, betas=(0.0, 2.0), n_matrices=2, n_inits=2, iters=25, master_seed=5)
    a = run_ensemble(plan)
    b = run_ensemble(plan)
    for beta in plan.betas:
        np.testing.assert_array_equal(a[beta].costs, b[beta].costs)
    # beta index 0 in both plans, so the runs must coincide
    solo = run_ensemble(ExperimentPlan(dims=TINY, betas=(0.0,), n_matrices=2, n_inits=2, iters=25, master_seed=5))
    np.testing.assert_array_equal(solo[0.0].costs, a[0.0].costs)


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0])
def test_small_ensemble_monotone(beta):
    plan = ExperimentPlan(dims=ModelDims(K=6, N=12, I=3), betas=(beta,), n_matrices=3, n_inits=2, iters=100)
    st = run_ensemble(plan)[beta]
    assert np.all(st.mean[1:] <= st.mean[:-1] * (1 + 1e-9))
    assert np.all(st.std >= 0)


def test_ensemble_error_carries_coordinates(monkeypatch):
    def boom(*args, **kwargs):
        raise FloatingPointError("synthetic failure")

    monkeypatch.setattr(sim, "solve", boom)
    plan = ExperimentPlan(dims=TINY, betas=(1.0,), n_matrices=1, n_inits=1, iters=2)
    with pytest.raises(EnsembleError, match=r"beta=1, matrix 0, init 0") as info:
        run_ensemble(plan)
    assert (info.value.beta, info.value.matrix_index, info.value.init_index) == (1.0, 0, 0)


def test_timing_report():
    plan = ExperimentPlan(dims=TINY, betas=(0.0, 1.0, 2.0), iters=20)
    report = timing_report(plan, warmup=2)
    assert set(report) == {0.0, 1.0, 2.0}
    assert report[2.0]["ratio"] == 1.0
    for r in report.values():
        assert r["seconds_per_iter"] > 0 and r["ratio"] > 0


def test_write_curves(tmp_path):
    st = ensemble_stats(np.array([[3.0, 2.0], [1.0, 1.0]]))
    write_curves(tmp_path / "c.csv", st)
    assert (tmp_path / "c.csv").read_text().splitlines() == ["iter,mean,std", "1,2,1", "2,1.5,0.5"]
