"""
Ensemble convergence curves
===========================

Ten synthetic data matrices, three random starts each, 300 iterations per
run. The mean and the standard deviation of the cost across the 30 runs are
tracked per iteration for beta = 0, 1, 2. Pass ``--full`` for the
100 x 10 x 1000 protocol (slow).
"""

import sys

import numpy as np

from cnmf2d import ExperimentPlan, ModelDims, run_ensemble, timing_report

full = "--full" in sys.argv[1:]
plan = ExperimentPlan(
    dims=ModelDims(K=10, N=25, I=5, L=2, M=2),
    betas=(0.0, 1.0, 2.0),
    n_matrices=100 if full else 10,
    n_inits=10 if full else 3,
    iters=1000 if full else 300,
)
stats = run_ensemble(plan)

for beta, st in stats.items():
    mono_mean = bool(np.all(st.mean[1:] <= st.mean[:-1] * (1 + 1e-9)))
    mono_std = bool(np.all(st.std[1:] <= st.std[:-1] * (1 + 1e-9)))
    print(f"beta={beta:g} (n={st.ensemble_size})")
    for t in (0, 9, 99, len(st.mean) - 1):
        print(f"   iter {t + 1:4d}: mean {st.mean[t]:12.6g}   std {st.std[t]:12.6g}")
    print(f"   mean nonincreasing: {mono_mean}, std nonincreasing: {mono_std}")

# %%
# Cost per iteration relative to beta = 2. Numbers depend on the machine.
for beta, r in timing_report(ExperimentPlan(dims=plan.dims, iters=200)).items():
    print(f"beta={beta:g}: {r['seconds_per_iter'] * 1e6:7.1f} us/iter, ratio {r['ratio']:.2f}")

# %%
# To plot, write the curves with ``cnmf2d simulate --outdir DIR`` and load
# ``DIR/curves_beta*.csv`` (columns iter, mean, std) in any plotting tool.
