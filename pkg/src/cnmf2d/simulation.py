"""
Synthetic convergence experiment.

Ground-truth weights are chi-squared with two degrees of freedom (the sum of
two squared standard normals), activations are uniform on [0, 1), and the
data are their exact reconstruction. Each data matrix is factorized from
several random initializations and the per-iteration costs are summarized
by their mean and population standard deviation across the ensemble.

Random streams come from numpy's PCG64 generator. Every run draws from its
own ``SeedSequence(master_seed, spawn_key=...)`` child, so results do not
depend on execution order.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .divergence import beta_value
from .matrix import DEFAULT_FLOOR
from .model import ModelDims, init_random, reconstruct
from .solver import SolverConfig, solve, step

__all__ = [
    "PRNG",
    "ExperimentPlan",
    "EnsembleStats",
    "EnsembleError",
    "data_seed",
    "init_seed",
    "gen_ground_truth",
    "run_ensemble",
    "ensemble_stats",
    "timing_report",
    "write_curves",
]

PRNG = "numpy.random.PCG64"
PAPER_DIMS = ModelDims(K=10, N=25, I=5, L=2, M=2)

_DATA_STREAM = 0
_INIT_STREAM = 1


class EnsembleError(RuntimeError):
    """A solver failure inside the ensemble, tagged with its coordinates."""

    def __init__(self, beta, matrix_index, init_index, cause):
        super().__init__(
            f"run failed at beta={beta:g}, matrix {matrix_index}, init {init_index}: {cause}"
        )
        self.beta = beta
        self.matrix_index = matrix_index
        self.init_index = init_index


@dataclass(frozen=True)
class ExperimentPlan:
    """Desk-scale defaults; the published protocol is 100 matrices x 10
    initializations x 1000 iterations."""

    dims: ModelDims = PAPER_DIMS
    betas: tuple = (0.0, 1.0, 2.0)
    n_matrices: int = 10
    n_inits: int = 3
    iters: int = 300
    master_seed: int = 0
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(beta_value(b) for b in self.betas))
        if not self.betas:
            raise ValueError("plan needs at least one beta")
        for name in ("n_matrices", "n_inits", "iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)!r}")

    @property
    def ensemble_size(self):
        return self.n_matrices * self.n_inits

    def to_dict(self):
        return {
            "K": self.dims.K,
            "N": self.dims.N,
            "I": self.dims.I,
            "L": self.dims.L,
            "M": self.dims.M,
            "betas": list(self.betas),
            "n_matrices": self.n_matrices,
            "n_inits": self.n_inits,
            "iterations": self.iters,
            "seed": self.master_seed,
            "floor": self.floor,
            "prng": PRNG,
        }


@dataclass
class EnsembleStats:
    mean: np.ndarray
    std: np.ndarray
    ensemble_size: int
    costs: np.ndarray = field(repr=False, default=None)


def data_seed(master_seed, matrix_index):
    """Seed of the `matrix_index`-th ground truth; shared by all betas."""
    return np.random.SeedSequence(master_seed, spawn_key=(_DATA_STREAM, matrix_index))


def init_seed(master_seed, beta_index, matrix_index, init_index):
    return np.random.SeedSequence(
        master_seed, spawn_key=(_INIT_STREAM, beta_index, matrix_index, init_index)
    )


def gen_ground_truth(dims, seed=None):
    """Random ground-truth stacks and their reconstruction ``V``.

    Returns ``(W, H, V)``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    normals = rng.standard_normal(size=dims.w_shape + (2,))
    W = np.sum(normals**2, axis=-1)
    H = rng.random(size=dims.h_shape)
    return W, H, reconstruct(W, H)


def ensemble_stats(costs):
    """Per-iteration mean and population std over the rows of `costs`."""
    costs = np.asarray(costs, dtype=np.float64)
    return EnsembleStats(
        mean=costs.mean(axis=0),
        std=costs.std(axis=0),
        ensemble_size=costs.shape[0],
        costs=costs,
    )


def run_ensemble(plan):
    """Run every (beta, matrix, init) combination of `plan`.

    Returns a dict mapping each beta to its ``EnsembleStats``.
    """
    data = [gen_ground_truth(plan.dims, data_seed(plan.master_seed, i))[2] for i in range(plan.n_matrices)]
    out = {}
    for bi, beta in enumerate(plan.betas):
        cfg = SolverConfig(beta=beta, max_iters=plan.iters, floor=plan.floor)
        costs = np.empty((plan.ensemble_size, plan.iters))
        row = 0
        for i, V in enumerate(data):
            for j in range(plan.n_inits):
                W0, H0 = init_random(plan.dims, init_seed(plan.master_seed, bi, i, j))
                try:
                    _, _, trace = solve(V, W0, H0, cfg)
                except Exception as exc:
                    raise EnsembleError(beta, i, j, exc) from exc
                costs[row] = trace.costs
                row += 1
        out[beta] = ensemble_stats(costs)
    return out


def timing_report(plan, warmup=10, reference_beta=2.0):
    """Median wall time of one iteration per beta, and its ratio to `reference_beta`.

    Uses the first data matrix and initialization of `plan` and
    ``plan.iters`` timed iterations. Returns ``{beta: {"seconds_per_iter":
    ..., "ratio": ...}}``.
    """
    _, _, V = gen_ground_truth(plan.dims, data_seed(plan.master_seed, 0))
    betas = list(plan.betas)
    if reference_beta not in betas:
        betas.append(reference_beta)
    seconds = {}
    for bi, beta in enumerate(betas):
        opts = SolverConfig(beta=beta, floor=plan.floor).update_options()
        W, H = init_random(plan.dims, init_seed(plan.master_seed, bi, 0, 0))
        for _ in range(warmup):
            W, H = step(V, W, H, opts)
        times = np.empty(plan.iters)
        for t in range(plan.iters):
            t0 = time.perf_counter()
            W, H = step(V, W, H, opts)
            times[t] = time.perf_counter() - t0
        seconds[beta] = float(np.median(times))
    ref = seconds[reference_beta]
    return {b: {"seconds_per_iter": s, "ratio": s / ref} for b, s in seconds.items()}


def write_curves(path, stats):
    with open(path, "w", newline="") as fh:
        fh.write("iter,mean,std\n")
        for t, (m, s) in enumerate(zip(stats.mean, stats.std), start=1):
            fh.write(f"{t},{m:.17g},{s:.17g}\n")
