"""Two-dimensional convolutional NMF with beta-divergence multiplicative updates."""

from .matrix import (
    ShapeError,
    as_matrix,
    elem_pow,
    hadamard,
    read_csv,
    shift_down,
    shift_left,
    shift_right,
    shift_up,
    write_csv,
)
from .divergence import Beta, DomainError, D_beta, d_beta, scale_identity_check
from .model import (
    ModelDims,
    init_random,
    load_factors,
    normalize,
    reconstruct,
    save_factors,
    w_norms,
)
from .updates import (
    UpdateOptions,
    gradient_h,
    gradient_w,
    update_h,
    update_w,
)
from .solver import ConvergenceTrace, NumericalAbort, SolverConfig, cost_at, solve
from .simulation import (
    EnsembleStats,
    ExperimentPlan,
    EnsembleError,
    gen_ground_truth,
    run_ensemble,
    timing_report,
)

__version__ = "0.1.0"
