"""
The iteration loop: reconstruct, score, update W, refresh, update H.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .divergence import D_beta, beta_value
from .matrix import DEFAULT_FLOOR, as_matrix
from .model import as_stack, check_stacks, normalize, reconstruct
from .updates import UpdateOptions, update_h, update_w

__all__ = [
    "SolverConfig",
    "ConvergenceTrace",
    "NumericalAbort",
    "MonotonicityWarning",
    "cost_at",
    "step",
    "solve",
]

logger = logging.getLogger(__name__)

MONOTONE_RTOL = 1e-9


class NumericalAbort(RuntimeError):
    """A factor or the cost became NaN/Inf."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class MonotonicityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SolverConfig:
    beta: float = 1.0
    max_iters: int = 300
    tol: float = 0.0
    floor: float = DEFAULT_FLOOR
    normalize_every: Optional[int] = None
    norm_order: float = 2.0
    legacy: bool = False
    seed: Optional[int] = None
    check_nonneg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "beta", beta_value(self.beta))
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.tol >= 0:
            raise ValueError(f"tol must be >= 0, got {self.tol!r}")
        if self.normalize_every is not None and self.normalize_every < 1:
            raise ValueError(f"normalize_every must be a positive integer or None, got {self.normalize_every!r}")
        if self.norm_order < 1:
            raise ValueError(f"norm_order must be >= 1, got {self.norm_order!r}")
        # validates floor / legacy against beta
        self.update_options()

    def update_options(self):
        return UpdateOptions(beta=self.beta, floor=self.floor, legacy_unshifted_u=self.legacy)


@dataclass
class ConvergenceTrace:
    """Costs recorded at the start of each iteration.

    ``final_cost`` is the cost of the returned factors, evaluated once
    after the loop.
    """

    costs: list = field(default_factory=list)
    stopped_early: bool = False
    final_cost: float = float("nan")

    @property
    def iterations_run(self):
        return len(self.costs)

    def as_array(self):
        return np.asarray(self.costs, dtype=np.float64)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("iter,cost\n")
            for t, c in enumerate(self.costs, start=1):
                fh.write(f"{t},{c:.17g}\n")


def cost_at(V, W, H, beta, floor=DEFAULT_FLOOR):
    """``D_beta(V || reconstruct(W, H))``."""
    return D_beta(V, reconstruct(W, H), beta, floor)


def step(V, W, H, opts):
    """One W sweep, reconstruction refresh and H sweep, starting from fresh `U`."""
    U = reconstruct(W, H)
    W = update_w(W, H, V, U, opts)
    U = reconstruct(W, H)
    H = update_h(W, H, V, U, opts)
    return W, H


def _finite_or_abort(t, **arrays):
    for name, a in arrays.items():
        if not np.all(np.isfinite(a)):
            raise NumericalAbort(f"non-finite values in {name} at iteration {t}", iteration=t)


def solve(V, W0, H0, cfg=None, callback=None):
    """Fit the factor stacks to `V` by multiplicative updates.

    Parameters
    ----------
    V : array_like, shape (K, N)
        Nonnegative data.
    W0, H0 : array_like
        Strictly positive initial stacks of shape ``(M, K, I)`` and ``(L, I, N)``.
    cfg : SolverConfig, optional
    callback : callable, optional
        Called as ``callback(t, W, H, cost)`` after the cost of iteration
        `t` (1-based) is recorded.

    Returns
    -------
    W, H : ndarray
        Final stacks.
    trace : ConvergenceTrace
    """
    cfg = cfg or SolverConfig()
    V = as_matrix(V, name="V")
    W = as_stack(W0, "W0")
    H = as_stack(H0, "H0")
    check_stacks(W, H, V)
    if np.any(W <= 0) or np.any(H <= 0):
        raise ValueError("initial factors must be strictly positive")
    opts = cfg.update_options()
    trace = ConvergenceTrace()
    # costs this small are roundoff, not an increase
    abs_slack = V.size * np.finfo(np.float64).eps

    for t in range(1, cfg.max_iters + 1):
        U = reconstruct(W, H)
        C = D_beta(V, U, cfg.beta, cfg.floor)
        if not np.isfinite(C):
            raise NumericalAbort(f"non-finite cost at iteration {t}", iteration=t)
        if trace.costs and C > trace.costs[-1] * (1 + MONOTONE_RTOL) + abs_slack:
            warnings.warn(
                f"cost increased at iteration {t}: {trace.costs[-1]!r} -> {C!r}",
                MonotonicityWarning,
                stacklevel=2,
            )
        trace.costs.append(C)
        if callback is not None:
            callback(t, W, H, C)
        if C < cfg.tol:
            trace.stopped_early = True
            logger.debug("cost %.6g below tol %.6g at iteration %d", C, cfg.tol, t)
            break

        W = update_w(W, H, V, U, opts)
        U = reconstruct(W, H)
        H = update_h(W, H, V, U, opts)
        _finite_or_abort(t, W=W, H=H)
        if cfg.normalize_every and t % cfg.normalize_every == 0:
            W, H = normalize(W, H, cfg.norm_order)
        if cfg.check_nonneg and (np.any(W < 0) or np.any(H < 0)):
            raise NumericalAbort(f"negative factor entries at iteration {t}", iteration=t)

    trace.final_cost = cost_at(V, W, H, cfg.beta, cfg.floor)
    return W, H, trace
