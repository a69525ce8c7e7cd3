"""
Multiplicative updates for the 2D convolutional model.

The gradient of ``D_beta(V || U)`` with respect to either factor splits into
a positive part (built from ``U ** (beta - 1)``) and a negative part (built
from ``V * U ** (beta - 2)``). A multiplicative step replaces the factor
``X`` by ``X * neg / pos``, which keeps every entry nonnegative and leaves
``X`` fixed wherever the gradient vanishes.

Powers of ``U`` are taken before shifting, so rows/columns vacated by a shift
contribute nothing; this is what the chain rule produces for the boundary
terms.
"""

from dataclasses import dataclass

import numpy as np

from .divergence import Beta, beta_value
from .matrix import DEFAULT_FLOOR, ShapeError, elem_pow, shift_down, shift_left, shift_right, shift_up
from .model import check_stacks

__all__ = [
    "UpdateOptions",
    "w_terms",
    "h_terms",
    "update_w",
    "update_h",
    "gradient_w",
    "gradient_h",
]


@dataclass(frozen=True)
class UpdateOptions:
    """beta, the power/division guard `floor`, and the legacy switch.

    With ``legacy_unshifted_u`` set and ``beta == 1``, the positive part of
    both updates uses the unshifted reconstruction, as in the earlier 2D
    deconvolution rules. For ``beta == 2`` the legacy rules coincide with the
    exact ones and the switch has no effect.
    """

    beta: float = 1.0
    floor: float = DEFAULT_FLOOR
    legacy_unshifted_u: bool = False

    def __post_init__(self):
        b = beta_value(self.beta)
        object.__setattr__(self, "beta", b)
        if self.floor < 0:
            raise ValueError(f"floor must be >= 0, got {self.floor}")
        if b < 2 and self.floor <= 0:
            raise ValueError(f"floor must be > 0 for beta < 2 (negative powers of U), got {self.floor}")
        if self.legacy_unshifted_u and b not in (1.0, 2.0):
            raise ValueError(f"legacy unshifted-U rules exist for beta in {{1, 2}} only, got beta={b:g}")

    @property
    def legacy_active(self):
        return self.legacy_unshifted_u and self.beta == 1.0


def _coerce(opts):
    if opts is None:
        return UpdateOptions()
    if isinstance(opts, UpdateOptions):
        return opts
    if isinstance(opts, (int, float, Beta)):
        return UpdateOptions(beta=beta_value(opts))
    raise TypeError(f"expected UpdateOptions, got {type(opts).__name__}")


def _prepare(W, H, V, U, opts):
    W = np.asarray(W, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    U = np.asarray(U, dtype=np.float64)
    dims = check_stacks(W, H, V)
    if U.shape != V.shape:
        raise ShapeError(f"U has shape {U.shape}, V has shape {V.shape}")
    b = opts.beta
    U_pos = elem_pow(U, b - 1.0, opts.floor)
    V_neg = V * elem_pow(U, b - 2.0, opts.floor)
    return W, H, dims, U_pos, V_neg


def w_terms(W, H, V, U, opts=None):
    """Positive and negative gradient parts for every ``W[m]``.

    Returns two ``(M, K, I)`` stacks ``(pos, neg)`` with
    ``dD/dW = pos - neg``.
    """
    opts = _coerce(opts)
    W, H, dims, U_pos, V_neg = _prepare(W, H, V, U, opts)
    legacy = opts.legacy_active
    pos = np.zeros(dims.w_shape)
    neg = np.zeros(dims.w_shape)
    for l in range(dims.L):
        Ua = U_pos if legacy else shift_up(U_pos, l)
        Vb = shift_up(V_neg, l)
        for m in range(dims.M):
            Ht = shift_right(H[l], m).T
            pos[m] += Ua @ Ht
            neg[m] += Vb @ Ht
    return pos, neg


def h_terms(W, H, V, U, opts=None):
    """Positive and negative gradient parts for every ``H[l]``.

    Returns two ``(L, I, N)`` stacks ``(pos, neg)`` with
    ``dD/dH = pos - neg``.
    """
    opts = _coerce(opts)
    W, H, dims, U_pos, V_neg = _prepare(W, H, V, U, opts)
    legacy = opts.legacy_active
    pos = np.zeros(dims.h_shape)
    neg = np.zeros(dims.h_shape)
    for m in range(dims.M):
        Ua = U_pos if legacy else shift_left(U_pos, m)
        Vb = shift_left(V_neg, m)
        for l in range(dims.L):
            Wt = shift_down(W[m], l).T
            pos[l] += Wt @ Ua
            neg[l] += Wt @ Vb
    return pos, neg


def _step(X, pos, neg, floor):
    if floor > 0:
        return X * neg / np.maximum(pos, floor)
    ratio = np.divide(neg, pos, out=np.ones_like(pos), where=pos > 0)
    return X * ratio


def update_w(W, H, V, U, opts=None):
    """One multiplicative sweep over all ``W[m]``.

    `U` must be the reconstruction from the current `W` and `H`; every
    slice is updated from that same `U`.
    """
    opts = _coerce(opts)
    pos, neg = w_terms(W, H, V, U, opts)
    return _step(np.asarray(W, dtype=np.float64), pos, neg, opts.floor)


def update_h(W, H, V, U, opts=None):
    """One multiplicative sweep over all ``H[l]``, all from the same `U`."""
    opts = _coerce(opts)
    pos, neg = h_terms(W, H, V, U, opts)
    return _step(np.asarray(H, dtype=np.float64), pos, neg, opts.floor)


def gradient_w(W, H, V, U, opts=None):
    """Gradient of ``D_beta(V || U)`` with respect to each ``W[m]``.

    Always the exact gradient; the legacy switch is ignored.
    """
    opts = _coerce(opts)
    opts = UpdateOptions(beta=opts.beta, floor=opts.floor)
    pos, neg = w_terms(W, H, V, U, opts)
    return pos - neg


def gradient_h(W, H, V, U, opts=None):
    """Gradient of ``D_beta(V || U)`` with respect to each ``H[l]``."""
    opts = _coerce(opts)
    opts = UpdateOptions(beta=opts.beta, floor=opts.floor)
    pos, neg = h_terms(W, H, V, U, opts)
    return pos - neg
