"""
The 2D convolutional factor model.

Factor stacks are 3D arrays:

* ``W`` has shape ``(M, K, I)``; ``W[m]`` weights the activations shifted
  ``m`` columns to the right.
* ``H`` has shape ``(L, I, N)``; ``H[l]`` is applied to the weights shifted
  ``l`` rows down.

The reconstruction is

    U = sum_l sum_m shift_down(W[m], l) @ shift_right(H[l], m)

which reduces to the 1D convolutional model for ``L == 1`` and to plain
``W @ H`` for ``L == M == 1``.
"""

import json
import os
from dataclasses import asdict, dataclass

import numpy as np

from .matrix import ShapeError, read_csv, shift_down, shift_right, write_csv

__all__ = [
    "ModelDims",
    "check_stacks",
    "reconstruct",
    "w_norms",
    "normalize",
    "init_random",
    "save_factors",
    "load_factors",
]

INIT_LOW = 1e-3


@dataclass(frozen=True)
class ModelDims:
    """Problem sizes: K visible variables, N observations, rank I,
    vertical support L and horizontal support M."""

    K: int
    N: int
    I: int
    L: int = 2
    M: int = 2

    def __post_init__(self):
        for name, v in asdict(self).items():
            if int(v) != v or v < 1:
                raise ValueError(f"ModelDims.{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def w_shape(self):
        return (self.M, self.K, self.I)

    @property
    def h_shape(self):
        return (self.L, self.I, self.N)


def as_stack(X, name):
    X = np.array(X, dtype=np.float64)
    if X.ndim != 3 or 0 in X.shape:
        raise ShapeError(f"{name} must be a non-empty stack of matrices (3D array), got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(X < 0):
        raise ValueError(f"{name} contains negative entries")
    return X


def check_stacks(W, H, V=None):
    """Validate stack shapes against each other (and `V`); return ModelDims."""
    W = np.asarray(W)
    H = np.asarray(H)
    if W.ndim != 3 or H.ndim != 3:
        raise ShapeError(f"W and H must be 3D stacks, got shapes {W.shape} and {H.shape}")
    M, K, I = W.shape
    L, I_h, N = H.shape
    if I != I_h:
        raise ShapeError(f"W slices are {K}x{I} but H slices are {I_h}x{N}: inner dimensions differ")
    if V is not None and np.shape(V) != (K, N):
        raise ShapeError(f"V has shape {np.shape(V)}, model implies ({K}, {N})")
    return ModelDims(K=K, N=N, I=I, L=L, M=M)


def reconstruct(W, H):
    """Model reconstruction ``U`` (K x N) from the factor stacks."""
    W = np.asarray(W, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    dims = check_stacks(W, H)
    U = np.zeros((dims.K, dims.N))
    for l in range(dims.L):
        # shift_down(A, l) @ B == shift_down(A @ B, l)
        acc = np.zeros((dims.K, dims.N))
        for m in range(dims.M):
            acc += W[m] @ shift_right(H[l], m)
        U += shift_down(acc, l)
    return U


def w_norms(W, p=2.0):
    """Per-component p-norm of W, taken over all rows and all slices."""
    W = np.asarray(W, dtype=np.float64)
    if p < 1:
        raise ValueError(f"norm order must be >= 1, got {p}")
    if np.isinf(p):
        return W.max(axis=(0, 1))
    return np.sum(W**p, axis=(0, 1)) ** (1.0 / p)


def normalize(W, H, p=2.0):
    """Rescale components so every W component has unit p-norm.

    Each component ``i`` of ``W`` is divided by its norm and the matching
    rows of every ``H[l]`` are multiplied by it, which leaves the
    reconstruction unchanged.
    """
    W = np.asarray(W, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    check_stacks(W, H)
    norms = w_norms(W, p)
    dead = np.flatnonzero(norms == 0)
    if dead.size:
        raise ValueError(f"cannot normalize: component {int(dead[0])} of W has zero norm")
    return W / norms, H * norms[:, None]


def init_random(dims, seed=None, low=INIT_LOW):
    """Strictly positive random factor stacks, uniform on ``(low, 1]``."""
    rng = np.random.default_rng(seed)
    W = 1.0 - rng.uniform(0.0, 1.0 - low, size=dims.w_shape)
    H = 1.0 - rng.uniform(0.0, 1.0 - low, size=dims.h_shape)
    return W, H


def save_factors(outdir, W, H, **manifest):
    """Write ``W_m{m}.csv``, ``H_l{l}.csv`` and ``manifest.json`` to `outdir`.

    Shape entries (K, N, I, L, M) of the manifest are filled in from the
    stacks; everything else in `manifest` is written as given.
    """
    dims = check_stacks(W, H)
    os.makedirs(outdir, exist_ok=True)
    for m, Wm in enumerate(W):
        write_csv(os.path.join(outdir, f"W_m{m}.csv"), Wm)
    for l, Hl in enumerate(H):
        write_csv(os.path.join(outdir, f"H_l{l}.csv"), Hl)
    meta = asdict(dims)
    meta.update(manifest)
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return meta


def load_factors(indir):
    """Read factor stacks written by `save_factors`; returns ``(W, H, manifest)``."""
    with open(os.path.join(indir, "manifest.json")) as fh:
        meta = json.load(fh)
    W = np.stack([read_csv(os.path.join(indir, f"W_m{m}.csv")) for m in range(meta["M"])])
    H = np.stack([read_csv(os.path.join(indir, f"H_l{l}.csv")) for l in range(meta["L"])])
    dims = check_stacks(W, H)
    if (dims.K, dims.N, dims.I) != (meta["K"], meta["N"], meta["I"]):
        raise ShapeError(f"{indir}: factor files do not match the manifest dimensions")
    return W, H, meta
