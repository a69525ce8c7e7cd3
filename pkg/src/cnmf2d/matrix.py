"""
Dense matrix helpers: validation, the four zero-fill shift operators,
guarded entrywise powers and the project-wide CSV matrix format.

Matrices are plain ``float64`` numpy arrays. The shift operators act on the
last two axes, so they apply unchanged to a stack of matrices with shape
``(S, rows, cols)``.
"""

import csv
import math

import numpy as np

__all__ = [
    "ShapeError",
    "as_matrix",
    "shift_right",
    "shift_left",
    "shift_down",
    "shift_up",
    "hadamard",
    "elem_pow",
    "inner",
    "read_csv",
    "write_csv",
]

DEFAULT_FLOOR = 1e-12


class ShapeError(ValueError):
    """Operand dimensions do not conform."""


def as_matrix(x, nonneg=True, name="matrix"):
    """Return `x` as a finite 2D float64 array.

    Raises ``ValueError`` for non-2D input, non-finite entries, or (when
    `nonneg` is set) negative entries.
    """
    a = np.array(x, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    if nonneg and np.any(a < 0):
        k, n = np.argwhere(a < 0)[0]
        raise ValueError(f"{name} has negative entry {a[k, n]!r} at row {k}, column {n}")
    return a


def _check_shift(s):
    if s < 0:
        raise ValueError(f"shift count must be >= 0, got {s}")
    return int(s)


def shift_right(X, m):
    """Shift columns `m` places to the right, zero-filling the vacated ones."""
    m = _check_shift(m)
    X = np.asarray(X)
    if m == 0:
        return X.copy()
    out = np.zeros_like(X)
    if m < X.shape[-1]:
        out[..., m:] = X[..., :-m]
    return out


def shift_left(X, m):
    """Shift columns `m` places to the left, zero-filling the trailing ones."""
    m = _check_shift(m)
    X = np.asarray(X)
    if m == 0:
        return X.copy()
    out = np.zeros_like(X)
    if m < X.shape[-1]:
        out[..., :-m] = X[..., m:]
    return out


def shift_down(X, l):
    """Shift rows `l` places down, zero-filling the top rows."""
    l = _check_shift(l)
    X = np.asarray(X)
    if l == 0:
        return X.copy()
    out = np.zeros_like(X)
    if l < X.shape[-2]:
        out[..., l:, :] = X[..., :-l, :]
    return out


def shift_up(X, l):
    """Shift rows `l` places up, zero-filling the bottom rows."""
    l = _check_shift(l)
    X = np.asarray(X)
    if l == 0:
        return X.copy()
    out = np.zeros_like(X)
    if l < X.shape[-2]:
        out[..., :-l, :] = X[..., l:, :]
    return out


def hadamard(A, B):
    """Entrywise product of two equally shaped matrices."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ShapeError(f"hadamard: shapes {A.shape} and {B.shape} differ")
    return A * B


def elem_pow(A, e, floor=DEFAULT_FLOOR):
    """Entrywise power ``A ** e``.

    For negative exponents every entry is first raised to at least `floor`,
    so exact zeros map to ``floor ** e`` instead of infinity. For
    nonnegative exponents the plain power is used, with ``0 ** 0 == 1``.
    """
    A = np.asarray(A, dtype=np.float64)
    e = float(e)
    if e == 1.0:
        return A.copy()
    if e == 0.0:
        return np.ones_like(A)
    if e < 0:
        return np.power(np.maximum(A, floor), e)
    return np.power(A, e)


def inner(A, B):
    """Frobenius inner product."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ShapeError(f"inner: shapes {A.shape} and {B.shape} differ")
    return float(np.sum(A * B))


def write_csv(path, X):
    """Write a matrix as header-less CSV with 17 significant digits."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        for row in X:
            fh.write(",".join(format(float(v), ".17g") for v in row))
            fh.write("\n")


def read_csv(path, nonneg=True):
    """Read a header-less CSV matrix.

    Raises ``ValueError`` naming the offending cell (0-based row/column) for
    unparsable, non-finite or (with `nonneg`) negative values, and for
    ragged rows.
    """
    rows = []
    with open(path, newline="") as fh:
        for r, fields in enumerate(csv.reader(fh)):
            if not fields or all(not f.strip() for f in fields):
                continue
            row = []
            for c, field in enumerate(fields):
                try:
                    v = float(field)
                except ValueError:
                    raise ValueError(f"{path}: row {r}, column {c}: cannot parse {field!r}") from None
                if not math.isfinite(v):
                    raise ValueError(f"{path}: row {r}, column {c}: non-finite value {field!r}")
                if nonneg and v < 0:
                    raise ValueError(f"{path}: row {r}, column {c}: negative value {field!r}")
                row.append(v)
            if rows and len(row) != len(rows[0]):
                raise ValueError(f"{path}: row {r} has {len(row)} columns, expected {len(rows[0])}")
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    return np.array(rows, dtype=np.float64)
