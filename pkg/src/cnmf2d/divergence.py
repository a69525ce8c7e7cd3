"""
Beta-divergence between nonnegative scalars and matrices.

    beta = 2 : squared Euclidean distance (halved)
    beta = 1 : generalized Kullback-Leibler divergence
    beta = 0 : Itakura-Saito divergence

All branches are evaluated through the log-ratio ``t = log(p / q)``:

    d_beta(p, q) = q**beta * phi_beta(t)

which is the scale identity in disguise. Near ``t = 0`` phi is summed from
its power series, which avoids the cancellation the textbook formulas suffer
when ``p`` and ``q`` are close.
"""

import math
from dataclasses import dataclass

import numpy as np

from .matrix import DEFAULT_FLOOR, ShapeError

__all__ = ["Beta", "DomainError", "d_beta", "D_beta", "scale_identity_check"]

_SERIES_RADIUS = 0.5
_SERIES_TERMS = 28


class DomainError(ValueError):
    """Divergence evaluated outside the domain of its branch."""


@dataclass(frozen=True)
class Beta:
    """The divergence parameter.

    Any finite real is accepted; values in ``[0, 2]`` are the tested range
    and are reported as ``validated``.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"beta must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def validated(self):
        return 0.0 <= self.value <= 2.0

    def __float__(self):
        return self.value


def beta_value(beta):
    """Plain float from a ``Beta`` or a number."""
    return Beta(beta).value if not isinstance(beta, Beta) else beta.value


def _branch_name(b):
    if b == 0.0:
        return "Itakura-Saito (beta=0)"
    if b == 1.0:
        return "Kullback-Leibler (beta=1)"
    return f"general (beta={b:g})"


def _series_coeffs(b):
    # coefficient of t**n in phi_beta: (1 + b + ... + b**(n-2)) / n!
    coeffs = np.zeros(_SERIES_TERMS + 1)
    geo, fact = 0.0, 1.0
    for n in range(1, _SERIES_TERMS + 1):
        fact *= n
        if n >= 2:
            geo = geo * b + 1.0
            coeffs[n] = geo / fact
    return coeffs


def _phi(t, b):
    """phi_beta(t) = d_beta(exp(t), 1), vectorized over `t`."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    small = np.abs(t) * max(1.0, abs(b)) <= _SERIES_RADIUS
    if np.any(small):
        # Horner on the truncated series
        ts = t[small]
        coeffs = _series_coeffs(b)
        acc = np.zeros_like(ts)
        for c in coeffs[:1:-1]:
            acc = (acc + c) * ts
        out[small] = acc * ts
    big = ~small
    if np.any(big):
        tb = t[big]
        if b == 1.0:
            r = np.exp(tb)
            out[big] = r * tb - r + 1.0
        elif b == 0.0:
            out[big] = np.expm1(tb) - tb
        else:
            out[big] = (np.expm1(b * tb) - b * np.expm1(tb)) / (b * (b - 1.0))
    return out


def _d_beta_array(p, q, b):
    """Entrywise divergence for nonnegative `p` and positive `q`."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if np.any(q <= 0):
        raise DomainError(f"{_branch_name(b)} branch: q must be > 0")
    if np.any(p < 0):
        raise DomainError(f"{_branch_name(b)} branch: p must be >= 0")
    zero = p == 0
    if np.any(zero) and b <= 0:
        raise DomainError(f"{_branch_name(b)} branch is undefined at p = 0")
    out = np.empty(np.broadcast(p, q).shape)
    p, q = np.broadcast_arrays(p, q)
    pos = ~zero
    if np.any(pos):
        pp, qq = p[pos], q[pos]
        t = np.log(pp) - np.log(qq)
        out[pos] = np.power(qq, b) * _phi(t, b)
    if np.any(zero):
        # limit p -> 0 of the general and KL branches: q**beta / beta
        out[zero] = np.power(q[zero], b) / b
    return np.maximum(out, 0.0)


def d_beta(p, q, beta):
    """Beta-divergence between the scalars `p` >= 0 and `q` > 0.

    >>> d_beta(3.0, 1.0, 2)
    2.0
    """
    b = beta_value(beta)
    return float(_d_beta_array(float(p), float(q), b))


def D_beta(V, U, beta, floor=DEFAULT_FLOOR):
    """Sum of entrywise divergences between `V` and `U`.

    Entries of `U` are raised to at least `floor` before evaluation.
    """
    V = np.asarray(V, dtype=np.float64)
    U = np.asarray(U, dtype=np.float64)
    if V.shape != U.shape:
        raise ShapeError(f"D_beta: V has shape {V.shape}, U has shape {U.shape}")
    b = beta_value(beta)
    return float(np.sum(_d_beta_array(V, np.maximum(U, floor), b)))


def scale_identity_check(p, q, c, beta, rtol=1e-10):
    """Whether ``d(c p, c q) == c**beta d(p, q)`` holds to `rtol`."""
    b = beta_value(beta)
    lhs = d_beta(c * p, c * q, b)
    rhs = c**b * d_beta(p, q, b)
    return abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs)) or lhs == rhs
