"""Closed-form partial sums over residue classes.

All helpers take integer arrays ``n`` and return sums over ``1 <= i <= n - 1``
so that differences of two calls give window sums.
"""

from __future__ import annotations

from math import comb

import numpy as np
from scipy.special import bernoulli, digamma, gammaln

_STIRLING_TERMS = 10
_STIRLING_CUTOFF = 30.0
_BERNOULLI = bernoulli(_STIRLING_TERMS + 1)


def _bernoulli_poly(order: int, x: float) -> float:
    return sum(comb(order, k) * _BERNOULLI[k] * x ** (order - k) for k in range(order + 1))


def lgamma_diff(z, a: float, b: float):
    """Return ``lgamma(z + a) - lgamma(z + b)`` without cancellation for large z."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < _STIRLING_CUTOFF
    if np.any(small):
        zs = z[small]
        out[small] = gammaln(zs + a) - gammaln(zs + b)
    if np.any(~small):
        zl = z[~small]
        acc = (a - b) * np.log(zl)
        zpow = np.ones_like(zl)
        for k in range(1, _STIRLING_TERMS + 1):
            zpow = zpow * zl
            coef = (_bernoulli_poly(k + 1, a) - _bernoulli_poly(k + 1, b)) / (k * (k + 1))
            acc = acc + (-1) ** (k + 1) * coef / zpow
        out[~small] = acc
    return out


def residue_count(n, r: int, p: int):
    """Number of ``i`` in ``[1, n-1]`` with ``i % p == r``."""
    n = np.asarray(n, dtype=np.int64)
    cnt = (n - r + p - 1) // p
    cnt = np.maximum(cnt, 0)
    if r == 0:
        cnt = np.maximum(cnt - 1, 0)
    return cnt


def _first_member(r: int, p: int) -> int:
    return r if r >= 1 else p


def residue_harmonic(n, r: int, p: int):
    """Sum of ``1/i`` over ``i`` in ``[1, n-1]`` with ``i % p == r``."""
    k = residue_count(n, r, p).astype(float)
    beta = _first_member(r, p) / p
    return (digamma(k + beta) - digamma(beta)) / p


def residue_log(n, r: int, p: int):
    """Sum of ``log(1 + 1/i)`` over ``i`` in ``[1, n-1]`` with ``i % p == r``."""
    k = residue_count(n, r, p).astype(float)
    first = _first_member(r, p)
    alpha = (first + 1) / p
    beta = first / p
    return lgamma_diff(k, alpha, beta) - (gammaln(alpha) - gammaln(beta))


def harmonic(n):
    """``H_{n-1} = sum_{i=1}^{n-1} 1/i``."""
    n = np.asarray(n, dtype=float)
    return digamma(np.maximum(n, 1.0)) + np.euler_gamma


def log_weight(i):
    i = np.asarray(i, dtype=float)
    return np.log1p(1.0 / i)
