"""Scalar special functions for Gaussian and Gumbel tails.

All functions accept scalars or arrays and broadcast like numpy ufuncs.
The heavy lifting is done by ``scipy.special`` (Cephes), which already
computes the normal tail through ``erfc`` and is accurate to a few ulp
far into the tail, so we only add the log-space variants and the domain
checks the rest of the package relies on.
"""
from __future__ import annotations

import numpy as np
from scipy import special

LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def _scalar_or_array(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def std_normal_sf(u):
    """Upper tail 1 - Phi(u) of the standard normal law."""
    return _scalar_or_array(special.ndtr(-np.asarray(u, dtype=float)))


def std_normal_logsf(u):
    """log(1 - Phi(u)); finite for all finite u (no underflow at u = 40)."""
    return _scalar_or_array(special.log_ndtr(-np.asarray(u, dtype=float)))


def std_normal_logpdf(u):
    u = np.asarray(u, dtype=float)
    return _scalar_or_array(-0.5 * u * u - LOG_SQRT_2PI)


def std_normal_quantile(p):
    """Inverse of Phi on (0, 1).

    Raises
    ------
    ValueError
        If any ``p`` lies outside the open interval (0, 1).
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("std_normal_quantile: p must lie in (0, 1)")
    return _scalar_or_array(special.ndtri(p))


def std_normal_isf(q):
    """Upper-tail quantile: the u with 1 - Phi(u) = q, accurate for tiny q."""
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0.0) & (q < 1.0))):
        raise ValueError("std_normal_isf: q must lie in (0, 1)")
    return _scalar_or_array(-special.ndtri(q))


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise ValueError("log_gamma: x must be positive")
    return _scalar_or_array(special.gammaln(x))


def gumbel_cdf(x):
    """Standard Gumbel distribution function exp(-exp(-x))."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return _scalar_or_array(np.exp(-np.exp(-x)))


def gumbel_quantile(p):
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("gumbel_quantile: p must lie in (0, 1)")
    return _scalar_or_array(-np.log(-np.log(p)))
