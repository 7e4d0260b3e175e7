"""Norming constants for maxima of S*X.

The product tail is evaluated through

    P(SX > u) = int_u^inf P(S > u/z) phi(z) dz
              = phi(u) * int_0^inf P(S > 1 - w/(u+w)) exp(-u w - w^2/2) dw,

so the survival of S is only ever needed in the form P(S > 1 - t) with t
computed directly (no cancellation), atoms of S appear as jumps at known
breakpoints, and the Gaussian factor phi(u) is kept in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .contraction import ContractionSpec, survival, survival_near_one
from .quadrature import integrate
from .special_fn import LOG_SQRT_2PI, log_gamma, std_normal_isf, std_normal_logsf

EXACT = "exact"
CLOSED = "closed"
MODES = (EXACT, CLOSED)

_TAIL_EPS = 1e-17


class NormingError(ArithmeticError):
    """Norming constants could not be computed (degenerate tail or bad bracket)."""


@dataclass(frozen=True)
class NormingConstants:
    n: int
    a: float
    b: float
    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.a > 0:
            raise ValueError("norming scale a must be positive")

    def threshold(self, x):
        return threshold(self, x)


def threshold(constants: NormingConstants, x):
    """u_n(x) = a x + b."""
    if np.ndim(x):
        x = np.asarray(x, dtype=float)
    return constants.a * x + constants.b


def tail_log_integral(spec: ContractionSpec, u: float, log_kernel, scale: float, epsrel: float = 1e-12) -> float:
    """log of int_0^inf P(S > 1 - w/(u+w)) exp(log_kernel(w)) dw.

    ``log_kernel`` must vanish at w = 0 and eventually decrease to -inf;
    ``scale`` is its characteristic width near w = 0.  The range is covered
    by geometrically growing pieces, split at the jumps of the survival, and
    truncated once the kernel mass left is below 1e-17 of the running total.
    """
    jumps = [u * t / (1.0 - t) for t in spec.jump_points()]

    def f(w):
        return survival_near_one(spec, w / (u + w)) * np.exp(log_kernel(w))

    total = 0.0
    left = 0.0
    right = scale
    pieces = 0
    while True:
        pts = [left] + [j for j in jumps if left < j < right] + [right]
        val, _ = integrate(f, pts[:-1], pts[1:], epsrel=epsrel * 0.1)
        total += val
        pieces += 1
        tail_bound = math.exp(float(log_kernel(np.array([right]))[0])) * (right + scale)
        if pieces >= 4 and total > 0 and tail_bound < _TAIL_EPS * total:
            break
        if pieces > 200:
            break
        left, right = right, 2.0 * right
    if total <= 0.0:
        return -math.inf
    return math.log(total)


def product_logsf(spec: ContractionSpec, u: float) -> float:
    """log P(SX > u) for u > 0."""
    u = float(u)
    if not u > 0:
        raise ValueError("product_logsf: u must be positive")

    def log_kernel(w):
        return -u * w - 0.5 * w * w

    scale = 1.0 / (u + 1.0)
    return -0.5 * u * u - LOG_SQRT_2PI + tail_log_integral(spec, u, log_kernel, scale)


def product_sf(spec: ContractionSpec, u: float) -> float:
    """P(SX > u) with X standard normal independent of S.

    For u <= 0 the symmetry of X gives P(SX > u) = 1 - P(SX > -u) and
    P(SX > 0) = P(S > 0) / 2.
    """
    u = float(u)
    if u > 0:
        return math.exp(product_logsf(spec, u))
    pos = float(survival(spec, 0.0))
    if u == 0:
        return 0.5 * pos
    return 1.0 - math.exp(product_logsf(spec, -u))


def exact_constants(spec: ContractionSpec, n: int) -> NormingConstants:
    """b = G^{-1}(1 - 1/n) for G the law of SX, and a = 1/b."""
    if n < 3:
        raise ValueError("exact_constants: n must be >= 3")
    target = -math.log(n)

    def f(u):
        return product_logsf(spec, u) - target

    # P(SX > u) <= P(X > u); nudge so rounding cannot put the root outside
    hi = float(std_normal_isf(1.0 / n)) * (1.0 + 1e-9)
    lo = 0.5 * hi
    while f(lo) < 0:
        lo *= 0.5
        if lo < 1e-12:
            raise NormingError(
                f"{spec}: P(SX > 0) = {0.5 * float(survival(spec, 0.0)):.4g} is below 1/n = {1 / n:.4g}; "
                "the upper quantile is not positive"
            )
    if f(hi) > 0:
        raise NormingError(f"{spec}: product tail exceeds the Gaussian tail at u = {hi}")
    b = optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    return NormingConstants(n=n, a=1.0 / b, b=b, mode=EXACT)


def closed_form_constants(c: float, gamma: float, n: int) -> NormingConstants:
    """Asymptotic constants for P(S > 1 - t) ~ c t**gamma."""
    if n < 3:
        raise ValueError("closed_form_constants: n must be >= 3")
    if not c > 0 or gamma < 0:
        raise ValueError("closed_form_constants: need c > 0 and gamma >= 0")
    a, b = closed_form_arrays(c, gamma, np.array([n], dtype=float))
    return NormingConstants(n=n, a=float(a[0]), b=float(b[0]), mode=CLOSED)


def closed_form_arrays(c: float, gamma: float, n):
    """Vectorised closed-form (a_n, b_n) over an array of n >= 3."""
    n = np.asarray(n, dtype=float)
    log_varpi = math.log(c) - LOG_SQRT_2PI + float(log_gamma(1.0 + gamma))
    two_log_n = 2.0 * np.log(n)
    root = np.sqrt(two_log_n)
    b = root + (log_varpi - 0.5 * (2.0 * gamma + 1.0) * (np.log(np.log(n)) + math.log(2.0))) / root
    return 1.0 / root, b


def classical_constants(n: int) -> NormingConstants:
    """Textbook Gaussian constants, kept separate as an identity check."""
    root = math.sqrt(2.0 * math.log(n))
    b = root - 0.5 * (math.log(math.log(n)) + math.log(4.0 * math.pi)) / root
    return NormingConstants(n=n, a=1.0 / root, b=b, mode=CLOSED)
