"""Deterministic numerical checks of the dependence condition and tail lemmas.

Nothing here is random: every quantity is a quadrature or a closed form,
evaluated in log space wherever a Gaussian factor could underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import interpolate, special

from .contraction import ContractionSpec, rv_indices, sandwich_envelopes, survival_near_one
from .corr_models import CorrelationModel, rho
from .norming import NormingConstants, product_logsf, tail_log_integral, threshold
from .special_fn import log_gamma, std_normal_logsf

# beyond this many distinct correlation values the comparison-sum kernel is
# tabulated and interpolated instead of integrated once per lag
_MAX_EXACT_KERNELS = 2048


# -- dependence condition ---------------------------------------------------

def condition_holds(model: CorrelationModel, delta: float) -> bool:
    """Whether rho(n) (ln n)^(1+delta) -> 0, from the family's analytic rate."""
    if model.kind == "log":
        return model.exponent > 1.0 + delta
    return True


def asclt_condition_holds(model: CorrelationModel, delta: float, epsilon: float) -> bool:
    """Whether rho(n) (ln n)^(1+delta) (ln ln n)^(1+epsilon) stays bounded."""
    if model.kind == "log":
        # equality leaves an unbounded (ln ln n)^(1+epsilon) factor
        return model.exponent > 1.0 + delta
    return True


def hypothesis_admissible(model: CorrelationModel, spec: ContractionSpec) -> bool:
    """True if some delta > 2(gamma - tau) satisfies the modified Berman condition."""
    idx = rv_indices(spec)
    gap = 2.0 * (idx.gamma - idx.tau)
    if model.kind == "log":
        return model.exponent > 1.0 + gap
    return True


@dataclass(frozen=True)
class BermanCheck:
    model: CorrelationModel
    delta: float
    epsilon: float
    n_grid: np.ndarray
    seq_values: np.ndarray
    asclt_seq_values: np.ndarray
    satisfied: bool
    asclt_satisfied: bool

    @property
    def flag(self) -> str:
        return "satisfied" if self.satisfied else "violated"


def berman_sequences(model: CorrelationModel, delta: float, epsilon: float, n_grid) -> BermanCheck:
    n = np.asarray(n_grid, dtype=np.int64)
    if n.size == 0 or np.any(n < 3) or np.any(np.diff(n) <= 0):
        raise ValueError("berman_sequences: n_grid must be increasing with entries >= 3")
    if delta < 0 or not epsilon > 0:
        raise ValueError("berman_sequences: need delta >= 0 and epsilon > 0")
    ln = np.log(n.astype(float))
    seq = rho(model, n) * ln ** (1.0 + delta)
    aseq = seq * np.log(ln) ** (1.0 + epsilon)
    return BermanCheck(
        model, delta, epsilon, n, np.asarray(seq, dtype=float), np.asarray(aseq, dtype=float),
        condition_holds(model, delta), asclt_condition_holds(model, delta, epsilon),
    )


# -- comparison sum ---------------------------------------------------------

def log_gauss_kernel_mean(spec: ContractionSpec, v: float) -> float:
    """log E[exp(-v^2 / (2 S^2))] for v > 0 (the integrand vanishes at S = 0).

    Uses E g(S) = int_v^inf P(S > v/z) z exp(-z^2/2) dz.
    """

    def log_kernel(w):
        return np.log1p(w / v) - v * w - 0.5 * w * w

    return math.log(v) - 0.5 * v * v + tail_log_integral(spec, v, log_kernel, 1.0 / (v + 1.0))


def comparison_sum(model: CorrelationModel, spec: ContractionSpec, n: int, x: float,
                   constants: NormingConstants) -> float:
    """n sum_{k<n} |rho(k)| [E exp(-u^2 / (2(1+|rho(k)|) S^2))]^2 with u = a x + b.

    The double integral over (s, t) factorises, so each lag needs one
    one-dimensional quadrature.
    """
    if n < 2:
        raise ValueError("comparison_sum: n must be >= 2")
    u = float(threshold(constants, x))
    if not u > 0:
        raise ValueError(f"comparison_sum: threshold a x + b = {u} must be positive")
    r = np.abs(np.asarray(rho(model, np.arange(1, n)), dtype=float))
    active = r > 0
    if not active.any():
        return 0.0
    r = r[active]

    def log_j(rv):
        return 2.0 * log_gauss_kernel_mean(spec, u / math.sqrt(1.0 + rv))

    # lags where 1 + |rho| rounds to 1 share the uncorrelated kernel
    flat = (1.0 + r) == 1.0
    logj = np.empty_like(r)
    if flat.any():
        logj[flat] = log_j(0.0)
    rest = r[~flat]
    if rest.size:
        uniq, inverse = np.unique(rest, return_inverse=True)
        if uniq.size <= _MAX_EXACT_KERNELS:
            vals = np.array([log_j(x_) for x_ in uniq])
        else:
            nodes = np.linspace(uniq[0], uniq[-1], 513)
            spline = interpolate.CubicSpline(nodes, [log_j(x_) for x_ in nodes])
            vals = spline(uniq)
        logj[~flat] = vals[inverse]
    terms = math.log(n) + np.log(r) + logj
    return float(np.exp(special.logsumexp(terms)))


# -- Weibull-type tail asymptotic ------------------------------------------

@dataclass(frozen=True)
class TailCheckSpec:
    spec: ContractionSpec
    q: float
    theta_n: float
    u_grid: tuple
    theta_bounds: tuple = (1e-6, 1e6)

    def __post_init__(self):
        lo, hi = self.theta_bounds
        if not self.q > 0:
            raise ValueError("TailCheckSpec: q must be positive")
        if not (0 < lo < hi < math.inf and lo <= self.theta_n <= hi):
            raise ValueError("TailCheckSpec: theta_n must lie in finite positive bounds")
        u = np.asarray(self.u_grid, dtype=float)
        if u.size == 0 or np.any(u <= 0) or np.any(np.diff(u) <= 0):
            raise ValueError("TailCheckSpec: u_grid must be positive and increasing")


class DegenerateTail(ArithmeticError):
    """The asymptotic right-hand side underflowed."""


def tail_ratio_check(check: TailCheckSpec) -> np.ndarray:
    """Ratio of P(S Z > u) to Gamma(gamma+1) exp(-theta u^q) P(S > 1 - 1/(q theta u^q)),
    where P(Z > z) = exp(-theta z^q).  The common exp(-theta u^q) is cancelled."""
    spec, q, th = check.spec, check.q, check.theta_n
    idx = rv_indices(spec)
    if not (idx.gamma > 0 or idx.tail_constant is not None):
        raise ValueError(f"tail_ratio_check: {spec} is not regularly varying with known index")
    lg = float(log_gamma(1.0 + idx.gamma))
    out = []
    for u in np.asarray(check.u_grid, dtype=float):
        uq = u ** q

        def log_kernel(w, u=u, uq=uq):
            lp = np.log1p(w / u)
            return (q - 1.0) * lp - th * uq * np.expm1(q * lp)

        rate = th * q * uq / u
        log_lhs = math.log(rate) + tail_log_integral(spec, u, log_kernel, 1.0 / (rate + 1.0 / u))
        surv = float(survival_near_one(spec, 1.0 / (q * th * uq)))
        if not surv > 0:
            raise DegenerateTail(f"tail_ratio_check: survival underflow at u = {u}")
        out.append(math.exp(log_lhs - lg - math.log(surv)))
    return np.array(out)


# -- Karamata-type bound ----------------------------------------------------

@dataclass(frozen=True)
class KaramataReport:
    constant: float
    violations: int
    holds: bool
    u_grid: np.ndarray
    ratios: np.ndarray


def karamata_bound_check(spec: ContractionSpec, epsilon: float, u_grid) -> KaramataReport:
    """Check P(S > 1 - 1/u) <= c' u^-(gamma - epsilon) for u in ``u_grid`` (u >= 1).

    c' is the largest ratio seen on the grid plus 10%; the bound is then
    re-tested on a ten times denser grid spanning the same range.
    """
    g = rv_indices(spec).gamma
    if not g > 0:
        raise ValueError(f"karamata_bound_check: {spec} has index 0; need gamma > 0")
    if not 0 < epsilon < g:
        raise ValueError(f"karamata_bound_check: epsilon must lie in (0, {g})")
    u = np.asarray(u_grid, dtype=float)
    if u.size == 0 or np.any(u < 1):
        raise ValueError("karamata_bound_check: u_grid entries must be >= 1")
    ratios = survival_near_one(spec, 1.0 / u) * u ** (g - epsilon)
    c = 1.1 * float(ratios.max())
    dense = np.geomspace(u.min(), u.max(), 10 * u.size)
    viol = int(np.sum(survival_near_one(spec, 1.0 / dense) > c * dense ** (epsilon - g)))
    return KaramataReport(c, viol, viol == 0, u, ratios)


# -- sandwich of the product tails -----------------------------------------

@dataclass(frozen=True)
class SandwichReport:
    u_grid: np.ndarray
    log_value: np.ndarray
    log_lower: np.ndarray
    log_upper: np.ndarray
    log_gaussian: np.ndarray
    threshold: Optional[float]
    gaussian_bound_holds: bool
    nu: float

    @property
    def holds(self) -> bool:
        return self.threshold is not None


def sandwich_product_check(spec: ContractionSpec, u_grid, rtol: float = 1e-9) -> SandwichReport:
    """Compare P(SX > u) with the product tails of its power-tail envelopes.

    ``threshold`` is the smallest grid u from which both inequalities hold
    at every larger grid point (None if they fail at the last point).
    Comparisons allow a relative slack ``rtol`` for quadrature error.
    """
    env = sandwich_envelopes(spec)
    u = np.asarray(u_grid, dtype=float)
    if u.size == 0 or np.any(u <= 0) or np.any(np.diff(u) <= 0):
        raise ValueError("sandwich_product_check: u_grid must be positive and increasing")
    val = np.array([product_logsf(spec, x) for x in u])
    hi = np.array([product_logsf(env.upper, x) for x in u])
    lo = np.array([product_logsf(env.lower, x) for x in u])
    gauss = np.asarray(std_normal_logsf(u), dtype=float)
    slack = math.log1p(rtol)
    ok = (lo <= val + slack) & (hi >= val - slack)
    thr = None
    for i in range(u.size - 1, -1, -1):
        if not ok[i]:
            break
        thr = float(u[i])
    return SandwichReport(u, val, lo, hi, gauss, thr, bool(np.all(val <= gauss + slack)), env.nu)
