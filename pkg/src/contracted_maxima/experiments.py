"""Monte Carlo experiments: weak limit of normalised maxima and the
logarithmic (almost-sure) average along a single path.

Random streams are keyed by replicate block, and the block layout depends
on n only, so every result is bit-identical for any number of threads.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .contraction import ContractionSpec, draw, rv_indices
from .corr_models import CorrelationModel, embedding_size
from .diagnostics import hypothesis_admissible
from .gauss_path import spectral_amplitudes, synthesize_pairs
from .norming import (
    CLOSED, EXACT, MODES, NormingConstants, NormingError, closed_form_arrays,
    closed_form_constants, exact_constants, product_sf,
)
from .report import ExperimentReport
from .special_fn import gumbel_cdf
from .streams import check_seed, stream

# complex samples per block of replicate pairs
_BLOCK_BUDGET = 1 << 20
_MAX_PAIRS_PER_BLOCK = 1 << 16


def default_threads() -> int:
    env = os.environ.get("GCL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def derive_seed(master_seed: int, *key: int) -> int:
    """A 64-bit child seed, a pure function of (master_seed, key)."""
    ss = np.random.SeedSequence(entropy=check_seed(master_seed), spawn_key=tuple(int(k) for k in key))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


@dataclass(frozen=True)
class MaximaSample:
    n: int
    replicates: int
    normalized_values: np.ndarray = field(repr=False)
    constants: NormingConstants
    model: CorrelationModel
    spec: ContractionSpec
    master_seed: int


def pairs_per_block(n: int) -> int:
    return int(max(1, min(_MAX_PAIRS_PER_BLOCK, _BLOCK_BUDGET // embedding_size(n))))


def contracted_maxima(model: CorrelationModel, spec: ContractionSpec, n: int, replicates: int,
                      master_seed: int, threads: int | None = None) -> np.ndarray:
    """Raw maxima max_i S_i X_i for ``replicates`` independent (S, X) samples.

    Replicate block j (``pairs_per_block(n)`` embedding draws, two paths
    each) takes its Gaussian noise from stream (master, 2j) and its
    contraction factors from stream (master, 2j + 1).
    """
    if n < 1 or replicates < 1:
        raise ValueError("contracted_maxima: need n >= 1 and replicates >= 1")
    amp = spectral_amplitudes(model, n)
    per = pairs_per_block(n)
    total_pairs = (replicates + 1) // 2
    blocks = [(j, min(per, total_pairs - j * per)) for j in range((total_pairs + per - 1) // per)]

    def run(block):
        j, pairs = block
        x = synthesize_pairs(amp, n, pairs, stream(master_seed, 2 * j))
        if spec.kind != "one":
            x *= draw(spec, x.shape, stream(master_seed, 2 * j + 1))
        return x.max(axis=1)

    threads = threads or default_threads()
    if threads == 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, blocks))
    return np.concatenate(parts)[:replicates]


def simulate_maxima(model: CorrelationModel, spec: ContractionSpec, n: int, replicates: int,
                    constants: NormingConstants, master_seed: int,
                    threads: int | None = None) -> MaximaSample:
    """Normalised maxima (M_n* - b) / a over independent replicates."""
    if constants.n != n:
        raise ValueError(f"simulate_maxima: constants are for n={constants.n}, not n={n}")
    m = contracted_maxima(model, spec, n, replicates, master_seed, threads)
    z = (m - constants.b) / constants.a
    return MaximaSample(n, replicates, z, constants, model, spec, master_seed)


def ks_to_gumbel(sample) -> float:
    """Exact sup-distance between the empirical CDF and the Gumbel law.

    Accepts a :class:`MaximaSample` or a plain array of normalised values.
    """
    values = sample.normalized_values if isinstance(sample, MaximaSample) else np.asarray(sample, dtype=float)
    if values.size < 10:
        raise ValueError("ks_to_gumbel: need at least 10 values")
    v = np.sort(values)
    cdf = gumbel_cdf(v)
    k = v.size
    upper = np.arange(1, k + 1) / k - cdf
    lower = cdf - np.arange(k) / k
    return float(max(upper.max(), lower.max()))


def norming_for(spec: ContractionSpec, n: int, mode: str, c: float | None = None,
                gamma: float | None = None) -> NormingConstants:
    if mode == EXACT:
        return exact_constants(spec, n)
    if mode == CLOSED:
        c, gamma = _closed_params(spec, c, gamma)
        return closed_form_constants(c, gamma, n)
    raise ValueError(f"mode must be one of {MODES}")


def _closed_params(spec, c, gamma):
    idx = rv_indices(spec)
    c = idx.tail_constant if c is None else c
    gamma = idx.gamma if gamma is None else gamma
    if c is None:
        raise NormingError(f"{spec}: no exact power-tail constant; pass c explicitly")
    return float(c), float(gamma)


def weak_limit_experiment(model: CorrelationModel, spec: ContractionSpec, n_grid, replicates: int,
                          mode: str, master_seed: int, threads: int | None = None,
                          timing: bool = False) -> ExperimentReport:
    """KS distance to the Gumbel law of normalised maxima along ``n_grid``.

    Each n runs on its own child seed ``derive_seed(master_seed, n)``.
    Wall-clock times are recorded only when ``timing`` is set, so that
    reports stay byte-reproducible by default.
    """
    n_grid = [int(n) for n in n_grid]
    if not n_grid or any(n < 8 for n in n_grid) or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("weak_limit_experiment: n_grid must be strictly increasing with entries >= 8")
    if replicates < 10:
        raise ValueError("weak_limit_experiment: need replicates >= 10")
    check_seed(master_seed)
    records = []
    for n in n_grid:
        start = time.perf_counter()
        const = norming_for(spec, n, mode)
        seed = derive_seed(master_seed, n)
        sample = simulate_maxima(model, spec, n, replicates, const, seed, threads)
        rec = {
            "n": n, "replicates": replicates, "mode": mode, "ks": ks_to_gumbel(sample),
            "a": const.a, "b": const.b, "seed": seed,
            "runtime_ms": round(1e3 * (time.perf_counter() - start), 3) if timing else None,
        }
        records.append(rec)
    config = {
        "command": "weak-limit", "model": model.designation, "spec": spec.designation,
        "n_grid": n_grid, "replicates": replicates, "mode": mode, "seed": master_seed,
    }
    summary = {"hypothesis_satisfied": hypothesis_admissible(model, spec)}
    return ExperimentReport("weak-limit", config, records, summary)


@dataclass(frozen=True)
class AscltEstimate:
    n: int
    x_grid: np.ndarray
    estimates: np.ndarray
    norming_mode: str
    first_k: int
    dropped_weight: float
    heuristic: bool
    master_seed: int

    def to_report(self, model: CorrelationModel, spec: ContractionSpec) -> ExperimentReport:
        lam = gumbel_cdf(self.x_grid)
        records = [
            {"x": float(x), "estimate": float(e), "lambda_x": float(l), "abs_error": float(abs(e - l))}
            for x, e, l in zip(self.x_grid, self.estimates, lam)
        ]
        config = {
            "command": "asclt", "model": model.designation, "spec": spec.designation, "n": self.n,
            "x_grid": [float(x) for x in self.x_grid], "mode": self.norming_mode, "seed": self.master_seed,
        }
        summary = {"first_k": self.first_k, "dropped_weight": self.dropped_weight, "heuristic": self.heuristic}
        return ExperimentReport("asclt", config, records, summary)


# geometric grid ratio for exact per-k constants
EXACT_GRID_RATIO = 2.0 ** 0.125


def exact_constants_path(spec: ContractionSpec, k_first: int, n: int):
    """(a_k, b_k) for k = k_first..n from exact constants on a geometric grid,
    with b interpolated linearly in ln k and a = 1/b."""
    steps = int(math.ceil(math.log(n / k_first) / math.log(EXACT_GRID_RATIO)))
    grid = np.unique(np.round(k_first * EXACT_GRID_RATIO ** np.arange(steps + 1)).astype(np.int64))
    grid = np.unique(np.clip(np.append(grid, [k_first, n]), k_first, n))
    b_grid = np.array([exact_constants(spec, int(k)).b for k in grid])
    k = np.arange(k_first, n + 1)
    b = np.interp(np.log(k), np.log(grid), b_grid)
    return 1.0 / b, b


def first_exact_k(spec: ContractionSpec) -> int:
    """Smallest k >= 3 whose exact upper quantile is safely positive."""
    half_mass = product_sf(spec, 0.0)
    return max(3, int(math.ceil(1.25 / half_mass)))


def asclt_logavg(model: CorrelationModel, spec: ContractionSpec, n: int, x_grid, mode: str,
                 master_seed: int, c: float | None = None, gamma: float | None = None) -> AscltEstimate:
    """(1/ln n) sum_k (1/k) 1(M_k* <= a_k x + b_k) along one path of length n.

    Terms below the first k with well-defined constants (k >= 3 in closed
    form) are left out; their weight is returned as ``dropped_weight``.
    """
    if n < 100:
        raise ValueError("asclt_logavg: n must be >= 100")
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.ndim != 1 or x_grid.size == 0:
        raise ValueError("asclt_logavg: x_grid must be a non-empty 1-d sequence")
    amp = spectral_amplitudes(model, n)
    path = synthesize_pairs(amp, n, 1, stream(master_seed, 0))[0]
    if spec.kind != "one":
        path *= draw(spec, n, stream(master_seed, 1))
    running_max = np.maximum.accumulate(path)

    if mode == CLOSED:
        idx = rv_indices(spec)
        c, gamma = _closed_params(spec, c, gamma)
        k0 = 3
        a, b = closed_form_arrays(c, gamma, np.arange(k0, n + 1))
        # closed-form constants are only backed by theory for the law's own tail
        heuristic = idx.tail_constant is None or (c, gamma) != (idx.tail_constant, idx.gamma)
    elif mode == EXACT:
        k0 = first_exact_k(spec)
        a, b = exact_constants_path(spec, k0, n)
        heuristic = False
    else:
        raise ValueError(f"mode must be one of {MODES}")
    mk = running_max[k0 - 1:]
    w = 1.0 / np.arange(k0, n + 1)
    log_n = math.log(n)
    order = np.argsort(x_grid)
    est = np.empty(x_grid.size)
    for i in order:
        est[i] = np.dot(w, mk <= a * x_grid[i] + b) / log_n
    # exact monotonicity in x despite summation rounding
    est[order] = np.maximum.accumulate(est[order])
    dropped = float(np.sum(1.0 / np.arange(1, k0)) / log_n)
    return AscltEstimate(n, x_grid, est, mode, k0, dropped, heuristic, master_seed)
