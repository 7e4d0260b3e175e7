"""Exact sampling of standard stationary Gaussian sequences.

Paths are synthesised by circulant embedding: with ``lam`` the eigenvalues
of the circulant extension of ``rho(0..n-1)`` and ``W = Z1 + i Z2`` a vector
of independent complex normals, ``FFT(sqrt(lam / m) * W)`` has real and
imaginary parts that are two independent exact draws.  Both are used.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .corr_models import CLIP_TOLERANCE, CorrelationModel, validate_psd
from .streams import stream


class NonEmbeddableCovariance(ValueError):
    """The circulant embedding has too much negative spectral mass."""


@dataclass(frozen=True)
class GaussianPath:
    values: np.ndarray = field(repr=False)
    model: CorrelationModel
    seed: int

    def __len__(self):
        return self.values.size


def spectral_amplitudes(model: CorrelationModel, n: int) -> np.ndarray:
    """sqrt(lam / m) for the embedding of length-n paths, after clip checks."""
    report = validate_psd(model, n)
    if report.clipped_mass > CLIP_TOLERANCE:
        raise NonEmbeddableCovariance(
            f"{model}: circulant embedding for n={n} has clipped mass "
            f"{report.clipped_mass:.3g} > {CLIP_TOLERANCE:g} (min eigenvalue {report.min_eigenvalue:.3g})"
        )
    lam = report.eigenvalues
    if report.min_eigenvalue < 0.0:
        warnings.warn(
            f"{model}: clipping negative eigenvalues (relative mass {report.clipped_mass:.2e})",
            RuntimeWarning,
            stacklevel=2,
        )
        lam = np.clip(lam, 0.0, None)
    return np.sqrt(lam / lam.size)


def synthesize_pairs(amplitudes: np.ndarray, n: int, pairs: int, gen: np.random.Generator,
                     workers: int = 1) -> np.ndarray:
    """Draw ``2 * pairs`` paths of length n; returns shape (2 * pairs, n).

    Row ``2p`` is the real part and row ``2p + 1`` the imaginary part of
    the p-th synthesis.
    """
    m = amplitudes.size
    z = gen.standard_normal((pairs, 2, m))
    w = (z[:, 0, :] + 1j * z[:, 1, :]) * amplitudes
    y = scipy.fft.fft(w, axis=-1, workers=workers)[:, :n]
    out = np.empty((2 * pairs, n))
    out[0::2] = y.real
    out[1::2] = y.imag
    return out


def sample_path(model: CorrelationModel, n: int, seed: int) -> GaussianPath:
    """One exact draw of ``X_1..X_n``; deterministic in (model, n, seed)."""
    if n < 1:
        raise ValueError("sample_path: n must be >= 1")
    amp = spectral_amplitudes(model, n)
    values = synthesize_pairs(amp, n, 1, stream(seed))[0]
    return GaussianPath(values, model, seed)


def sample_path_pair(model: CorrelationModel, n: int, seed: int) -> tuple[GaussianPath, GaussianPath]:
    """The two independent paths produced by a single embedding draw."""
    if n < 1:
        raise ValueError("sample_path_pair: n must be >= 1")
    amp = spectral_amplitudes(model, n)
    a, b = synthesize_pairs(amp, n, 1, stream(seed))
    return GaussianPath(a, model, seed), GaussianPath(b, model, seed)


def sample_iid_normals(n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError("sample_iid_normals: n must be >= 1")
    return stream(seed).standard_normal(n)


def prefix_maxima(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("prefix_maxima: empty input")
    return np.maximum.accumulate(values)
