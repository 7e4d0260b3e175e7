"""Autocorrelation families for standard stationary Gaussian sequences.

Four parametric families are supported::

    iid             rho(k) = 0                        (k >= 1)
    ar1:THETA       rho(k) = THETA**k
    pow:THETA:ALPHA rho(k) = THETA * (1 + k)**(-ALPHA)
    log:THETA:BETA  rho(k) = THETA * log(k + e)**(-BETA)

with rho(0) = 1 in every case.  ``validate_psd`` inspects the circulant
embedding used by :mod:`contracted_maxima.gauss_path` for exact sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

KINDS = ("iid", "ar1", "pow", "log")


@dataclass(frozen=True)
class CorrelationModel:
    kind: str
    theta: float = 0.0
    exponent: float = 0.0  # alpha for "pow", beta for "log"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown correlation model kind {self.kind!r}")
        if self.kind == "iid":
            return
        if not -1.0 < self.theta < 1.0:
            raise ValueError(f"{self.kind}: theta must lie in (-1, 1), got {self.theta}")
        if self.kind in ("pow", "log") and not self.exponent > 0.0:
            raise ValueError(f"{self.kind}: decay exponent must be positive, got {self.exponent}")

    @classmethod
    def iid(cls) -> "CorrelationModel":
        return cls("iid")

    @classmethod
    def ar1(cls, theta: float) -> "CorrelationModel":
        return cls("ar1", theta)

    @classmethod
    def power_decay(cls, theta: float, alpha: float) -> "CorrelationModel":
        return cls("pow", theta, alpha)

    @classmethod
    def log_decay(cls, theta: float, beta: float) -> "CorrelationModel":
        return cls("log", theta, beta)

    @property
    def designation(self) -> str:
        if self.kind == "iid":
            return "iid"
        if self.kind == "ar1":
            return f"ar1:{self.theta!r}"
        return f"{self.kind}:{self.theta!r}:{self.exponent!r}"

    def __str__(self):
        return self.designation


def parse_model(text: str) -> CorrelationModel:
    """Parse a designation string such as ``ar1:0.5`` or ``log:0.9:1.5``."""
    parts = text.strip().split(":")
    kind, args = parts[0].lower(), parts[1:]
    arity = {"iid": 0, "ar1": 1, "pow": 2, "log": 2}
    if kind not in arity:
        raise ValueError(f"unknown model {text!r}; expected iid, ar1:T, pow:T:A or log:T:B")
    if len(args) != arity[kind]:
        raise ValueError(f"model {kind!r} takes {arity[kind]} parameter(s), got {text!r}")
    try:
        values = [float(a) for a in args]
    except ValueError:
        raise ValueError(f"non-numeric parameter in model designation {text!r}") from None
    return CorrelationModel(kind, *values)


def rho(model: CorrelationModel, k):
    """Autocorrelation at lag(s) ``k`` (scalar or integer array, k >= 0)."""
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise ValueError("rho: lag must be non-negative")
    kf = k_arr.astype(float)
    if model.kind == "iid":
        out = np.zeros_like(kf)
    elif model.kind == "ar1":
        out = np.power(model.theta, kf)
    elif model.kind == "pow":
        out = model.theta * np.power(1.0 + kf, -model.exponent)
    else:
        out = model.theta * np.power(np.log(kf + math.e), -model.exponent)
    out = np.where(k_arr == 0, 1.0, out)
    return out.item() if out.ndim == 0 else out


def embedding_size(n: int) -> int:
    """Smallest power of two that is >= 2(n - 1) (and >= 1)."""
    target = max(2 * (n - 1), 1)
    return 1 << (target - 1).bit_length()


def circulant_first_row(model: CorrelationModel, n: int) -> np.ndarray:
    m = embedding_size(n)
    j = np.arange(m)
    return np.asarray(rho(model, np.minimum(j, m - j)), dtype=float)


def circulant_eigenvalues(model: CorrelationModel, n: int) -> np.ndarray:
    # The first row is symmetric, so its DFT is real up to rounding.
    return scipy.fft.fft(circulant_first_row(model, n)).real


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    embedding_size: int
    min_eigenvalue: float
    clipped_mass: float
    eigenvalues: np.ndarray = field(repr=False, compare=False)

    @property
    def embeddable(self) -> bool:
        return self.clipped_mass <= CLIP_TOLERANCE


CLIP_TOLERANCE = 1e-8


def validate_psd(model: CorrelationModel, n: int) -> SpectrumReport:
    """Report on the nonnegative-definiteness of the minimal circulant embedding.

    ``clipped_mass`` is the total magnitude of the negative eigenvalues
    relative to the total magnitude of all eigenvalues.
    """
    if n < 1:
        raise ValueError("validate_psd: n must be >= 1")
    lam = circulant_eigenvalues(model, n)
    neg = np.abs(lam[lam < 0]).sum()
    total = np.abs(lam).sum()
    return SpectrumReport(
        n=n,
        embedding_size=lam.size,
        min_eigenvalue=float(lam.min()),
        clipped_mass=float(neg / total),
        eigenvalues=lam,
    )
