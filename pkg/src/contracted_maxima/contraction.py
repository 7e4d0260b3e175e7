"""Contraction factors S on [0, 1] with upper endpoint 1.

Supported laws (designation strings in parentheses)::

    Degenerate1      S = 1                                   (one)
    Beta(a, b)       density x**(a-1) (1-x)**(b-1) / B(a, b) (beta:A:B)
    AtomMixture(c,s) P(S = 1) = c, otherwise uniform on [0,s] (atom:C:S)
    PowerTail(c, g)  P(S > 1 - t) = min(1, c t**g), t in (0,1],
                     remaining mass 1 - min(c, 1) at 0        (ptail:C:G)
    Discrete         finitely many atoms, the largest at 1    (disc:V1:P1:V2:P2...)

Survival functions are parametrised both by the threshold u and by the
distance to the endpoint t = 1 - u; the latter keeps relative accuracy
when t is tiny, which is where all the extreme-value action happens.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .streams import stream


class NoEnvelope(ValueError):
    """No power-tail envelope could be certified near the endpoint."""


@dataclass(frozen=True)
class ContractionSpec:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        k, p = self.kind, self.params
        if k == "one":
            ok = p == ()
        elif k == "beta":
            ok = len(p) == 2 and p[0] > 0 and p[1] > 0
        elif k == "atom":
            ok = len(p) == 2 and 0 < p[0] < 1 and 0 < p[1] < 1
        elif k == "ptail":
            # c > 1 is allowed for envelopes: the law is then supported on
            # [1 - c**(-1/g), 1] with no mass at 0.
            ok = len(p) == 2 and p[0] > 0 and p[1] >= 0 and (p[1] > 0 or p[0] <= 1)
        elif k == "disc":
            vals, probs = p[0::2], p[1::2]
            ok = (
                len(p) >= 2 and len(p) % 2 == 0
                and all(0 <= v <= 1 for v in vals) and max(vals) == 1
                and len(set(vals)) == len(vals)
                and all(q > 0 for q in probs) and abs(sum(probs) - 1) < 1e-12
            )
        else:
            raise ValueError(f"unknown contraction kind {k!r}")
        if not ok:
            raise ValueError(f"invalid parameters {p} for contraction {k!r}")

    # constructors mirroring the designation strings
    @classmethod
    def degenerate(cls):
        return cls("one")

    @classmethod
    def beta(cls, a: float, b: float):
        return cls("beta", (float(a), float(b)))

    @classmethod
    def atom_mixture(cls, c: float, s: float):
        return cls("atom", (float(c), float(s)))

    @classmethod
    def power_tail(cls, c: float, gamma: float):
        return cls("ptail", (float(c), float(gamma)))

    @classmethod
    def discrete(cls, values, probs):
        flat = []
        for v, q in sorted(zip(values, probs)):
            flat += [float(v), float(q)]
        return cls("disc", tuple(flat))

    @property
    def designation(self) -> str:
        if self.kind == "one":
            return "one"
        return ":".join([self.kind] + [repr(x) for x in self.params])

    def __str__(self):
        return self.designation

    def atoms(self) -> list[tuple[float, float]]:
        """Point masses (location, probability) at strictly positive locations."""
        k, p = self.kind, self.params
        if k == "one":
            return [(1.0, 1.0)]
        if k == "atom":
            return [(1.0, p[0])]
        if k == "ptail" and p[1] == 0:
            return [(1.0, p[0])]
        if k == "disc":
            return [(v, q) for v, q in zip(p[0::2], p[1::2]) if v > 0]
        return []

    def jump_points(self) -> list[float]:
        """Distances t = 1 - u in (0, 1) where survival_near_one is not smooth."""
        k, p = self.kind, self.params
        pts = []
        if k == "atom":
            pts.append(1.0 - p[1])
        elif k == "ptail" and p[1] > 0 and p[0] > 1:
            pts.append(p[0] ** (-1.0 / p[1]))
        elif k == "disc":
            pts += [1.0 - v for v in p[0::2] if 0 < v < 1]
        return sorted(x for x in pts if 0.0 < x < 1.0)


def parse_spec(text: str) -> ContractionSpec:
    """Parse ``one``, ``beta:A:B``, ``atom:C:S``, ``ptail:C:GAMMA`` or ``disc:...``."""
    parts = text.strip().split(":")
    kind, args = parts[0].lower(), parts[1:]
    arity = {"one": 0, "beta": 2, "atom": 2, "ptail": 2}
    if kind not in arity and kind != "disc":
        raise ValueError(f"unknown contraction {text!r}; expected one, beta:A:B, atom:C:S, ptail:C:G or disc:V:P...")
    if kind in arity and len(args) != arity[kind]:
        raise ValueError(f"contraction {kind!r} takes {arity[kind]} parameter(s), got {text!r}")
    try:
        values = tuple(float(a) for a in args)
    except ValueError:
        raise ValueError(f"non-numeric parameter in contraction designation {text!r}") from None
    if kind == "disc":
        return ContractionSpec.discrete(values[0::2], values[1::2])
    return ContractionSpec(kind, values)


def survival_near_one(spec: ContractionSpec, t):
    """P(S > 1 - t) for t in [0, 1]; zero at t = 0."""
    t = np.asarray(t, dtype=float)
    k, p = spec.kind, spec.params
    pos = t > 0
    if k == "one":
        out = np.where(pos, 1.0, 0.0)
    elif k == "beta":
        a, b = p
        # P(S > 1 - t) = P(1 - S < t) and 1 - S ~ Beta(b, a)
        out = special.betainc(b, a, np.clip(t, 0.0, 1.0))
    elif k == "atom":
        c, s = p
        u = 1.0 - t
        cont = (1.0 - c) * np.clip(1.0 - u / s, 0.0, 1.0)
        out = np.where(pos, c + cont, 0.0)
    elif k == "ptail":
        c, g = p
        if g == 0:
            out = np.where(pos, min(c, 1.0), 0.0)
        else:
            out = np.minimum(1.0, c * np.power(np.clip(t, 0.0, 1.0), g))
    else:
        u = 1.0 - t
        out = np.zeros_like(t)
        for v, q in zip(p[0::2], p[1::2]):
            out = out + q * (v > u)
    out = np.where(t >= 1.0, 1.0 - _mass_at_zero(spec), out) if k != "beta" else out
    return out.item() if out.ndim == 0 else out


def _mass_at_zero(spec: ContractionSpec) -> float:
    k, p = spec.kind, spec.params
    if k == "ptail":
        return max(0.0, 1.0 - p[0])
    if k == "disc":
        return sum(q for v, q in zip(p[0::2], p[1::2]) if v == 0)
    return 0.0


def survival(spec: ContractionSpec, u):
    """P(S > u); 1 for u < 0 and 0 for u >= 1."""
    u = np.asarray(u, dtype=float)
    inside = survival_near_one(spec, np.clip(1.0 - u, 0.0, 1.0))
    out = np.where(u < 0.0, 1.0, np.where(u >= 1.0, 0.0, inside))
    return out.item() if out.ndim == 0 else out


def sample(spec: ContractionSpec, n: int, seed: int) -> np.ndarray:
    """n independent draws of S, deterministic in ``seed``."""
    if n < 1:
        raise ValueError("sample: n must be >= 1")
    return draw(spec, n, stream(seed))


def draw(spec: ContractionSpec, size, gen: np.random.Generator) -> np.ndarray:
    k, p = spec.kind, spec.params
    if k == "one":
        return np.ones(size)
    if k == "beta":
        return gen.beta(p[0], p[1], size)
    if k == "atom":
        c, s = p
        v = gen.random(size)
        # v < c -> atom at 1; otherwise (v - c)/(1 - c) is uniform on [0, 1)
        return np.where(v < c, 1.0, s * (v - c) / (1.0 - c))
    if k == "ptail":
        c, g = p
        v = gen.random(size)
        if g == 0:
            return np.where(v < c, 1.0, 0.0)
        with np.errstate(divide="ignore"):
            return np.where(v < c, 1.0 - np.power(v / c, 1.0 / g), 0.0)
    vals = np.array(spec.params[0::2])
    probs = np.array(spec.params[1::2])
    return vals[np.minimum(np.searchsorted(np.cumsum(probs), gen.random(size), side="right"), vals.size - 1)]


@dataclass(frozen=True)
class RvIndices:
    gamma: float
    tau: float
    tail_constant: Optional[float] = None


def rv_indices(spec: ContractionSpec) -> RvIndices:
    """Regular-variation indices at 1 and, when exact, the tail constant c in
    P(S > 1 - t) ~ c t**gamma."""
    k, p = spec.kind, spec.params
    if k == "one":
        return RvIndices(0.0, 0.0, 1.0)
    if k == "atom":
        return RvIndices(0.0, 0.0, p[0])
    if k == "ptail":
        return RvIndices(p[1], p[1], p[0])
    if k == "beta":
        a, b = p
        # density near 1 is (1-x)**(b-1) / B(a, b)
        return RvIndices(b, b, math.exp(-special.betaln(a, b)) / b)
    return RvIndices(0.0, 0.0, dict(spec.atoms()).get(1.0))


@dataclass(frozen=True)
class Envelopes:
    upper: ContractionSpec
    lower: ContractionSpec
    nu: float

    def __iter__(self):
        return iter((self.upper, self.lower))


def sandwich_envelopes(spec: ContractionSpec, nu: float = 0.9, grid_points: int = 10_000) -> Envelopes:
    """Power-tail laws bounding P(S > u) from above and below on (nu, 1).

    The constants are the extreme values of P(S > 1 - t) / t**gamma over a
    dense grid of t in (0, 1 - nu], combined with the limit at t -> 0, and
    the bounds are then re-checked on the same grid.  If the check fails,
    nu is moved towards 1 (up to 0.99) before giving up.
    """
    idx = rv_indices(spec)
    if idx.gamma != idx.tau:
        raise NoEnvelope(f"{spec}: distinct indices are not supported")
    g = idx.gamma
    for trial_nu in (nu, 0.95, 0.99):
        if trial_nu < nu:
            continue
        t = np.geomspace(1e-8, 1.0 - trial_nu, grid_points)
        t[-1] = 1.0 - trial_nu
        surv = survival_near_one(spec, t)
        if g == 0:
            ratio = surv
        else:
            ratio = surv / np.power(t, g)
        limits = [idx.tail_constant] if idx.tail_constant is not None else []
        c_hi = float(max(ratio.max(), *limits))
        c_lo = float(min(ratio.min(), *limits))
        if c_lo <= 0:
            continue
        upper = ContractionSpec.power_tail(c_hi, g)
        lower = ContractionSpec.power_tail(c_lo, g)
        ok_hi = np.all(survival_near_one(upper, t) >= surv * (1 - 1e-12))
        ok_lo = np.all(survival_near_one(lower, t) <= surv * (1 + 1e-12))
        if ok_hi and ok_lo:
            return Envelopes(upper, lower, trial_nu)
    raise NoEnvelope(f"{spec}: could not certify power-tail envelopes on any (nu, 1) with nu <= 0.99")
