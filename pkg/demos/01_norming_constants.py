"""
Norming constants for contracted Gaussian maxima
================================================

Multiplying each Gaussian variable by an independent factor S in [0, 1]
thins the upper tail.  How much depends on how much mass S puts near 1.
This walk-through compares the exact quantile constants with the closed
form for a few contraction laws.
"""

# %%
import numpy as np

from contracted_maxima.contraction import ContractionSpec, rv_indices
from contracted_maxima.norming import closed_form_constants, exact_constants, product_sf
from contracted_maxima.special_fn import std_normal_sf

specs = {
    "S = 1": ContractionSpec.degenerate(),
    "Beta(2, 3)": ContractionSpec.beta(2, 3),
    "atom 0.3 at 1": ContractionSpec.atom_mixture(0.3, 0.5),
    "P(S > 1-t) = t": ContractionSpec.power_tail(1.0, 1.0),
}

# %% [markdown]
# P(SX > u) relative to the Gaussian tail.  A heavier atom at 1 keeps a
# constant fraction; a power tail of index gamma costs about u^(-2 gamma).

# %%
u = np.array([1.0, 2.0, 4.0, 8.0])
for name, spec in specs.items():
    ratio = [product_sf(spec, x) / std_normal_sf(x) for x in u]
    print(f"{name:>16}: " + "  ".join(f"{r:9.3e}" for r in ratio))

# %% [markdown]
# Exact b_n = G^{-1}(1 - 1/n) against the closed form built from the tail
# constant c and index gamma of S at 1.

# %%
for name, spec in specs.items():
    idx = rv_indices(spec)
    print(name, f"(c = {idx.tail_constant:.4g}, gamma = {idx.gamma:g})")
    for n in (10**3, 10**5, 10**7):
        e = exact_constants(spec, n)
        c = closed_form_constants(idx.tail_constant, idx.gamma, n)
        print(f"   n = 1e{int(np.log10(n))}: exact b = {e.b:.6f}, closed b = {c.b:.6f}, "
              f"gap / a_n = {(e.b - c.b) / c.a:+.3f}")

# %% [markdown]
# The relative gap shrinks, but measured in units of a_n it closes only
# very slowly: the closed form drops terms of order ln ln n / ln n.
