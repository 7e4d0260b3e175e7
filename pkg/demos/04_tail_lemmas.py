"""
Deterministic checks of the tail estimates
==========================================

Quadrature-only checks: the dependence sum that must vanish, the tail of
S Z for a Weibull-type Z, and power-tail envelopes around P(SX > u).
"""

# %%
import numpy as np

from contracted_maxima.contraction import ContractionSpec, sandwich_envelopes
from contracted_maxima.corr_models import CorrelationModel
from contracted_maxima.diagnostics import (
    TailCheckSpec, berman_sequences, comparison_sum, sandwich_product_check, tail_ratio_check,
)
from contracted_maxima.norming import exact_constants

one = ContractionSpec.degenerate()
beta = ContractionSpec.beta(2, 3)

# %% [markdown]
# Dependence condition rho(n) (ln n)^(1 + delta) -> 0.

# %%
for model in (CorrelationModel.power_decay(0.9, 1), CorrelationModel.log_decay(0.9, 1.5)):
    chk = berman_sequences(model, 1.0, 0.5, [10, 10**3, 10**6])
    print(model.designation, np.round(chk.seq_values, 4), chk.flag)

# %% [markdown]
# The comparison sum for AR(1) correlations decays with n.

# %%
for n in (2**10, 2**14, 2**18):
    print(n, comparison_sum(CorrelationModel.ar1(0.5), one, n, 0.0, exact_constants(one, n)))

# %% [markdown]
# Tail of S Z with P(Z > z) = exp(-z^2 / 2): ratio to Gamma(gamma + 1)
# exp(-u^2 / 2) P(S > 1 - 1/u^2).

# %%
r = tail_ratio_check(TailCheckSpec(ContractionSpec.power_tail(1.0, 1.0), 2.0, 0.5, (10.0, 20.0, 40.0, 80.0)))
print(np.round(r, 5))

# %% [markdown]
# Power-tail envelopes of Beta(2, 3) and the product tails they bracket.

# %%
env = sandwich_envelopes(beta)
print("upper", env.upper, "lower", env.lower, "on (", env.nu, ", 1)")
rep = sandwich_product_check(beta, np.arange(1.0, 21.0))
print("bracket holds from u =", rep.threshold)
