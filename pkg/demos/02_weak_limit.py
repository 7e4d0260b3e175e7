"""
Weak convergence to the Gumbel law
==================================

Simulate M_n* = max S_i X_i for a dependent Gaussian sequence and measure
the Kolmogorov distance of (M_n* - b_n) / a_n to exp(-exp(-x)).
"""

# %%
import numpy as np

from contracted_maxima.contraction import ContractionSpec
from contracted_maxima.corr_models import CorrelationModel
from contracted_maxima.experiments import ks_to_gumbel, simulate_maxima
from contracted_maxima.norming import exact_constants
from contracted_maxima.special_fn import gumbel_cdf

spec = ContractionSpec.power_tail(0.5, 1.0)
models = [CorrelationModel.iid(), CorrelationModel.ar1(0.5), CorrelationModel.power_decay(0.9, 2)]

# %% [markdown]
# The same constants and the same master seed are used for every model,
# so differences come from the dependence alone.

# %%
for n in (2**8, 2**12):
    const = exact_constants(spec, n)
    for model in models:
        s = simulate_maxima(model, spec, n, 2000, const, master_seed=1)
        print(f"n = {n:6d}  {model.designation:>10}: KS = {ks_to_gumbel(s):.4f}")

# %% [markdown]
# A coarse look at the fitted distribution against the Gumbel CDF.

# %%
n = 2**12
s = simulate_maxima(models[1], spec, n, 4000, exact_constants(spec, n), master_seed=2)
for x in (-1.0, 0.0, 1.0, 2.0, 3.0):
    print(f"x = {x:+.1f}: empirical {np.mean(s.normalized_values <= x):.3f}, Gumbel {gumbel_cdf(x):.3f}")
