"""
Logarithmic averages along one path
===================================

The almost-sure version of the limit theorem replaces replicates by a
single long path, weighting the indicator 1(M_k* <= a_k x + b_k) by 1/k.
Convergence is at rate (ln n)^(-1/2), so even n = 10^6 leaves visible
scatter from seed to seed.
"""

# %%
import numpy as np

from contracted_maxima.contraction import ContractionSpec
from contracted_maxima.corr_models import CorrelationModel
from contracted_maxima.experiments import asclt_logavg
from contracted_maxima.special_fn import gumbel_cdf

x = np.array([-1.0, 0.0, 1.0])
print("target:", np.round(gumbel_cdf(x), 4))

# %%
for seed in range(5):
    est = asclt_logavg(CorrelationModel.iid(), ContractionSpec.degenerate(), 10**6, x, "closed", seed)
    print(f"seed {seed}:", np.round(est.estimates, 4))

# %% [markdown]
# Under dependence and a power-tailed contraction, with exact per-k constants.

# %%
est = asclt_logavg(CorrelationModel.ar1(0.5), ContractionSpec.power_tail(0.5, 1.0), 10**6, x, "exact", 0)
print("ar1 + power tail:", np.round(est.estimates, 4), f"(first k = {est.first_k})")
