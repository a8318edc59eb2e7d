# %% [markdown]
# # Self-avoiding walks and percolation
#
# Walks from 0 to 1 on the complete graph have a closed-form count, so the
# susceptibility is an exact sum.

# %%
import math

from critwindow import estimate_chi_perc, profile_Ik, profile_fit, saw_chi

reference = lambda V: 2**-0.5 * math.sqrt(V) * profile_Ik(1, 0.0).value
[(V, float(saw_chi(V, 1).value) / reference(V)) for V in (10**3, 10**4, 10**5, 10**6)]

# %% [markdown]
# The ratio settles at 2, not 1.  The Riemann sum over walk lengths gives
# `V^(-1/2) int_0^inf exp(s y - y^2/2) dy`, which is twice
# `(2V)^(-1/2) I_1(-sqrt(2) s)`.

# %%
s = 0.0
integral = math.sqrt(math.pi / 2) * math.exp(s * s / 2) * math.erfc(-s / math.sqrt(2))
integral / (2**-0.5 * profile_Ik(1, -math.sqrt(2) * s).value)

# %% [markdown]
# ## Percolation in the window `p = 1 + s V^(-1/3)`
#
# Cluster sizes are simulated generation by generation.  At `s = 0`
# the mean cluster size should grow like `V^(1/3)`.

# %%
import numpy as np

Vs = [2**14, 2**16, 2**18]
at_zero = [estimate_chi_perc(V, 0.0, 5000, seed=7) for V in Vs]
np.polyfit(np.log(Vs), np.log([e.mean for e in at_zero]), 1)[0]

# %%
grid = [estimate_chi_perc(V, s, 5000, seed=7) for V in (2**14, 2**18) for s in (-3.0, -1.0, 0.0, 1.0, 2.0)]
fit = profile_fit(grid)
fit  # (a, b) near 1 supports the unit-constant normalisation
