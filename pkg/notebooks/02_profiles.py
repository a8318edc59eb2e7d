# %% [markdown]
# # Scaling profiles
#
# Each profile is an integral evaluated by adaptive quadrature with an
# error estimate.

# %%
import math

import numpy as np

from critwindow import lambert_w0, perc_profile, profile_I, profile_Ik
from critwindow.profiles import asymptotic_I, excursion_area_mc, excursion_moment, one_point_series

for s in (-3.0, 0.0, 3.0):
    ev = profile_I(s)
    print(f"I({s:+.0f}) = {ev.value:.12f}  est. error {ev.est_abs_error:.1e}")

# %%
# closed form at s = 0
math.e * 2**-0.75 * math.gamma(0.25) / math.sqrt(2 * math.pi), profile_I(0.0).value

# %%
# large-|s| branches
[(s, profile_I(s).value / asymptotic_I(s, "plus" if s > 0 else "minus")) for s in (-8.0, 8.0)]

# %% [markdown]
# ## Lambert W and the one-point series
#
# The subcritical one-point sum has the closed form `-(e/p) W0(-p/e)`.

# %%
for p in (0.25, 0.5, 1.0):
    closed = -(math.e / p) * lambert_w0(-p / math.e)
    print(p, f"{closed:.12f}", f"{float(one_point_series(p)):.12f}")

# %% [markdown]
# ## Percolation profile and excursion areas
#
# The percolation profile is built from moments of the Brownian excursion
# area.  A Monte Carlo of excursion areas checks the first moment,
# `sqrt(pi/8)`.

# %%
areas, _ = excursion_area_mc(n_paths=200_000, seed=1)
areas.mean(), excursion_moment(1), math.sqrt(math.pi / 8)

# %%
grid = np.linspace(-6, 4, 11)
np.array([perc_profile(float(s)).value for s in grid])

# %%
# walk profile: I_1 at s = 0 is sqrt(pi)/2
profile_Ik(1, 0.0).value, math.sqrt(math.pi) / 2
