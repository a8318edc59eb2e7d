# %% [markdown]
# # Exact counts and tree sums in the window
#
# Counts of connected labelled graphs come from an exact big-integer table.
# Tree and animal sums at `p = 1 + s V^(-1/2)` are then compared with their
# scaling forms.

# %%
import math

from critwindow import (
    WindowPoint,
    cayley_count,
    chi_tree,
    connected_count,
    default_table,
    g0_animal,
    g0_tree,
    profile_I,
)
from critwindow.asymptotics import calibrate_prop_constant

table = default_table()
[connected_count(n, n, table) for n in range(3, 8)]  # unicyclic counts

# %%
# trees are the m = n - 1 diagonal
all(connected_count(n, n - 1, table) == cayley_count(n) for n in range(1, 40))

# %%
# the constant needed to dominate every count with 3 <= n <= 40, and where it is attained
calibrate_prop_constant(table)

# %% [markdown]
# ## Susceptibility of trees
#
# `chi_tree / (V^(1/4) I(s))` should tend to 1.  Large `V` sums are
# truncated with a certified tail bound.

# %%
for s in (-1.0, 0.0, 1.0):
    ratios = [float(chi_tree(WindowPoint(V, s))) / (V**0.25 * profile_I(s).value) for V in (10**4, 10**6, 10**8)]
    print(f"s={s:+.0f}", " ".join(f"{r:.5f}" for r in ratios))

# %% [markdown]
# ## The one-point sum at p = 1
#
# It climbs toward `e` but only like `V^(-1/4)`; at `V = 1e6` the gap is
# still about 0.07.

# %%
c = math.e * 2**0.75 * math.gamma(0.75) / math.sqrt(2 * math.pi)
for V in (10**3, 10**4, 10**5, 10**6):
    g = float(g0_tree(WindowPoint(V, 0.0)))
    print(V, f"{g:.6f}", f"{math.e - g:.4f}", f"predicted gap {c * V**-0.25:.4f}")

# %%
# animals (exact up to V = 64) sit just above trees
[(V, float(g0_animal(WindowPoint(V, 0.0))) - float(g0_tree(WindowPoint(V, 0.0)))) for V in (8, 16, 32, 64)]
