# %% [markdown]
# # The magnitude function
#
# Substituting q = exp(-t) turns the exact magnitude into the magnitude of
# the space scaled by t. Here the exact rational function is evaluated
# along a grid of t and compared with a direct floating point solve.

# %%
import math

import numpy as np

from hmag import evaluate_at, graph_to_metric, magnitude, magnitude_at

C5 = graph_to_metric([(i, (i + 1) % 5) for i in range(5)])
f = magnitude(C5).value
print("C5 magnitude:", f)

ts = np.linspace(0.05, 4.0, 12)
exact = np.array([evaluate_at(f, math.exp(-t)) for t in ts])
direct = np.array([magnitude_at(C5, t) for t in ts])
for t, a, b in zip(ts, exact, direct):
    print(f"t={t:5.2f}  exact {a:.12f}  float {b:.12f}")
print("max relative gap:", np.max(np.abs(exact - direct) / np.abs(exact)))

# %%
# Small t squeezes the points together and the magnitude tends to 1;
# large t pulls them apart and it tends to the number of points.
print(magnitude_at(C5, 1e-3), magnitude_at(C5, 20.0))
