# %% [markdown]
# # Magnitude as an Euler characteristic
#
# For every grading l, the q^l coefficient of the magnitude equals both the
# alternating sum of chain group ranks and the alternating sum of homology
# ranks. This script checks the three numbers side by side for a small
# asymmetric space and for a random metric.

# %%
import random
from fractions import Fraction

from hmag import reconcile, validate
from hmag.errors import TriangleViolation

# a quasi-metric: distances differ in the two directions
Q = validate(
    [[0, 1, 2], [Fraction(1, 2), 0, 1], [1, Fraction(1, 2), 0]],
    ["x", "y", "z"],
)
rec = reconcile(Q, 3)
print("magnitude:", rec["magnitude"])
print(f"{'l':>5} {'series':>8} {'chains':>8} {'homology':>8}")
for r in rec["rows"]:
    print(f"{str(r.grading):>5} {str(r.series):>8} {r.chain_euler:>8} {r.homology_euler:>8}")
print(rec["checks"])

# %%
# A random symmetric metric on five points with half-integer distances.
rng = random.Random(4)
while True:
    m = [[Fraction(0)] * 5 for _ in range(5)]
    for i in range(5):
        for j in range(i):
            m[i][j] = m[j][i] = Fraction(rng.randint(1, 6), 2)
    try:
        R = validate(m)
        break
    except TriangleViolation:
        pass

rec = reconcile(R, 3)
print("magnitude:", rec["magnitude"])
print("all rows match:", rec["checks"]["rows"], " passed:", rec["passed"])
print(rec["summary"].to_text())
