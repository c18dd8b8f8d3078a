# %% [markdown]
# # The two-point space
#
# Two points at distance d. Its zeta matrix is [[1, q^d], [q^d, 1]], so the
# magnitude is 2/(1 + q^d). Expanding in q gives 2 - 2q^d + 2q^2d - ...,
# and each coefficient is the Euler characteristic of one grading of the
# magnitude homology.

# %%
from fractions import Fraction

from hmag import magnitude, magnitude_homology, magnitude_series, validate

X = validate([[0, 1], [1, 0]], ["a", "b"])
res = magnitude(X)
print("magnitude:", res.value)
print("weighting:", [str(w) for w in res.weighting])

# %%
# Power series in q up to q^5
for ell, c in magnitude_series(X, 5):
    print(f"q^{ell}: {c}")

# %%
# Homology: the only generators at grading n are the alternating tuples
# <a,b,a,...> and <b,a,b,...>. Deleting an interior point always shortens
# the tuple, so every boundary vanishes and H_n has rank 2 at grading n.
H = magnitude_homology(X, 5)
print(H.to_text())

# %%
# Halving the distance just rescales the grading.
Y = validate([[0, Fraction(1, 2)], [Fraction(1, 2), 0]], ["a", "b"])
print("magnitude at d=1/2:", magnitude(Y).value)
print(magnitude_homology(Y, 2).to_text())
