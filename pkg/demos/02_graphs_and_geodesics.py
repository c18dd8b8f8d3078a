# %% [markdown]
# # Graphs, betweenness and H_2
#
# A graph becomes a metric space with the shortest-path distance. H_1 is
# generated by the oriented edges. H_2 has a closed form when the graph is
# geodetic and has no 4-cuts. Trees and complete graphs qualify. Odd cycles
# are geodetic, but from C5 on they have 4-cuts, so the formula is silent.

# %%
import json

from hmag import (
    cmd_predicates,
    graph_to_metric,
    h2_oracle,
    has_no_4cuts,
    is_geodetic,
    magnitude,
    magnitude_homology,
)

K4 = graph_to_metric([(a, b) for a in "abcd" for b in "abcd" if a < b])
C4 = graph_to_metric([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
C5 = graph_to_metric([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])
star = graph_to_metric([("hub", leaf) for leaf in "wxyz"])

for name, G in [("K4", K4), ("C4", C4), ("C5", C5), ("star", star)]:
    print(f"{name:5s} magnitude {magnitude(G).value}")

# %%
# The 4-cycle has a 4-cut: a-b-c and b-c-d are geodesic but a-b-c-d is not.
v = has_no_4cuts(C4)
print("C4 no 4-cuts:", v.holds, "witness:", v.witness)
print("C4 geodetic:", bool(is_geodetic(C4)), "  C5 geodetic:", bool(is_geodetic(C5)))

# %%
# Compare the H_2 formula with the Smith normal form computation.
for name, G in [("K4", K4), ("C5", C5), ("star", star), ("C4", C4)]:
    H = magnitude_homology(G, 3)
    row = []
    for ell in (2, 3):
        pred = h2_oracle(G, ell)
        row.append(f"l={ell}: formula {pred!r:>14}  SNF {H.rank(2, ell)}")
    print(f"{name:5s}", " | ".join(row))

# %%
# The full predicate report as the command line prints it.
print(json.dumps(cmd_predicates(C4), indent=1))
