"""
Bounding the intersection rank sum
==================================

For non-trivial ``A1, A2`` in the rank-two free group and ``i`` in ``{1, 2}``::

    sum (rk(A1 ∩ g A2 g^-1) - 1) <= (rk A1 - 1)(rk A2 - 1) + H1 H2 - (H1 - n1i)(H2 - n2i)

This demo checks it on random pairs and compares with the classical error
terms on a family where the new term vanishes.
"""

# %%
import random

from stallings import compare, family_pair
from stallings.sampling import random_cores

rng = random.Random(0)
cores = random_cores(rng, 400)
reports = [compare(c1, c2) for c1, c2 in zip(cores[::2], cores[1::2])]
print("violations:", sum(not (r.satisfied["paper_i1"] and r.satisfied["paper_i2"]) for r in reports))

# %%
# The tight example.
from stallings import core_from_words, parse_words

A = core_from_words(parse_words("a,baB"))
r = compare(A, A)
print("exact", r.exact_sum, "bounds", r.paper_bound_i1, r.paper_bound_i2)

# %%
# A family with ``H = k``, ``n1 = 0``, ``n2 = 1``: the new error term is 0
# while the classical ones grow quadratically.
print(" k  exact  bound  Neumann  Burns  Tardos  Dicks")
for k in [2, 3, 5, 10, 20]:
    r = compare(*family_pair(k))
    e = r.eps
    print(f"{k:2d} {r.exact_sum:6d} {r.paper_bound_i1:6d} {e.neumann:8d} {e.burns:6d} {e.tardos:7d} {e.dicks:6d}")

# %%
# Exact sums against the bound (needs matplotlib).
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.scatter([r.exact_sum for r in reports], [r.paper_bound_best for r in reports], s=6)
    ax.set_xlabel("exact sum")
    ax.set_ylabel("min over i of the bound")
    fig.savefig("rank_bounds.svg")
