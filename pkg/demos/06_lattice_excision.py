"""
Passing to a one-vertex base
============================

Loops in any connected rank-two graph become words over ``a, b`` once a
spanning tree is collapsed.  Ranks do not change.
"""

# %%
from stallings import Graph, Path, core_from_words, fold_over_base, lattice_excision, rank, spanning_tree
from stallings.words import format_word

# theta graph: two vertices joined by three arcs
base = Graph.from_arcs([0, 1], [(0, 1), (0, 1), (0, 1)])
tree = spanning_tree(base, 0)
loops = [Path(0, (0, 3)), Path(0, (0, 5)), Path(0, (2, 1, 4, 3))]

_, words = lattice_excision(base, tree, loops)
print("words:", [format_word(w) for w in words])

# %%
# Folding the loops over the original base gives the same rank.
folded, labels = fold_over_base(base, loops)
print("rank after excision", core_from_words(words).subgroup_rank, "| rank over the base", rank(folded))
