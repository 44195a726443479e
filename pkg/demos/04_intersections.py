"""
Intersections through fiber products
====================================

The product of two cores has a component for each double coset
``A1 g A2``; the non-simply-connected ones are exactly the non-trivial
intersections ``A1 ∩ g A2 g^-1``.
"""

# %%
from stallings import conjugate_intersection, core_from_words, double_coset_reps, fiber_product, parse_words
from stallings.cores import free_basis
from stallings.words import format_word

A = core_from_words(parse_words("a,baB"))
report = fiber_product(A, A)
for g, comp in double_coset_reps(report):
    meet = conjugate_intersection(A, A, g)
    print(f"g = {format_word(g) or '1':>2}: rank {comp.rank}, generated by {[format_word(w) for w in free_basis(meet)]}")

# %%
# Summing ``rank - 1`` over those components gives the quantity bounded in
# the next demo.
from stallings import intersection_rank_sum, join

print("sum of rk - 1:", intersection_rank_sum(report))

# %%
# Joins fold the wedge of the two cores.
print(join(core_from_words(parse_words("aa")), core_from_words(parse_words("aaa"))))

# %%
# A brute-force word scan finds the same double cosets.
from stallings.pullback import brute_force_double_cosets

print([format_word(w) or "1" for w in brute_force_double_cosets(A, A, 6)])
