"""
Folding generators into a core graph
====================================

A finitely generated subgroup of the free group on ``a, b`` is stored as a
folded, trimmed graph with a basepoint.  Reading a word from the basepoint
decides membership.
"""

# %%
# Build the core of ``<a, b a b^-1>``.  Upper-case letters are inverses.
from stallings import core_from_words, free_basis, parse_words, trace, format_word

A = core_from_words(parse_words("a,baB"))
print(A.num_vertices, "vertices,", A.num_arcs, "arcs, rank", A.subgroup_rank)

# %%
# The transition table: vertex -> {label: target}.  Label 1 is ``a``, -1 is ``A``.
for v, row in enumerate(A.succ):
    print(v, row)

# %%
# Membership.  A word is in the subgroup when it reads a closed path.
for text in ["baaB", "ab", "bab"]:
    t = trace(A, parse_words(text)[0])
    print(f"{text:>5}: {t.status}")

# %%
# Generating sets that differ by Nielsen moves give the same core, so the
# core is an invariant of the subgroup rather than of the generators.
B = core_from_words(parse_words("baB,aaa,A,abaB"))
print("same subgroup:", A == B)
print("free basis read off the core:", [format_word(w) for w in free_basis(A)])
