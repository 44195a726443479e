"""
Finite index, normality and completions
=======================================

A core in which every vertex has all four directions is a finite cover of
the bouquet; its vertex count is the index.
"""

# %%
from stallings import complete_to_finite_cover, core_from_words, index, is_galois, parse_words, schreier_basis
from stallings.sampling import permutation_core
from stallings.words import format_word

K = core_from_words(parse_words("aa,b,abA"))
print("index", index(K), "rank", K.subgroup_rank, "normal:", bool(is_galois(K)))

# %%
# Stabilizers of a permutation action.  ``a`` swaps 0 and 1, ``b`` swaps 0 and 2:
# the action is not regular, so the stabilizer is not normal and a
# witness word is returned.
S = permutation_core([[1, 0, 2], [2, 1, 0]])
res = is_galois(S)
print("normal:", res.galois, "witness", format_word(res.witness), "fails at vertex", res.vertex)

# %%
# Nielsen-Schreier: index n means rank n + 1.
print([format_word(w) for w in schreier_basis(S)])

# %%
# Any finitely generated subgroup is a free factor of a finite-index one
# that can be chosen to miss finitely many given elements.
A = core_from_words(parse_words("ab"))
G = complete_to_finite_cover(A, parse_words("b,aab"))
print("index", index(G), "basis", [format_word(w) for w in schreier_basis(G)])

# %%
# For infinite index some conjugate of any non-trivial element escapes.
from stallings import escape_witness

print("conjugator:", format_word(escape_witness(A, parse_words("ab")[0])))
