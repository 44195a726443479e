"""
Spine invariants and realization dependence
===========================================

For a subgroup of the rank-two free group the core has ``H`` vertices and
``n_i`` maximal label-``i`` segments that are not cycles.  Together they
determine the rank: ``rk = H - (n1 + n2) + 1``.  They depend on which free
basis is used to draw the graph.
"""

# %%
from stallings import Substitution, core_from_words, parse_word, spine_invariants
from stallings.words import apply_substitution

xy = [parse_word("ab")]
for text in ["a,b", "a,Ab"]:
    phi = Substitution.parse(text)
    core = core_from_words(apply_substitution(xy, phi))
    print(f"x, y -> {phi}:", spine_invariants(core))

# %%
# The same cyclic subgroup: two vertices under the first basis, one under
# the second.
#
# Extended spines add a tip for every missing direction.  Tips pair up
# along label segments, and a checker count recovers ``rank - 1``.
from stallings import checker_count, extended_spine

for gens in ["a", "ab", "a,baB", "aab,bAb,abba"]:
    core = core_from_words([parse_word(g) for g in gens.split(",")])
    es = extended_spine(core)
    print(f"<{gens}>: pairs {[(p.label, p.path) for p in es.pairs]}, checkers {checker_count(es)}, rank {core.subgroup_rank}")
