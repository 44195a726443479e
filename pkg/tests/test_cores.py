import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stallings.cores import (
    BasedCore,
    Bouquet,
    LabeledGraph,
    core_from_words,
    dumps,
    fold_over_base,
    free_basis,
    is_basis,
    is_member,
    lattice_excision,
    load_core,
    rebase,
    trace,
    trivial_core,
    whole_group,
)
from stallings.covering import complete_to_finite_cover
from stallings.graph import Graph, Path, Subgraph, rank as graph_rank, spanning_tree
from stallings.sampling import random_transitive_perms
from stallings.words import inverse, multiply, parse_word, parse_words

from conftest import cores, generator_sets, nontrivial_words, reduced_words


def core(text):
    return core_from_words(parse_words(text))


def act(perms, w, point=0):
    """Right action of a word on a point, straight from the permutations."""
    inverses = [{y: x for x, y in enumerate(p)} for p in perms]
    for x in w:
        point = perms[x - 1][point] if x > 0 else inverses[-x - 1][point]
    return point


def assert_core_invariants(c: BasedCore):
    lg = c.labeled_graph
    assert lg.validate() is None
    assert lg.is_folded()
    # spine at the basepoint: no other vertex of degree < 2
    for v in range(1, c.num_vertices):
        assert len(c.succ[v]) >= 2
    if c.num_vertices == 1 and not c.is_trivial:
        assert len(c.succ[0]) >= 1
    # canonical: rebuilding from its own document is the identity
    assert BasedCore.from_dict(c.to_dict()) == c
    assert dumps(load_core(dumps(c))) == dumps(c)


# -- examples -----------------------------------------------------------


def test_core_examples():
    ab = core("ab")
    assert (ab.num_vertices, ab.num_arcs) == (2, 2)
    assert ab.label_arcs(1) == ab.label_arcs(2) == 1
    b = core("b")
    assert (b.num_vertices, b.num_arcs, b.succ[0]) == (1, 1, {2: 0, -2: 0})
    abA = core("a,baB")
    assert (abA.num_vertices, abA.num_arcs, abA.subgroup_rank) == (2, 3, 2)


def test_literal_bab_generator():
    c = core("a,bab")
    assert (c.num_vertices, c.num_arcs, c.subgroup_rank) == (3, 4, 2)


def test_trivial_and_whole():
    assert core("") == trivial_core() == core("aA")
    assert core("") .is_trivial
    assert core("a,b") == whole_group() == Bouquet(2).core
    assert Bouquet(2).graph.vertices == (0,) and len(Bouquet(2).graph.arcs) == 2


def test_trace_examples():
    ab = core("ab")
    assert trace(ab, parse_word("ab")).closed
    assert not trace(ab, parse_word("ba")).closed
    assert trace(ab, ()).closed
    assert trace(ab, parse_word("aa")).status == "escapes"
    assert trace(ab, parse_word("a")).status == "nonclosed"


def test_rejects_out_of_range_letters():
    with pytest.raises(ValueError):
        core_from_words([(3,)], rank=2)


def test_is_basis_examples():
    assert is_basis([parse_word("a"), parse_word("b")])
    assert is_basis([parse_word("a"), parse_word("Ab")])
    assert not is_basis([parse_word("a"), parse_word("a")])
    assert not is_basis([parse_word("a")], rank=2)


def test_rebase_example():
    assert rebase(core("a"), parse_word("b")) == core("Bab")


def test_document_round_trip_and_validation():
    c = core("a,baB")
    doc = json.loads(dumps(c))
    assert doc["basepoint"] == 0 and doc["rank"] == 2
    bad = dict(doc, labels={**doc["labels"], "0": 2})
    with pytest.raises(ValueError):
        BasedCore.from_dict(bad)
    unfolded = LabeledGraph(Graph.from_arcs([0, 1], [(0, 1), (0, 1)]), {0: 1, 1: -1, 2: 1, 3: -1})
    assert not unfolded.is_folded()
    with pytest.raises(ValueError, match="not folded"):
        BasedCore.from_dict({**unfolded.to_dict(), "basepoint": 0})
    hair = LabeledGraph(Graph.from_arcs([0, 1], [(0, 0), (0, 1)]), {0: 1, 1: -1, 2: 2, 3: -2})
    with pytest.raises(ValueError, match="spine"):
        BasedCore.from_dict({**hair.to_dict(), "basepoint": 0})


# -- properties -----------------------------------------------------------


@given(generator_sets(max_gens=5, max_len=12))
def test_core_invariants_fuzz(gens):
    c = core_from_words(gens)
    assert_core_invariants(c)
    for w in gens:
        assert trace(c, w).closed


@given(generator_sets(max_gens=4, max_len=8), st.data())
def test_nielsen_moves_preserve_the_core(gens, data):
    c = core_from_words(gens)
    moved = list(gens)
    for _ in range(data.draw(st.integers(1, 4))):
        i = data.draw(st.integers(0, len(moved) - 1))
        move = data.draw(st.sampled_from(["inv", "mul", "swap"]))
        if move == "inv":
            moved[i] = inverse(moved[i])
        elif move == "swap":
            j = data.draw(st.integers(0, len(moved) - 1))
            moved[i], moved[j] = moved[j], moved[i]
        elif len(moved) > 1:
            j = data.draw(st.integers(0, len(moved) - 1).filter(lambda j: j != i))
            moved[i] = multiply(moved[i], moved[j])
    assert core_from_words(moved) == c


@given(cores())
def test_free_basis_regenerates(c):
    basis = free_basis(c)
    assert len(basis) == c.subgroup_rank
    assert core_from_words(basis) == c


@given(generator_sets(max_gens=3, max_len=6), st.data())
def test_products_of_generators_are_members(gens, data):
    """One-sided word search: every product of at most three generators is closed."""
    c = core_from_words(gens)
    pool = list(gens) + [inverse(w) for w in gens]
    k = data.draw(st.integers(0, 3))
    factors = [data.draw(st.sampled_from(pool)) for _ in range(k)]
    assert trace(c, multiply(*factors)).closed


@given(generator_sets(max_gens=3, max_len=6), reduced_words(max_size=8))
def test_membership_agrees_with_refolding(gens, w):
    c = core_from_words(gens)
    assert is_member(c, w) == (core_from_words([*gens, w]) == c)


@given(st.integers(0, 2**32), st.integers(1, 7), st.lists(reduced_words(max_size=12), min_size=20, max_size=20))
def test_membership_matches_permutation_action(seed, n, ws):
    """Finite index: w is in the stabilizer of 0 exactly when the action fixes 0."""
    from stallings.sampling import permutation_core

    perms = random_transitive_perms(random.Random(seed), n)
    c = permutation_core(perms)
    assert c.num_vertices == n and c.is_complete()
    for w in ws:
        assert trace(c, w).closed == (act(perms, w) == 0)


@given(cores(max_gens=3, max_len=6), nontrivial_words(max_size=8))
def test_non_membership_has_a_finite_certificate(c, w):
    """A non-member is separated by a finite permutation quotient, checked by direct action."""
    if trace(c, w).closed:
        return
    cover = complete_to_finite_cover(c, [w])
    n = cover.num_vertices
    perms = [[cover.succ[v][i] for v in range(n)] for i in (1, 2)]
    assert all(act(perms, g) == 0 for g in free_basis(c))
    assert act(perms, w) != 0


@given(cores(max_gens=3, max_len=6), reduced_words(max_size=6), reduced_words(max_size=8))
def test_rebase_is_conjugation(c, h, w):
    conj = rebase(c, h)
    assert trace(conj, w).closed == trace(c, multiply(h, w, inverse(h))).closed
    assert conj.subgroup_rank == c.subgroup_rank


def test_canonical_form_is_independent_of_generator_order():
    gens = parse_words("aab,bAb,abba")
    for perm in itertools.permutations(gens):
        assert dumps(core_from_words(perm)) == dumps(core_from_words(gens))


# -- lattice excision ---------------------------------------------------


def test_excision_on_a_bouquet_is_the_identity():
    base = Graph.from_arcs([0], [(0, 0), (0, 0)])
    tree = Subgraph(frozenset({0}))
    loops = [Path(0, (0, 2, 1)), Path(0, (3,))]
    bouquet, words = lattice_excision(base, tree, loops)
    assert bouquet == Bouquet(2)
    assert words == [(1, 2, -1), (-2,)]


def test_excision_theta_face_gives_one_letter():
    base = Graph.from_arcs([0, 1], [(0, 1), (0, 1), (0, 1)])
    tree = Subgraph(frozenset({0, 1}), frozenset({0, 1}))
    _, words = lattice_excision(base, tree, [Path(0, (0, 3)), Path(0, (0, 1))])
    assert words == [(-1,), ()]


def test_excision_errors():
    base = Graph.from_arcs([0, 1], [(0, 1), (0, 1), (0, 1)])
    tree = Subgraph(frozenset({0, 1}), frozenset({0, 1}))
    with pytest.raises(ValueError, match="not closed"):
        lattice_excision(base, tree, [Path(0, (0,))])
    with pytest.raises(ValueError, match="rank-2"):
        lattice_excision(Graph.from_arcs([0, 1], [(0, 1)]), tree, [])
    with pytest.raises(ValueError, match="spanning"):
        lattice_excision(base, Subgraph(frozenset({0, 1}), frozenset({0, 1, 2, 3})), [])


def test_fold_over_base_is_an_immersion():
    base = Graph.from_arcs([0, 1], [(0, 1), (0, 1), (0, 1)])
    loops = [Path(0, (0, 3)), Path(0, (0, 3, 0, 5)), Path(0, (2, 1))]
    g, labels = fold_over_base(base, loops)
    seen = set()
    for d in g.darts:
        assert labels[g.inv[d]] == base.inv[labels[d]]
        key = (g.src[d], labels[d])
        assert key not in seen
        seen.add(key)
    _, words = lattice_excision(base, spanning_tree(base, 0), loops)
    assert graph_rank(g) == core_from_words(words).subgroup_rank == 2
