from collections import Counter

from hypothesis import given
from hypothesis import strategies as st

from stallings.cores import core_from_words, free_basis, rebase, trace, trivial_core, whole_group
from stallings.pullback import (
    brute_force_double_cosets,
    component_core,
    conjugate_intersection,
    double_coset_contains,
    double_coset_reps,
    fiber_product,
    intersection_rank_sum,
    join,
    pointed_intersection,
)
from stallings.words import format_word, inverse, multiply, parse_words

from conftest import cores, generator_sets, reduced_words


def core(text):
    return core_from_words(parse_words(text))


def small_cores():
    return cores(max_gens=3, max_len=6).filter(lambda c: c.num_vertices <= 6)


# -- examples -------------------------------------------------------------


def test_self_product_of_cyclic():
    r = fiber_product(core("a"), core("a"))
    assert [(len(c.vertices), c.rank) for c in r.components] == [(1, 1)]
    assert [g for g, _ in double_coset_reps(r)] == [()]


def test_cyclic_against_square():
    r = fiber_product(core("a"), core("aa"))
    assert [(len(c.vertices), c.rank) for c in r.components] == [(2, 1)]
    assert pointed_intersection(core("a"), core("aa")) == core("aa")


def test_a_and_b_are_disjoint():
    r = fiber_product(core("a"), core("b"))
    assert [(len(c.vertices), c.num_arcs) for c in r.components] == [(1, 0)]
    assert double_coset_reps(r) == []
    assert intersection_rank_sum(r) == 0
    assert pointed_intersection(core("a"), core("b")) == trivial_core()


def test_tightness_example_components():
    c = core("a,baB")
    r = fiber_product(c, c)
    assert sorted(comp.rank for comp in r.components) == [1, 1, 2]
    assert intersection_rank_sum(r) == 1
    reps = [format_word(g) for g, _ in double_coset_reps(r)]
    assert sorted(reps) == ["", "B", "b"]
    assert r.to_dict()["sum_rk_minus_1"] == 1


def test_join_examples():
    assert join(core("a"), core("b")) == whole_group()
    assert join(core("aa"), core("aaa")) == core("a")
    c = core("a,baB")
    assert join(c, c) == c


def test_double_coset_membership_examples():
    a = core("a")
    b = (2,)
    assert double_coset_contains(a, a, b, parse_words("aaabA")[0])
    assert not double_coset_contains(a, a, b, parse_words("baBab")[0])
    assert not double_coset_contains(a, a, b, parse_words("bb")[0])


# -- properties -----------------------------------------------------------


@given(cores(max_gens=3, max_len=7), cores(max_gens=3, max_len=7))
def test_product_symmetry(c1, c2):
    r12, r21 = fiber_product(c1, c2), fiber_product(c2, c1)
    assert Counter(c.rank for c in r12.components) == Counter(c.rank for c in r21.components)
    assert intersection_rank_sum(r12) == intersection_rank_sum(r21)


@given(cores(max_gens=3, max_len=7), cores(max_gens=3, max_len=7))
def test_projections_are_label_preserving_immersions(c1, c2):
    r = fiber_product(c1, c2)
    lg = r.product
    t1, t2 = r.projections
    assert lg.is_folded()
    for t, factor in ((t1, c1.labeled_graph), (t2, c2.labeled_graph)):
        for d in lg.graph.darts:
            assert factor.labels[t[d]] == lg.labels[d]
            assert t[lg.graph.inv[d]] == factor.graph.inv[t[d]]
        for v in lg.graph.vertices:
            images = [t[d] for d in lg.graph.out[v]]
            assert len(set(images)) == len(images)
    assert sum(len(c.vertices) for c in r.components) == c1.num_vertices * c2.num_vertices


@given(cores(max_gens=3, max_len=7), cores(max_gens=3, max_len=7), st.lists(reduced_words(max_size=10), max_size=10))
def test_pointed_intersection_membership(c1, c2, ws):
    meet = pointed_intersection(c1, c2)
    for w in ws + free_basis(meet):
        assert trace(meet, w).closed == (trace(c1, w).closed and trace(c2, w).closed)


@given(cores(max_gens=3, max_len=7))
def test_intersection_with_whole_group(c):
    assert pointed_intersection(c, whole_group()) == c
    assert pointed_intersection(c, c) == c


@given(cores(max_gens=3, max_len=6), cores(max_gens=3, max_len=6))
def test_component_reps_are_coherent(c1, c2):
    r = fiber_product(c1, c2)
    for g, comp in double_coset_reps(r):
        meet = conjugate_intersection(c1, c2, g)
        assert meet.subgroup_rank == comp.rank
        assert component_core(r, comp).subgroup_rank == comp.rank
        shifted = rebase(c2, inverse(g))
        for w in free_basis(meet):
            assert trace(c1, w).closed
            assert trace(shifted, w).closed
            assert trace(c2, multiply(inverse(g), w, g)).closed


@given(generator_sets(max_gens=3, max_len=6), generator_sets(max_gens=3, max_len=6))
def test_join_is_generated_subgroup(g1, g2):
    c1, c2 = core_from_words(g1), core_from_words(g2)
    j = join(c1, c2)
    assert j == core_from_words(g1 + g2)
    assert all(trace(j, w).closed for w in g1 + g2)


@given(small_cores(), small_cores())
def test_reps_match_brute_force(c1, c2):
    reps = [g for g, _ in double_coset_reps(fiber_product(c1, c2))]
    oracle = brute_force_double_cosets(c1, c2, 6)
    assert len(reps) == len(oracle)
    for o in oracle:
        assert sum(double_coset_contains(c1, c2, g, o) for g in reps) == 1


@given(small_cores(), small_cores())
def test_reps_are_pairwise_inequivalent(c1, c2):
    reps = [g for g, _ in double_coset_reps(fiber_product(c1, c2))]
    for i, g in enumerate(reps):
        for j, h in enumerate(reps):
            assert double_coset_contains(c1, c2, g, h) == (i == j)


@given(cores(max_gens=3, max_len=6), cores(max_gens=3, max_len=6), reduced_words(max_size=6), st.data())
def test_double_coset_membership_is_closed_under_multiplication(c1, c2, g, data):
    b1, b2 = free_basis(c1), free_basis(c2)
    a1 = multiply(*[data.draw(st.sampled_from(b1 + [inverse(w) for w in b1])) for _ in range(2)])
    a2 = multiply(*[data.draw(st.sampled_from(b2 + [inverse(w) for w in b2])) for _ in range(2)])
    assert double_coset_contains(c1, c2, g, g)
    assert double_coset_contains(c1, c2, g, multiply(a1, g, a2))
