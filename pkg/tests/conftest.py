import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stallings.cores import core_from_words
from stallings.graph import Graph
from stallings.words import free_reduce

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

LETTERS2 = st.sampled_from([1, -1, 2, -2])


@st.composite
def reduced_words(draw, min_size=0, max_size=10):
    return free_reduce(draw(st.lists(LETTERS2, min_size=min_size, max_size=max_size)))


@st.composite
def nontrivial_words(draw, max_size=10):
    w = draw(reduced_words(min_size=1, max_size=max_size))
    if not w:
        w = (draw(LETTERS2),)
    return w


@st.composite
def generator_sets(draw, max_gens=4, max_len=8):
    return draw(st.lists(reduced_words(max_size=max_len), min_size=1, max_size=max_gens))


@st.composite
def cores(draw, max_gens=4, max_len=8, nontrivial=True):
    gens = draw(generator_sets(max_gens, max_len))
    c = core_from_words(gens)
    if nontrivial and c.is_trivial:
        c = core_from_words([*gens, (draw(LETTERS2),)])
    return c


@st.composite
def graphs(draw, max_vertices=7, max_extra=4, connected=True):
    n = draw(st.integers(1, max_vertices))
    arcs = []
    if connected:
        arcs += [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    k = draw(st.integers(0, max_extra))
    arcs += [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for _ in range(k)]
    perm = draw(st.permutations(range(len(arcs)))) if arcs else []
    return Graph.from_arcs(range(n), [arcs[i] for i in perm])


@st.composite
def rngs(draw):
    return random.Random(draw(st.integers(0, 2**32)))
