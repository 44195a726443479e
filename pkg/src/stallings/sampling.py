"""Seeded random instances: generator sets, complete cores, base graphs."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field, replace

from .cores import BasedCore, core_from_succ, core_from_words
from .graph import Graph, Path, Subgraph, spanning_tree, tree_path
from .words import Word, format_word, random_word

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    count: int = 1000
    max_gens: int = 5
    max_len: int = 12
    rank: int = 2
    index: int = 2
    max_index: int = 50
    jobs: int = 1
    csv: str | None = None
    svg: str | None = None
    out: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_env(cls, **kwargs) -> RunConfig:
        cfg = cls(**{k: v for k, v in kwargs.items() if v is not None})
        env = os.environ.get("STALLINGS_SEED")
        if env:
            cfg = replace(cfg, seed=int(env))
        return cfg

    def rng(self, stream: str = "") -> random.Random:
        """Independent generator per named stream, fully determined by the seed."""
        return random.Random(f"{self.seed}:{stream}")


def random_generators(rng: random.Random, rank: int, max_gens: int, max_len: int) -> list[Word]:
    m = rng.randint(1, max_gens)
    return [random_word(rng, rank, rng.randint(1, max_len)) for _ in range(m)]


def sample_words(config: RunConfig) -> list[dict]:
    """Subgroup description documents ``{"rank", "generators"}``."""
    rng = config.rng("words")
    return [
        {
            "rank": config.rank,
            "generators": [
                format_word(w)
                for w in random_generators(rng, config.rank, config.max_gens, config.max_len)
            ],
        }
        for _ in range(config.count)
    ]


def random_cores(rng: random.Random, count: int, rank: int = 2, max_gens: int = 5,
                 max_len: int = 12, max_vertices: int | None = None) -> list[BasedCore]:
    out = []
    while len(out) < count:
        c = core_from_words(random_generators(rng, rank, max_gens, max_len), rank)
        if max_vertices is None or c.num_vertices <= max_vertices:
            out.append(c)
    return out


def permutation_core(perms: list[list[int]]) -> BasedCore:
    """Core of the point stabilizer of 0 for the action given by one permutation per generator."""
    n = len(perms[0])
    succ = {v: {} for v in range(n)}
    for i, perm in enumerate(perms, start=1):
        for v, w in enumerate(perm):
            succ[v][i] = w
            succ[w][-i] = v
    return core_from_succ(succ, 0, len(perms))


def _orbit_of_zero(perms: list[list[int]]) -> set[int]:
    seen = {0}
    stack = [0]
    inverses = [{w: v for v, w in enumerate(p)} for p in perms]
    while stack:
        v = stack.pop()
        for m in (*perms, *inverses):
            w = m[v]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def random_transitive_perms(rng: random.Random, n: int, rank: int = 2, retries: int = 100) -> list[list[int]]:
    for _ in range(retries):
        perms = []
        for _ in range(rank):
            p = list(range(n))
            rng.shuffle(p)
            perms.append(p)
        if len(_orbit_of_zero(perms)) == n:
            return perms
    raise RuntimeError(f"no transitive permutation tuple on {n} points after {retries} tries")


def sample_complete(config: RunConfig, n: int | None = None) -> list[BasedCore]:
    """Complete cores from random transitive permutation tuples.

    With ``n`` given every core has index ``n``; otherwise indices are
    uniform in ``[1, max_index]``.
    """
    rng = config.rng("complete")
    out = []
    for _ in range(config.count):
        size = n if n is not None else rng.randint(1, config.max_index)
        out.append(permutation_core(random_transitive_perms(rng, size, config.rank)))
    return out


def random_base_graph(rng: random.Random, num_vertices: int, extra_arcs: int = 2) -> Graph:
    """Connected graph of rank ``extra_arcs``: a random tree plus extra arcs (loops allowed)."""
    arcs = [(rng.randrange(v), v) for v in range(1, num_vertices)]
    arcs += [(rng.randrange(num_vertices), rng.randrange(num_vertices)) for _ in range(extra_arcs)]
    rng.shuffle(arcs)
    return Graph.from_arcs(range(num_vertices), arcs)


def random_spanning_tree(rng: random.Random, g: Graph) -> Subgraph:
    """Kruskal over a shuffled arc order."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    arcs = list(g.arcs)
    rng.shuffle(arcs)
    darts = set()
    for d, e in arcs:
        a, b = find(g.src[d]), find(g.src[e])
        if a != b:
            parent[a] = b
            darts.update((d, e))
    return Subgraph(frozenset(g.vertices), frozenset(darts))


def random_loop(rng: random.Random, g: Graph, v: int, steps: int) -> Path:
    """Random non-backtracking walk from ``v`` closed up by a tree path back."""
    darts = []
    x = v
    for _ in range(steps):
        choices = [d for d in g.out[x] if not darts or d != g.inv[darts[-1]]]
        if not choices:
            break
        d = rng.choice(choices)
        darts.append(d)
        x = g.target(d)
    back = tree_path(g, spanning_tree(g, v), x, v)
    return Path(v, tuple(darts) + back)
