"""Seeded property suite backing ``stallings verify`` and the acceptance tests.

Each check returns a :class:`CheckResult` with the number of cases tried
and a few failure descriptions.  Nothing here loosens a comparison: every
check is exact integer or structural equality.
"""

from __future__ import annotations

import csv
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .bounds import CSV_FIELDS, classical_bounds, compare, error_term, family_pair, paper_bound
from .cores import (
    BasedCore,
    core_from_words,
    fold_over_base,
    free_basis,
    lattice_excision,
    trace,
)
from .covering import (
    SpineInvariants,
    checker_count,
    complete_to_finite_cover,
    embedding,
    escape_witness,
    extended_spine,
    is_galois,
    schreier_basis,
    schreier_words,
    spine_invariants,
)
from .graph import Subgraph, extend_to_spanning_tree, rank as graph_rank, spanning_tree
from .pullback import (
    brute_force_double_cosets,
    double_coset_contains,
    double_coset_reps,
    fiber_product,
    intersection_rank_sum,
)
from .sampling import (
    RunConfig,
    permutation_core,
    random_base_graph,
    random_cores,
    random_generators,
    random_loop,
    random_spanning_tree,
    random_transitive_perms,
    sample_complete,
)
from .words import Substitution, apply_substitution, format_word, inverse, multiply, parse_word, random_word

MAX_FAILURES = 5


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    data: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.cases > 0

    def fail(self, message: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {self.failure_count} failures, {self.elapsed:.2f}s"


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def run(*args, **kwargs) -> CheckResult:
        t0 = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed = time.perf_counter() - t0
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _mutant_invariants(core: BasedCore) -> SpineInvariants:
    """Deliberately broken: forgets to subtract the label-2 arcs."""
    H = core.num_vertices
    return SpineInvariants(H, H - core.label_arcs(1), H, core.subgroup_rank)


def _gens(core: BasedCore) -> str:
    return ",".join(format_word(w) for w in free_basis(core))


# -- individual criteria -------------------------------------------------


@_timed
def check_realization_example(config: RunConfig) -> CheckResult:
    res = CheckResult("realization example <xy> under phi1 and phi2")
    gens = [parse_word("ab")]
    expected = {"a,b": (2, 1, 1), "a,Ab": (1, 1, 0)}
    for text, want in expected.items():
        res.cases += 1
        images = apply_substitution(gens, Substitution.parse(text))
        inv = spine_invariants(core_from_words(images))
        got = (inv.H, inv.n1, inv.n2)
        if got != want:
            res.fail(f"phi=({text}): got {got}, want {want}")
    return res


def _word_corpus(config: RunConfig) -> list[BasedCore]:
    return random_cores(config.rng("corpus"), config.count, 2, config.max_gens, config.max_len)


@_timed
def check_rank_identity(config: RunConfig, invariants=spine_invariants) -> CheckResult:
    res = CheckResult("rank identity rk = H - (n1 + n2) + 1")
    for core in _word_corpus(config):
        res.cases += 1
        inv = invariants(core)
        if core.subgroup_rank != inv.H - (inv.n1 + inv.n2) + 1:
            res.fail(f"<{_gens(core)}>: rank {core.subgroup_rank}, invariants {inv}")
    return res


@_timed
def check_checker_counts(config: RunConfig) -> CheckResult:
    res = CheckResult("interior vertices >= n1 + n2 and checkers = rank - 1")
    for core in _word_corpus(config):
        res.cases += 1
        inv = spine_invariants(core)
        es = extended_spine(core)
        if (es.n(1), es.n(2)) != (inv.n1, inv.n2):
            res.fail(f"<{_gens(core)}>: pair enumeration {es.n(1), es.n(2)} vs formula {inv.n1, inv.n2}")
        if len(es.interior) < inv.n1 + inv.n2:
            res.fail(f"<{_gens(core)}>: {len(es.interior)} interior < {inv.n1 + inv.n2}")
        if checker_count(es) != core.subgroup_rank - 1:
            res.fail(f"<{_gens(core)}>: {checker_count(es)} checkers, rank {core.subgroup_rank}")
        if any(es.ambient_coboundary(v) not in (0, 3) for v in es.graph.graph.vertices):
            res.fail(f"<{_gens(core)}>: a vertex has neither 0 nor 3 coboundary darts")
    return res


@_timed
def check_nielsen_schreier(config: RunConfig, count: int = 200, max_index: int = 50) -> CheckResult:
    res = CheckResult("Nielsen-Schreier on random complete cores")
    cfg = RunConfig(seed=config.seed, count=count, max_index=max_index)
    for core in sample_complete(cfg):
        res.cases += 1
        n = core.num_vertices
        basis = schreier_basis(core)
        if core.subgroup_rank != n + 1:
            res.fail(f"index {n}: rank {core.subgroup_rank}")
        if len(basis) != n + 1:
            res.fail(f"index {n}: {len(basis)} Schreier words")
        if core_from_words(basis) != core:
            res.fail(f"index {n}: Schreier basis re-folds to a different core")
    return res


def _bound_case(pair: tuple[BasedCore, BasedCore]):
    return compare(*pair)


def _pairs(config: RunConfig) -> list[tuple[BasedCore, BasedCore]]:
    rng = config.rng("pairs")
    cores = random_cores(rng, 2 * config.count, 2, config.max_gens, config.max_len)
    return list(zip(cores[::2], cores[1::2]))


@_timed
def check_bound(config: RunConfig) -> CheckResult:
    res = CheckResult("exact_sum <= spine bound for i = 1 and i = 2")
    pairs = _pairs(config)
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            reports = list(pool.map(_bound_case, pairs, chunksize=32))
    else:
        reports = [_bound_case(p) for p in pairs]
    for (c1, c2), rep in zip(pairs, reports):
        res.cases += 1
        res.data.append(rep.csv_row())
        for i, bound in ((1, rep.paper_bound_i1), (2, rep.paper_bound_i2)):
            if rep.exact_sum > bound:
                res.fail(f"<{_gens(c1)}> x <{_gens(c2)}>: exact {rep.exact_sum} > bound_i{i} {bound}")
            if error_term(rep.inv1, rep.inv2, i) < 0:
                res.fail(f"<{_gens(c1)}> x <{_gens(c2)}>: negative error term")
    return res


@_timed
def check_tightness(config: RunConfig) -> CheckResult:
    res = CheckResult("tightness of <a, bab^-1> against itself")
    res.cases = 1
    c = core_from_words([parse_word("a"), parse_word("baB")])
    rep = compare(c, c)
    got = (rep.exact_sum, rep.paper_bound_i1, rep.paper_bound_i2)
    if got != (1, 1, 4):
        res.fail(f"(exact, i1, i2) = {got}, want (1, 1, 4)")
    return res


@_timed
def check_family(config: RunConfig, k_max: int = 50) -> CheckResult:
    res = CheckResult("family separation k = 2..50")
    for k in range(2, k_max + 1):
        res.cases += 1
        c1, c2 = family_pair(k)
        rep = compare(c1, c2)
        for inv in (rep.inv1, rep.inv2):
            if (inv.H, inv.n1, inv.n2, inv.rank) != (k, 0, 1, k):
                res.fail(f"k={k}: invariants {inv}")
        if error_term(rep.inv1, rep.inv2, 1) != 0 or rep.paper_bound_i1 != (k - 1) ** 2:
            res.fail(f"k={k}: bound_i1 {rep.paper_bound_i1}")
        if rep.exact_sum > (k - 1) ** 2:
            res.fail(f"k={k}: exact {rep.exact_sum} > {(k - 1) ** 2}")
        want = ((k - 1) ** 2, (k - 2) * (k - 1), max((k - 2) ** 2 - 1, 0), (k - 3) ** 2)
        if rep.eps.as_tuple() != want:
            res.fail(f"k={k}: classical eps {rep.eps.as_tuple()} want {want}")
    return res


@_timed
def check_double_cosets(config: RunConfig, corpus_size: int = 100, max_len: int = 6,
                        max_vertices: int = 6) -> CheckResult:
    """Reps from the product against the word-scan oracle, matched by an independent membership test."""
    res = CheckResult("double coset reps match brute force (maxLen 6)")
    rng = config.rng("double-cosets")
    cores = random_cores(rng, corpus_size, 2, 3, 6, max_vertices=max_vertices)
    for c1, c2 in itertools.product(cores, repeat=2):
        res.cases += 1
        reps = [g for g, _ in double_coset_reps(fiber_product(c1, c2), c1, c2)]
        oracle = brute_force_double_cosets(c1, c2, max_len)
        label = f"<{_gens(c1)}> x <{_gens(c2)}>"
        if len(reps) != len(oracle):
            res.fail(f"{label}: {len(reps)} reps vs {len(oracle)} oracle classes")
            continue
        for o in oracle:
            hits = [g for g in reps if double_coset_contains(c1, c2, g, o)]
            if len(hits) != 1:
                res.fail(f"{label}: oracle word {format_word(o)} matches {len(hits)} reps")
    return res


@_timed
def check_hall_completion(config: RunConfig, count: int = 200) -> CheckResult:
    res = CheckResult("finite-cover completion avoiding X")
    rng = config.rng("hall")
    cores = random_cores(rng, count, 2, 4, 8, max_vertices=8)
    for core in cores:
        avoid = []
        while len(avoid) < rng.randint(0, 3) or (not avoid and rng.random() < 0.9):
            x = random_word(rng, 2, rng.randint(1, 10))
            if not trace(core, x).closed:
                avoid.append(x)
        res.cases += 1
        label = f"<{_gens(core)}> avoiding {[format_word(x) for x in avoid]}"
        cover = complete_to_finite_cover(core, avoid)
        if not cover.is_complete():
            res.fail(f"{label}: not a finite cover")
            continue
        if not all(trace(cover, w).closed for w in free_basis(core)):
            res.fail(f"{label}: lost a generator")
        if any(trace(cover, x).closed for x in avoid):
            res.fail(f"{label}: an avoided word became a member")
        if not _schreier_extends(core, cover):
            res.fail(f"{label}: Schreier basis does not extend")
    return res


def _schreier_extends(core: BasedCore, cover: BasedCore) -> bool:
    """A's Schreier words (BFS tree) appear among the cover's for an extended tree."""
    phi = embedding(core, cover)
    small, big = core.labeled_graph, cover.labeled_graph
    tree = spanning_tree(small.graph, 0)
    image = {big.dart_at(phi[small.graph.src[d]], small.labels[d]) for d in tree.darts}
    seed = Subgraph(frozenset(phi.values()), frozenset(image))
    big_tree = extend_to_spanning_tree(big.graph, seed)
    return set(schreier_words(core, tree)) <= set(schreier_words(cover, big_tree))


def _perm_group_order(perms: list[tuple[int, ...]]) -> int:
    n = len(perms[0])
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = tuple(p[g[x]] for x in range(n))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return len(seen)


def _cayley_core(perms: list[tuple[int, ...]]) -> BasedCore:
    """Regular action of the group generated by ``perms``: a Galois cover."""
    n = len(perms[0])
    elements = [tuple(range(n))]
    index = {elements[0]: 0}
    i = 0
    while i < len(elements):
        g = elements[i]
        i += 1
        for p in perms:
            h = tuple(p[g[x]] for x in range(n))
            if h not in index:
                index[h] = len(elements)
                elements.append(h)
    actions = [[index[tuple(p[g[x]] for x in range(n))] for g in elements] for p in perms]
    return permutation_core(actions)


@_timed
def check_galois_and_escape(config: RunConfig, normal: int = 30, nonnormal: int = 20,
                            escapes: int = 100) -> CheckResult:
    res = CheckResult("Galois test and escape witnesses")
    rng = config.rng("galois")
    for _ in range(normal):
        m = rng.randint(2, 4)
        perms = [tuple(rng.sample(range(m), m)) for _ in range(2)]
        core = _cayley_core(perms)
        res.cases += 1
        if not is_galois(core):
            res.fail(f"Cayley graph of order {core.num_vertices} reported non-Galois")
    found = 0
    while found < nonnormal:
        n = rng.randint(3, 7)
        perms = random_transitive_perms(rng, n)
        core = permutation_core(perms)
        regular = _perm_group_order([tuple(p) for p in perms]) == n
        result = is_galois(core)
        if bool(result) != regular:
            res.fail(f"index {n}: Galois={bool(result)} but regular={regular}")
            res.cases += 1
            continue
        if regular:
            continue
        found += 1
        res.cases += 1
        w, p = result.witness, result.vertex
        closed_here = trace(core, w).closed
        closed_there = core.walk(p, w) == (p, len(w))
        if not closed_here or closed_there:
            res.fail(f"index {n}: witness {format_word(w)} does not separate 0 and {p}")
    made = 0
    while made < escapes:
        core = core_from_words(random_generators(rng, 2, 4, 8))
        if core.is_complete():
            continue
        w = random_word(rng, 2, rng.randint(1, 8))
        made += 1
        res.cases += 1
        g = escape_witness(core, w)
        if trace(core, multiply(g, w, inverse(g))).closed:
            res.fail(f"<{_gens(core)}>, w={format_word(w)}: witness {format_word(g)} fails")
    return res


@_timed
def check_lattice_excision(config: RunConfig, count: int = 50) -> CheckResult:
    res = CheckResult("lattice excision preserves rank")
    rng = config.rng("excision")
    for _ in range(count):
        base = random_base_graph(rng, rng.randint(2, 7), 2)
        tree = random_spanning_tree(rng, base)
        v = rng.choice(base.vertices)
        loops = [random_loop(rng, base, v, rng.randint(1, 10)) for _ in range(rng.randint(1, 3))]
        res.cases += 1
        _, words = lattice_excision(base, tree, loops)
        excised = core_from_words(words).subgroup_rank
        folded, _ = fold_over_base(base, loops)
        direct = graph_rank(folded)
        if excised != direct:
            res.fail(f"base with {len(base.vertices)} vertices: excised rank {excised}, direct {direct}")
    return res


CRITERIA = (
    check_realization_example,
    check_rank_identity,
    check_checker_counts,
    check_nielsen_schreier,
    check_bound,
    check_tightness,
    check_family,
    check_double_cosets,
    check_hall_completion,
    check_galois_and_escape,
    check_lattice_excision,
)


def run_suite(config: RunConfig, mutant: str | None = None) -> list[CheckResult]:
    results = []
    for check in CRITERIA:
        if check is check_rank_identity and mutant == "skip-n2":
            results.append(check(config, invariants=_mutant_invariants))
        else:
            results.append(check(config))
    return results


def write_csv(path: str, rows: list[tuple]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        writer.writerows(rows)


def write_svg(path: str, rows: list[tuple]) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "stallings"

    col = {name: i for i, name in enumerate(CSV_FIELDS)}
    exact = [r[col["exact"]] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    base = [(r[col["rk1"]] - 1) * (r[col["rk2"]] - 1) for r in rows]
    series = {
        "bound i=1": [r[col["paper_i1"]] for r in rows],
        "bound i=2": [r[col["paper_i2"]] for r in rows],
        "Neumann": [b + r[col["neumann"]] for b, r in zip(base, rows)],
    }
    for (name, ys), marker in zip(series.items(), "osx"):
        ax.scatter(exact, ys, s=8, marker=marker, label=name, alpha=0.6)
    hi = max([1, *exact])
    ax.plot([0, hi], [0, hi], color="grey", lw=0.8)
    ax.set_xlabel("exact sum of rk - 1")
    ax.set_ylabel("bound")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def classical_table(ranks: range) -> list[tuple]:
    return [(a, b, *classical_bounds(a, b).as_tuple()) for a in ranks for b in ranks]


__all__ = ["CheckResult", "CRITERIA", "run_suite", "write_csv", "write_svg", "paper_bound"]
