"""Fiber products of based cores over the bouquet.

The product of two cores has a vertex for every pair of vertices and an
arc for every pair of equally labeled arcs.  Its non-simply-connected
components are exactly the non-trivial intersections ``A1 ∩ g A2 g^-1``,
one per double coset ``A1 g A2``.

Convention: a component's representative ``g`` means the intersection
``A1 ∩ g A2 g^-1``; ``g`` and ``g'`` give the same component exactly when
``g' ∈ A1 g A2``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .cores import BasedCore, LabeledGraph, core_from_succ, fold, labeled_graph_from_succ, rebase
from .words import Word, format_word, free_reduce, inverse, letters, reduced_words


def _check_same_base(c1: BasedCore, c2: BasedCore) -> None:
    if c1.rank != c2.rank:
        raise ValueError(f"base ranks differ: {c1.rank} vs {c2.rank}")


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    num_arcs: int
    pair: tuple[int, int]  # core vertices of the lowest product vertex
    rep: Word

    @property
    def rank(self) -> int:
        return self.num_arcs - len(self.vertices) + 1

    @property
    def simply_connected(self) -> bool:
        return self.rank == 0

    def to_dict(self) -> dict:
        return {"rank": self.rank, "simply_connected": self.simply_connected, "rep": format_word(self.rep)}


@dataclass(frozen=True, eq=False)
class PullbackReport:
    c1: BasedCore
    c2: BasedCore
    succ: dict[int, dict[int, int]] = field(repr=False)
    components: tuple[Component, ...]

    def pair(self, v: int) -> tuple[int, int]:
        return divmod(v, self.c2.num_vertices)

    @cached_property
    def product(self) -> LabeledGraph:
        return labeled_graph_from_succ(self.succ, self.c1.rank)

    @cached_property
    def projections(self) -> tuple[dict[int, int], dict[int, int]]:
        """Dart maps ``t1``, ``t2`` from the product to each factor."""
        lg = self.product
        g1, g2 = self.c1.labeled_graph, self.c2.labeled_graph
        t1, t2 = {}, {}
        for d in lg.graph.darts:
            p, q = self.pair(lg.graph.src[d])
            lab = lg.labels[d]
            t1[d] = g1.dart_at(p, lab)
            t2[d] = g2.dart_at(q, lab)
        return t1, t2

    @property
    def nontrivial(self) -> list[Component]:
        return [c for c in self.components if not c.simply_connected]

    def to_dict(self) -> dict:
        return {
            "components": [c.to_dict() for c in self.components],
            "sum_rk_minus_1": intersection_rank_sum(self),
        }


def fiber_product(c1: BasedCore, c2: BasedCore) -> PullbackReport:
    _check_same_base(c1, c2)
    n1, n2 = c1.num_vertices, c2.num_vertices
    succ: dict[int, dict[int, int]] = {}
    for p in range(n1):
        s1 = c1.succ[p]
        for q in range(n2):
            s2 = c2.succ[q]
            succ[p * n2 + q] = {lab: s1[lab] * n2 + s2[lab] for lab in s1 if lab in s2}

    words1, words2 = c1.bfs_words(), c2.bfs_words()
    seen = set()
    comps = []
    for root in range(n1 * n2):
        if root in seen:
            continue
        seen.add(root)
        members = [root]
        queue = deque([root])
        darts = 0
        while queue:
            v = queue.popleft()
            darts += len(succ[v])
            for w in succ[v].values():
                if w not in seen:
                    seen.add(w)
                    members.append(w)
                    queue.append(w)
        p, q = divmod(root, n2)
        rep = free_reduce(words1[p] + inverse(words2[q]))
        comps.append(Component(tuple(sorted(members)), darts // 2, (p, q), rep))
    return PullbackReport(c1, c2, succ, tuple(comps))


def component_core(report: PullbackReport, comp: Component) -> BasedCore:
    """Core of the component at its lowest vertex: ``A1^h1 ∩ A2^h2`` for the BFS words ``h1, h2``."""
    sub = {v: report.succ[v] for v in comp.vertices}
    return core_from_succ(sub, comp.vertices[0], report.c1.rank)


def pointed_intersection(c1: BasedCore, c2: BasedCore) -> BasedCore:
    """Core of ``A1 ∩ A2``: the product component through the pair of basepoints."""
    _check_same_base(c1, c2)
    succ: dict[tuple[int, int], dict[int, tuple[int, int]]] = {}
    queue = deque([(0, 0)])
    succ[(0, 0)] = {}
    while queue:
        v = queue.popleft()
        s1, s2 = c1.succ[v[0]], c2.succ[v[1]]
        for lab in s1:
            if lab in s2:
                w = (s1[lab], s2[lab])
                succ[v][lab] = w
                if w not in succ:
                    succ[w] = {}
                    queue.append(w)
    return core_from_succ(succ, (0, 0), c1.rank)


def conjugate_intersection(c1: BasedCore, c2: BasedCore, g: Sequence[int]) -> BasedCore:
    """Core of ``A1 ∩ g A2 g^-1``."""
    return pointed_intersection(c1, rebase(c2, inverse(free_reduce(g))))


def double_coset_reps(
    report: PullbackReport, c1: BasedCore | None = None, c2: BasedCore | None = None, verify: bool = True
) -> list[tuple[Word, Component]]:
    """One representative per non-simply-connected component.

    With ``verify``, each ``A1 ∩ g A2 g^-1`` is recomputed from scratch
    and checked to be non-trivial.
    """
    c1 = report.c1 if c1 is None else c1
    c2 = report.c2 if c2 is None else c2
    out = []
    for comp in report.nontrivial:
        if verify and conjugate_intersection(c1, c2, comp.rep).is_trivial:
            raise AssertionError(f"representative {format_word(comp.rep)} gives a trivial intersection")
        out.append((comp.rep, comp))
    return out


def intersection_rank_sum(report: PullbackReport) -> int:
    """Sum of ``rank - 1`` over the non-simply-connected components."""
    return sum(c.rank - 1 for c in report.nontrivial)


def join(c1: BasedCore, c2: BasedCore) -> BasedCore:
    """Core of ``<A1, A2>``: fold the wedge of the two cores at their basepoints."""
    _check_same_base(c1, c2)
    n1 = c1.num_vertices

    def shift(q: int) -> int:
        return 0 if q == 0 else n1 + q - 1

    edges = [(p, lab, t) for p, s in enumerate(c1.succ) for lab, t in s.items() if lab > 0]
    edges += [(shift(q), lab, shift(t)) for q, s in enumerate(c2.succ) for lab, t in s.items() if lab > 0]
    roots, succ = fold(n1 + c2.num_vertices - 1, edges)
    return core_from_succ(succ, roots[0], c1.rank)


# -- double coset oracles ------------------------------------------------


def _readable(core: BasedCore, max_len: int) -> dict[Word, int]:
    """Every reduced word of length <= max_len readable from the basepoint, with its endpoint."""
    out = {(): 0}
    frontier = [((), 0)]
    for _ in range(max_len):
        nxt = []
        for w, v in frontier:
            for lab, t in core.succ[v].items():
                if w and lab == -w[-1]:
                    continue
                u = w + (lab,)
                out[u] = t
                nxt.append((u, t))
        frontier = nxt
    return out


def brute_force_double_cosets(c1: BasedCore, c2: BasedCore, max_len: int) -> list[Word]:
    """Shortlex-first word of every double coset ``A1 g A2`` with ``|g| <= max_len``
    and ``A1 ∩ g A2 g^-1`` non-trivial.

    Every word of such a double coset factors as ``g = h1 h2^-1`` with
    ``h1`` readable in the first core and ``h2`` in the second; the pair of
    endpoints then lies in a product component with a cycle, and words are
    grouped by that component.  Components come from a union-find over
    arc pairs, independent of :func:`fiber_product`.
    """
    _check_same_base(c1, c2)
    n2 = c2.num_vertices
    parent = list(range(c1.num_vertices * n2))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    arc_pairs = []
    for p, s1 in enumerate(c1.succ):
        for lab, p2 in s1.items():
            if lab < 0:
                continue
            for q, s2 in enumerate(c2.succ):
                if lab in s2:
                    a, b = p * n2 + q, p2 * n2 + s2[lab]
                    arc_pairs.append((a, b))
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
    size: dict[int, int] = {}
    arcs: dict[int, int] = {}
    for v in range(len(parent)):
        r = find(v)
        size[r] = size.get(r, 0) + 1
    for a, _ in arc_pairs:
        r = find(a)
        arcs[r] = arcs.get(r, 0) + 1
    cyclic = {r for r in size if arcs.get(r, 0) >= size[r]}

    read1, read2 = _readable(c1, max_len), _readable(c2, max_len)
    found: dict[int, Word] = {}
    for g in reduced_words(c1.rank, max_len):
        for k in range(len(g) + 1):
            p = read1.get(g[:k])
            if p is None:
                break
            q = read2.get(inverse(g[k:]))
            if q is None:
                continue
            r = find(p * n2 + q)
            if r in cyclic:
                found.setdefault(r, g)
                break
    return sorted(found.values(), key=lambda w: (len(w), [letters(c1.rank).index(x) for x in w]))


def double_coset_contains(c1: BasedCore, c2: BasedCore, g: Sequence[int], h: Sequence[int]) -> bool:
    """Decide ``h ∈ A1 g A2``.

    Equivalent to ``A2 ∩ B y`` being non-empty for ``B = g^-1 A1 g`` and
    ``y = g^-1 h``.  A witness is a reduced word closed in the core of
    ``A2`` and leading from the basepoint of ``B`` to the vertex ``B y``;
    such a path never leaves the core of ``B`` plus the hanging path of
    ``y``, so a search in that finite product decides it.
    """
    _check_same_base(c1, c2)
    g, h = free_reduce(g), free_reduce(h)
    b = rebase(c1, g)
    y = free_reduce(inverse(g) + h)
    succ = {v: dict(s) for v, s in enumerate(b.succ)}
    v, k = b.walk(0, y)
    n = len(succ)
    for x in y[k:]:
        succ[n] = {-x: v}
        succ[v][x] = n
        v, n = n, n + 1
    goal = (v, 0)
    seen = {(0, 0)}
    queue = deque([(0, 0)])
    while queue:
        p, q = queue.popleft()
        if (p, q) == goal:
            return True
        s2 = c2.succ[q]
        for lab, p2 in succ[p].items():
            if lab in s2:
                nxt = (p2, s2[lab])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return False
