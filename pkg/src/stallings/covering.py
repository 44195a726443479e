"""Per-subgroup analysis of based cores over the rank-2 bouquet.

Spine invariants (vertex count ``H`` and the pair counts ``n1``, ``n2``),
extended spines with their pairs and checker placement, finite index and
normality tests, completion to a finite cover avoiding given elements,
Schreier bases and conjugation escape witnesses.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .cores import (
    BasedCore,
    LabeledGraph,
    core_from_succ,
    labeled_graph_from_succ,
    trace,
)
from .graph import Subgraph, coboundary, spanning_tree, tree_path
from .words import Word, cyclic_reduce, free_reduce, inverse, letters, multiply, reduced_words

INFINITE = math.inf


def index(core: BasedCore) -> int | float:
    """Index of the subgroup: vertex count if the core is a complete cover, else ``inf``."""
    if core.rank < 1:
        raise ValueError("index needs a base of rank at least 1")
    return core.num_vertices if core.is_complete() else INFINITE


def _require_rank2_nontrivial(core: BasedCore) -> None:
    if core.rank != 2:
        raise ValueError("spine invariants are defined over a rank-2 base only")
    if core.is_trivial:
        raise ValueError("spine invariants need a non-trivial subgroup")


@dataclass(frozen=True)
class SpineInvariants:
    H: int
    n1: int
    n2: int
    rank: int

    def to_dict(self) -> dict:
        return {"H": self.H, "n1": self.n1, "n2": self.n2, "rank": self.rank}

    def n(self, i: int) -> int:
        return (self.n1, self.n2)[i - 1]


def spine_invariants(core: BasedCore) -> SpineInvariants:
    """``H`` = spine vertices, ``n_i`` = pairs of label ``i``.

    Inside a folded core the label-``i`` darts form disjoint paths and
    cycles; each maximal path (a single vertex counts) yields one pair, so
    ``n_i = H - #(label-i arcs)``.
    """
    _require_rank2_nontrivial(core)
    H = core.num_vertices
    n1 = H - core.label_arcs(1)
    n2 = H - core.label_arcs(2)
    inv = SpineInvariants(H, n1, n2, core.subgroup_rank)
    assert inv.rank == H - n1 - n2 + 1
    return inv


@dataclass(frozen=True)
class XPair:
    label: int
    tips: tuple[int, int]  # (v1, v2): v1 feeds the segment, v2 is fed by it
    path: tuple[int, ...]  # vertices of gamma, tips included


@dataclass(frozen=True)
class ExtendedSpine:
    graph: LabeledGraph
    interior: tuple[int, ...]
    boundary: tuple[int, ...]
    pairs: tuple[XPair, ...]
    checkers: frozenset[int]

    def n(self, i: int) -> int:
        return sum(1 for p in self.pairs if p.label == i)

    def ambient_coboundary(self, v: int) -> int:
        """Darts of the full covering graph leaving ``v`` but not in the extended spine."""
        return 2 * self.graph.rank - self.graph.graph.degree(v)

    def spine_coboundary(self) -> frozenset[int]:
        """Coboundary of the spine inside the extended spine: the tip darts."""
        g = self.graph.graph
        spine = Subgraph(
            frozenset(self.interior),
            frozenset(d for d in g.darts if g.src[d] in self.interior and g.target(d) in self.interior),
        )
        return coboundary(g, spine)


def extended_spine(core: BasedCore) -> ExtendedSpine:
    """Add one tip arc per missing direction and pair tips along label segments.

    Black checkers go on every interior vertex; each ``x1``-pair removes the
    checker from the first interior vertex after ``v1``, each ``x2``-pair
    removes the lowest-numbered checker still present.
    """
    _require_rank2_nontrivial(core)
    n = core.num_vertices
    succ = {v: dict(s) for v, s in enumerate(core.succ)}
    tip_at: dict[tuple[int, int], int] = {}
    t = n
    for v in range(n):
        for lab in letters(2):
            if lab not in core.succ[v]:
                succ[v][lab] = t
                succ[t] = {-lab: v}
                tip_at[(v, lab)] = t
                t += 1
    pairs = []
    for i in (1, 2):
        for start in range(n):
            if -i in core.succ[start]:
                continue
            path = [tip_at[(start, -i)], start]
            v = start
            while i in core.succ[v]:
                v = core.succ[v][i]
                path.append(v)
            path.append(tip_at[(v, i)])
            pairs.append(XPair(i, (path[0], path[-1]), tuple(path)))
    checkers = set(range(n))
    for p in pairs:
        if p.label == 1:
            checkers.discard(p.path[1])
    for p in pairs:
        if p.label == 2:
            checkers.discard(min(checkers))
    return ExtendedSpine(
        graph=labeled_graph_from_succ(succ, 2),
        interior=tuple(range(n)),
        boundary=tuple(range(n, t)),
        pairs=tuple(pairs),
        checkers=frozenset(checkers),
    )


def checker_count(es: ExtendedSpine) -> int:
    return len(es.checkers)


# -- finite index --------------------------------------------------------


def _require_finite(core: BasedCore, what: str) -> None:
    if not core.is_complete():
        raise ValueError(f"{what} needs a finite-index subgroup")


@dataclass(frozen=True)
class GaloisResult:
    galois: bool
    witness: Word | None = None  # closed at the basepoint, open at ``vertex``
    vertex: int | None = None

    def __bool__(self) -> bool:
        return self.galois


def is_galois(core: BasedCore) -> GaloisResult:
    """Normality of a finite-index subgroup.

    For each vertex ``p`` try the label-preserving map determined by
    ``basepoint -> p``; it exists for all ``p`` exactly when the cover is
    Galois.  When it fails, the Schreier word of the offending arc is closed
    at the basepoint but not at ``p``.
    """
    _require_finite(core, "is_galois")
    words = core.bfs_words()
    for p in range(1, core.num_vertices):
        image = [core.walk(p, w)[0] for w in words]
        for v in range(core.num_vertices):
            for lab, w in core.succ[v].items():
                if core.succ[image[v]][lab] != image[w]:
                    witness = free_reduce(words[v] + (lab,) + inverse(words[w]))
                    return GaloisResult(False, witness, p)
    return GaloisResult(True)


def schreier_basis(core: BasedCore, tree: Subgraph | None = None) -> list[Word]:
    """Schreier generators: tree path in, one non-tree arc, tree path back.

    ``tree`` is a spanning tree of ``core.graph``; defaults to the
    breadth-first tree.  Arcs are oriented along their positive label.
    """
    _require_finite(core, "schreier_basis")
    return schreier_words(core, tree)


def schreier_words(core: BasedCore, tree: Subgraph | None = None) -> list[Word]:
    lg = core.labeled_graph
    g = lg.graph
    if tree is None:
        tree = spanning_tree(g, 0)
    to_vertex = {v: tree_path(g, tree, 0, v) for v in g.vertices}

    def label(darts):
        return tuple(lg.labels[d] for d in darts)

    out = []
    for d, _ in g.arcs:
        if d in tree.darts:
            continue
        s, t = g.src[d], g.target(d)
        out.append(free_reduce(label(to_vertex[s]) + (lg.labels[d],) + inverse(label(to_vertex[t]))))
    return out


def complete_to_finite_cover(core: BasedCore, avoid: Sequence[Sequence[int]] = ()) -> BasedCore:
    """Finite-index subgroup containing ``A`` as a free factor and missing every ``x`` in ``avoid``.

    Each element of ``avoid`` is read from the basepoint; whatever part of
    it leaves the core is attached as a hanging path.  Then every maximal
    label-``i`` segment that is not already a cycle is closed up by one new
    ``i``-arc from its last vertex back to its first.  The enlarged graph
    embeds in the result, so the avoided words keep their non-closed lifts.
    """
    avoid = [free_reduce(x) for x in avoid]
    for x in avoid:
        if not x:
            raise ValueError("cannot avoid the trivial element")
        if trace(core, x).closed:
            raise ValueError(f"{x} already lies in the subgroup")
    succ = {v: dict(s) for v, s in enumerate(core.succ)}
    n = len(succ)
    for x in avoid:
        v, k = 0, 0
        while k < len(x) and x[k] in succ[v]:
            v = succ[v][x[k]]
            k += 1
        for lab in x[k:]:
            succ[n] = {-lab: v}
            succ[v][lab] = n
            v = n
            n += 1
    for i in range(1, core.rank + 1):
        for start in range(n):
            if -i in succ[start]:
                continue
            end = start
            while i in succ[end]:
                end = succ[end][i]
            succ[end][i] = start
            succ[start][-i] = end
    result = core_from_succ(succ, 0, core.rank)
    assert result.is_complete()
    return result


def embedding(small: BasedCore, big: BasedCore) -> dict[int, int]:
    """Label- and basepoint-preserving vertex map ``small -> big``; raises if none exists."""
    image = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for lab, w in small.succ[v].items():
            target = big.succ[image[v]].get(lab)
            if target is None:
                raise ValueError("no label-preserving map")
            if w in image:
                if image[w] != target:
                    raise ValueError("no label-preserving map")
            else:
                image[w] = target
                queue.append(w)
    return image


# -- escape witnesses ----------------------------------------------------


def escape_witness(core: BasedCore, w: Sequence[int], search_depth: int = 3) -> Word:
    """A word ``g`` with ``g w g^-1`` outside the subgroup.

    Short candidates are tried breadth-first; if none works, one is built
    by walking from the basepoint to a vertex with a missing direction and
    stepping out through it, chosen so that ``g w g^-1`` is already reduced.
    The answer is always checked by tracing.
    """
    w = free_reduce(w)
    if not w:
        raise ValueError("escape_witness needs a non-trivial element")
    if core.is_complete():
        raise ValueError("escape_witness needs an infinite-index subgroup")
    for g in reduced_words(core.rank, search_depth):
        if not trace(core, multiply(g, w, inverse(g))).closed:
            return g
    g = _constructed_witness(core, w)
    assert not trace(core, multiply(g, w, inverse(g))).closed
    return g


def _constructed_witness(core: BasedCore, w: Word) -> Word:
    wc, c = cyclic_reduce(w)
    banned = {-wc[0], wc[-1]}
    words = core.bfs_words()
    for v in range(core.num_vertices):
        for y in core.missing(v):
            g = words[v] + (y,)
            if y in banned:
                t = next(x for x in letters(core.rank) if x not in banned and x != -y)
                g = g + (t,)
            # g . wc . g^-1 is reduced and begins with g, which leaves the core.
            return multiply(g, inverse(c))
    raise AssertionError("complete core has no escape")


def invariants_report(core: BasedCore) -> dict:
    doc = spine_invariants(core).to_dict()
    idx = index(core)
    doc["index"] = "infinite" if idx == INFINITE else idx
    doc["galois"] = is_galois(core).galois if idx != INFINITE else None
    return doc
