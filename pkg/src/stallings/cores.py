"""Labeled graphs over a bouquet, Stallings folding and based cores.

A finitely generated subgroup ``A`` of the free group ``F_r`` is stored as
its based core: the folded graph obtained from a wedge of generator loops,
trimmed to the union of reduced closed paths at the basepoint.  Cores are
kept in a canonical numbering (breadth-first from the basepoint, labels in
the order ``1, -1, 2, -2, ...``) so that equal subgroups compare equal and
dump to identical documents.
"""

from __future__ import annotations

import json
import operator
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .graph import Graph, Path, Subgraph, rank as graph_rank, tree_path, validate
from .words import Word, check_letters, format_word, free_reduce, inverse, letters

Succ = dict[int, dict[int, int]]


@dataclass(frozen=True)
class LabeledGraph:
    """A graph with each dart labeled by a signed generator index.

    ``labels[inv(d)] == -labels[d]`` for every dart.
    """

    graph: Graph
    labels: Mapping[int, int]
    rank: int = 2

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))

    def validate(self) -> str | None:
        problem = validate(self.graph)
        if problem:
            return problem
        if set(self.labels) != set(self.graph.darts):
            return "labels must be given for exactly the darts"
        for d, lab in self.labels.items():
            if lab == 0 or abs(lab) > self.rank:
                return f"dart {d} has label {lab} outside rank {self.rank}"
            if self.labels[self.graph.inv[d]] != -lab:
                return f"labels are not antisymmetric at dart {d}"
        return None

    def is_folded(self) -> bool:
        seen = set()
        for d in self.graph.darts:
            key = (self.graph.src[d], self.labels[d])
            if key in seen:
                return False
            seen.add(key)
        return True

    @cached_property
    def _index(self) -> dict[tuple[int, int], int]:
        return {(self.graph.src[d], self.labels[d]): d for d in self.graph.darts}

    def dart_at(self, v: int, label: int) -> int | None:
        """The dart leaving ``v`` with ``label`` (graph assumed folded)."""
        return self._index.get((v, label))

    def succ(self) -> Succ:
        out: Succ = {v: {} for v in self.graph.vertices}
        for d in self.graph.darts:
            out[self.graph.src[d]][self.labels[d]] = self.graph.target(d)
        return out

    def to_dict(self) -> dict:
        doc = self.graph.to_dict()
        doc["labels"] = {str(d): self.labels[d] for d in self.graph.darts}
        doc["rank"] = self.rank
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> LabeledGraph:
        g = Graph.from_dict(doc)
        lg = cls(g, {int(k): int(v) for k, v in doc["labels"].items()}, int(doc.get("rank", 2)))
        problem = lg.validate()
        if problem:
            raise ValueError(problem)
        return lg


def labeled_graph_from_succ(succ: Mapping[int, Mapping[int, int]], rank: int) -> LabeledGraph:
    """Number arcs in vertex then label order; arc ``k`` has darts ``2k`` (positive label) and ``2k+1``."""
    inv, src, labels = {}, {}, {}
    k = 0
    for v in sorted(succ):
        for lab in letters(rank):
            if lab > 0 and lab in succ[v]:
                w = succ[v][lab]
                d, e = 2 * k, 2 * k + 1
                inv[d], inv[e] = e, d
                src[d], src[e] = v, w
                labels[d], labels[e] = lab, -lab
                k += 1
    return LabeledGraph(Graph(tuple(sorted(succ)), inv, src), labels, rank)


# -- folding -------------------------------------------------------------


def fold(
    num_vertices: int,
    edges: Iterable[tuple[int, Hashable, int]],
    inverse_label: Callable = operator.neg,
) -> tuple[list[int], dict[int, dict]]:
    """Stallings-fold a labeled multigraph on vertices ``0..n-1``.

    ``edges`` are ``(source, label, target)`` triples, one per arc.
    Returns ``(root, succ)`` where ``root[x]`` is the vertex that ``x`` was
    merged into and ``succ`` the folded transition table on the roots.
    Merges always keep the smaller identifier, so the result does not
    depend on edge order beyond vertex naming.
    """
    parent = list(range(num_vertices))
    adj: list[dict] = [{} for _ in range(num_vertices)]

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    pending = deque(edges)

    def merge(a: int, b: int) -> None:
        a, b = min(a, b), max(a, b)
        parent[b] = a
        for lab, t in adj[b].items():
            pending.append((a, lab, t))
        adj[b] = {}

    while pending:
        u, lab, v = pending.popleft()
        u, v = find(u), find(v)
        ilab = inverse_label(lab)
        x = adj[u].get(lab)
        if x is not None and find(x) != v:
            merge(find(x), v)
            pending.append((u, lab, v))
            continue
        y = adj[v].get(ilab)
        if y is not None and find(y) != u:
            merge(find(y), u)
            pending.append((u, lab, v))
            continue
        adj[u][lab] = v
        adj[v][ilab] = u

    roots = [find(x) for x in range(num_vertices)]
    succ = {
        x: {lab: find(t) for lab, t in adj[x].items()} for x in range(num_vertices) if parent[x] == x
    }
    return roots, succ


def trim(succ: Mapping[int, Mapping], basepoint) -> dict:
    """Delete hanging trees: repeatedly drop degree-one vertices other than the basepoint."""
    out = {v: dict(s) for v, s in succ.items()}
    leaves = deque(v for v in out if v != basepoint and len(out[v]) <= 1)
    while leaves:
        v = leaves.popleft()
        if v not in out or len(out[v]) > 1:
            continue
        for lab, t in out.pop(v).items():
            if t in out:
                for ilab in [k for k, s in out[t].items() if s == v]:
                    del out[t][ilab]
                if t != basepoint and len(out[t]) <= 1:
                    leaves.append(t)
    return out


def canonical_order(succ: Mapping[int, Mapping[int, int]], basepoint: int, rank: int) -> list[int]:
    """Vertices reachable from ``basepoint`` in breadth-first label order."""
    order = [basepoint]
    seen = {basepoint}
    i = 0
    alphabet = letters(rank)
    while i < len(order):
        v = order[i]
        i += 1
        s = succ[v]
        for lab in alphabet:
            w = s.get(lab)
            if w is not None and w not in seen:
                seen.add(w)
                order.append(w)
    return order


# -- based cores ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BasedCore:
    """Canonical based core: vertices ``0..n-1``, basepoint ``0``.

    ``succ[v][label]`` is the target of the dart leaving ``v`` with
    ``label``.  Build instances with :func:`core_from_succ` or
    :func:`core_from_words`; the constructor trusts its input.
    """

    rank: int
    succ: tuple[Mapping[int, int], ...]

    basepoint = 0

    @property
    def num_vertices(self) -> int:
        return len(self.succ)

    @property
    def num_arcs(self) -> int:
        return sum(len(s) for s in self.succ) // 2

    @property
    def subgroup_rank(self) -> int:
        return self.num_arcs - self.num_vertices + 1

    @property
    def is_trivial(self) -> bool:
        return self.num_arcs == 0

    def is_complete(self) -> bool:
        full = 2 * self.rank
        return all(len(s) == full for s in self.succ)

    def missing(self, v: int) -> list[int]:
        return [lab for lab in letters(self.rank) if lab not in self.succ[v]]

    def label_arcs(self, i: int) -> int:
        return sum(1 for s in self.succ if i in s)

    @cached_property
    def key(self) -> tuple:
        return (self.rank, tuple(tuple(sorted(s.items())) for s in self.succ))

    def __eq__(self, other) -> bool:
        return isinstance(other, BasedCore) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        gens = ",".join(format_word(w) for w in free_basis(self))
        return f"BasedCore(rank={self.rank}, vertices={self.num_vertices}, <{gens}>)"

    @cached_property
    def labeled_graph(self) -> LabeledGraph:
        return labeled_graph_from_succ(dict(enumerate(self.succ)), self.rank)

    @property
    def graph(self) -> Graph:
        return self.labeled_graph.graph

    def walk(self, v: int, w: Sequence[int]) -> tuple[int, int]:
        """Read ``w`` from ``v``; return ``(vertex reached, letters read)``."""
        for k, x in enumerate(w):
            nxt = self.succ[v].get(x)
            if nxt is None:
                return v, k
            v = nxt
        return v, len(w)

    def bfs_words(self) -> list[Word]:
        """Breadth-first (label-ordered) path label from the basepoint to each vertex."""
        words: list[Word | None] = [None] * self.num_vertices
        words[0] = ()
        queue = deque([0])
        alphabet = letters(self.rank)
        while queue:
            v = queue.popleft()
            for lab in alphabet:
                w = self.succ[v].get(lab)
                if w is not None and words[w] is None:
                    words[w] = words[v] + (lab,)
                    queue.append(w)
        return words  # type: ignore[return-value]

    # -- documents --

    def to_dict(self) -> dict:
        doc = self.labeled_graph.to_dict()
        doc["basepoint"] = 0
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping) -> BasedCore:
        lg = LabeledGraph.from_dict(doc)
        if not lg.is_folded():
            raise ValueError("core graph is not folded")
        bp = int(doc["basepoint"])
        succ = lg.succ()
        if bp not in succ:
            raise ValueError("basepoint is not a vertex")
        if len(canonical_order(succ, bp, lg.rank)) != len(succ):
            raise ValueError("core graph is not connected")
        if len(trim(succ, bp)) != len(succ):
            raise ValueError("core graph is not its own spine at the basepoint")
        return core_from_succ(succ, bp, lg.rank)


def dumps(obj) -> str:
    return json.dumps(obj.to_dict(), sort_keys=True)


def load_core(text: str) -> BasedCore:
    return BasedCore.from_dict(json.loads(text))


def core_from_succ(succ: Mapping[int, Mapping[int, int]], basepoint: int, rank: int) -> BasedCore:
    """Trim a folded transition table to its spine at ``basepoint`` and canonicalize."""
    trimmed = trim(succ, basepoint)
    order = canonical_order(trimmed, basepoint, rank)
    index = {v: i for i, v in enumerate(order)}
    table = tuple({lab: index[w] for lab, w in trimmed[v].items()} for v in order)
    return BasedCore(rank, table)


def core_from_words(gens: Iterable[Sequence[int]], rank: int = 2) -> BasedCore:
    """Fold the wedge of generator loops into the based core of ``<gens>``."""
    edges = []
    n = 1
    for w in gens:
        w = free_reduce(w)
        check_letters(w, rank)
        prev = 0
        for k, x in enumerate(w):
            if k == len(w) - 1:
                nxt = 0
            else:
                nxt = n
                n += 1
            edges.append((prev, x, nxt))
            prev = nxt
    roots, succ = fold(n, edges)
    return core_from_succ(succ, roots[0], rank)


def whole_group(rank: int = 2) -> BasedCore:
    return BasedCore(rank, ({lab: 0 for lab in letters(rank)},))


def trivial_core(rank: int = 2) -> BasedCore:
    return BasedCore(rank, ({},))


def free_basis(core: BasedCore) -> list[Word]:
    """Free basis read off the breadth-first spanning tree of the core."""
    words = core.bfs_words()
    tree_arcs = set()
    for v, w in enumerate(words):
        if w:
            parent, _ = core.walk(0, w[:-1])
            lab = w[-1]
            tree_arcs.add((parent, lab) if lab > 0 else (v, -lab))
    basis = []
    for v in range(core.num_vertices):
        for lab in letters(core.rank):
            if lab > 0 and lab in core.succ[v] and (v, lab) not in tree_arcs:
                t = core.succ[v][lab]
                basis.append(free_reduce(words[v] + (lab,) + inverse(words[t])))
    return basis


@dataclass(frozen=True)
class Trace:
    status: str  # "closed" | "nonclosed" | "escapes"
    vertex: int  # end vertex, or the vertex where reading stopped
    position: int  # letters read

    @property
    def closed(self) -> bool:
        return self.status == "closed"


def trace(core: BasedCore, w: Sequence[int]) -> Trace:
    """Read ``w`` from the basepoint.  ``closed`` exactly when ``w`` lies in the subgroup."""
    w = free_reduce(w)
    v, k = core.walk(0, w)
    if k < len(w):
        return Trace("escapes", v, k)
    return Trace("closed" if v == 0 else "nonclosed", v, k)


def is_member(core: BasedCore, w: Sequence[int]) -> bool:
    return trace(core, w).closed


def rebase(core: BasedCore, h: Sequence[int]) -> BasedCore:
    """Core of ``h^-1 A h``: move the basepoint to the end of ``h``.

    If ``h`` leaves the core, the rest of ``h`` is attached as a hanging
    path, as in the full covering graph.
    """
    h = free_reduce(h)
    v, k = core.walk(0, h)
    succ = {i: dict(s) for i, s in enumerate(core.succ)}
    n = len(succ)
    for x in h[k:]:
        succ[n] = {-x: v}
        succ[v][x] = n
        v = n
        n += 1
    return core_from_succ(succ, v, core.rank)


# -- bouquets, substitutions, lattice excision ---------------------------


@dataclass(frozen=True)
class Bouquet:
    rank: int

    @property
    def graph(self) -> Graph:
        return self.core.graph

    @property
    def core(self) -> BasedCore:
        return whole_group(self.rank)


def is_basis(images: Sequence[Sequence[int]], rank: int | None = None) -> bool:
    """True when ``r`` words in rank ``r`` generate the whole free group (hence form a basis)."""
    images = [tuple(w) for w in getattr(images, "images", images)]
    r = len(images) if rank is None else rank
    if len(images) != r:
        return False
    return core_from_words(images, r) == whole_group(r)


def path_word(base: Graph, tree: Subgraph, darts: Sequence[int]) -> Word:
    """Word of non-tree arcs along ``darts``; generator ``k+1`` is the k-th non-tree arc."""
    gen = {}
    for k, (d, e) in enumerate(a for a in base.arcs if a[0] not in tree.darts):
        gen[d], gen[e] = k + 1, -(k + 1)
    return free_reduce(gen[d] for d in darts if d in gen)


def lattice_excision(
    base: Graph, tree: Subgraph, loops: Sequence[Path]
) -> tuple[Bouquet, list[Word]]:
    """Collapse a spanning tree of a rank-2 base graph to pass to the 2-loop bouquet.

    Each non-tree arc becomes a generator (ordered and oriented by its
    lowest dart identifier) and each loop becomes the word of non-tree
    arcs it crosses.
    """
    r = graph_rank(base)
    if r != 2:
        raise ValueError(f"lattice_excision needs a rank-2 base, got rank {r}")
    if tree.vertices != frozenset(base.vertices) or graph_rank(base, tree) != 0:
        raise ValueError("tree is not a spanning tree of the base")
    starts = {p.start for p in loops}
    if len(starts) > 1:
        raise ValueError("loops must share a basepoint")
    for p in loops:
        for a, b in zip(p.darts, p.darts[1:]):
            if base.target(a) != base.src[b]:
                raise ValueError("path darts are not consecutive")
        if p.darts and base.src[p.darts[0]] != p.start:
            raise ValueError("path does not start at its start vertex")
        if not p.is_closed(base):
            raise ValueError("loop is not closed at the basepoint")
    return Bouquet(2), [path_word(base, tree, p.darts) for p in loops]


def fold_over_base(base: Graph, loops: Sequence[Path]) -> tuple[Graph, dict[int, int]]:
    """Fold the wedge of ``loops`` over an arbitrary base graph and trim to the spine.

    Labels are base darts, so this is folding for an immersion into
    ``base`` directly, with no tree collapsed.  Returns the folded graph
    and its dart to base-dart labeling.
    """
    if not loops:
        return Graph((0,), {}, {}), {}
    edges = []
    n = 1
    for p in loops:
        darts = list(p.darts)
        prev = 0
        for k, d in enumerate(darts):
            nxt = 0 if k == len(darts) - 1 else n
            if nxt:
                n += 1
            edges.append((prev, d, nxt))
            prev = nxt
    roots, succ = fold(n, edges, inverse_label=base.inv.__getitem__)
    succ = trim(succ, roots[0])
    inv, src, labels = {}, {}, {}
    k = 0
    for v in sorted(succ):
        for d, w in sorted(succ[v].items()):
            if d < base.inv[d]:
                inv[2 * k], inv[2 * k + 1] = 2 * k + 1, 2 * k
                src[2 * k], src[2 * k + 1] = v, w
                labels[2 * k], labels[2 * k + 1] = d, base.inv[d]
                k += 1
    return Graph(tuple(sorted(succ)), inv, src), labels


def tree_loop(base: Graph, tree: Subgraph, v: int, dart: int) -> Path:
    """Closed path at ``v``: tree path to ``src(dart)``, ``dart``, tree path back."""
    there = tree_path(base, tree, v, base.src[dart])
    back = tree_path(base, tree, base.target(dart), v)
    return Path(v, there + (dart,) + back)
