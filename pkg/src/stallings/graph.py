"""Dart-based combinatorial graphs.

A graph is a set of darts (directed half-edges) with a fixed-point-free
involution ``inv`` and a source map ``src`` into a separate vertex set.
An *arc* is a pair ``{d, inv(d)}``; the target of ``d`` is ``src(inv(d))``.

Everything here is a pure function of immutable values.  Iteration over
vertices and darts always follows ascending identifier order so that
results are reproducible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    inv: Mapping[int, int]
    src: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "inv", dict(self.inv))
        object.__setattr__(self, "src", dict(self.src))

    @classmethod
    def from_arcs(cls, vertices: Iterable[int], arcs: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from ``(source, target)`` pairs.

        Arc ``k`` gets darts ``2k`` (source to target) and ``2k + 1``.
        """
        inv, src = {}, {}
        for k, (a, b) in enumerate(arcs):
            inv[2 * k], inv[2 * k + 1] = 2 * k + 1, 2 * k
            src[2 * k], src[2 * k + 1] = a, b
        return cls(tuple(vertices), inv, src)

    @cached_property
    def darts(self) -> tuple[int, ...]:
        return tuple(sorted(self.inv))

    def target(self, d: int) -> int:
        return self.src[self.inv[d]]

    @cached_property
    def out(self) -> dict[int, tuple[int, ...]]:
        """Outgoing darts of each vertex, ascending."""
        star: dict[int, list[int]] = {v: [] for v in self.vertices}
        for d in self.darts:
            star.setdefault(self.src[d], []).append(d)
        return {v: tuple(ds) for v, ds in star.items()}

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        """Arcs as ``(d, inv(d))`` with ``d`` the lower identifier."""
        return tuple((d, self.inv[d]) for d in self.darts if d < self.inv[d])

    def degree(self, v: int) -> int:
        return len(self.out.get(v, ()))

    def subgraph(self, vertices: Iterable[int], darts: Iterable[int] = ()) -> Subgraph:
        return Subgraph(frozenset(vertices), frozenset(darts))

    def whole(self) -> Subgraph:
        return Subgraph(frozenset(self.vertices), frozenset(self.darts))

    def restrict(self, sub: Subgraph) -> Graph:
        return Graph(
            tuple(sub.vertices),
            {d: self.inv[d] for d in sub.darts},
            {d: self.src[d] for d in sub.darts},
        )

    # -- document form -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "darts": [{"id": d, "inv": self.inv[d], "src": self.src[d]} for d in self.darts],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> Graph:
        inv, src = {}, {}
        for entry in doc["darts"]:
            d = int(entry["id"])
            if d in inv:
                raise ValueError(f"duplicate dart id {d}")
            inv[d] = int(entry["inv"])
            src[d] = int(entry["src"])
        g = cls(tuple(int(v) for v in doc["vertices"]), inv, src)
        problem = validate(g)
        if problem is not None:
            raise ValueError(problem)
        return g


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset[int]
    darts: frozenset[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Path:
    start: int
    darts: tuple[int, ...] = ()

    def end(self, g: Graph) -> int:
        return g.target(self.darts[-1]) if self.darts else self.start

    def is_closed(self, g: Graph) -> bool:
        return self.end(g) == self.start


def dumps(g: Graph) -> str:
    return json.dumps(g.to_dict(), sort_keys=True)


def loads(text: str) -> Graph:
    return Graph.from_dict(json.loads(text))


def validate(g: Graph) -> str | None:
    """Return ``None`` if ``g`` satisfies the graph axioms, else the first violation."""
    if not g.vertices:
        return "graph has no vertices"
    vset = set(g.vertices)
    if set(g.inv) != set(g.src):
        return "inv and src are defined on different dart sets"
    for d in g.darts:
        e = g.inv[d]
        if e == d:
            return f"involution has unexpected fixed point at dart {d}"
        if e not in g.inv:
            return f"dart {d} has inverse {e} which is not a dart"
        if g.inv[e] != d:
            return f"inv is not an involution at dart {d}"
        if g.src[d] not in vset:
            return f"dart {d} has source {g.src[d]} which is not a vertex"
    return None


def validate_subgraph(g: Graph, sub: Subgraph) -> str | None:
    vset = set(g.vertices)
    if not sub.vertices <= vset:
        return "subgraph has vertices outside the parent graph"
    for d in sub.darts:
        if d not in g.inv:
            return f"subgraph dart {d} is not a dart of the parent"
        if g.inv[d] not in sub.darts:
            return f"subgraph is not closed under inv at dart {d}"
        if g.src[d] not in sub.vertices:
            return f"subgraph dart {d} has source outside the subgraph"
    return None


def _components(g: Graph, vertices: Iterable[int], darts: set[int]) -> list[Subgraph]:
    vs = sorted(vertices)
    seen: set[int] = set()
    parts = []
    for root in vs:
        if root in seen:
            continue
        comp_v, comp_d = {root}, set()
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for d in g.out.get(x, ()):
                if d not in darts:
                    continue
                comp_d.add(d)
                y = g.target(d)
                if y not in seen:
                    seen.add(y)
                    comp_v.add(y)
                    queue.append(y)
        parts.append(Subgraph(frozenset(comp_v), frozenset(comp_d)))
    return parts


def connected_components(g: Graph, sub: Subgraph | None = None) -> list[Subgraph]:
    """Maximal connected subgraphs, ordered by lowest vertex."""
    if sub is None:
        return _components(g, g.vertices, set(g.darts))
    return _components(g, sub.vertices, set(sub.darts))


def is_connected(g: Graph, sub: Subgraph | None = None) -> bool:
    return len(connected_components(g, sub)) == 1


def rank(g: Graph, component: Subgraph | None = None) -> int:
    """Rank of a finite connected (sub)graph: ``#arcs - #vertices + 1``."""
    sub = g.whole() if component is None else component
    if not sub.vertices:
        raise ValueError("rank of an empty graph is undefined")
    if len(connected_components(g, sub)) != 1:
        raise ValueError("rank requires a connected graph")
    return len(sub.darts) // 2 - len(sub.vertices) + 1


def spanning_tree(g: Graph, root: int) -> Subgraph:
    """Breadth-first spanning tree from ``root``, taking darts in ascending order."""
    seen = {root}
    darts: set[int] = set()
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for d in g.out.get(x, ()):
            y = g.target(d)
            if y not in seen:
                seen.add(y)
                darts.update((d, g.inv[d]))
                queue.append(y)
    if len(seen) != len(g.vertices):
        raise ValueError("spanning_tree requires a connected graph")
    return Subgraph(frozenset(seen), frozenset(darts))


def extend_to_spanning_tree(g: Graph, tree: Subgraph) -> Subgraph:
    """Grow a subtree of ``g`` breadth-first into a spanning tree containing it."""
    if not is_tree(g, tree):
        raise ValueError("seed subgraph is not a tree")
    seen = set(tree.vertices)
    darts = set(tree.darts)
    queue = deque(sorted(seen))
    while queue:
        x = queue.popleft()
        for d in g.out.get(x, ()):
            y = g.target(d)
            if y not in seen:
                seen.add(y)
                darts.update((d, g.inv[d]))
                queue.append(y)
    if len(seen) != len(g.vertices):
        raise ValueError("graph is disconnected")
    return Subgraph(frozenset(seen), frozenset(darts))


def is_tree(g: Graph, sub: Subgraph) -> bool:
    if validate_subgraph(g, sub) is not None or not sub.vertices:
        return False
    return len(connected_components(g, sub)) == 1 and rank(g, sub) == 0


def tree_path(g: Graph, tree: Subgraph, a: int, b: int) -> tuple[int, ...]:
    """The unique reduced path from ``a`` to ``b`` inside ``tree``."""
    parent: dict[int, int | None] = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for d in g.out.get(x, ()):
            if d in tree.darts:
                y = g.target(d)
                if y not in parent:
                    parent[y] = d
                    queue.append(y)
    if b not in parent:
        raise ValueError(f"no tree path from {a} to {b}")
    darts = []
    x = b
    while parent[x] is not None:
        d = parent[x]
        darts.append(d)
        x = g.src[d]
    return tuple(reversed(darts))


def quotient_by_trees(
    g: Graph, trees: Sequence[Subgraph]
) -> tuple[Graph, dict[int, int], dict[int, int]]:
    """Collapse each tree to a single vertex.

    Returns the quotient graph and the quotient map as a vertex map and a
    dart map.  Darts of collapsed trees are absent from the dart map; the
    collapsed tree becomes the vertex carrying its lowest identifier.
    """
    used: set[int] = set()
    vmap = {v: v for v in g.vertices}
    tree_darts: set[int] = set()
    for t in trees:
        if not is_tree(g, t):
            raise ValueError("quotient_by_trees: subgraph is not a tree")
        if used & t.vertices:
            raise ValueError("quotient_by_trees: trees overlap")
        used |= t.vertices
        rep = min(t.vertices)
        for v in t.vertices:
            vmap[v] = rep
        tree_darts |= t.darts
    dmap = {d: d for d in g.darts if d not in tree_darts}
    q = Graph(
        tuple(sorted(set(vmap.values()))),
        {d: g.inv[d] for d in dmap},
        {d: vmap[g.src[d]] for d in dmap},
    )
    return q, vmap, dmap


def coboundary(g: Graph, sub: Subgraph) -> frozenset[int]:
    """Darts of ``g`` outside ``sub`` whose source lies in ``sub``."""
    return frozenset(d for d in g.darts if d not in sub.darts and g.src[d] in sub.vertices)


def reduce_path(g: Graph, p: Path) -> Path:
    """Remove spurs ``d . inv(d)`` until none remain."""
    stack: list[int] = []
    for d in p.darts:
        if stack and g.inv[stack[-1]] == d:
            stack.pop()
        else:
            stack.append(d)
    return Path(p.start, tuple(stack))


def is_reduced(g: Graph, p: Path) -> bool:
    return all(g.inv[a] != b for a, b in zip(p.darts, p.darts[1:]))


def spine(g: Graph, v: int) -> Subgraph:
    """Union of all closed reduced paths at ``v``.

    Computed by repeatedly deleting degree-one vertices other than ``v``;
    on a finite connected graph this leaves exactly the spine.
    """
    if v not in g.out:
        raise ValueError(f"{v} is not a vertex")
    alive_v = set(g.vertices)
    alive_d = set(g.darts)
    deg = {x: g.degree(x) for x in g.vertices}
    leaves = deque(x for x in g.vertices if x != v and deg[x] <= 1)
    while leaves:
        x = leaves.popleft()
        if x not in alive_v or deg[x] > 1:
            continue
        alive_v.discard(x)
        for d in g.out[x]:
            if d in alive_d:
                e = g.inv[d]
                alive_d.discard(d)
                alive_d.discard(e)
                y = g.src[e]
                deg[y] -= 1
                if y != v and deg[y] <= 1:
                    leaves.append(y)
    trimmed = Subgraph(frozenset(alive_v), frozenset(alive_d))
    return next(c for c in connected_components(g, trimmed) if v in c.vertices)
