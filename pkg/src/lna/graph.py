"""Undirected simple weighted graphs and the structural queries the
abstraction hierarchy relies on.

Vertices are non-negative integers.  Edges are stored as ``(u, v)`` pairs
with ``u < v``; weights are :class:`fractions.Fraction` so that weight
comparisons downstream are exact.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

__all__ = [
    "Edge",
    "Graph",
    "GraphError",
    "ComponentLabeling",
    "components",
    "cut_vertices",
    "cut_edges",
    "collapse_trees",
    "shortest_path",
    "path_weight",
    "canonical_edge",
    "PHYSICAL",
    "TYPE1",
    "TYPE2",
]

Edge = Tuple[int, int]

PHYSICAL = "physical"
TYPE1 = "type1"
TYPE2 = "type2"
_KINDS = (PHYSICAL, TYPE1, TYPE2)


class GraphError(ValueError):
    """Raised when a graph would violate the simple-graph invariants."""


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _as_weight(w) -> Fraction:
    if isinstance(w, float):
        # limit_denominator keeps decimal literals such as 2.5 or 0.1 exact
        wf = Fraction(w).limit_denominator(10**9)
    else:
        wf = Fraction(w)
    return wf


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    vertices : iterable of int
        Vertex ids.  Every edge endpoint is added automatically.
    edges : iterable
        ``(u, v)`` or ``(u, v, weight)`` tuples.  Weight defaults to 1.
    kinds : mapping, optional
        Per-vertex tag, one of ``"physical"``, ``"type1"``, ``"type2"``.
        Untagged vertices are physical.

    Raises
    ------
    GraphError
        On self-loops, parallel edges, negative ids or non-positive weights.
    """

    _vertices: Tuple[int, ...]
    _weights: Mapping[Edge, Fraction]
    _kinds: Mapping[int, str]
    _adj: Mapping[int, Tuple[int, ...]] = field(repr=False, compare=False)

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable = (), kinds=None):
        vset: Set[int] = set()
        for v in vertices:
            vset.add(_check_id(v))
        weights: Dict[Edge, Fraction] = {}
        for item in edges:
            if len(item) == 2:
                u, v = item
                w = Fraction(1)
            elif len(item) == 3:
                u, v, w = item
                w = _as_weight(w)
            else:
                raise GraphError(f"edge must be (u, v) or (u, v, w), got {item!r}")
            u, v = _check_id(u), _check_id(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if w <= 0:
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            e = canonical_edge(u, v)
            if e in weights:
                raise GraphError(f"parallel edge ({e[0]}, {e[1]})")
            weights[e] = w
            vset.add(u)
            vset.add(v)
        kinds = dict(kinds or {})
        for v, k in kinds.items():
            if k not in _KINDS:
                raise GraphError(f"unknown vertex kind {k!r}")
            if v not in vset:
                raise GraphError(f"kind given for unknown vertex {v}")
        adj: Dict[int, List[int]] = {v: [] for v in vset}
        for u, v in weights:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_vertices", tuple(sorted(vset)))
        object.__setattr__(self, "_weights", dict(sorted(weights.items())))
        object.__setattr__(self, "_kinds", {v: kinds.get(v, PHYSICAL) for v in sorted(vset)})
        object.__setattr__(self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()})

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Edges sorted by ``(min endpoint, max endpoint)``."""
        return tuple(self._weights)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._weights)

    def weight(self, u: int, v: int) -> Fraction:
        return self._weights[canonical_edge(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._weights

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def kind(self, v: int) -> str:
        return self._kinds[v]

    @property
    def kinds(self) -> Mapping[int, str]:
        return dict(self._kinds)

    def weighted_edges(self) -> List[Tuple[int, int, Fraction]]:
        return [(u, v, w) for (u, v), w in self._weights.items()]

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return self.n

    def __hash__(self):
        return hash((self._vertices, tuple(self._weights.items())))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._weights == other._weights
            and self._kinds == other._kinds
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived graphs --------------------------------------------------
    def subgraph(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on ``keep``; vertex ids are preserved."""
        keep = set(keep)
        return Graph(
            keep,
            [(u, v, w) for (u, v), w in self._weights.items() if u in keep and v in keep],
            {v: self._kinds[v] for v in keep},
        )

    def without_edges(self, removed: Iterable[Edge]) -> "Graph":
        removed = {canonical_edge(*e) for e in removed}
        return Graph(
            self._vertices,
            [(u, v, w) for (u, v), w in self._weights.items() if (u, v) not in removed],
            self._kinds,
        )

    def relabeled(self) -> Tuple["Graph", Dict[int, int]]:
        """Copy with ids made dense in ``[0, n)``; returns the old→new map."""
        mapping = {v: i for i, v in enumerate(self._vertices)}
        g = Graph(
            range(self.n),
            [(mapping[u], mapping[v], w) for (u, v), w in self._weights.items()],
            {mapping[v]: k for v, k in self._kinds.items()},
        )
        return g, mapping


def _check_id(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise GraphError(f"vertex id must be an integer, got {v!r}")
    if v < 0:
        raise GraphError(f"vertex id must be non-negative, got {v}")
    return v


@dataclass(frozen=True)
class ComponentLabeling:
    component_of: Mapping[int, int]
    count: int

    def members(self) -> List[List[int]]:
        groups: List[List[int]] = [[] for _ in range(self.count)]
        for v, c in sorted(self.component_of.items()):
            groups[c].append(v)
        return groups


def components(g: Graph) -> ComponentLabeling:
    """Label connected components; labels follow the smallest member id."""
    label: Dict[int, int] = {}
    count = 0
    for root in g.vertices:
        if root in label:
            continue
        label[root] = count
        stack = [root]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if y not in label:
                    label[y] = count
                    stack.append(y)
        count += 1
    return ComponentLabeling(label, count)


def _lowlink(g: Graph):
    """Iterative DFS computing discovery times and low-links.

    Returns ``(cut_vertex_set, bridge_set)``.
    """
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    cuts: Set[int] = set()
    bridges: Set[Edge] = set()
    t = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        root_children = 0
        # frame: (vertex, parent, iterator over neighbours)
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, v, iter(g.neighbors(w))))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[v])
            if low[v] > disc[parent]:
                bridges.add(canonical_edge(parent, v))
            if parent == root:
                root_children += 1
            elif low[v] >= disc[parent]:
                cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts, bridges


def cut_vertices(g: Graph) -> FrozenSet[int]:
    """Articulation points, found with a single depth-first low-link pass."""
    return frozenset(_lowlink(g)[0])


def cut_edges(g: Graph) -> FrozenSet[Edge]:
    """Bridges: edges lying on no cycle."""
    return frozenset(_lowlink(g)[1])


def collapse_trees(g: Graph) -> Tuple[Graph, Dict[int, int]]:
    """Strip tree parts, leaving the 2-core.

    Returns the core (same vertex ids) and a map from every removed vertex
    to the core vertex its tree hangs from.  A component that is entirely a
    tree disappears; its vertices map to the component's lowest id.
    """
    deg = {v: g.degree(v) for v in g.vertices}
    removed: Set[int] = set()
    queue = sorted(v for v in g.vertices if deg[v] <= 1)
    while queue:
        v = queue.pop()
        if v in removed:
            continue
        removed.add(v)
        for w in g.neighbors(v):
            if w not in removed:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)
    core = g.subgraph(v for v in g.vertices if v not in removed)

    root_of: Dict[int, int] = {}
    # multi-source BFS from the core into each hanging tree
    frontier = sorted(v for v in core.vertices if any(w in removed for w in g.neighbors(v)))
    origin = {v: v for v in frontier}
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.neighbors(x):
                if y in removed and y not in root_of:
                    root_of[y] = origin[x]
                    origin[y] = origin[x]
                    nxt.append(y)
        frontier = nxt
    labels = components(g)
    lowest: Dict[int, int] = {}
    for v in g.vertices:
        lowest.setdefault(labels.component_of[v], v)
    for v in sorted(removed):
        if v not in root_of:
            root_of[v] = lowest[labels.component_of[v]]
    return core, root_of


def path_weight(g: Graph, path) -> Fraction:
    return sum((g.weight(a, b) for a, b in zip(path, path[1:])), Fraction(0))


def shortest_path_tree(g: Graph, source: int) -> Dict[int, Tuple[Fraction, Tuple[int, ...]]]:
    """Minimum-weight paths from ``source`` to every reachable vertex.

    Among equal-weight paths the lexicographically smallest vertex sequence
    wins, which keeps the tree prefix-closed and fully deterministic.
    """
    best: Dict[int, Tuple[Fraction, Tuple[int, ...]]] = {source: (Fraction(0), (source,))}
    done: Set[int] = set()
    heap = [(Fraction(0), (source,))]
    while heap:
        d, path = heapq.heappop(heap)
        v = path[-1]
        if v in done:
            continue
        done.add(v)
        for w in g.neighbors(v):
            if w in done:
                continue
            cand = (d + g.weight(v, w), path + (w,))
            if w not in best or cand < best[w]:
                best[w] = cand
                heapq.heappush(heap, cand)
    return best


def shortest_path(g: Graph, s: int, t: int) -> Optional[List[int]]:
    """Minimum-weight ``s``–``t`` path or ``None`` when disconnected.

    Ties go to the lexicographically smallest vertex sequence.
    """
    if s not in g or t not in g:
        raise GraphError(f"vertex {s if s not in g else t} not in graph")
    if s == t:
        return [s]
    tree = shortest_path_tree(g, s)
    if t not in tree:
        return None
    return list(tree[t][1])


def tree_path(g: Graph, s: int, t: int, allowed: Iterable[int]) -> List[int]:
    """Unique path between ``s`` and ``t`` through ``allowed`` vertices (BFS)."""
    allowed = set(allowed) | {s, t}
    prev = {s: s}
    queue = [s]
    for x in queue:
        if x == t:
            break
        for y in g.neighbors(x):
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    if t not in prev:
        raise GraphError(f"no path from {s} to {t} inside the given vertex set")
    out = [t]
    while out[-1] != s:
        out.append(prev[out[-1]])
    return out[::-1]


def group_by(mapping: Mapping[int, int]) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = defaultdict(list)
    for k, v in sorted(mapping.items()):
        out[v].append(k)
    return dict(out)
