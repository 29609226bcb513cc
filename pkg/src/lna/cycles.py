"""Cycle space of a graph over GF(2) and minimal cycle bases.

Edge subsets are Python ``int`` bitsets over an :class:`EdgeIndex`; bit ``i``
stands for ``index.edges[i]``.  XOR of two bitsets is the symmetric
difference of the edge sets, AND their common edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .graph import Edge, Graph, canonical_edge, components, shortest_path_tree

__all__ = [
    "EdgeIndex",
    "EdgeVector",
    "CycleBasis",
    "GF2Eliminator",
    "xor",
    "intersection",
    "cycle_space_dimension",
    "is_independent",
    "in_span",
    "minimal_cycle_basis",
    "horton_candidates",
    "enumerate_simple_cycles",
    "is_simple_cycle",
    "cycle_ring",
]


class EdgeIndex:
    """Fixed ordering of a graph's edges; position is the bit index."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.edges: Tuple[Edge, ...] = graph.edges
        self.position: Dict[Edge, int] = {e: i for i, e in enumerate(self.edges)}
        self._weights = [graph.weight(*e) for e in self.edges]

    def __len__(self):
        return len(self.edges)

    def vector(self, edges: Iterable[Edge]) -> "EdgeVector":
        bits = 0
        for u, v in edges:
            bits |= 1 << self.position[canonical_edge(u, v)]
        return EdgeVector(self, bits)

    def path_vector(self, path: Sequence[int]) -> "EdgeVector":
        """Vector of a closed or open vertex walk (each edge toggled)."""
        bits = 0
        for a, b in zip(path, path[1:]):
            bits ^= 1 << self.position[canonical_edge(a, b)]
        return EdgeVector(self, bits)

    def zero(self) -> "EdgeVector":
        return EdgeVector(self, 0)

    def weight_of(self, bits: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while bits:
            if bits & 1:
                total += self._weights[i]
            bits >>= 1
            i += 1
        return total


@dataclass(frozen=True)
class EdgeVector:
    """Characteristic vector of an edge subset."""

    index: EdgeIndex = field(compare=False, repr=False)
    bits: int
    weight: Fraction = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weight", self.index.weight_of(self.bits))

    @property
    def positions(self) -> Tuple[int, ...]:
        out = []
        b, i = self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return tuple(out)

    @property
    def edges(self) -> List[Edge]:
        return [self.index.edges[i] for i in self.positions]

    @property
    def vertices(self) -> List[int]:
        return sorted({v for e in self.edges for v in e})

    def __len__(self):
        return bin(self.bits).count("1")

    def __bool__(self):
        return self.bits != 0

    def __xor__(self, other):
        return xor(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def sort_key(self):
        """Order used for tie-breaking: weight, then ascending edge positions."""
        return (self.weight, self.positions)

    def degrees(self) -> Dict[int, int]:
        deg: Dict[int, int] = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg

    def is_even(self) -> bool:
        """True when every vertex meets an even number of set edges."""
        return all(d % 2 == 0 for d in self.degrees().values())


def _same_index(a: EdgeVector, b: EdgeVector):
    if a.index is not b.index:
        raise ValueError("edge vectors built over different edge indexes")


def xor(a: EdgeVector, b: EdgeVector) -> EdgeVector:
    _same_index(a, b)
    return EdgeVector(a.index, a.bits ^ b.bits)


def intersection(a: EdgeVector, b: EdgeVector) -> EdgeVector:
    _same_index(a, b)
    return EdgeVector(a.index, a.bits & b.bits)


def cycle_space_dimension(g: Graph) -> int:
    """``m - n + c``."""
    return g.m - g.n + components(g).count


class GF2Eliminator:
    """Incremental Gaussian elimination over GF(2).

    Rows are kept reduced against each other's leading bit, so testing a
    candidate costs at most one XOR per stored row.
    """

    def __init__(self):
        self._rows: Dict[int, int] = {}  # leading bit -> row

    def __len__(self):
        return len(self._rows)

    def reduce(self, bits: int) -> int:
        while bits:
            top = bits.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                return bits
            bits ^= row
        return 0

    def add(self, bits: int) -> bool:
        """Insert ``bits``; return False if it was already in the span."""
        r = self.reduce(bits)
        if not r:
            return False
        self._rows[r.bit_length() - 1] = r
        return True


def is_independent(vectors: Sequence[EdgeVector], candidate: EdgeVector) -> bool:
    """True iff ``candidate`` is not a GF(2) combination of ``vectors``."""
    elim = GF2Eliminator()
    for v in vectors:
        elim.add(v.bits)
    return elim.reduce(candidate.bits) != 0


def in_span(vectors: Sequence[EdgeVector], target: EdgeVector) -> bool:
    elim = GF2Eliminator()
    for v in vectors:
        elim.add(v.bits)
    return elim.reduce(target.bits) == 0


@dataclass(frozen=True)
class CycleBasis:
    graph: Graph
    index: EdgeIndex = field(repr=False)
    cycles: Tuple[EdgeVector, ...]

    @property
    def dimension(self) -> int:
        return len(self.cycles)

    @property
    def total_weight(self) -> Fraction:
        return sum((c.weight for c in self.cycles), Fraction(0))

    def __len__(self):
        return len(self.cycles)

    def __iter__(self) -> Iterator[EdgeVector]:
        return iter(self.cycles)

    def __getitem__(self, i) -> EdgeVector:
        return self.cycles[i]

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "total_weight": _num(self.total_weight),
            "cycles": [
                {"edges": [list(e) for e in c.edges], "weight": _num(c.weight)}
                for c in self.cycles
            ],
        }


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def is_simple_cycle(vec: EdgeVector) -> bool:
    """Connected, non-empty, and every touched vertex has degree exactly 2."""
    if not vec:
        return False
    deg = vec.degrees()
    if any(d != 2 for d in deg.values()):
        return False
    return len(cycle_ring(vec)) == len(deg)


def cycle_ring(vec: EdgeVector) -> List[int]:
    """Vertices of a simple cycle in ring order.

    The ring starts at the smallest vertex and heads to its smaller
    neighbour first.  For non-simple input the walk stops at the first
    component.
    """
    adj: Dict[int, List[int]] = {}
    for u, v in vec.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if not adj:
        return []
    start = min(adj)
    ring = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        ring.append(cur)
        nxt = [x for x in adj[cur] if x != prev]
        if len(nxt) != 1:
            break
        prev, cur = cur, nxt[0]
    return ring


def horton_candidates(g: Graph, index: Optional[EdgeIndex] = None) -> List[EdgeVector]:
    """Deduplicated simple cycles ``P(v,x) + xy + P(y,v)`` over all roots and edges.

    Candidates come back sorted by weight then by edge positions.
    """
    index = index or EdgeIndex(g)
    seen: Dict[int, EdgeVector] = {}
    for root in g.vertices:
        tree = shortest_path_tree(g, root)
        for x, y in g.edges:
            if x not in tree or y not in tree:
                continue
            px, py = tree[x][1], tree[y][1]
            if len(px) > 1 and px[-2] == y or len(py) > 1 and py[-2] == x:
                continue  # xy is a tree edge of one path: degenerate
            if len(set(px) & set(py)) != 1:
                continue  # paths overlap beyond the root: not a simple cycle
            bits = index.path_vector(px).bits ^ index.path_vector(py).bits
            bits ^= 1 << index.position[(x, y)]
            if bits and bits not in seen:
                seen[bits] = EdgeVector(index, bits)
    return sorted(seen.values(), key=EdgeVector.sort_key)


def minimal_cycle_basis(g: Graph) -> CycleBasis:
    """Minimum-weight cycle basis by Horton's candidate-and-greedy method.

    Every returned cycle is simple, the cycles are independent over GF(2)
    and there are exactly ``m - n + c`` of them.  Candidates are tried in
    order of weight, equal weights broken by ascending edge positions, so
    the result is deterministic.
    """
    index = EdgeIndex(g)
    nu = cycle_space_dimension(g)
    chosen: List[EdgeVector] = []
    if nu == 0:
        return CycleBasis(g, index, ())
    elim = GF2Eliminator()
    for cand in horton_candidates(g, index):
        if elim.add(cand.bits):
            chosen.append(cand)
            if len(chosen) == nu:
                break
    if len(chosen) != nu:  # pragma: no cover - guarded by Horton's theorem
        raise RuntimeError(f"Horton candidates span {len(chosen)} of {nu} dimensions")
    return CycleBasis(g, index, tuple(chosen))


BasisStrategy = Callable[[Graph], CycleBasis]


def enumerate_simple_cycles(g: Graph, index: Optional[EdgeIndex] = None) -> List[EdgeVector]:
    """Every simple cycle exactly once, by exhaustive DFS.

    Meant for small graphs (about a dozen vertices); the running time is
    exponential in general.
    """
    index = index or EdgeIndex(g)
    found: List[EdgeVector] = []
    for start in g.vertices:
        # cycles whose smallest vertex is ``start``; orientation fixed by
        # requiring second vertex < last vertex
        stack = [(start, [start], {start})]
        while stack:
            v, path, on_path = stack.pop()
            for w in g.neighbors(v):
                if w < start:
                    continue
                if w == start and len(path) >= 3 and path[1] < path[-1]:
                    found.append(index.path_vector(path + [start]))
                elif w not in on_path:
                    stack.append((w, path + [w], on_path | {w}))
    return sorted(found, key=EdgeVector.sort_key)
