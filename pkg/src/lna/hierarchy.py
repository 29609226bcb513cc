"""Recursive abstraction of a network into cycle and cycle-adjacency vertices.

Each level is built from the one below: trees are collapsed, a minimal
cycle basis is taken, every basis cycle becomes a ``type1`` vertex, every
distinct non-empty edge intersection of two basis cycles becomes a
``type2`` vertex, and a ``type1``/``type2`` pair is joined when the cycle
contains at least one edge of the intersection.  The recursion stops at
the first cycle-free level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .cycles import (
    BasisStrategy,
    CycleBasis,
    EdgeVector,
    cycle_ring,
    cycle_space_dimension,
    minimal_cycle_basis,
)
from .graph import (
    TYPE1,
    TYPE2,
    Graph,
    collapse_trees,
    components,
    cut_edges,
    cut_vertices,
)

__all__ = [
    "AbridgmentError",
    "LnaLevel",
    "make_level",
    "LnaHierarchy",
    "abridge",
    "build_next_level",
    "diversity_density",
    "resolve",
    "topological_distance",
    "covering_cycles",
    "tree_roots",
    "level_report",
]


class AbridgmentError(RuntimeError):
    """The abstraction failed to reach a cycle-free level within budget."""


@dataclass(frozen=True)
class LnaLevel:
    """One level of the hierarchy plus the recipe for the level above.

    ``type1_of`` and ``type2_of`` are keyed by vertex ids of the *next*
    level; the edge vectors live over this level's core.  ``type2_pairs``
    records, per type-2 vertex, the basis-cycle pairs (as next-level type-1
    ids) whose intersection produced it.
    """

    index: int
    graph: Graph
    core: Graph
    tree_map: Dict[int, int]
    basis: CycleBasis
    type1_of: Dict[int, EdgeVector] = field(default_factory=dict)
    type2_of: Dict[int, EdgeVector] = field(default_factory=dict)
    type2_pairs: Dict[int, Tuple[Tuple[int, int], ...]] = field(default_factory=dict)

    @property
    def nu(self) -> int:
        return cycle_space_dimension(self.graph)

    def ring(self, t1: int) -> List[int]:
        """Ring order of the cycle abstracted by next-level vertex ``t1``."""
        return cycle_ring(self.type1_of[t1])


def build_next_level(level: LnaLevel) -> Tuple[Graph, Dict[int, EdgeVector], Dict[int, EdgeVector], Dict]:
    """Bipartite graph of basis cycles and their distinct edge intersections.

    Returns ``(graph, type1_of, type2_of, type2_pairs)``.  Type-1 ids are
    ``0..nu-1`` in basis order, type-2 ids follow in ascending edge-position
    order of their edge sets.
    """
    cycles = list(level.basis)
    type1_of = {i: c for i, c in enumerate(cycles)}
    shared: Dict[int, EdgeVector] = {}
    pairs: Dict[int, List[Tuple[int, int]]] = {}
    for i, j in combinations(range(len(cycles)), 2):
        common = cycles[i] & cycles[j]
        if not common:
            continue  # no shared edge; a lone shared vertex is not diversity
        shared.setdefault(common.bits, common)
        pairs.setdefault(common.bits, []).append((i, j))
    ordered = sorted(shared.values(), key=lambda v: v.positions)
    base = len(cycles)
    type2_of = {base + k: vec for k, vec in enumerate(ordered)}
    type2_pairs = {base + k: tuple(pairs[vec.bits]) for k, vec in enumerate(ordered)}
    edges = []
    for t2, vec in type2_of.items():
        for t1, cyc in type1_of.items():
            if cyc.bits & vec.bits:
                edges.append((t1, t2))
    kinds = {t: TYPE1 for t in type1_of}
    kinds.update({t: TYPE2 for t in type2_of})
    return Graph(kinds.keys(), edges, kinds), type1_of, type2_of, type2_pairs


def make_level(graph: Graph, index: int = 0, strategy: Optional[BasisStrategy] = None) -> LnaLevel:
    """Collapse trees, pick a cycle basis and record the type-1/type-2 recipe."""
    core, tree_map = collapse_trees(graph)
    basis = (strategy or minimal_cycle_basis)(core)
    level = LnaLevel(index, graph, core, tree_map, basis)
    if not len(basis):
        return level
    _, type1_of, type2_of, pairs = build_next_level(level)
    return LnaLevel(index, graph, core, tree_map, basis, type1_of, type2_of, pairs)


@dataclass(frozen=True)
class LnaHierarchy:
    """Levels ``0..L`` of the abstraction.

    Level ``L`` is the first cycle-free level.  Resolution tables map every
    vertex of every level to the physical vertices it stands for.
    """

    levels: Tuple[LnaLevel, ...]
    base_res: Tuple[Dict[int, FrozenSet[int]], ...] = field(repr=False)
    full_res: Tuple[Dict[int, FrozenSet[int]], ...] = field(repr=False)

    @property
    def L(self) -> int:
        return len(self.levels) - 1

    @property
    def n(self) -> int:
        return self.levels[0].graph.n

    @property
    def D(self) -> Fraction:
        return diversity_density(self)

    def graph(self, level: int) -> Graph:
        return self.levels[level].graph

    def parts(self, level: int, v: int) -> List[int]:
        """Level-``level-1`` vertices making up vertex ``v`` of ``level``."""
        below = self.levels[level - 1]
        vec = below.type1_of.get(v)
        if vec is not None:
            return cycle_ring(vec)
        return below.type2_of[v].vertices

    def hanging(self, level: int, v: int) -> List[int]:
        """Vertices of ``level`` whose trees were collapsed into ``v``."""
        return sorted(w for w, r in self.levels[level].tree_map.items() if r == v)

    def to_json(self) -> dict:
        out = {"L": self.L, "D": str(self.D), "n": self.n, "levels": []}
        for lvl in self.levels:
            g = lvl.graph
            entry = {
                "level": lvl.index,
                "vertices": [[v, g.kind(v)] for v in g.vertices],
                "edges": [list(e) for e in g.edges],
                "tree_map": {str(k): v for k, v in sorted(lvl.tree_map.items())},
                "basis": [[list(e) for e in c.edges] for c in lvl.basis],
            }
            out["levels"].append(entry)
        return out


def abridge(
    g: Graph,
    strategy: Optional[BasisStrategy] = None,
    max_rank: Optional[int] = -1,
) -> LnaHierarchy:
    """Build the full hierarchy of ``g``.

    Parameters
    ----------
    g : Graph
        Non-empty simple graph (the physical network).
    strategy : callable, optional
        Cycle basis selection, ``Graph -> CycleBasis``.  Defaults to
        :func:`~lna.cycles.minimal_cycle_basis`.
    max_rank : int or None
        Largest cycle rank tolerated at any level.  The default (-1) uses
        the physical graph's own rank; ``None`` disables the check and
        leaves only the cap of ``n`` levels.

    Returns
    -------
    LnaHierarchy

    Raises
    ------
    ValueError
        For an empty graph.
    AbridgmentError
        If a level's cycle rank exceeds ``max_rank`` or the recursion
        exceeds ``n`` levels.  Dense graphs can make the abstraction grow
        instead of shrink.
    """
    if g.n == 0:
        raise ValueError("cannot abridge an empty graph")
    if max_rank == -1:
        max_rank = cycle_space_dimension(g)
    levels: List[LnaLevel] = []
    graph = g
    while True:
        level = make_level(graph, len(levels), strategy)
        levels.append(level)
        if not len(level.basis):
            break
        if len(levels) > g.n:
            raise AbridgmentError(f"no cycle-free level within {g.n} levels")
        graph = build_next_level(level)[0]
        rank = cycle_space_dimension(graph)
        if max_rank is not None and rank > max_rank:
            raise AbridgmentError(
                f"cycle rank grew to {rank} at level {len(levels)} "
                f"(limit {max_rank}); the abstraction is not converging"
            )
    base_res, full_res = _resolution_tables(levels)
    return LnaHierarchy(tuple(levels), tuple(base_res), tuple(full_res))


def _resolution_tables(levels: List[LnaLevel]):
    base_res: List[Dict[int, FrozenSet[int]]] = []
    full_res: List[Dict[int, FrozenSet[int]]] = []
    for k, lvl in enumerate(levels):
        if k == 0:
            base = {v: frozenset((v,)) for v in lvl.graph.vertices}
        else:
            below = levels[k - 1]
            prev_full = full_res[k - 1]
            base = {}
            for v in lvl.graph.vertices:
                vec = below.type1_of.get(v)
                if vec is None:
                    vec = below.type2_of[v]
                members = set()
                for u in vec.vertices:
                    members |= prev_full[u]
                base[v] = frozenset(members)
        full = {v: set(s) for v, s in base.items()}
        for w, root in lvl.tree_map.items():
            if root in full and root != w:
                full[root] |= base[w]
        base_res.append(base)
        full_res.append({v: frozenset(s) for v, s in full.items()})
    return base_res, full_res


def diversity_density(h: LnaHierarchy) -> Fraction:
    """``L / n`` of the physical graph."""
    return Fraction(h.L, h.n)


def resolve(h: LnaHierarchy, level: int, v: int) -> FrozenSet[int]:
    """Physical vertices abstracted by vertex ``v`` of ``level``.

    Trees collapsed into ``v`` (at ``level`` and below) are included.
    """
    if not 0 <= level <= h.L:
        raise KeyError(f"no level {level}; hierarchy has levels 0..{h.L}")
    table = h.full_res[level]
    if v not in table:
        raise KeyError(f"vertex {v} not in level {level}")
    return table[v]


def topological_distance(h: LnaHierarchy, a: int, b: int) -> Optional[int]:
    """Lowest level at which ``a`` and ``b`` first share a logical vertex.

    That is the smallest ``l`` such that a level-``l`` basis cycle covers
    both, or their level-``l`` images hang in one tree and collapse into the
    same root.  Returns ``None`` when neither ever happens: the pair is
    separated by a cut vertex or a bridge.
    """
    for v in (a, b):
        if v not in h.levels[0].graph:
            raise KeyError(f"vertex {v} not in the physical graph")
    if a == b:
        return 0
    for lvl in range(h.L + 1):
        if lvl < h.L and covering_cycles(h, a, b, lvl):
            return lvl
        if tree_roots(h, a, lvl) & tree_roots(h, b, lvl):
            return lvl
    return None


def tree_roots(h: LnaHierarchy, p: int, level: int) -> Set[int]:
    """Tree-collapse roots of the level-``level`` vertices containing ``p``."""
    lvl = h.levels[level]
    base = h.base_res[level]
    return {lvl.tree_map.get(v, v) for v in lvl.graph.vertices if p in base[v]}


def covering_cycles(h: LnaHierarchy, a: int, b: int, level: int) -> List[int]:
    """Type-1 ids of ``level + 1`` whose cycles at ``level`` cover both vertices."""
    below = h.levels[level]
    table = h.base_res[level + 1]
    return [t for t in below.type1_of if a in table[t] and b in table[t]]


def level_report(h: LnaHierarchy) -> List[dict]:
    """Per-level statistics and bottleneck flags.

    A level above 0 is flagged as a bottleneck when it has more components
    than the cycle-bearing components of the core below it, i.e. some
    biconnected region of the lower level split apart.
    """
    rows = []
    for lvl in h.levels:
        g = lvl.graph
        comps = components(g).count
        kinds: Dict[str, int] = {}
        for v in g.vertices:
            kinds[g.kind(v)] = kinds.get(g.kind(v), 0) + 1
        row = {
            "level": lvl.index,
            "n": g.n,
            "m": g.m,
            "kinds": dict(sorted(kinds.items())),
            "nu": cycle_space_dimension(g),
            "components": comps,
            "cut_vertices": sorted(cut_vertices(g)),
            "cut_edges": sorted(list(e) for e in cut_edges(g)),
            "collapsed": len(lvl.tree_map),
            "disconnected": comps > 1,
            "bottleneck": False,
        }
        if lvl.index > 0:
            below = h.levels[lvl.index - 1]
            row["bottleneck"] = comps > _cyclic_components(below.core)
        rows.append(row)
    return rows


def _cyclic_components(g: Graph) -> int:
    labels = components(g)
    edges = [0] * labels.count
    verts = [0] * labels.count
    for v in g.vertices:
        verts[labels.component_of[v]] += 1
    for u, _ in g.edges:
        edges[labels.component_of[u]] += 1
    return sum(1 for e, n in zip(edges, verts) if e - n + 1 > 0)
