"""Seeded random topologies for tests, demos and experiments."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .graph import Graph, canonical_edge

__all__ = [
    "complete_graph",
    "cycle_graph",
    "random_tree",
    "random_connected",
    "random_biconnected",
    "random_barbell",
]


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def complete_graph(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def _tree_edges(n: int, rng: random.Random, offset: int = 0) -> List[Tuple[int, int]]:
    return [(offset + i, offset + rng.randrange(i)) for i in range(1, n)]


def random_tree(n: int, seed=None) -> Graph:
    """Uniform random recursive tree on ``0..n-1``."""
    return Graph(range(n), _tree_edges(n, _rng(seed)))


def _add_chords(edges, n, k, rng, offset=0):
    have = {canonical_edge(u, v) for u, v in edges}
    limit = n * (n - 1) // 2
    while k > 0 and len(have) < limit:
        u, v = rng.randrange(n) + offset, rng.randrange(n) + offset
        e = canonical_edge(u, v)
        if u != v and e not in have:
            have.add(e)
            edges.append(e)
            k -= 1
    return edges


def random_connected(n: int, chords: int, seed=None, weights: Optional[Tuple[int, int]] = None) -> Graph:
    """Random tree plus ``chords`` extra edges.

    ``weights=(lo, hi)`` draws integer weights uniformly from that range.
    """
    rng = _rng(seed)
    edges = _add_chords(_tree_edges(n, rng), n, chords, rng)
    if weights:
        edges = [(u, v, rng.randint(*weights)) for u, v in edges]
    return Graph(range(n), edges)


def _ear_edges(n: int, ears: int, rng: random.Random, offset: int = 0) -> List[Tuple[int, int]]:
    """Biconnected graph on ``n`` vertices: a base cycle plus ``ears`` paths.

    Each ear joins two distinct existing vertices through zero or more fresh
    ones, so the result has ``n`` vertices and ``n + ears`` edges.
    """
    if n < 3:
        raise ValueError("a biconnected block needs at least 3 vertices")
    fresh = rng.randint(0, n - 3) if ears else 0
    size = n - fresh
    edges = [(offset + i, offset + (i + 1) % size) for i in range(size)]
    have = {canonical_edge(*e) for e in edges}
    used = size
    for k in range(ears):
        last = k == ears - 1
        length = fresh if last else rng.randint(0, fresh)
        for _ in range(1000):
            a, b = rng.sample(range(used), 2)
            if length or canonical_edge(offset + a, offset + b) not in have:
                break
        else:
            raise ValueError("too many ears for the block size")
        chain = [offset + a] + [offset + used + i for i in range(length)] + [offset + b]
        for u, v in zip(chain, chain[1:]):
            edges.append((u, v))
            have.add(canonical_edge(u, v))
        used += length
        fresh -= length
    return edges


def random_biconnected(n: int, ears: int, seed=None) -> Graph:
    """Biconnected graph: a base cycle plus ``ears`` ear paths."""
    return Graph(range(n), _ear_edges(n, ears, _rng(seed)))


def random_barbell(n1: int, n2: int, ears: int = 1, bridge: bool = False, seed=None) -> Graph:
    """Two biconnected blocks joined at one cut vertex, or by a bridge."""
    rng = _rng(seed)
    left = _ear_edges(n1, ears, rng)
    if bridge:
        right = _ear_edges(n2, ears, rng, offset=n1)
        link = [(rng.randrange(n1), n1 + rng.randrange(n2))]
        n = n1 + n2
    else:
        # the right block's first vertex is the left block's last: a cut vertex
        right = _ear_edges(n2, ears, rng, offset=n1 - 1)
        link = []
        n = n1 + n2 - 1
    return Graph(range(n), left + right + link)
