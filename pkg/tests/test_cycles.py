import itertools

import networkx as nx
import pytest
from hypothesis import given, settings

from lna.cycles import (
    EdgeIndex,
    GF2Eliminator,
    cycle_ring,
    cycle_space_dimension,
    enumerate_simple_cycles,
    horton_candidates,
    in_span,
    intersection,
    is_independent,
    is_simple_cycle,
    minimal_cycle_basis,
    xor,
)
from lna.graph import Graph

from conftest import graphs, to_nx


def brute_min_basis_weight(g):
    """Minimum total weight over all independent nu-subsets of simple cycles."""
    cycles = enumerate_simple_cycles(g)
    nu = cycle_space_dimension(g)
    best = None
    for combo in itertools.combinations(cycles, nu):
        elim = GF2Eliminator()
        if all(elim.add(c.bits) for c in combo):
            w = sum(c.weight for c in combo)
            best = w if best is None else min(best, w)
    return best if nu else 0


def diamond():
    # two triangles a=0 b=1 c=2 / b c d=3 sharing bc
    return Graph(range(4), [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])


class TestAlgebra:
    def test_xor_example(self):
        g = diamond()
        idx = EdgeIndex(g)
        abc = idx.vector([(0, 1), (1, 2), (0, 2)])
        bcd = idx.vector([(1, 2), (2, 3), (1, 3)])
        out = xor(abc, bcd)
        assert set(out.edges) == {(0, 1), (0, 2), (2, 3), (1, 3)}
        assert out.weight == 4 and out.is_even() and is_simple_cycle(out)
        assert not xor(abc, abc)
        assert xor(abc, idx.zero()) == abc

    def test_intersection_example(self):
        g = diamond()
        idx = EdgeIndex(g)
        abc = idx.vector([(0, 1), (1, 2), (0, 2)])
        bcd = idx.vector([(1, 2), (2, 3), (1, 3)])
        assert (abc & bcd).edges == [(1, 2)]
        assert (abc & abc) == abc

    def test_mismatched_index(self, triangle):
        a = EdgeIndex(triangle).vector([(0, 1)])
        b = EdgeIndex(triangle).vector([(0, 1)])
        with pytest.raises(ValueError):
            xor(a, b)
        with pytest.raises(ValueError):
            intersection(a, b)

    def test_dimension(self, k4):
        assert cycle_space_dimension(k4) == 3
        assert cycle_space_dimension(Graph((), [(0, 1), (1, 2), (2, 3), (3, 4)])) == 0
        two = Graph((), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert cycle_space_dimension(two) == 2

    def test_independence_examples(self, k4):
        idx = EdgeIndex(k4)
        t1 = idx.vector([(0, 1), (1, 2), (0, 2)])
        t2 = idx.vector([(0, 1), (1, 3), (0, 3)])
        assert not is_independent([t1, t2], t1 ^ t2)
        assert is_independent([], t1)
        assert not is_independent([t1], idx.zero())
        assert in_span([t1, t2], t1 ^ t2)

    def test_edge_index_order(self, k4):
        assert EdgeIndex(k4).edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

    @given(graphs(max_n=8))
    def test_xor_of_cycles_is_even(self, g):
        cycles = enumerate_simple_cycles(g)
        for a, b in itertools.combinations(cycles[:8], 2):
            assert (a ^ b).is_even()


class TestEnumeration:
    def test_k4(self, k4):
        cycles = enumerate_simple_cycles(k4)
        assert sorted(len(c) for c in cycles) == [3, 3, 3, 3, 4, 4, 4]

    def test_c6_and_tree(self):
        c6 = Graph((), [(i, (i + 1) % 6) for i in range(6)])
        assert len(enumerate_simple_cycles(c6)) == 1
        assert enumerate_simple_cycles(Graph((), [(0, 1), (1, 2)])) == []

    @given(graphs(max_n=7))
    def test_matches_networkx(self, g):
        ours = {c.bits for c in enumerate_simple_cycles(g)}
        idx = EdgeIndex(g)
        theirs = {idx.path_vector(c + [c[0]]).bits for c in nx.simple_cycles(to_nx(g))}
        assert ours == theirs and len(ours) == len(enumerate_simple_cycles(g))


class TestMinimalBasis:
    def test_k4(self, k4):
        b = minimal_cycle_basis(k4)
        assert b.dimension == 3 and b.total_weight == 9
        assert all(len(c) == 3 for c in b)
        assert brute_min_basis_weight(k4) == 9

    def test_single_cycle_and_tree(self):
        c5 = Graph((), [(i, (i + 1) % 5) for i in range(5)])
        b = minimal_cycle_basis(c5)
        assert b.dimension == 1 and len(b[0]) == 5
        assert len(minimal_cycle_basis(Graph((), [(0, 1), (1, 2)]))) == 0

    def test_ring(self):
        c5 = Graph((), [(0, 3), (3, 1), (1, 4), (4, 2), (2, 0)])
        assert cycle_ring(minimal_cycle_basis(c5)[0]) == [0, 2, 4, 1, 3]

    def test_json(self, triangle):
        data = minimal_cycle_basis(triangle).to_json()
        assert data == {
            "dimension": 1,
            "total_weight": 3,
            "cycles": [{"edges": [[0, 1], [0, 2], [1, 2]], "weight": 3}],
        }

    @given(graphs(max_n=9, weighted=True))
    def test_invariants(self, g):
        b = minimal_cycle_basis(g)
        assert len(b) == cycle_space_dimension(g)
        elim = GF2Eliminator()
        assert all(elim.add(c.bits) for c in b)
        assert all(is_simple_cycle(c) for c in b)
        assert all(c.weight == c.index.weight_of(c.bits) for c in b)

    @settings(max_examples=40)
    @given(graphs(max_n=8))
    def test_span(self, g):
        b = list(minimal_cycle_basis(g))
        for z in enumerate_simple_cycles(g):
            assert in_span(b, z)

    @settings(max_examples=25, deadline=None)
    @given(graphs(max_n=6, weighted=True))
    def test_minimal_weight(self, g):
        assert minimal_cycle_basis(g).total_weight == brute_min_basis_weight(g)

    @given(graphs(max_n=9, weighted=True))
    def test_weight_matches_networkx(self, g):
        ours = minimal_cycle_basis(g).total_weight
        theirs = sum(
            sum(g.weight(a, b) for a, b in zip(c, c[1:] + c[:1]))
            for c in nx.minimum_cycle_basis(to_nx(g), weight="weight")
        )
        assert ours == theirs

    @given(graphs(max_n=9))
    def test_deterministic(self, g):
        a = minimal_cycle_basis(g).to_json()
        b = minimal_cycle_basis(Graph(reversed(g.vertices), reversed(g.edges))).to_json()
        assert a == b

    def test_candidates_sorted_and_simple(self, k4):
        cands = horton_candidates(k4)
        keys = [c.sort_key() for c in cands]
        assert keys == sorted(keys) and all(is_simple_cycle(c) for c in cands)

    def test_independence_of_members(self, k4):
        b = list(minimal_cycle_basis(k4))
        for i, c in enumerate(b):
            assert is_independent(b[:i] + b[i + 1 :], c)
