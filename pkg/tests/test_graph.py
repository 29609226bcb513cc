import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lna.cycles import enumerate_simple_cycles
from lna.graph import (
    TYPE1,
    Graph,
    GraphError,
    collapse_trees,
    components,
    cut_edges,
    cut_vertices,
    path_weight,
    shortest_path,
)

from conftest import graphs, to_nx


def two_triangles(shared_vertex=True):
    if shared_vertex:
        return Graph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    return Graph(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


class TestConstruction:
    def test_basic(self, triangle):
        assert triangle.n == 3 and triangle.m == 3
        assert triangle.edges == ((0, 1), (0, 2), (1, 2))
        assert triangle.weight(2, 1) == 1
        assert triangle.kind(0) == "physical"

    def test_weights_are_exact(self):
        g = Graph((), [(0, 1, 2.5), (1, 2, "1/3")])
        assert g.weight(0, 1) == Fraction(5, 2)
        assert g.weight(1, 2) == Fraction(1, 3)

    @pytest.mark.parametrize(
        "edges",
        [[(0, 0)], [(0, 1), (1, 0)], [(0, 1, 0)], [(0, 1, -1)], [(-1, 2)], [(0, 1, 2, 3)]],
    )
    def test_rejects_invalid(self, edges):
        with pytest.raises(GraphError):
            Graph((), edges)

    def test_kinds(self):
        g = Graph([0, 1], [(0, 1)], {0: TYPE1})
        assert g.kind(0) == TYPE1 and g.kind(1) == "physical"
        with pytest.raises(GraphError):
            Graph([0], [], {0: "bogus"})

    def test_equality_and_hash(self, triangle):
        other = Graph([2, 1, 0], [(2, 0), (1, 0), (2, 1)])
        assert other == triangle and hash(other) == hash(triangle)

    def test_relabeled(self):
        g, mapping = Graph((), [(10, 20), (20, 30)]).relabeled()
        assert g.vertices == (0, 1, 2) and mapping == {10: 0, 20: 1, 30: 2}


class TestComponents:
    def test_examples(self, triangle):
        assert components(triangle).count == 1
        assert components(two_triangles(False)).count == 2
        assert components(Graph()).count == 0

    @given(graphs(max_n=10))
    def test_matches_networkx(self, g):
        labels = components(g)
        assert labels.count == nx.number_connected_components(to_nx(g))
        for comp in nx.connected_components(to_nx(g)):
            assert len({labels.component_of[v] for v in comp}) == 1

    @given(graphs(max_n=9), st.randoms(use_true_random=False))
    def test_relabel_invariant(self, g, rnd):
        perm = list(range(100, 100 + g.n))
        rnd.shuffle(perm)
        h = Graph(perm, [(perm[u], perm[v]) for u, v in g.edges])
        assert components(h).count == components(g).count


class TestCuts:
    def test_examples(self, c4):
        assert cut_vertices(two_triangles()) == {2}
        assert cut_vertices(c4) == set()
        assert cut_vertices(Graph((), [(0, 1), (1, 2)])) == {1}
        assert cut_edges(Graph((), [(0, 1), (1, 2)])) == {(0, 1), (1, 2)}
        assert cut_edges(c4) == set()
        pendant = Graph((), [(0, 1), (1, 2), (0, 2), (2, 3)])
        assert cut_edges(pendant) == {(2, 3)}

    @given(graphs(max_n=10))
    def test_cut_vertices_by_removal(self, g):
        base = components(g).count
        cuts = cut_vertices(g)
        for v in g.vertices:
            rest = g.subgraph(w for w in g.vertices if w != v)
            # removing an isolated vertex loses a component; count only splits
            split = components(rest).count > base - (1 if g.degree(v) == 0 else 0)
            assert split == (v in cuts)

    @given(graphs(max_n=8))
    def test_bridges_lie_on_no_cycle(self, g):
        on_cycle = set()
        for c in enumerate_simple_cycles(g):
            on_cycle.update(c.edges)
        assert cut_edges(g) == set(g.edges) - on_cycle

    @given(graphs(max_n=10))
    def test_matches_networkx(self, g):
        h = to_nx(g)
        assert cut_vertices(g) == set(nx.articulation_points(h))
        assert cut_edges(g) == {tuple(sorted(e)) for e in nx.bridges(h)}


class TestCollapseTrees:
    def test_tail(self, triangle):
        g = Graph((), [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)])
        core, root = collapse_trees(g)
        assert core == triangle
        assert root == {3: 0, 4: 0}

    def test_pure_tree(self):
        g = Graph((), [(3, 1), (1, 4), (4, 2), (2, 5)])
        core, root = collapse_trees(g)
        assert core.n == 0 and root == {v: 1 for v in (1, 2, 3, 4, 5)}

    def test_cycle_unchanged(self, c4):
        assert collapse_trees(c4) == (c4, {})

    @given(graphs(max_n=12))
    def test_is_two_core(self, g):
        core, root = collapse_trees(g)
        assert set(core.vertices) == set(nx.k_core(to_nx(g), 2).nodes)
        assert set(root) == set(g.vertices) - set(core.vertices)
        for v, r in root.items():
            assert r in core or (r == min(nx.node_connected_component(to_nx(g), v)))

    @given(graphs(max_n=12))
    def test_idempotent(self, g):
        core, _ = collapse_trees(g)
        again, root = collapse_trees(core)
        assert again == core and root == {}


def brute_force_shortest(g, s, t):
    best = None
    for path in nx.all_simple_paths(to_nx(g), s, t):
        key = (path_weight(g, path), path)
        if best is None or key < best:
            best = key
    return best


class TestShortestPath:
    def test_c4_tie(self, c4):
        assert shortest_path(c4, 0, 2) == [0, 1, 2]

    def test_identity_and_disconnected(self, triangle):
        assert shortest_path(triangle, 1, 1) == [1]
        assert shortest_path(two_triangles(False), 0, 4) is None
        with pytest.raises(GraphError):
            shortest_path(triangle, 0, 9)

    @settings(max_examples=60)
    @given(graphs(min_n=2, max_n=8, connected=True, weighted=True), st.data())
    def test_brute_force(self, g, data):
        s = data.draw(st.sampled_from(g.vertices))
        t = data.draw(st.sampled_from(g.vertices))
        if s == t:
            return
        w, path = brute_force_shortest(g, s, t)
        got = shortest_path(g, s, t)
        assert path_weight(g, got) == w
        assert got == path  # lexicographic tie-break


def test_group_pairs_all_connected():
    g = Graph(range(5), list(itertools.combinations(range(5), 2)))
    assert all(len(shortest_path(g, a, b)) == 2 for a, b in itertools.combinations(range(5), 2))
