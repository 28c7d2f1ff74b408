import random

import pytest

from treepack import (DisconnectedError, Graph, GraphError, SpanningTree,
                      enumerate_spanning_trees, is_spanning_tree, mst,
                      spanning_tree_count)


def complete_graph(n):
    edges = []
    eid = 0
    for u in range(n):
        for v in range(u + 1, n):
            edges.append((eid, u, v, 0))
            eid += 1
    return Graph(n, edges)


def cycle_graph(n):
    return Graph(n, [(i, i, (i + 1) % n, 0) for i in range(n)])


def petersen_graph():
    outer = [(i, i, (i + 1) % 5, 0) for i in range(5)]
    spokes = [(5 + i, i, 5 + i, 0) for i in range(5)]
    inner = [(10 + i, 5 + i, 5 + (i + 2) % 5, 0) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_connected(n, m, rng):
    edges = []
    for v in range(1, n):
        edges.append((len(edges), rng.randrange(v), v, 0))
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((len(edges), u, v, 0))
    return Graph(n, edges)


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 1, 1, 0)])

    def test_rejects_duplicate_id(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 0, 1, 0), (0, 0, 1, 0)])

    def test_rejects_negative_cost(self):
        with pytest.raises(GraphError):
            Graph(2, [(0, 0, 1, -1)])

    def test_parallel_edges_allowed(self):
        g = Graph(2, [(0, 0, 1, 0), (1, 0, 1, 0)])
        assert g.m == 2

    def test_connectivity(self):
        assert cycle_graph(5).is_connected()
        assert not Graph(3, [(0, 0, 1, 0)]).is_connected()

    def test_subgraph_preserves_ids(self):
        g = complete_graph(4)
        sub = g.subgraph([5, 0])
        assert {e.eid for e in sub.edges} == {0, 5}
        assert sub.edge(5) == g.edge(5)


class TestSpanningTree:
    def test_membership_check(self):
        g = cycle_graph(4)
        assert is_spanning_tree(g, [0, 1, 2])
        assert not is_spanning_tree(g, [0, 1, 2, 3])
        assert not is_spanning_tree(g, [0, 1])

    def test_invalid_tree_rejected(self):
        g = complete_graph(4)
        with pytest.raises(GraphError):
            SpanningTree(g, [0, 1])

    def test_degrees_and_path(self):
        g = complete_graph(4)
        # star at vertex 0: edges (0,1), (0,2), (0,3) are ids 0, 1, 2
        t = SpanningTree(g, [0, 1, 2])
        assert t.max_degree() == 3
        assert t.degree(0) == 3
        assert t.path_edges(1, 2) == [0, 1]


class TestMst:
    def test_id_tie_break(self):
        g = cycle_graph(4)
        t = mst(g, {eid: 1.0 for eid in range(4)})
        assert t.edge_ids == frozenset({0, 1, 2})

    def test_respects_lengths(self):
        g = cycle_graph(4)
        t = mst(g, {0: 5.0, 1: 1.0, 2: 1.0, 3: 1.0})
        assert 0 not in t.edge_ids

    def test_disconnected_raises(self):
        g = Graph(3, [(0, 0, 1, 0)])
        with pytest.raises(DisconnectedError):
            mst(g, {0: 1.0})


class TestEnumeration:
    def test_k4_has_16_trees(self):
        trees = list(enumerate_spanning_trees(complete_graph(4)))
        assert len(trees) == 16
        assert len(set(trees)) == 16

    def test_c4_has_4_trees(self):
        assert len(list(enumerate_spanning_trees(cycle_graph(4)))) == 4

    def test_petersen_has_2000_trees(self):
        g = petersen_graph()
        assert spanning_tree_count(g) == 2000
        assert sum(1 for _ in enumerate_spanning_trees(g, limit=3000)) == 2000

    def test_every_enumerated_set_is_a_tree(self):
        g = complete_graph(5)
        for ids in enumerate_spanning_trees(g):
            assert is_spanning_tree(g, ids)

    def test_limit_enforced(self):
        with pytest.raises(GraphError):
            list(enumerate_spanning_trees(complete_graph(5), limit=10))

    def test_counts_match_kirchhoff_on_random_graphs(self):
        rng = random.Random(7)
        for _ in range(10):
            n = rng.randrange(3, 8)
            g = random_connected(n, n + rng.randrange(4), rng)
            count = sum(1 for _ in enumerate_spanning_trees(g))
            assert count == spanning_tree_count(g)


def test_kirchhoff_single_vertex():
    assert spanning_tree_count(Graph(1, [])) == 1
