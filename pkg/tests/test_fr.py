import itertools

import pytest

from treepack import (DegreeWitness, FrError, Graph, dfs_tree, fr_min_degree,
                      fr_nonuniform, fr_reduce, generate_instance,
                      is_spanning_tree)
from treepack.graphs import GraphError

from test_graphs import complete_graph, cycle_graph, petersen_graph


def star_graph(leaves):
    return Graph(leaves + 1, [(i, 0, i + 1, 0) for i in range(leaves)])


def brute_force_min_degree(g):
    from treepack import enumerate_spanning_trees
    best = g.n
    for ids in enumerate_spanning_trees(g):
        deg = [0] * g.n
        for eid in ids:
            e = g.edge(eid)
            deg[e.u] += 1
            deg[e.v] += 1
        best = min(best, max(deg))
    return best


class TestWitness:
    def test_lower_bound_formula(self):
        w = DegreeWitness(frozenset({0}), 5)
        assert w.lower_bound() == 5
        w = DegreeWitness(frozenset({0, 1}), 5)
        assert w.lower_bound() == 3

    def test_validate(self):
        g = star_graph(4)
        w = DegreeWitness(frozenset({0}), 4)
        assert w.validate(g)
        assert not DegreeWitness(frozenset({0}), 3).validate(g)


class TestUniform:
    def test_star(self):
        g = star_graph(6)
        tree, witness = fr_min_degree(g)
        assert tree.max_degree() == 6
        assert witness.validate(g)
        assert witness.lower_bound() >= 6 - 1

    def test_path_stays_path(self):
        g = Graph(5, [(i, i, i + 1, 0) for i in range(4)])
        tree, witness = fr_min_degree(g)
        assert tree.max_degree() == 2
        assert witness.validate(g)

    def test_complete_graph_hamiltonian(self):
        for n in (4, 5, 6):
            g = complete_graph(n)
            tree, witness = fr_min_degree(g)
            # B* = 2 for K_n, so the tree degree is at most 3
            assert tree.max_degree() <= 3
            assert witness.validate(g)

    def test_petersen(self):
        g = petersen_graph()
        tree, witness = fr_min_degree(g)
        assert is_spanning_tree(g, tree.edge_ids)
        assert tree.max_degree() <= 3
        assert witness.validate(g)

    @pytest.mark.parametrize("seed", range(12))
    def test_small_random_within_one_of_optimum(self, seed):
        g, _ = generate_instance("random_gnm", {"n": 7, "m": 11}, seed=seed)
        tree, witness = fr_min_degree(g)
        opt = brute_force_min_degree(g)
        assert witness.validate(g)
        assert witness.lower_bound() <= opt
        assert tree.max_degree() <= opt + 1

    def test_larger_random_consistency(self):
        g, _ = generate_instance("random_gnm", {"n": 60, "m": 150}, seed=4)
        tree, witness = fr_min_degree(g)
        assert is_spanning_tree(g, tree.edge_ids)
        assert witness.validate(g)
        assert witness.lower_bound() <= tree.max_degree()


class TestReduce:
    def test_reduce_from_bad_start(self):
        g = complete_graph(5)
        start = dfs_tree(g)
        res = fr_reduce(g, start)
        tree = res.tree
        while res.improved:
            res = fr_reduce(g, tree)
            tree = res.tree
        assert tree.max_degree() <= 3
        assert res.witness is not None

    def test_offsets_length_checked(self):
        g = complete_graph(4)
        with pytest.raises(GraphError):
            fr_reduce(g, dfs_tree(g), offsets=[0, 0])


class TestNonUniform:
    def test_uniform_bounds_match_uniform_solver(self):
        g = complete_graph(6)
        res = fr_nonuniform(g, [2] * 6)
        assert res.feasible
        assert all(res.tree.degree(v) <= 3 for v in range(6))

    def test_star_center_bound_one_infeasible(self):
        g = star_graph(5)
        res = fr_nonuniform(g, [1, 5, 5, 5, 5, 5])
        assert not res.feasible
        assert res.certificate_gap([1, 5, 5, 5, 5, 5]) > 0
        assert res.witness.validate(g)

    def test_cycle_tight_bounds(self):
        g = cycle_graph(5)
        res = fr_nonuniform(g, [2] * 5)
        assert res.feasible
        assert all(res.tree.degree(v) <= 3 for v in range(5))

    def test_skewed_bounds_on_complete_graph(self):
        g = complete_graph(6)
        bounds = [1, 1, 1, 1, 1, 5]
        res = fr_nonuniform(g, bounds)
        assert res.feasible
        for v in range(6):
            assert res.tree.degree(v) <= bounds[v] + 1

    def test_bound_validation(self):
        g = complete_graph(4)
        with pytest.raises(GraphError):
            fr_nonuniform(g, [0, 2, 2, 2])
        with pytest.raises(GraphError):
            fr_nonuniform(g, [2, 2, 2])

    @pytest.mark.parametrize("seed", range(8))
    def test_random_feasible_or_certified(self, seed):
        import random

        g, _ = generate_instance("random_gnm", {"n": 8, "m": 14}, seed=seed)
        rng = random.Random(seed)
        bounds = [rng.randrange(1, 4) for _ in range(8)]
        res = fr_nonuniform(g, bounds)
        if res.feasible:
            for v in range(8):
                assert res.tree.degree(v) <= bounds[v] + 1
        else:
            assert res.certificate_gap(bounds) > 0
            assert res.witness.validate(g)
            # cross-check the certificate against brute force
            from treepack import enumerate_spanning_trees
            for ids in enumerate_spanning_trees(g):
                deg = [0] * g.n
                for eid in ids:
                    e = g.edge(eid)
                    deg[e.u] += 1
                    deg[e.v] += 1
                assert any(deg[v] > bounds[v] for v in range(g.n))
