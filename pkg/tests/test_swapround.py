import math
import random
from collections import Counter

import pytest

from treepack import (ContractibleForest, FractionalEdgeVector, Graph,
                      ImplicitDecomposition, SpanningTree, fast_swap,
                      is_spanning_tree, merge_bases, mst, shrink_intersection,
                      swap_round_point)

from reference_rounding import swap_round_reference


def triangle():
    return Graph(3, [(0, 0, 1, 0), (1, 1, 2, 0), (2, 0, 2, 0)])


def random_trees(g, count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        lengths = {e.eid: rng.random() for e in g.edges}
        out.append(mst(g, lengths).edge_ids)
    return out


class TestMergeBases:
    def test_identity(self):
        g = triangle()
        t = SpanningTree(g, [0, 1])
        out = merge_bases(0.5, t, 0.5, t, random.Random(0))
        assert out.edge_ids == t.edge_ids

    def test_triangle_forced_exchange(self):
        g = triangle()
        t1 = SpanningTree(g, [0, 1])
        t2 = SpanningTree(g, [1, 2])
        rng = random.Random(1)
        counts = Counter()
        trials = 4000
        for _ in range(trials):
            counts[merge_bases(0.5, t1, 0.5, t2, rng).edge_ids] += 1
        assert set(counts) == {frozenset({0, 1}), frozenset({1, 2})}
        for c in counts.values():
            sigma = math.sqrt(trials * 0.25)
            assert abs(c - trials / 2) <= 4 * sigma

    def test_skewed_coefficients_concentrate_on_first(self):
        g = triangle()
        t1 = SpanningTree(g, [0, 1])
        t2 = SpanningTree(g, [1, 2])
        rng = random.Random(2)
        trials = 10_000
        hits = sum(merge_bases(1.0, t1, 0.01, t2, rng).edge_ids == t1.edge_ids
                   for _ in range(trials))
        p = 1.0 / 1.01
        sigma = math.sqrt(trials * p * (1 - p))
        assert abs(hits - trials * p) <= 4 * sigma

    def test_marginal_preservation(self):
        g, _ = __import__("treepack").generate_instance(
            "random_gnm", {"n": 7, "m": 13}, seed=6)
        a, b = random_trees(g, 2, seed=9)
        t1, t2 = SpanningTree(g, a), SpanningTree(g, b)
        delta, deltap = 0.7, 0.3
        rng = random.Random(4)
        trials = 10_000
        counts = Counter()
        for _ in range(trials):
            out = merge_bases(delta, t1, deltap, t2, rng)
            assert is_spanning_tree(g, out.edge_ids)
            for eid in out.edge_ids:
                counts[eid] += 1
        for e in g.edges:
            p = (delta * (e.eid in a) + deltap * (e.eid in b)) / (delta + deltap)
            sigma = math.sqrt(trials * max(p * (1 - p), 1e-12))
            assert abs(counts[e.eid] - trials * p) <= 4 * sigma + 1e-9

    def test_diff_shrinks_each_iteration(self):
        # output always within the union and containing the intersection
        g, _ = __import__("treepack").generate_instance(
            "random_gnm", {"n": 8, "m": 16}, seed=3)
        a, b = random_trees(g, 2, seed=2)
        t1, t2 = SpanningTree(g, a), SpanningTree(g, b)
        for s in range(20):
            out = merge_bases(0.5, t1, 0.5, t2, random.Random(s)).edge_ids
            assert out <= (a | b)
            assert (a & b) <= out


class TestShrinkIntersection:
    def test_no_diffs_contracts_everything(self):
        f = ContractibleForest(range(5), [(i, i, i + 1) for i in range(4)])
        hat, mapped = shrink_intersection(f, [])
        assert hat.num_vertices() == 1
        assert mapped == []

    def test_path_with_one_swap(self):
        # path edges 1, 2, 3 on vertices 0..3; diff swaps edge 3 for edge 4
        f = ContractibleForest(range(4), [(1, 0, 1), (2, 1, 2), (3, 2, 3)])
        hat, mapped = shrink_intersection(
            f, [(frozenset({3}), frozenset({4}))], {4: (0, 3)})
        assert hat.num_vertices() == 2
        assert hat.num_edges() == 1
        (eid, u, v), = hat.edges()
        assert eid == 3
        rem_map, add_map = mapped[0]
        assert set(rem_map) == {3}
        assert set(add_map) == {4}
        ru, rv = rem_map[3]
        assert ru != rv

    def test_random_family_matches_explicit_intersection(self):
        g, _ = __import__("treepack").generate_instance(
            "random_gnm", {"n": 20, "m": 40}, seed=1)
        trees = random_trees(g, 3, seed=8)
        base = trees[0]
        diffs = []
        cur = set(base)
        for t in trees[1:]:
            diffs.append((frozenset(cur - t), frozenset(t - cur)))
            cur = set(t)
        inter = trees[0] & trees[1] & trees[2]
        f = ContractibleForest(
            range(g.n), [(eid, g.edge(eid).u, g.edge(eid).v) for eid in base])
        extra = {eid: (g.edge(eid).u, g.edge(eid).v)
                 for _, add in diffs for eid in add}
        hat, mapped = shrink_intersection(f, diffs, extra)
        # contracting exactly the common intersection leaves n - |inter| names
        assert hat.num_vertices() == g.n - len(inter)
        assert {eid for eid, _, _ in hat.edges()} == base - inter


def appendix_identities(sets):
    union_sym = set()
    for a, b in zip(sets, sets[1:]):
        union_sym |= a ^ b
    union_all = set().union(*sets)
    inter_all = set(sets[0]).intersection(*sets[1:])
    assert union_sym == union_all - inter_all
    assert set(sets[0]) - union_sym == inter_all


class TestSetIdentities:
    def test_appendix_a_on_random_families(self):
        rng = random.Random(5)
        for _ in range(200):
            h = rng.randrange(2, 6)
            universe = range(rng.randrange(3, 15))
            sets = [{x for x in universe if rng.random() < 0.5} or {0}
                    for _ in range(h)]
            appendix_identities(sets)


class TestFastSwap:
    def test_single_tree_identity(self):
        g = triangle()
        d = ImplicitDecomposition(3, (0, 1), (), (1.0,))
        out = fast_swap(g, d, random.Random(0))
        assert out.edge_ids == frozenset({0, 1})

    def uniform_triangle_decomp(self):
        return ImplicitDecomposition(
            3, (0, 1),
            ((frozenset({0}), frozenset({2})),
             (frozenset({1}), frozenset({0}))),
            (1 / 3, 1 / 3, 1 / 3))

    def test_uniform_triangle_marginals(self):
        g = triangle()
        d = self.uniform_triangle_decomp()
        rng = random.Random(3)
        trials = 6000
        counts = Counter()
        for _ in range(trials):
            t = fast_swap(g, d, rng)
            assert is_spanning_tree(g, t.edge_ids)
            for eid in t.edge_ids:
                counts[eid] += 1
        p = 2 / 3
        sigma = math.sqrt(trials * p * (1 - p))
        for e in range(3):
            assert abs(counts[e] - trials * p) <= 4 * sigma

    def test_cycle_leave_one_out(self):
        n = 6
        g = Graph(n, [(i, i, (i + 1) % n, 0) for i in range(n)])
        diffs = tuple((frozenset({(i + 1) % n}), frozenset({i}))
                      for i in range(n - 1))
        d = ImplicitDecomposition(n, tuple(j for j in range(n) if j != 0),
                                  diffs, (1 / n,) * n)
        rng = random.Random(7)
        for _ in range(200):
            t = fast_swap(g, d, rng)
            assert is_spanning_tree(g, t.edge_ids)

    def test_intersection_preserved(self):
        g, _ = __import__("treepack").generate_instance(
            "random_gnm", {"n": 10, "m": 20}, seed=4)
        trees = random_trees(g, 3, seed=3)
        cur = set(trees[0])
        diffs = []
        for t in trees[1:]:
            diffs.append((frozenset(cur - t), frozenset(t - cur)))
            cur = set(t)
        d = ImplicitDecomposition(g.n, tuple(sorted(trees[0])), tuple(diffs),
                                  (1 / 3, 1 / 3, 1 / 3))
        inter = trees[0] & trees[1] & trees[2]
        for s in range(30):
            out = fast_swap(g, d, random.Random(s))
            assert inter <= out.edge_ids

    def test_matches_reference_distribution(self):
        g = triangle()
        d = self.uniform_triangle_decomp()
        trees = list(d.trees())
        fast_counts = Counter()
        ref_counts = Counter()
        trials = 4000
        for s in range(trials):
            fast_counts[fast_swap(g, d, random.Random(s)).edge_ids] += 1
            ref_counts[swap_round_reference(
                g, list(d.deltas), trees, random.Random(10 ** 6 + s))] += 1
        assert set(fast_counts) == set(ref_counts)
        for key in fast_counts:
            diff = abs(fast_counts[key] - ref_counts[key])
            assert diff <= 5 * math.sqrt(trials)


class TestSwapRoundPoint:
    def test_tree_indicator_is_deterministic(self):
        g = triangle()
        res = swap_round_point(g, FractionalEdgeVector({0: 1.0, 1: 1.0}),
                               0.1, random.Random(0))
        assert res.in_polytope
        assert res.tree.edge_ids == frozenset({0, 1})

    def test_outside_point_rejected(self):
        g = triangle()
        res = swap_round_point(g, FractionalEdgeVector({e: 0.4 for e in range(3)}),
                               0.05, random.Random(0))
        assert not res.in_polytope
        assert res.tree is None
