"""Crossing spanning tree by LP solve plus swap rounding.

Builds a graph with a few cut constraints, solves the packing LP over the
spanning tree polytope, decomposes the fractional solution implicitly, and
rounds it many times. The empirical per-edge frequencies track the LP
marginals, and the best rounded tree nearly meets the cut bounds.

Run:  python3 demos/demo_crossing_rounding.py
"""

import random
from collections import Counter

from treepack import (crossing_pipeline, cut_constraints, fast_swap,
                      generate_instance, solve_feasibility)


def main():
    eps = 0.2
    g, _ = generate_instance("random_gnm", {"n": 24, "m": 60}, seed=7)
    cuts = [set(range(8)), set(range(8, 16))]
    cs = cut_constraints(g, cuts, [6.0, 6.0])
    print(f"graph: n={g.n}, m={g.m}; {cs.k} cut rows with bound 6")

    res = solve_feasibility(g, cs, eps, seed=0)
    print(f"LP: feasible={res.feasible}, value={res.value:.3f}, "
          f"{res.report['iterations']} iterations, "
          f"decomposition of {res.decomposition.h} trees")

    trials = 500
    rng = random.Random(1)
    counts = Counter()
    for _ in range(trials):
        for eid in fast_swap(g, res.decomposition, rng).edge_ids:
            counts[eid] += 1
    drift = max(abs(counts[eid] / trials - res.marginals[eid])
                for eid in range(g.m))
    print(f"rounded {trials} times; worst |empirical - marginal| = {drift:.3f}")

    out = crossing_pipeline(g, cs, eps=eps, seed=0, trials=20)
    print(f"best of 20 trees crosses at most "
          f"{out.stats['best_max_multiplicative']:.2f}x each bound")


if __name__ == "__main__":
    main()
