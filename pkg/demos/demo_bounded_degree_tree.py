"""Bounded-degree spanning tree, end to end.

Generates a random connected graph, estimates the minimum achievable
maximum degree B via the packing LP, then runs the sparsified pipeline
(LP solve -> importance sampling -> local search) and compares the
resulting tree degree with the estimate.

Run:  python3 demos/demo_bounded_degree_tree.py
"""

import math

from treepack import (bdst_sparse_pipeline, estimate_min_degree,
                      fr_min_degree, generate_instance)


def main():
    eps = 0.2
    g, _ = generate_instance("random_gnm", {"n": 60, "m": 110}, seed=42)
    print(f"graph: n={g.n}, m={g.m}")

    b = estimate_min_degree(g, eps, seed=0)
    upper = math.ceil((1 + 2 * eps) * b) + 1
    print(f"LP estimate: B={b}, so B* lies in [{b}, {upper}]")

    tree, witness = fr_min_degree(g)
    print(f"local search on the full graph: max degree {tree.max_degree()}, "
          f"witness lower bound {witness.lower_bound()} "
          f"(|W|={len(witness.blocked)}, comp(G-W)={witness.components})")

    res = bdst_sparse_pipeline(g, eps=eps, seed=0)
    print(f"sparsified pipeline: kept {res.report['sparsified_m']}/{g.m} "
          f"edges, tree max degree {res.max_degree} "
          f"(guarantee ceil((1+7*eps)*B)+2 = "
          f"{math.ceil((1 + 7 * eps) * res.bound_estimate) + 2})")


if __name__ == "__main__":
    main()
