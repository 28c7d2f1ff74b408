"""LP-guided sparsification with feasibility re-verification.

Solves a degree-constrained instance, samples each edge with probability
proportional to its LP value, and re-solves on the survivor graph at the
relaxed bound (1+3*eps)*b. Shows how much of the graph the sparsifier can
discard while staying feasible.

Run:  python3 demos/demo_sparsify_verify.py
"""

from treepack import (degree_constraints, generate_instance,
                      solve_feasibility, sparsify, verify_sparsified)


def main():
    eps = 0.3
    g, _ = generate_instance("random_gnm", {"n": 80, "m": 400}, seed=3)
    cs = degree_constraints(g, 3.0)
    print(f"graph: n={g.n}, m={g.m}, uniform degree bound 3")

    res = solve_feasibility(g, cs, eps, seed=0)
    support = len(res.marginals.support())
    print(f"LP: feasible={res.feasible}, support {support}/{g.m} edges")

    for seed in range(3):
        g_sub, report = sparsify(g, res.marginals, cs, eps, seed=seed)
        check = verify_sparsified(g_sub, cs, eps, seed=seed)
        print(f"seed {seed}: kept {report.realized_size} edges "
              f"(expected {report.expected_size:.1f}); "
              f"re-verify at (1+3*eps)*b -> feasible={check['feasible']}")


if __name__ == "__main__":
    main()
