"""LP-solution-guided random sparsification of the instance graph.

Each edge is kept independently with probability proportional to its LP
value; the surviving graph supports a near-feasible fractional tree with
high probability, which downstream code re-verifies by re-solving.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .graphs import FractionalEdgeVector, Graph
from .instances import ConstraintSystem

RATE_CONSTANT = 36.0


@dataclass
class SparsifyReport:
    kept: list[int]
    alpha: dict[int, float]
    realized_size: int
    expected_size: float
    eps: float
    k: int
    m: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "kept": sorted(self.kept),
            "alpha": {str(eid): a for eid, a in sorted(self.alpha.items())},
            "realized_size": self.realized_size,
            "expected_size": self.expected_size,
            "eps": self.eps,
            "k": self.k,
            "m": self.m,
            "seed": self.seed,
        }


def keep_probabilities(x: FractionalEdgeVector, k: int, m: int,
                       eps: float) -> dict[int, float]:
    """alpha_e = min(1, 36 ln(k+m)/eps^2 * x_e) for every support edge."""
    rate = RATE_CONSTANT * math.log(k + m) / eps ** 2
    return {eid: min(1.0, rate * val) for eid, val in x.items()}


def sparsify(g: Graph, x: FractionalEdgeVector, cs: ConstraintSystem,
             eps: float, seed: int = 0) -> tuple[Graph, SparsifyReport]:
    """Keep each edge independently with probability alpha_e; edges outside
    the support of x are dropped (alpha = 0)."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0,1), got {eps}")
    k = cs.k
    alpha = keep_probabilities(x, k, g.m, eps)
    rng = random.Random(seed)
    kept = []
    # iterate in edge order so the RNG stream is deterministic per seed
    for e in g.edges:
        a = alpha.get(e.eid, 0.0)
        if a >= 1.0:
            kept.append(e.eid)
        elif a > 0.0 and rng.random() < a:
            kept.append(e.eid)
    report = SparsifyReport(
        kept=kept,
        alpha=alpha,
        realized_size=len(kept),
        expected_size=sum(alpha.values()),
        eps=eps,
        k=k,
        m=g.m,
        seed=seed,
    )
    return g.subgraph(kept), report


def verify_sparsified(g_sub: Graph, cs: ConstraintSystem, eps: float,
                      seed: int = 0) -> dict:
    """Re-solve the instance on the sparsified graph with bounds relaxed to
    (1+3*eps)*b and report the outcome."""
    from .mwu import solve_feasibility

    if not g_sub.is_connected():
        return {"feasible": False, "reason": "sparsified graph is disconnected"}
    ids = [e.eid for e in g_sub.edges]
    relaxed = cs.restricted(ids, scale_b=1.0 + 3.0 * eps)
    res = solve_feasibility(g_sub, relaxed, eps, seed)
    out = {"feasible": res.feasible, "value": res.value}
    if res.feasible:
        out["max_violation"] = res.report.get("max_violation")
    return out
