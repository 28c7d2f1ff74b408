"""End-to-end pipelines: degree estimation, sparsified bounded-degree trees,
and repeated-rounding for crossing constraints."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .fr import fr_min_degree, fr_nonuniform
from .graphs import DisconnectedError, Graph, GraphError, SpanningTree
from .instances import ConstraintSystem, degree_constraints
from .mwu import solve_feasibility, solve_mincost
from .sparsify import sparsify
from .swapround import fast_swap

TRIALS_C = 4.0


class PipelineError(RuntimeError):
    pass


class InfeasibleError(PipelineError):
    """The LP certified (whp) that no fractional solution exists."""


def estimate_min_degree(g: Graph, eps: float, seed: int = 0) -> int:
    """Smallest B such that the degree-bounded LP with b = B is feasible;
    satisfies B <= B* <= ceil((1+O(eps))B) + 1 whp."""
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    n = g.n
    if n <= 2:
        return 1

    def feasible(bound: int) -> bool:
        cs = degree_constraints(g, float(bound))
        return solve_feasibility(g, cs, eps, _mix(seed, bound)).feasible

    lo, hi = 2, n - 1
    if feasible(lo):
        return lo
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _mix(seed: int, salt: int) -> int:
    return hash((seed, salt)) & 0xFFFFFFFF


@dataclass
class BdstResult:
    tree: SpanningTree
    max_degree: int
    bound_estimate: Optional[int]
    report: dict = field(default_factory=dict)


def bdst_sparse_pipeline(g: Graph, bounds: Optional[Sequence[int]] = None,
                         eps: float = 0.1, seed: int = 0) -> BdstResult:
    """LP solve, sparsify, then local search on the sparse graph.

    With no bounds the target is the minimum maximum degree B*; the output
    degree is at most ceil((1+7*eps)B*) + 2. With per-vertex bounds the same
    relaxed form applies per vertex. One retry with a fresh seed on
    sparsification failure, then an error.
    """
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    last_exc: Optional[Exception] = None
    for attempt in range(2):
        s = seed + attempt
        try:
            return _bdst_once(g, bounds, eps, s, attempt)
        except (PipelineError, DisconnectedError) as exc:
            if isinstance(exc, InfeasibleError):
                raise
            last_exc = exc
    raise PipelineError(f"sparsified run failed twice: {last_exc}")


def _bdst_once(g: Graph, bounds, eps: float, seed: int, attempt: int) -> BdstResult:
    if bounds is None:
        b_est = estimate_min_degree(g, eps, seed)
        cs = degree_constraints(g, float(max(b_est, 1)))
    else:
        b_est = None
        if len(bounds) != g.n:
            raise GraphError("need one bound per vertex")
        cs = degree_constraints(g, [float(b) for b in bounds])
    res = solve_feasibility(g, cs, eps, seed)
    if not res.feasible:
        raise InfeasibleError("degree LP is infeasible")

    g_sub, sp_report = sparsify(g, res.marginals, cs, eps, seed)
    if not g_sub.is_connected():
        raise PipelineError("sparsified graph is disconnected")

    n = g.n
    if bounds is None:
        tree, witness = fr_min_degree(g_sub)
        relaxed = None
    else:
        relaxed = [min(n - 1, math.ceil((1.0 + 7.0 * eps) * bv) + 1)
                   for bv in bounds]
        fr_res = fr_nonuniform(g_sub, relaxed)
        if not fr_res.feasible:
            raise PipelineError("local search infeasible on sparsified graph")
        tree, witness = fr_res.tree, None

    max_deg = tree.max_degree()
    report = {
        "attempt": attempt,
        "seed": seed,
        "eps": eps,
        "bound_form": "ceil((1+7*eps)*B)+2",
        "sparsified_m": g_sub.m,
        "original_m": g.m,
        "lp_value": res.value,
        "expected_kept": sp_report.expected_size,
    }
    if b_est is not None:
        report["estimated_B"] = b_est
        report["degree_bound"] = math.ceil((1.0 + 7.0 * eps) * b_est) + 2
    if bounds is not None:
        report["relaxed_bounds"] = relaxed
    if witness is not None:
        report["witness_lower_bound"] = witness.lower_bound()
    return BdstResult(tree, max_deg, b_est, report)


@dataclass
class CrossingResult:
    tree: SpanningTree
    stats: dict


def crossing_pipeline(g: Graph, cs: ConstraintSystem,
                      costs: Optional[Mapping[int, float]] = None,
                      eps: float = 0.1, seed: int = 0,
                      trials: Optional[int] = None) -> CrossingResult:
    """Solve the LP, then round independently `trials` times; return the best
    tree (lowest max violation, cost-filtered when costs are given)."""
    if trials is None:
        trials = max(1, math.ceil(TRIALS_C * math.log(max(g.n, 2)) / eps))
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if costs is not None:
        res = solve_mincost(g, cs, costs, eps, seed)
    else:
        res = solve_feasibility(g, cs, eps, seed)
    if not res.feasible:
        raise InfeasibleError("LP is infeasible")
    lp_cost = res.report.get("marginal_cost") if costs is not None else None

    per_trial = []
    best = None
    best_key = None
    for i in range(trials):
        rng = random.Random(_mix(seed, 1000 + i))
        tree = fast_swap(g, res.decomposition, rng)
        loads = [cs.row_load(j, tree.edge_ids) for j in range(cs.k)]
        mult = max((ld / bi for ld, bi in zip(loads, cs.b)), default=0.0)
        add = max((ld - bi for ld, bi in zip(loads, cs.b)), default=0.0)
        entry = {"trial": i, "max_multiplicative": mult, "max_additive": add,
                 "tree": sorted(tree.edge_ids)}
        accepted = True
        if costs is not None:
            cost = sum(costs[eid] for eid in tree.edge_ids)
            entry["cost"] = cost
            accepted = cost <= (1.0 + eps) * lp_cost + 1e-9
            entry["cost_accepted"] = accepted
        per_trial.append(entry)
        key = (0 if accepted else 1, mult, entry.get("cost", 0.0))
        if best_key is None or key < best_key:
            best_key = key
            best = tree
    stats = {
        "trials": trials,
        "eps": eps,
        "seed": seed,
        "lp_value": res.value,
        "lp_cost": lp_cost,
        "per_trial": per_trial,
        "best_max_multiplicative": min(t["max_multiplicative"] for t in per_trial),
        "any_cost_accepted": (costs is None or
                              any(t.get("cost_accepted") for t in per_trial)),
    }
    return CrossingResult(best, stats)
