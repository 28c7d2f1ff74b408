"""Randomized multiplicative-weights solver for packing LPs over spanning trees.

The solver maintains per-constraint weights, repeatedly takes a minimum
spanning tree under weight-derived edge lengths, and performs correlated
randomized weight updates. Edge lengths are tracked exactly (rho) and lazily
(rhobar, within a (1+eps) factor); the maintained tree is an exact MST under
the lazy lengths and hence a (1+eps)-approximate MST under the exact ones.
"""

from __future__ import annotations

import math
import random
import time
from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Mapping, Optional

from .graphs import (DisconnectedError, FractionalEdgeVector, Graph, mst)
from .instances import ConstraintSystem
from .decompose import ImplicitDecomposition

# Fixed slack constant c: Feasible iff the packing value at t=1 is >= 1 - c*eps.
# A feasible instance always yields value >= 1/(1+eps) > 1 - 1.5*eps
# deterministically (the approximate MST argument), so this never rejects a
# truly feasible LP; instances whose packing value falls inside the slack band
# may be reported Feasible with bounded marginal overshoot.
SLACK_C = 1.5

_ITER_CAP_FACTOR = 64.0


class SolverError(RuntimeError):
    """Internal invariant failure in the solver."""


class RowLoadIndex:
    """Ordered index over per-row tree loads (A 1_T)_i / b_i.

    Supports max queries and threshold reporting, used to pick the step size
    and the set of rows whose weights get updated.
    """

    __slots__ = ("load", "_sorted")

    def __init__(self, loads):
        self.load = list(loads)
        self._sorted = sorted((g, i) for i, g in enumerate(self.load))

    def max_load(self) -> tuple[float, int]:
        """(load, row) with the maximum load."""
        g, i = self._sorted[-1]
        return g, i

    def report_at_least(self, threshold: float) -> list[int]:
        """All rows with load >= threshold."""
        pos = bisect_left(self._sorted, (threshold, -1))
        return [i for _, i in self._sorted[pos:]]

    def add_load(self, i: int, delta: float) -> None:
        old = self.load[i]
        pos = bisect_left(self._sorted, (old, i))
        if pos >= len(self._sorted) or self._sorted[pos] != (old, i):
            raise SolverError(f"load index out of sync for row {i}")
        del self._sorted[pos]
        new = old + delta
        self.load[i] = new
        insort(self._sorted, (new, i))


class NaiveDynamicMst:
    """Exact MST under monotonically increasing lengths, id tie-break.

    A tree-edge length increase triggers an O(m) replacement scan across the
    cut left by the edge; a non-tree increase is free. Contract-equivalent to
    the asymptotically faster dynamic-MST structures at desk scale.
    """

    def __init__(self, graph: Graph, lengths: dict[int, float]):
        self.graph = graph
        self.lengths = lengths  # shared with the caller; caller mutates
        t = mst(graph, lengths)
        self.tree: set[int] = set(t.edge_ids)
        self.adj: dict[int, dict[int, int]] = {v: {} for v in range(graph.n)}
        for eid in self.tree:
            e = graph.edge(eid)
            self.adj[e.u][e.v] = eid
            self.adj[e.v][e.u] = eid

    def increase(self, eid: int, new_length: float) -> Optional[tuple[int, int]]:
        """Record that lengths[eid] rose to new_length; return (removed, added)
        if the MST changed, else None."""
        old = self.lengths[eid]
        if new_length < old:
            raise SolverError(f"length of edge {eid} decreased")
        self.lengths[eid] = new_length
        if eid not in self.tree:
            return None
        e = self.graph.edge(eid)
        # 2-color the components of T - e
        del self.adj[e.u][e.v]
        del self.adj[e.v][e.u]
        side = {e.u}
        stack = [e.u]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in side:
                    side.add(y)
                    stack.append(y)
        best_key = (new_length, eid)
        best = eid
        for f in self.graph.edges:
            if (f.u in side) != (f.v in side):
                key = (self.lengths[f.eid], f.eid)
                if key < best_key:
                    best_key = key
                    best = f.eid
        if best == eid:
            self.adj[e.u][e.v] = eid
            self.adj[e.v][e.u] = eid
            return None
        self.tree.discard(eid)
        self.tree.add(best)
        f = self.graph.edge(best)
        self.adj[f.u][f.v] = best
        self.adj[f.v][f.u] = best
        return (eid, best)


@dataclass
class SolveResult:
    feasible: bool
    value: float
    decomposition: Optional[ImplicitDecomposition]
    marginals: Optional[FractionalEdgeVector]
    report: dict


def _run_packing(g: Graph, rows, bounds, eps: float, rng: random.Random) -> SolveResult:
    """Core randomized MWU loop; bounds may be < 1 (internal capacity use)."""
    k = len(rows)
    b = [float(x) for x in bounds]
    columns: dict[int, list[tuple[int, float]]] = {}
    for i, row in enumerate(rows):
        for eid, a in row:
            columns.setdefault(eid, []).append((i, a))

    t_start = time.perf_counter()
    eta = math.log(max(k, 2)) / eps
    one_plus_eps = 1.0 + eps
    exp_eps = math.exp(eps)

    rho: dict[int, float] = {e.eid: 0.0 for e in g.edges}
    for eid, col in columns.items():
        rho[eid] = sum(a for _, a in col)
    rhobar = dict(rho)
    backend = NaiveDynamicMst(g, rhobar)
    tree = backend.tree

    w = [1.0] * k
    q = [0] * k
    wb_sum = sum(b)
    tree_rho = sum(rho[eid] for eid in tree)
    index = RowLoadIndex(
        [sum(a for eid, a in rows[i] if eid in tree) / b[i] for i in range(k)])

    base_tree = sorted(tree)
    # The solution adds delta * coeff * 1_T per iteration (Lagrangian value
    # coeff = sum_i w_i b_i / rho(T)), so tree j's final convex coefficient is
    # its accumulated delta * coeff mass, normalized.
    weights_acc: list[float] = []
    steps: list[tuple[frozenset[int], frozenset[int]]] = []
    pending_rem: set[int] = set()
    pending_add: set[int] = set()
    cur_weight = 0.0
    coeff_cap = 1e280

    t = 0.0
    value = 0.0
    iterations = 0
    weight_updates = 0
    swaps = 0
    iter_cap = max(1000, int(_ITER_CAP_FACTOR * k * math.log(max(k, 2)) / eps ** 2))

    while t < 1.0:
        iterations += 1
        if iterations > iter_cap:
            raise SolverError(f"iteration cap {iter_cap} exceeded")

        if pending_rem or pending_add:
            weights_acc.append(cur_weight)
            steps.append((frozenset(pending_rem), frozenset(pending_add)))
            pending_rem.clear()
            pending_add.clear()
            cur_weight = 0.0

        gmax, _ = index.max_load()
        if gmax > 0.0:
            step = min(eps / (eta * gmax), 1.0 - t)
        else:
            step = 1.0 - t
        last = step >= 1.0 - t
        coeff = wb_sum / tree_rho if tree_rho > 0.0 else math.inf
        cur_weight += step * min(coeff, coeff_cap)
        value += step * coeff

        theta = rng.random()
        while theta == 0.0:
            theta = rng.random()
        threshold = theta * eps / (step * eta)
        for i in list(index.report_at_least(threshold)):
            old_w = w[i]
            new_w = old_w * exp_eps
            w[i] = new_w
            q[i] += 1
            weight_updates += 1
            dw = new_w - old_w
            wb_sum += b[i] * dw
            for eid, a in rows[i]:
                add = a * dw
                r = rho[eid] + add
                rho[eid] = r
                if eid in tree:
                    tree_rho += add
                if r >= one_plus_eps * rhobar[eid]:
                    delta = backend.increase(eid, r)
                    if delta is not None:
                        rem, added = delta
                        swaps += 1
                        tree_rho += rho[added] - rho[rem]
                        if rem in pending_add:
                            pending_add.discard(rem)
                        else:
                            pending_rem.add(rem)
                        if added in pending_rem:
                            pending_rem.discard(added)
                        else:
                            pending_add.add(added)
                        for i2, a2 in columns.get(rem, []):
                            index.add_load(i2, -a2 / b[i2])
                        for i2, a2 in columns.get(added, []):
                            index.add_load(i2, a2 / b[i2])

        if wb_sum > 1e250:
            scale = 1.0 / wb_sum
            w = [x * scale for x in w]
            for eid in rho:
                rho[eid] *= scale
                rhobar[eid] *= scale
            tree_rho *= scale
            wb_sum = 1.0
        t = 1.0 if last else t + step

    weights_acc.append(cur_weight)
    total = sum(weights_acc)
    decomp = ImplicitDecomposition(
        n=g.n,
        base=tuple(base_tree),
        diffs=tuple(steps),
        deltas=tuple(d / total for d in weights_acc),
    )
    wall = time.perf_counter() - t_start
    report = {
        "iterations": iterations,
        "weight_updates": weight_updates,
        "tree_swaps": swaps,
        "value": value if math.isfinite(value) else None,
        "k": k,
        "m": g.m,
        "eps": eps,
        "wall_time": wall,
        "slack_c": SLACK_C,
    }
    feasible = value >= 1.0 - SLACK_C * eps
    return SolveResult(feasible=feasible, value=value, decomposition=decomp,
                       marginals=None, report=report)


def solve_feasibility(g: Graph, cs: ConstraintSystem, eps: float,
                      seed: int = 0) -> SolveResult:
    """Find an implicit convex combination of spanning trees y with
    A y <= (1 + O(eps)) b, or certify (whp) that no such point exists."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0,1), got {eps}")
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    res = _run_packing(g, cs.rows, cs.b, eps, random.Random(seed))
    res.report["seed"] = seed
    if res.feasible:
        y = res.decomposition.marginals()
        res.marginals = FractionalEdgeVector(y)
        viol = cs.max_violation(y)
        res.report["max_violation"] = viol
        res.report["measured_c"] = (viol - 1.0) / res.report["eps"] if viol > 1.0 else 0.0
    else:
        res.decomposition = None
    return res


def solve_mincost(g: Graph, cs: ConstraintSystem, costs: Mapping[int, float],
                  eps: float, seed: int = 0) -> SolveResult:
    """Feasibility plus cost: marginal y with A y <= (1+O(eps)) b and
    c^T y <= (1+eps) OPT_LP, via budget rows and binary search."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0,1), got {eps}")
    for e in g.edges:
        c = costs[e.eid]
        if c < 0 or int(c) != c:
            raise ValueError(f"costs must be nonnegative integers (edge {e.eid}: {c})")

    probes = [0]

    def probe(edge_ids, extra_row=None, extra_b=None) -> SolveResult | None:
        sub = g.subgraph(edge_ids)
        if not sub.is_connected():
            return None
        sub_cs = cs.restricted(edge_ids)
        rows = list(sub_cs.rows)
        bb = list(sub_cs.b)
        if extra_row is not None:
            rows.append(extra_row)
            bb.append(extra_b)
        probes[0] += 1
        return _run_packing(sub, rows, bb, eps,
                            random.Random(seed * 1000003 + probes[0]))

    # step 1: zero-cost subgraph
    zero = [e.eid for e in g.edges if costs[e.eid] == 0]
    res0 = probe(zero)
    if res0 is not None and res0.feasible:
        return _finish_mincost(res0, g, cs, costs, 0.0, probes[0], eps, seed)

    # step 2: smallest feasible cost-sorted prefix
    order = sorted(g.edges, key=lambda e: (costs[e.eid], e.eid))
    lo, hi = 1, g.m
    full = probe([e.eid for e in order])
    if full is None or not full.feasible:
        return SolveResult(False, full.value if full else 0.0, None, None,
                           {"reason": "infeasible ignoring cost", "probes": probes[0],
                            "eps": eps, "seed": seed})
    while lo < hi:
        mid = (lo + hi) // 2
        r = probe([e.eid for e in order[:mid]])
        if r is not None and r.feasible:
            hi = mid
        else:
            lo = mid + 1
    ci = costs[order[lo - 1].eid]
    if ci == 0:
        res = probe([e.eid for e in order[:lo]])
        return _finish_mincost(res, g, cs, costs, 0.0, probes[0], eps, seed)

    # step 3: budget binary search in [ci, (n-1) ci]
    lo_b, hi_b = float(ci), float((g.n - 1) * ci)

    def budget_probe(budget: float) -> SolveResult | None:
        ids = [e.eid for e in g.edges if costs[e.eid] <= budget]
        row = [(eid, costs[eid] / budget) for eid in ids if costs[eid] > 0]
        return probe(ids, extra_row=row, extra_b=1.0)

    best = budget_probe(hi_b)
    if best is None or not best.feasible:
        raise SolverError("upper budget probe unexpectedly infeasible")
    while hi_b > (1.0 + eps) * lo_b:
        mid = math.sqrt(lo_b * hi_b)
        r = budget_probe(mid)
        if r is not None and r.feasible:
            hi_b, best = mid, r
        else:
            lo_b = mid
    return _finish_mincost(best, g, cs, costs, hi_b, probes[0], eps, seed)


def _finish_mincost(res: SolveResult, g, cs, costs, bound, probes, eps, seed) -> SolveResult:
    y = res.decomposition.marginals()
    res.marginals = FractionalEdgeVector(y)
    cost = sum(costs[eid] * x for eid, x in y.items())
    viol = cs.max_violation(y)
    res.report.update({
        "cost_bound": bound,
        "marginal_cost": cost,
        "max_violation": viol,
        "probes": probes,
        "seed": seed,
    })
    return res
