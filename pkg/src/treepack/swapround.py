"""Randomized swap rounding of convex combinations of spanning trees.

merge_bases repeatedly resolves one exchange pair between two trees; the
divide-and-conquer fast_swap rounds an implicit decomposition by contracting
the common intersection first, so work is proportional to the diff size.
"""

from __future__ import annotations

import random
from typing import Mapping, Optional, Sequence

from .decompose import DecompositionError, ImplicitDecomposition, implicit_decompose
from .forest import ContractibleForest
from .graphs import FractionalEdgeVector, Graph, GraphError, SpanningTree


class SwapRoundError(RuntimeError):
    """Internal invariant failure during rounding."""


def _tree_adj(ids, endpoints) -> dict:
    adj: dict[int, dict[int, int]] = {}
    for eid in ids:
        u, v = endpoints[eid]
        adj.setdefault(u, {})[v] = eid
        adj.setdefault(v, {})[u] = eid
    return adj


def _path_ids(adj, s, t) -> list[int]:
    """Edge ids along the tree path from s to t, in walk order."""
    parent = {s: (None, None)}
    stack = [s]
    while stack:
        x = stack.pop()
        if x == t:
            break
        for y, eid in adj.get(x, {}).items():
            if y not in parent:
                parent[y] = (x, eid)
                stack.append(y)
    if t not in parent:
        raise SwapRoundError(f"no path between {s} and {t}")
    path = []
    x = t
    while x != s:
        px, eid = parent[x]
        path.append(eid)
        x = px
    path.reverse()
    return path


def _component(adj, start, skip_eid) -> set:
    """Vertices reachable from start without crossing edge skip_eid."""
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y, eid in adj.get(x, {}).items():
            if eid != skip_eid and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _merge(delta: float, b_ids: set, deltap: float, bp_ids: set,
           endpoints: Mapping[int, tuple[int, int]], rng: random.Random) -> set:
    """Randomized merge loop on edge-id sets over a shared vertex space.

    Exchange pair rule (shared with the test oracle): e is the smallest id in
    B minus B', e' the first cut-crossing edge on the B' path walked from the
    smaller-id endpoint of e. With probability delta/(delta+delta') the pair
    is resolved in favor of e (B' moves), otherwise in favor of e' (B moves).
    """
    b = set(b_ids)
    bp = set(bp_ids)
    adj_b = _tree_adj(b, endpoints)
    adj_bp = _tree_adj(bp, endpoints)
    p = delta / (delta + deltap)
    while True:
        diff = b - bp
        if not diff:
            break
        e = min(diff)
        u, v = endpoints[e]
        s, t = (u, v) if u <= v else (v, u)
        side = _component(adj_b, u, e)
        ep = None
        for f in _path_ids(adj_bp, s, t):
            x, y = endpoints[f]
            if (x in side) != (y in side):
                ep = f
                break
        if ep is None or ep in b:
            raise SwapRoundError("no valid exchange partner found")
        if rng.random() < p:
            # keep e: B' <- B' - e' + e
            bp.discard(ep)
            bp.add(e)
            x, y = endpoints[ep]
            del adj_bp[x][y]
            del adj_bp[y][x]
            adj_bp.setdefault(u, {})[v] = e
            adj_bp.setdefault(v, {})[u] = e
        else:
            # keep e': B <- B - e + e'
            b.discard(e)
            b.add(ep)
            del adj_b[u][v]
            del adj_b[v][u]
            x, y = endpoints[ep]
            adj_b.setdefault(x, {})[y] = ep
            adj_b.setdefault(y, {})[x] = ep
    return b


def merge_bases(delta: float, t1: SpanningTree, deltap: float, t2: SpanningTree,
                rng: random.Random) -> SpanningTree:
    """Randomly merge two spanning trees of the same graph into one whose
    per-edge marginal is (delta*[e in T] + delta'*[e in T']) / (delta+delta')."""
    if t1.graph is not t2.graph:
        raise GraphError("trees must share a graph")
    if delta <= 0 or deltap <= 0:
        raise ValueError("coefficients must be positive")
    g = t1.graph
    endpoints = {e.eid: (e.u, e.v) for e in g.edges}
    out = _merge(delta, set(t1.edge_ids), deltap, set(t2.edge_ids), endpoints, rng)
    return SpanningTree(g, out)


def shrink_intersection(forest: ContractibleForest,
                        diffs: Sequence[tuple[frozenset[int], frozenset[int]]],
                        extra_endpoints: Optional[Mapping[int, tuple[int, int]]] = None):
    """Contract the edges common to all trees of the slice (those of the base
    tree that no diff touches), lowest-degree endpoint losing its name.

    Returns (contracted forest, mapped diffs) where each mapped diff is a pair
    of dicts original-edge-id -> contracted endpoints. Endpoints of diff edges
    absent from the forest must be supplied via extra_endpoints.
    """
    endpoints = {eid: (u, v) for eid, u, v in forest.edges()}
    if extra_endpoints:
        endpoints.update(extra_endpoints)
    union: set[int] = set()
    for rem, add in diffs:
        union |= rem
        union |= add
    tree_ids = {eid for eid, _, _ in forest.edges()}
    hat = forest.copy()
    for eid in sorted(tree_ids - union):
        u, v = hat.represented_edge(*endpoints[eid])
        if u == v:
            raise SwapRoundError(f"edge {eid} already contracted")
        if hat.degree(u) <= hat.degree(v):
            hat.contract(u, v, u)
        else:
            hat.contract(u, v, v)
    mapped = []
    for rem, add in diffs:
        missing = (rem | add) - endpoints.keys()
        if missing:
            raise DecompositionError(f"no endpoints for diff edges {sorted(missing)}")
        mapped.append((
            {eid: hat.represented_edge(*endpoints[eid]) for eid in rem},
            {eid: hat.represented_edge(*endpoints[eid]) for eid in add},
        ))
    return hat, mapped


def _split_index(diffs) -> int:
    """Relative split L: max l with sum of |E_i| over diffs[:l] <= half total."""
    total = sum(len(rem) for rem, _ in diffs)
    acc = 0
    ell = 0
    for rem, _ in diffs:
        if acc + len(rem) <= total / 2:
            acc += len(rem)
            ell += 1
        else:
            break
    return min(ell, len(diffs) - 1)


def _fast_swap(vertices, tree_ids: set, endpoints, diffs, deltas,
               rng: random.Random) -> set:
    if not diffs:
        return set(tree_ids)
    union: set[int] = set()
    for rem, add in diffs:
        union |= rem
        union |= add
    if not union:
        return set(tree_ids)

    forest = ContractibleForest(
        vertices, [(eid, *endpoints[eid]) for eid in sorted(tree_ids)])
    hat, mapped = shrink_intersection(
        forest, diffs, {eid: endpoints[eid] for eid in union - tree_ids})
    hat_endpoints: dict[int, tuple[int, int]] = {}
    for mrem, madd in mapped:
        hat_endpoints.update(mrem)
        hat_endpoints.update(madd)
    for eid, (u, v) in hat_endpoints.items():
        if u == v:
            raise SwapRoundError(f"diff edge {eid} contracted to a self-loop")
    hat_vertices = hat.vertices()
    hat_tree = tree_ids & union

    ell = _split_index(diffs)
    ec = set(hat_tree)
    for rem, add in diffs[:ell + 1]:
        if not rem <= ec or (add & ec):
            raise DecompositionError("diff log does not replay on the slice")
        ec -= rem
        ec |= add
    left = _fast_swap(hat_vertices, hat_tree, hat_endpoints,
                      diffs[:ell], deltas[:ell + 1], rng)
    right = _fast_swap(hat_vertices, ec, hat_endpoints,
                       diffs[ell + 1:], deltas[ell + 1:], rng)
    merged = _merge(sum(deltas[:ell + 1]), left,
                    sum(deltas[ell + 1:]), right, hat_endpoints, rng)
    return merged | (tree_ids - union)


def fast_swap(g: Graph, d: ImplicitDecomposition, rng: random.Random) -> SpanningTree:
    """Round an implicit decomposition to a single random spanning tree."""
    if d.n != g.n:
        raise DecompositionError("decomposition and graph vertex counts differ")
    endpoints = {}
    ids = set(d.base)
    for rem, add in d.diffs:
        ids |= rem
        ids |= add
    for eid in ids:
        e = g.edge(eid)
        endpoints[eid] = (e.u, e.v)
    out = _fast_swap(range(g.n), set(d.base), endpoints,
                     tuple(d.diffs), tuple(d.deltas), rng)
    return SpanningTree(g, out)


class RoundResult:
    """Outcome of swap_round_point: a tree, or a non-membership certificate."""

    __slots__ = ("in_polytope", "tree", "report")

    def __init__(self, in_polytope: bool, tree: Optional[SpanningTree], report: dict):
        self.in_polytope = in_polytope
        self.tree = tree
        self.report = report


def swap_round_point(g: Graph, x: FractionalEdgeVector, eps: float,
                     rng: random.Random) -> RoundResult:
    """Decompose x and round it; E[X_e] <= (1+O(eps)) x_e on success."""
    seed = rng.randrange(2 ** 32)
    res = implicit_decompose(g, x, eps, seed)
    if not res.in_polytope:
        return RoundResult(False, None, res.report)
    tree = fast_swap(g, res.decomposition, rng)
    return RoundResult(True, tree, res.report)
