"""Local search for low-degree spanning trees with degree witnesses.

Reduce blocks the vertices of the top two degree classes, looks for a
non-tree edge joining two components of the unblocked forest, and either
improves the tree through a cascade of swaps or returns the blocked set as
a witness. Non-uniform bounds run on a virtual graph where each vertex v
carries n - B_v phantom degree, tracked as an additive offset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import DisconnectedError, Graph, GraphError, SpanningTree


class FrError(RuntimeError):
    """Internal invariant failure in the local search."""


@dataclass(frozen=True)
class DegreeWitness:
    """Blocked set W with comp(G - W); proves a spanning tree degree bound."""

    blocked: frozenset[int]
    components: int

    def lower_bound(self) -> int:
        """ceil((comp(G-W) + |W| - 1) / |W|) <= B*."""
        w = len(self.blocked)
        return -((self.components + w - 1) // -w)

    def validate(self, g: Graph) -> bool:
        """Recompute comp(G - W) and compare."""
        return _components_without(g, self.blocked) == self.components


def _components_without(g: Graph, removed) -> int:
    seen = set(removed)
    count = 0
    adj = g.adjacency()
    for start in range(g.n):
        if start in seen:
            continue
        count += 1
        seen.add(start)
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def dfs_tree(g: Graph) -> SpanningTree:
    """Arbitrary initial spanning tree (iterative DFS from vertex 0)."""
    adj = g.adjacency()
    seen = {0}
    chosen = []
    stack = [0]
    while stack:
        x = stack.pop()
        for y, eid in adj[x]:
            if y not in seen:
                seen.add(y)
                chosen.append(eid)
                stack.append(y)
    if len(seen) != g.n:
        raise DisconnectedError("graph is not connected")
    return SpanningTree(g, chosen, check=False)


class _WorkTree:
    """Mutable tree adjacency with degree bookkeeping."""

    def __init__(self, g: Graph, tree: SpanningTree):
        self.g = g
        self.adj: dict[int, dict[int, int]] = {v: dict(nbrs)
                                               for v, nbrs in tree.adjacency().items()}
        self.ids: set[int] = set(tree.edge_ids)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def path(self, u: int, w: int) -> tuple[list[int], list[int]]:
        """(vertices, edge ids) along the tree path from u to w."""
        parent: dict[int, tuple[int, int]] = {u: (-1, -1)}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == w:
                break
            for y, eid in self.adj[x].items():
                if y not in parent:
                    parent[y] = (x, eid)
                    stack.append(y)
        verts = [w]
        eids = []
        x = w
        while x != u:
            px, eid = parent[x]
            eids.append(eid)
            verts.append(px)
            x = px
        verts.reverse()
        eids.reverse()
        return verts, eids

    def swap(self, remove_eid: int, add_eid: int) -> None:
        e = self.g.edge(remove_eid)
        f = self.g.edge(add_eid)
        del self.adj[e.u][e.v]
        del self.adj[e.v][e.u]
        self.adj[f.u][f.v] = add_eid
        self.adj[f.v][f.u] = add_eid
        self.ids.discard(remove_eid)
        self.ids.add(add_eid)

    def to_tree(self) -> SpanningTree:
        return SpanningTree(self.g, self.ids)


class _Dsu:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, x: int, y: int) -> None:
        self.p[self.find(x)] = self.find(y)


@dataclass
class ReduceResult:
    improved: bool
    tree: SpanningTree
    witness: Optional[DegreeWitness] = None


def _mark_phase(g: Graph, work: _WorkTree, off: Sequence[int]):
    """Run the unblocking fixpoint. Returns ('improve', z, eid, plan) when a
    top-degree vertex can be reduced via non-tree edge eid, else
    ('witness', blocked_set)."""
    n = g.n
    dv = [work.degree(v) + off[v] for v in range(n)]
    k = max(dv)
    blocked = [dv[v] >= k - 1 for v in range(n)]
    dsu = _Dsu(n)
    for v in range(n):
        if not blocked[v]:
            for y in work.adj[v]:
                if not blocked[y]:
                    dsu.union(v, y)
    nontree = [e for e in g.edges if e.eid not in work.ids]
    plan: dict[int, int] = {}
    progress = True
    while progress:
        progress = False
        for e in nontree:
            u, w = e.u, e.v
            if blocked[u] or blocked[w] or dsu.find(u) == dsu.find(w):
                continue
            verts, _ = work.path(u, w)
            zs = [z for z in verts if blocked[z]]
            if not zs:
                raise FrError("separated endpoints with no blocked vertex on path")
            top = next((z for z in zs if dv[z] == k), None)
            if top is not None:
                return ("improve", top, e.eid, plan, k, blocked)
            for z in zs:
                blocked[z] = False
                plan[z] = e.eid
                for y in work.adj[z]:
                    if not blocked[y]:
                        dsu.union(z, y)
            progress = True
            break
    witness = frozenset(v for v in range(n) if blocked[v])
    return ("witness", witness, None, plan, k, blocked)


def _apply_cascade(g: Graph, work: _WorkTree, off: Sequence[int], k: int,
                   plan: dict[int, int], z: int, eid: int,
                   applied: set[int]) -> bool:
    """Reduce the (virtual) degree of z by swapping in non-tree edge eid,
    first reducing any endpoint that sits at k-1 via its recorded plan."""
    e = g.edge(eid)
    for x in (e.u, e.v):
        if work.degree(x) + off[x] >= k - 1:
            if x in plan and x not in applied:
                applied.add(x)
                if not _apply_cascade(g, work, off, k, plan, x, plan[x], applied):
                    return False
            if work.degree(x) + off[x] >= k - 1:
                return False
    verts, eids = work.path(e.u, e.v)
    if z not in verts:
        return False
    j = verts.index(z)
    if j == 0 or j == len(verts) - 1:
        return False
    work.swap(eids[j - 1], eid)
    return True


def fr_reduce(g: Graph, tree: SpanningTree,
              offsets: Optional[Sequence[int]] = None) -> ReduceResult:
    """One round of local search: either return a tree with strictly fewer
    maximum-(virtual-)degree vertices, or a witness that none exists."""
    off = list(offsets) if offsets is not None else [0] * g.n
    if len(off) != g.n:
        raise GraphError("need one offset per vertex")
    work = _WorkTree(g, tree)
    attempts = 0
    while True:
        attempts += 1
        if attempts > 4 * g.n + 16:
            raise FrError("Reduce failed to converge")
        kind, payload, eid, plan, k, _blocked = _mark_phase(g, work, off)
        if kind == "witness":
            witness = DegreeWitness(payload, _components_without(g, payload))
            # virtual-unit witness value must certify the current max degree
            w = len(payload)
            virt = witness.components + sum(off[v] for v in payload) + w - 1
            if -(virt // -w) < k - 1:
                raise FrError("witness bound below k-1")
            return ReduceResult(False, work.to_tree(), witness)
        if _apply_cascade(g, work, off, k, plan, payload, eid, {payload}):
            out = work.to_tree()
            new_k = max(out.degree(v) + off[v] for v in range(g.n))
            if new_k > k:
                raise FrError("cascade raised the maximum degree")
            return ReduceResult(True, out)
        # cascade invalidated by earlier sub-swaps; re-mark on the current tree


def fr_min_degree(g: Graph) -> tuple[SpanningTree, DegreeWitness]:
    """Spanning tree of maximum degree <= B* + 1 plus a witness for B*."""
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    tree = dfs_tree(g)
    cap = 64 + 16 * g.n * max(1, g.n.bit_length())
    for _ in range(cap):
        res = fr_reduce(g, tree)
        tree = res.tree
        if not res.improved:
            return tree, res.witness
    raise FrError("Reduce call cap exceeded")


@dataclass
class NonUniformResult:
    feasible: bool
    tree: Optional[SpanningTree]
    witness: Optional[DegreeWitness] = None

    def certificate_gap(self, bounds: Sequence[int]) -> int:
        """comp(G-W) + |W| - 1 - sum of bounds over W; > 0 certifies that no
        tree satisfies the bounds."""
        w = self.witness
        return w.components + len(w.blocked) - 1 - sum(bounds[v] for v in w.blocked)


def fr_nonuniform(g: Graph, bounds: Sequence[int]) -> NonUniformResult:
    """Tree with deg(v) <= B_v + 1 for all v, or a certificate that no tree
    has deg(v) <= B_v everywhere."""
    n = g.n
    if len(bounds) != n:
        raise GraphError("need one bound per vertex")
    for v, bv in enumerate(bounds):
        if not (1 <= bv <= max(n - 1, 1)):
            raise GraphError(f"bound for vertex {v} outside [1, n-1]: {bv}")
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    off = [n - bv for bv in bounds]
    tree = dfs_tree(g)
    cap = 64 + 16 * n * max(1, n.bit_length())
    for _ in range(cap):
        if all(tree.degree(v) <= bounds[v] + 1 for v in range(n)):
            return NonUniformResult(True, tree)
        res = fr_reduce(g, tree, off)
        tree = res.tree
        if not res.improved:
            out = NonUniformResult(False, None, res.witness)
            if out.certificate_gap(bounds) <= 0:
                raise FrError("witness does not certify infeasibility")
            return out
    raise FrError("Reduce call cap exceeded")
