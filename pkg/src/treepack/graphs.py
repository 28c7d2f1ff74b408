"""Multigraph and spanning tree primitives, plus exact small-graph oracles."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class GraphError(ValueError):
    """Invalid graph input (bad indices, self-loops, duplicate ids, ...)."""


class DisconnectedError(GraphError):
    """Operation requires a connected graph."""


class Edge(NamedTuple):
    eid: int
    u: int
    v: int
    cost: float


class Graph:
    """Undirected multigraph with stable integer edge ids and nonnegative costs.

    Parallel edges are allowed; self-loops are not. Instances are immutable
    after construction and safe to share across threads.
    """

    __slots__ = ("n", "edges", "_by_id", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int, float]]):
        if n < 1:
            raise GraphError("vertex count must be >= 1")
        self.n = n
        es = []
        by_id: dict[int, Edge] = {}
        for eid, u, v, cost in edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u} (edge {eid})")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {eid}: endpoint outside [0, {n})")
            if cost < 0:
                raise GraphError(f"edge {eid}: negative cost {cost}")
            if eid in by_id:
                raise GraphError(f"duplicate edge id {eid}")
            e = Edge(int(eid), int(u), int(v), float(cost))
            by_id[e.eid] = e
            es.append(e)
        self.edges: tuple[Edge, ...] = tuple(es)
        self._by_id = by_id
        self._adj: list[list[tuple[int, int]]] | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid}") from None

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of (neighbor, edge id), built lazily."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for e in self.edges:
                adj[e.u].append((e.v, e.eid))
                adj[e.v].append((e.u, e.eid))
            self._adj = adj
        return self._adj

    def incident(self, v: int) -> list[int]:
        return [eid for _, eid in self.adjacency()[v]]

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        adj = self.adjacency()
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for w, _ in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Same vertex set, restricted edge set; edge ids are preserved."""
        return Graph(self.n, [self.edge(eid) for eid in sorted(set(edge_ids))])

    def total_cost(self, edge_ids: Iterable[int]) -> float:
        return sum(self.edge(eid).cost for eid in edge_ids)


class SpanningTree:
    """A set of exactly n-1 edge ids forming a spanning tree of a graph."""

    __slots__ = ("graph", "edge_ids", "_adj")

    def __init__(self, graph: Graph, edge_ids: Iterable[int], check: bool = True):
        self.graph = graph
        self.edge_ids: frozenset[int] = frozenset(edge_ids)
        if check and not is_spanning_tree(graph, self.edge_ids):
            raise GraphError("edge set is not a spanning tree")
        self._adj: dict[int, dict[int, int]] | None = None

    def adjacency(self) -> dict[int, dict[int, int]]:
        """vertex -> {neighbor: edge id} over tree edges."""
        if self._adj is None:
            adj: dict[int, dict[int, int]] = {v: {} for v in range(self.graph.n)}
            for eid in self.edge_ids:
                e = self.graph.edge(eid)
                adj[e.u][e.v] = eid
                adj[e.v][e.u] = eid
            self._adj = adj
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def degrees(self) -> list[int]:
        adj = self.adjacency()
        return [len(adj[v]) for v in range(self.graph.n)]

    def max_degree(self) -> int:
        return max(self.degrees())

    def path_edges(self, u: int, v: int) -> list[int]:
        """Edge ids along the unique tree path from u to v."""
        adj = self.adjacency()
        parent: dict[int, tuple[int, int]] = {u: (-1, -1)}
        q = deque([u])
        while q:
            x = q.popleft()
            if x == v:
                break
            for y, eid in adj[x].items():
                if y not in parent:
                    parent[y] = (x, eid)
                    q.append(y)
        if v not in parent:
            raise GraphError(f"no tree path between {u} and {v}")
        path = []
        x = v
        while x != u:
            px, eid = parent[x]
            path.append(eid)
            x = px
        path.reverse()
        return path

    def __contains__(self, eid: int) -> bool:
        return eid in self.edge_ids

    def __iter__(self) -> Iterator[int]:
        return iter(self.edge_ids)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpanningTree) and self.edge_ids == other.edge_ids

    def __hash__(self) -> int:
        return hash(self.edge_ids)


class FractionalEdgeVector:
    """Map edge id -> value in [0, 1]; a candidate point of the tree polytope."""

    __slots__ = ("values",)

    def __init__(self, values: Mapping[int, float]):
        vals = {}
        for eid, x in values.items():
            if not (0.0 <= x <= 1.0 + 1e-12):
                raise ValueError(f"entry for edge {eid} outside [0, 1]: {x}")
            vals[int(eid)] = min(float(x), 1.0)
        self.values: dict[int, float] = vals

    def __getitem__(self, eid: int) -> float:
        return self.values.get(eid, 0.0)

    def get(self, eid: int, default: float = 0.0) -> float:
        return self.values.get(eid, default)

    def support(self) -> list[int]:
        return sorted(eid for eid, x in self.values.items() if x > 0.0)

    def items(self):
        return self.values.items()

    def total(self) -> float:
        return sum(self.values.values())


class _UnionFind:
    __slots__ = ("parent", "rank", "sets")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.sets = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        self.parent[y] = x
        if self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.sets -= 1
        return True


def is_spanning_tree(g: Graph, edge_ids: Iterable[int]) -> bool:
    """True iff the ids form exactly n-1 edges connecting all vertices."""
    ids = set(edge_ids)
    for eid in ids:
        g.edge(eid)  # raises on unknown id
    if len(ids) != g.n - 1:
        return False
    uf = _UnionFind(g.n)
    for eid in ids:
        e = g.edge(eid)
        if not uf.union(e.u, e.v):
            return False
    return uf.sets == 1


def mst(g: Graph, lengths: Mapping[int, float]) -> SpanningTree:
    """Minimum spanning tree under the given lengths, ties broken by edge id."""
    order = sorted(g.edges, key=lambda e: (lengths[e.eid], e.eid))
    uf = _UnionFind(g.n)
    chosen = []
    for e in order:
        if uf.union(e.u, e.v):
            chosen.append(e.eid)
            if len(chosen) == g.n - 1:
                break
    if len(chosen) != g.n - 1:
        raise DisconnectedError("graph is not connected")
    return SpanningTree(g, chosen, check=False)


def enumerate_spanning_trees(g: Graph, limit: int = 1_000_000) -> Iterator[frozenset[int]]:
    """Yield every spanning tree edge set exactly once.

    Backtracks over edges in id order with a connectivity prune, so intended
    for small graphs (n <= 10 or so). Raises if more than `limit` trees exist.
    """
    if not g.is_connected():
        raise DisconnectedError("graph is not connected")
    edges = sorted(g.edges, key=lambda e: e.eid)
    m, n = len(edges), g.n

    def still_connectable(idx: int, uf: _UnionFind) -> bool:
        # Can the remaining edges edges[idx:] connect the current forest?
        probe = _UnionFind(n)
        probe.parent = [uf.find(v) for v in range(n)]
        probe.sets = uf.sets
        for e in edges[idx:]:
            probe.union(e.u, e.v)
            if probe.sets == 1:
                return True
        return probe.sets == 1

    count = 0
    chosen: list[int] = []

    def rec(idx: int, uf: _UnionFind):
        nonlocal count
        if uf.sets == 1:
            count += 1
            if count > limit:
                raise GraphError(f"spanning tree count exceeds limit {limit}")
            yield frozenset(chosen)
            return
        if idx == m or m - idx < uf.sets - 1:
            return
        e = edges[idx]
        if uf.find(e.u) != uf.find(e.v):
            # include e
            sub = _UnionFind(n)
            sub.parent = [uf.find(v) for v in range(n)]
            sub.sets = uf.sets
            sub.union(e.u, e.v)
            chosen.append(e.eid)
            yield from rec(idx + 1, sub)
            chosen.pop()
        # exclude e, if the rest can still connect
        if still_connectable(idx + 1, uf):
            yield from rec(idx + 1, uf)

    yield from rec(0, _UnionFind(n))


def spanning_tree_count(g: Graph) -> int:
    """Number of spanning trees via the matrix-tree determinant (exact)."""
    n = g.n
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        lap[e.u][e.u] += 1
        lap[e.v][e.v] += 1
        lap[e.u][e.v] -= 1
        lap[e.v][e.u] -= 1
    # determinant of the (n-1)x(n-1) principal minor, exact over Fractions
    a = [[Fraction(lap[i][j]) for j in range(n - 1)] for i in range(n - 1)]
    det = Fraction(1)
    for col in range(n - 1):
        pivot = next((r for r in range(col, n - 1) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n - 1):
            factor = a[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n - 1):
                a[r][c] -= factor * a[col][c]
    assert det.denominator == 1
    return int(det)
