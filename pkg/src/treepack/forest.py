"""Forest data structure supporting edge contraction with stable edge ids."""

from __future__ import annotations

from typing import Iterable, Iterator

from .dsu import DisjointSet


class ForestError(ValueError):
    pass


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class ContractibleForest:
    """A mutable forest whose edges keep their original ids across contraction.

    adjacency is vertex -> {neighbor: original edge id}; R maps any vertex
    that ever existed to the surviving vertex of its contracted super-vertex.
    Contracting uv with argument z removes the name z and keeps the other
    endpoint. If u and v share a neighbor w, the parallel edge with the
    larger original id is dropped (recorded in dropped_edges); this cannot
    happen when contracting intersection edges of a tree family.
    """

    __slots__ = ("adj", "ids", "R", "dropped_edges", "move_count")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int, int]]):
        self.adj: dict[int, dict[int, int]] = {int(v): {} for v in vertices}
        self.ids: dict[tuple[int, int], int] = {}
        self.R = DisjointSet()
        self.dropped_edges: list[int] = []
        self.move_count = 0  # adjacency re-key operations performed by contract
        for v in self.adj:
            self.R.make_set(v)
        for eid, u, v in edges:
            if u == v:
                raise ForestError(f"self-loop {u} (edge {eid})")
            if u not in self.adj or v not in self.adj:
                raise ForestError(f"edge {eid}: unknown endpoint")
            if v in self.adj[u]:
                raise ForestError(f"parallel edge between {u} and {v}")
            self.adj[u][v] = eid
            self.adj[v][u] = eid
            self.ids[_key(u, v)] = eid
        if not self._is_forest():
            raise ForestError("input edges contain a cycle")

    def _is_forest(self) -> bool:
        seen: set[int] = set()
        for start in self.adj:
            if start in seen:
                continue
            stack = [(start, -1)]
            seen.add(start)
            while stack:
                x, px = stack.pop()
                for y in self.adj[x]:
                    if y == px:
                        continue
                    if y in seen:
                        return False
                    seen.add(y)
                    stack.append((y, x))
        return True

    # -- queries ----------------------------------------------------------
    def vertices(self) -> list[int]:
        return list(self.adj)

    def num_vertices(self) -> int:
        return len(self.adj)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (orig id, u, v) for every current edge, each once."""
        for u, nbrs in self.adj.items():
            for v, eid in nbrs.items():
                if u < v:
                    yield (eid, u, v)

    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.adj and v in self.adj[u]

    def represented_edge(self, u: int, v: int) -> tuple[int, int]:
        """Map endpoints of a current-or-past edge to surviving vertex names."""
        return self.R.find_set(u), self.R.find_set(v)

    def orig_edge(self, u: int, v: int) -> int:
        """Original id of a current edge uv."""
        try:
            return self.ids[_key(u, v)]
        except KeyError:
            raise ForestError(f"no edge between {u} and {v}") from None

    # -- mutation ---------------------------------------------------------
    def contract(self, u: int, v: int, z: int) -> None:
        """Identify u and v; the name z in {u, v} disappears."""
        if not self.has_edge(u, v):
            raise ForestError(f"edge {u}-{v} not present")
        if z == u:
            gone, keep = u, v
        elif z == v:
            gone, keep = v, u
        else:
            raise ForestError(f"z={z} is not an endpoint of {u}-{v}")
        del self.adj[gone][keep]
        del self.adj[keep][gone]
        del self.ids[_key(u, v)]
        for w, eid in self.adj[gone].items():
            self.move_count += 1
            del self.adj[w][gone]
            del self.ids[_key(gone, w)]
            if w in self.adj[keep]:
                # parallel-edge collision: keep the smaller original id
                other = self.adj[keep][w]
                if eid < other:
                    self.dropped_edges.append(other)
                    self.adj[keep][w] = eid
                    self.adj[w][keep] = eid
                    self.ids[_key(keep, w)] = eid
                else:
                    self.dropped_edges.append(eid)
            else:
                self.adj[keep][w] = eid
                self.adj[w][keep] = eid
                self.ids[_key(keep, w)] = eid
        del self.adj[gone]
        self.R.union(gone, keep)
        self.R.change_rep(gone, keep)

    def copy(self) -> "ContractibleForest":
        """Deep copy of the current forest; contraction history is not copied."""
        return ContractibleForest(self.adj.keys(), self.edges())
