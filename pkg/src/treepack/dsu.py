"""Disjoint-set union with a representative override operation."""

from __future__ import annotations


class DisjointSet:
    """Union-find with path compression, union by rank, and change_rep.

    change_rep(u, v) makes v the reported representative of its set without
    altering membership, which is what edge contraction needs to keep the
    surviving vertex name stable.
    """

    __slots__ = ("parent", "rank", "rep")

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.rank: dict[int, int] = {}
        # root -> element reported as representative
        self.rep: dict[int, int] = {}

    def make_set(self, u: int) -> None:
        if u in self.parent:
            raise ValueError(f"element {u} already present")
        self.parent[u] = u
        self.rank[u] = 0
        self.rep[u] = u

    def __contains__(self, u: int) -> bool:
        return u in self.parent

    def _root(self, u: int) -> int:
        parent = self.parent
        root = u
        while parent[root] != root:
            root = parent[root]
        while parent[u] != root:
            parent[u], u = root, parent[u]
        return root

    def find_set(self, u: int) -> int:
        if u not in self.parent:
            raise KeyError(f"unknown element {u}")
        return self.rep[self._root(u)]

    def union(self, u: int, v: int) -> None:
        ru, rv = self._root(u), self._root(v)
        if ru == rv:
            return
        if self.rank[ru] < self.rank[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        if self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1
        del self.rep[rv]

    def change_rep(self, u: int, v: int) -> None:
        ru, rv = self._root(u), self._root(v)
        if ru != rv:
            raise ValueError(f"{u} and {v} are in different sets")
        self.rep[ru] = v
