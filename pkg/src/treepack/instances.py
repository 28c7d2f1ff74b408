"""Packing constraint systems, instance file I/O, and instance generators.

Instance text format (line oriented, '#' starts a comment):

    p st <n> <m> <k>
    e <edge_id> <u> <v> <cost>
    r <row> <b_i>
    a <row> <edge_id> <coeff>
    deg <v> <B_v>          # shorthand: expands to a row over delta(v)
"""

from __future__ import annotations

import json
import random
from typing import Iterable, Sequence

from .graphs import Graph, GraphError, FractionalEdgeVector


class InstanceError(ValueError):
    """Malformed instance file or constraint data."""


class ConstraintSystem:
    """Sparse packing matrix A in [0,1]^{k x m} with bounds b in [1, inf)^k.

    Rows are lists of (edge_id, coeff); a per-edge column index is derived.
    """

    __slots__ = ("k", "rows", "b", "columns")

    def __init__(self, rows: Sequence[Sequence[tuple[int, float]]],
                 b: Sequence[float], check_bounds: bool = True):
        if len(rows) != len(b):
            raise InstanceError("row count does not match bound count")
        self.k = len(rows)
        self.rows: list[list[tuple[int, float]]] = []
        self.b: list[float] = []
        self.columns: dict[int, list[tuple[int, float]]] = {}
        for i, (row, bi) in enumerate(zip(rows, b)):
            bi = float(bi)
            if check_bounds and bi < 1.0:
                raise InstanceError(f"row {i}: bound {bi} < 1")
            if bi <= 0.0:
                raise InstanceError(f"row {i}: bound {bi} <= 0")
            clean = []
            seen = set()
            for eid, a in row:
                a = float(a)
                if not (0.0 <= a <= 1.0):
                    raise InstanceError(f"row {i}: coefficient out of range: {a}")
                if eid in seen:
                    raise InstanceError(f"row {i}: duplicate edge {eid}")
                seen.add(eid)
                if a == 0.0:
                    continue
                clean.append((int(eid), a))
                self.columns.setdefault(int(eid), []).append((i, a))
            self.rows.append(clean)
            self.b.append(bi)

    @property
    def nonzeros(self) -> int:
        return sum(len(r) for r in self.rows)

    def column(self, eid: int) -> list[tuple[int, float]]:
        return self.columns.get(eid, [])

    def row_load(self, i: int, edge_ids: Iterable[int]) -> float:
        """(A 1_S)_i for an edge set S."""
        s = set(edge_ids)
        return sum(a for eid, a in self.rows[i] if eid in s)

    def violations(self, marginal: dict[int, float]) -> list[float]:
        """Per-row multiplicative slack (A y)_i / b_i for a fractional y."""
        out = []
        for row, bi in zip(self.rows, self.b):
            load = sum(a * marginal.get(eid, 0.0) for eid, a in row)
            out.append(load / bi)
        return out

    def max_violation(self, marginal: dict[int, float]) -> float:
        return max(self.violations(marginal), default=0.0)

    def restricted(self, edge_ids: Iterable[int], scale_b: float = 1.0) -> "ConstraintSystem":
        """Keep only coefficients on the given edges; optionally scale bounds up."""
        keep = set(edge_ids)
        rows = [[(eid, a) for eid, a in row if eid in keep] for row in self.rows]
        return ConstraintSystem(rows, [bi * scale_b for bi in self.b])


def degree_constraints(g: Graph, bounds: Sequence[float] | float) -> ConstraintSystem:
    """One row per vertex with coefficient 1 on each incident edge."""
    if isinstance(bounds, (int, float)):
        bounds = [float(bounds)] * g.n
    if len(bounds) != g.n:
        raise InstanceError("need one degree bound per vertex")
    rows = [[(eid, 1.0) for eid in g.incident(v)] for v in range(g.n)]
    return ConstraintSystem(rows, list(bounds))


def cut_constraints(g: Graph, cuts: Sequence[set[int]], bounds: Sequence[float]) -> ConstraintSystem:
    """One row per cut delta(S_i) with coefficient 1 on crossing edges."""
    rows = []
    for s in cuts:
        row = [(e.eid, 1.0) for e in g.edges if (e.u in s) != (e.v in s)]
        rows.append(row)
    return ConstraintSystem(rows, list(bounds))


# ---------------------------------------------------------------------------
# file format

def _parse_error(lineno: int, msg: str) -> InstanceError:
    return InstanceError(f"line {lineno}: {msg}")


def parse_instance(text: str) -> tuple[Graph, ConstraintSystem]:
    n = m = k = None
    edges: dict[int, tuple[int, int, int, float]] = {}
    bounds: dict[int, float] = {}
    entries: dict[int, list[tuple[int, float]]] = {}
    deg_rows: list[tuple[int, float, int]] = []  # (vertex, bound, lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "p":
                if parts[1] != "st" or len(parts) != 5:
                    raise _parse_error(lineno, "expected 'p st <n> <m> <k>'")
                n, m, k = int(parts[2]), int(parts[3]), int(parts[4])
            elif tag == "e":
                eid, u, v = int(parts[1]), int(parts[2]), int(parts[3])
                cost = float(parts[4])
                if eid in edges:
                    raise _parse_error(lineno, f"duplicate edge id {eid}")
                edges[eid] = (eid, u, v, cost)
            elif tag == "r":
                row, bi = int(parts[1]), float(parts[2])
                if bi < 1.0:
                    raise _parse_error(lineno, f"bound {bi} < 1")
                bounds[row] = bi
            elif tag == "a":
                row, eid, coeff = int(parts[1]), int(parts[2]), float(parts[3])
                if not (0.0 <= coeff <= 1.0):
                    raise _parse_error(lineno, "coefficient out of range")
                entries.setdefault(row, []).append((eid, coeff))
            elif tag == "deg":
                v, bv = int(parts[1]), float(parts[2])
                if bv < 1.0:
                    raise _parse_error(lineno, f"bound {bv} < 1")
                deg_rows.append((v, bv, lineno))
            else:
                raise _parse_error(lineno, f"unknown record '{tag}'")
        except InstanceError:
            raise
        except (IndexError, ValueError):
            raise _parse_error(lineno, f"malformed record: {raw.strip()!r}") from None

    if n is None:
        raise InstanceError("missing 'p st' header")
    try:
        g = Graph(n, sorted(edges.values()))
    except GraphError as exc:
        raise InstanceError(str(exc)) from None
    if m is not None and g.m != m:
        raise InstanceError(f"header declares m={m} but found {g.m} edges")

    next_row = max(list(bounds) + list(entries), default=-1) + 1
    for v, bv, lineno in deg_rows:
        if not (0 <= v < g.n):
            raise _parse_error(lineno, f"unknown vertex {v}")
        bounds[next_row] = bv
        entries[next_row] = [(eid, 1.0) for eid in g.incident(v)]
        next_row += 1

    row_ids = sorted(set(bounds) | set(entries))
    if row_ids and row_ids != list(range(len(row_ids))):
        raise InstanceError(f"row indices are not dense: {row_ids}")
    for i in row_ids:
        if i not in bounds:
            raise InstanceError(f"row {i} has coefficients but no 'r' bound")
        for eid, _ in entries.get(i, []):
            if not g.has_edge(eid):
                raise InstanceError(f"row {i} references unknown edge {eid}")
    cs = ConstraintSystem([entries.get(i, []) for i in row_ids],
                          [bounds[i] for i in row_ids])
    if k is not None and cs.k != k:
        raise InstanceError(f"header declares k={k} but found {cs.k} rows")
    return g, cs


def load_instance(path: str) -> tuple[Graph, ConstraintSystem]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(g: Graph, cs: ConstraintSystem) -> str:
    """Canonical text form: sorted records, no degree shorthand."""
    lines = [f"p st {g.n} {g.m} {cs.k}"]
    for e in sorted(g.edges, key=lambda e: e.eid):
        lines.append(f"e {e.eid} {e.u} {e.v} {e.cost:g}")
    for i, bi in enumerate(cs.b):
        lines.append(f"r {i} {bi:g}")
    for i, row in enumerate(cs.rows):
        for eid, a in sorted(row):
            lines.append(f"a {i} {eid} {a:g}")
    return "\n".join(lines) + "\n"


def save_instance(path: str, g: Graph, cs: ConstraintSystem) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(g, cs))


def instance_to_json(g: Graph, cs: ConstraintSystem) -> str:
    doc = {
        "schema": 1,
        "n": g.n,
        "m": g.m,
        "k": cs.k,
        "edges": [[e.eid, e.u, e.v, e.cost] for e in g.edges],
        "bounds": list(cs.b),
        "entries": [[i, eid, a] for i, row in enumerate(cs.rows) for eid, a in row],
    }
    return json.dumps(doc, sort_keys=True)


def instance_from_json(text: str) -> tuple[Graph, ConstraintSystem]:
    doc = json.loads(text)
    g = Graph(doc["n"], [tuple(e) for e in doc["edges"]])
    rows: list[list[tuple[int, float]]] = [[] for _ in doc["bounds"]]
    for i, eid, a in doc["entries"]:
        rows[i].append((eid, a))
    return g, ConstraintSystem(rows, doc["bounds"])


# ---------------------------------------------------------------------------
# generators

def generate_instance(kind: str, params: dict, seed: int = 0) -> tuple[Graph, ConstraintSystem]:
    """Deterministic instance generator.

    kinds:
      random_gnm: n, m, b (uniform degree bound), max_cost (default 0)
      complete:   n, b, max_cost
      star:       n, b_center, b_leaf (default n-1)
      cycle:      n, b (default 2)
      laminar_cuts: n, m, k (nested cuts), b, max_cost
    """
    rng = random.Random(seed)
    if kind == "random_gnm":
        n, m = int(params["n"]), int(params["m"])
        g = _random_connected(n, m, rng, float(params.get("max_cost", 0)))
        return g, degree_constraints(g, float(params.get("b", 2)))
    if kind == "complete":
        n = int(params["n"])
        max_cost = float(params.get("max_cost", 0))
        edges = []
        eid = 0
        for u in range(n):
            for v in range(u + 1, n):
                edges.append((eid, u, v, rng.randint(0, int(max_cost)) if max_cost else 0.0))
                eid += 1
        g = Graph(n, edges)
        return g, degree_constraints(g, float(params.get("b", 2)))
    if kind == "star":
        n = int(params["n"])
        edges = [(i, 0, i + 1, 0.0) for i in range(n - 1)]
        g = Graph(n, edges)
        bounds = [float(params.get("b_leaf", n - 1))] * n
        bounds[0] = float(params.get("b_center", n - 1))
        return g, degree_constraints(g, bounds)
    if kind == "cycle":
        n = int(params["n"])
        edges = [(i, i, (i + 1) % n, 0.0) for i in range(n)]
        g = Graph(n, edges)
        return g, degree_constraints(g, float(params.get("b", 2)))
    if kind == "laminar_cuts":
        n, m = int(params["n"]), int(params["m"])
        g = _random_connected(n, m, rng, float(params.get("max_cost", 0)))
        k = int(params.get("k", 3))
        if not (1 <= k < n):
            raise InstanceError(f"invalid cut count {k} for n={n}")
        sizes = sorted(rng.sample(range(1, n), k), reverse=True)
        cuts = [set(range(s)) for s in sizes]
        return g, cut_constraints(g, cuts, [float(params.get("b", 2))] * k)
    raise InstanceError(f"unknown instance kind {kind!r}")


def _random_connected(n: int, m: int, rng: random.Random, max_cost: float = 0) -> Graph:
    """Random simple connected graph: random spanning tree plus random extras."""
    if m < n - 1:
        raise InstanceError(f"m={m} too small to connect n={n} vertices")
    if m > n * (n - 1) // 2:
        raise InstanceError(f"m={m} exceeds simple-graph maximum for n={n}")
    pairs = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    while len(pairs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    edges = [(eid, u, v, float(rng.randint(0, int(max_cost))) if max_cost else 0.0)
             for eid, (u, v) in enumerate(sorted(pairs))]
    return Graph(n, edges)


def uniform_fractional_tree(g: Graph) -> FractionalEdgeVector:
    """x_e = (n-1)/m for all e; in ST(G) for edge-transitive graphs."""
    x = (g.n - 1) / g.m
    return FractionalEdgeVector({e.eid: x for e in g.edges})
