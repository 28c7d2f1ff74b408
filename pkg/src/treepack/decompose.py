"""Implicit convex decomposition of fractional points into spanning trees.

A decomposition is stored as a base tree plus a log of edge-set differences
(E_i, E_i') with coefficients delta_i. Replaying the log materializes each
tree; streaming it computes marginals in O(n + gamma) where gamma is the
total diff size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .graphs import FractionalEdgeVector, Graph, GraphError, is_spanning_tree

# gamma must stay below GAMMA_C * m * ln(m) / eps^2
GAMMA_C = 32.0

MIN_SUPPORT_VALUE = 1e-6


class DecompositionError(ValueError):
    """Malformed decomposition (bad diff log, serialization, or replay)."""


@dataclass(frozen=True)
class ImplicitDecomposition:
    """Convex combination of spanning trees, base plus difference log.

    deltas has one entry per tree (h of them, summing to 1); diffs has h-1
    entries, diffs[j] = (E, E') turning tree j into tree j+1 by removing E
    and adding E'.
    """

    n: int
    base: tuple[int, ...]
    diffs: tuple[tuple[frozenset[int], frozenset[int]], ...]
    deltas: tuple[float, ...]

    def __post_init__(self):
        if len(self.deltas) != len(self.diffs) + 1:
            raise DecompositionError("need exactly one delta per tree")
        if any(d <= 0 for d in self.deltas):
            raise DecompositionError("deltas must be positive")
        if abs(sum(self.deltas) - 1.0) > 1e-9:
            raise DecompositionError("deltas must sum to 1")
        for i, (rem, add) in enumerate(self.diffs):
            if rem & add:
                raise DecompositionError(f"diff {i}: E and E' intersect")
            if len(rem) != len(add):
                raise DecompositionError(f"diff {i}: |E| != |E'|")

    @property
    def h(self) -> int:
        """Number of trees in the combination."""
        return len(self.deltas)

    @property
    def gamma(self) -> int:
        """Total diff size, sum of |E_i| + |E_i'|."""
        return sum(len(rem) + len(add) for rem, add in self.diffs)

    def trees(self) -> Iterator[frozenset[int]]:
        """Materialize each tree's edge-id set by replaying the log."""
        cur = set(self.base)
        yield frozenset(cur)
        for i, (rem, add) in enumerate(self.diffs):
            if not rem <= cur or (add & cur):
                raise DecompositionError(f"diff {i} does not apply to tree {i}")
            cur -= rem
            cur |= add
            yield frozenset(cur)

    def tree(self, j: int) -> frozenset[int]:
        for idx, t in enumerate(self.trees()):
            if idx == j:
                return t
        raise IndexError(j)

    def marginals(self) -> dict[int, float]:
        """z = sum_i delta_i * 1_{T_i}, streamed over the diff log."""
        pref = [0.0]
        for d in self.deltas:
            pref.append(pref[-1] + d)
        acc: dict[int, float] = {}
        entered = {eid: 0 for eid in self.base}
        for j, (rem, add) in enumerate(self.diffs):
            for eid in rem:
                if eid not in entered:
                    raise DecompositionError(f"diff {j} removes absent edge {eid}")
                acc[eid] = acc.get(eid, 0.0) + pref[j + 1] - pref[entered.pop(eid)]
            for eid in add:
                if eid in entered:
                    raise DecompositionError(f"diff {j} adds present edge {eid}")
                entered[eid] = j + 1
        for eid, start in entered.items():
            acc[eid] = acc.get(eid, 0.0) + pref[-1] - pref[start]
        return acc

    def validate(self, g: Graph) -> None:
        """Check every replayed tree spans g; raise with the failing index."""
        for i, t in enumerate(self.trees()):
            if not is_spanning_tree(g, t):
                raise DecompositionError(f"replayed tree {i} is not a spanning tree")

    # -- serialization -----------------------------------------------------
    def to_text(self) -> str:
        lines = [f"d {self.n} {self.h}"]
        ids = " ".join(str(e) for e in sorted(self.base))
        lines.append(f"t {self.deltas[0]!r} | {ids}")
        for (rem, add), delta in zip(self.diffs, self.deltas[1:]):
            rs = " ".join(str(e) for e in sorted(rem))
            as_ = " ".join(str(e) for e in sorted(add))
            lines.append(f"s {delta!r} | {rs} | {as_}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ImplicitDecomposition":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("d "):
            raise DecompositionError("missing 'd <n> <h>' header")
        try:
            _, n_s, h_s = lines[0].split()
            n, h = int(n_s), int(h_s)
        except ValueError:
            raise DecompositionError(f"bad header: {lines[0]!r}") from None
        if len(lines) != h + 1:
            raise DecompositionError(f"expected {h} tree lines, got {len(lines) - 1}")
        if not lines[1].startswith("t "):
            raise DecompositionError("second line must be 't <delta> | <base ids>'")

        def ids_of(part: str) -> frozenset[int]:
            return frozenset(int(tok) for tok in part.split())

        try:
            head, base_part = lines[1][2:].split("|")
            deltas = [float(head)]
            base = tuple(sorted(ids_of(base_part)))
            diffs = []
            for ln in lines[2:]:
                if not ln.startswith("s "):
                    raise DecompositionError(f"expected 's' line, got {ln!r}")
                head, rem_part, add_part = ln[2:].split("|")
                deltas.append(float(head))
                diffs.append((ids_of(rem_part), ids_of(add_part)))
        except ValueError as exc:
            raise DecompositionError(f"malformed decomposition line: {exc}") from None
        return cls(n=n, base=base, diffs=tuple(diffs), deltas=tuple(deltas))


@dataclass
class DecomposeResult:
    in_polytope: bool
    decomposition: Optional[ImplicitDecomposition]
    report: dict = field(default_factory=dict)


def implicit_decompose(g: Graph, x: FractionalEdgeVector, eps: float,
                       seed: int = 0) -> DecomposeResult:
    """Decompose x into an implicit convex combination z of spanning trees
    with z <= (1+O(eps))x, or certify (whp) that x is not in the polytope.

    Runs the MWU packing with one capacity row per support edge: coefficient
    1, bound x_e. Support entries below MIN_SUPPORT_VALUE are rejected.
    """
    import math
    import random

    from .mwu import SLACK_C, _run_packing

    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0,1), got {eps}")
    support = x.support()
    min_x = min((x[eid] for eid in support), default=1.0)
    if min_x < MIN_SUPPORT_VALUE:
        raise ValueError(f"support value {min_x} below {MIN_SUPPORT_VALUE}")
    sub = g.subgraph(support)
    report = {"eps": eps, "seed": seed, "min_x": min_x, "support": len(support)}
    if not sub.is_connected():
        report["reason"] = "support is disconnected"
        return DecomposeResult(False, None, report)

    rows = [[(eid, 1.0)] for eid in support]
    bounds = [x[eid] for eid in support]
    res = _run_packing(sub, rows, bounds, eps, random.Random(seed))
    report.update(res.report)
    if not res.feasible:
        report["reason"] = "packing value below 1 - c*eps"
        return DecomposeResult(False, None, report)

    d = res.decomposition
    m = max(sub.m, 2)
    cap = GAMMA_C * m * math.log(m) / eps ** 2
    if d.gamma > cap:
        raise GraphError(f"decomposition size {d.gamma} exceeds bound {cap:.0f}")
    z = d.marginals()
    overshoot = max((z[eid] / x[eid] for eid in z), default=1.0)
    report["gamma"] = d.gamma
    report["h"] = d.h
    report["max_overshoot"] = overshoot
    return DecomposeResult(True, d, report)


def marginals(d: ImplicitDecomposition) -> FractionalEdgeVector:
    """Marginal vector of a decomposition as a FractionalEdgeVector."""
    vals = d.marginals()
    capped = {eid: min(v, 1.0) for eid, v in vals.items()}
    return FractionalEdgeVector(capped)
