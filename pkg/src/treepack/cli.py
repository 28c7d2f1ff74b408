"""Command-line front end.

Every verb reads an instance file (format per the instances module), runs one
pipeline stage, and prints a report. Reports are JSON by default, stripped of
wall-clock fields so identical (instance, flags, seed) runs are byte
identical; `bench` is the exception and includes timings.

Exit codes: 0 success, 1 infeasible or certified negative, 2 usage error,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

from .decompose import DecompositionError, ImplicitDecomposition, implicit_decompose
from .fr import FrError, fr_min_degree
from .graphs import (DisconnectedError, FractionalEdgeVector, Graph, GraphError,
                     enumerate_spanning_trees, is_spanning_tree,
                     spanning_tree_count)
from .instances import (InstanceError, format_instance, generate_instance,
                        load_instance)
from .mwu import SolverError, solve_feasibility, solve_mincost
from .pipeline import (InfeasibleError, PipelineError, bdst_sparse_pipeline,
                       crossing_pipeline, estimate_min_degree)
from .sparsify import sparsify, verify_sparsified
from .swapround import SwapRoundError, fast_swap

SCHEMA = 1

_VOLATILE_KEYS = ("wall_time",)


class _Infeasible(Exception):
    def __init__(self, report):
        self.report = report


def _scrub(obj):
    """Drop timing fields so identical runs emit identical bytes."""
    if isinstance(obj, dict):
        return {k: _scrub(v) for k, v in obj.items() if k not in _VOLATILE_KEYS}
    if isinstance(obj, (list, tuple)):
        return [_scrub(v) for v in obj]
    return obj


def _emit(report: dict, fmt: str, scrub: bool = True) -> None:
    report = dict(report)
    report["schema"] = SCHEMA
    if scrub:
        report = _scrub(report)
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for k in sorted(report):
            print(f"{k}: {report[k]}")


def _check_tree(g: Graph, edge_ids) -> list[int]:
    if not is_spanning_tree(g, edge_ids):
        raise SwapRoundError("emitted edge set failed spanning tree re-check")
    return sorted(edge_ids)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treepack")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("instance", help="instance file path")
        sp.add_argument("--eps", type=float, default=0.1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=1)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--merge-backend", choices=["naive", "fast"],
                        default="naive")
        sp.add_argument("--dynmst-backend", choices=["naive", "fast"],
                        default="naive")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--limit", type=int, default=1_000_000,
                        help="enumeration cap")
        return sp

    common(sub.add_parser("solve-lp"))
    common(sub.add_parser("solve-mincost"))
    sp = common(sub.add_parser("decompose"))
    sp.add_argument("--point", help="JSON file mapping edge id -> value; "
                    "defaults to the LP solution")
    sp = common(sub.add_parser("round"))
    sp.add_argument("--decomp", help="decomposition file to round instead of "
                    "solving the instance LP")
    common(sub.add_parser("sparsify"))
    common(sub.add_parser("min-degree"))
    common(sub.add_parser("estimate-degree"))
    common(sub.add_parser("bdst"))
    common(sub.add_parser("crossing"))
    sp = common(sub.add_parser("gen"), instance=False)
    sp.add_argument("--kind", required=True)
    sp.add_argument("--param", action="append", default=[],
                    metavar="KEY=VALUE")
    common(sub.add_parser("oracle"))
    common(sub.add_parser("bench"))
    return p


def _cmd_solve_lp(args) -> dict:
    g, cs = load_instance(args.instance)
    res = solve_feasibility(g, cs, args.eps, args.seed)
    if not res.feasible:
        raise _Infeasible({"feasible": False, "value": res.value,
                           "k": cs.k, "m": g.m, "eps": args.eps,
                           "seed": args.seed})
    return {
        "feasible": True,
        "value": res.value,
        "max_violation": res.report["max_violation"],
        "marginals": {str(eid): v for eid, v in sorted(res.marginals.items())},
        "iterations": res.report["iterations"],
        "tree_swaps": res.report["tree_swaps"],
        "dynmst_backend": "naive",
    }


def _cmd_solve_mincost(args) -> dict:
    g, cs = load_instance(args.instance)
    costs = {e.eid: e.cost for e in g.edges}
    res = solve_mincost(g, cs, costs, args.eps, args.seed)
    if not res.feasible:
        raise _Infeasible({"feasible": False,
                           "reason": res.report.get("reason", "infeasible")})
    return {
        "feasible": True,
        "marginal_cost": res.report["marginal_cost"],
        "cost_bound": res.report["cost_bound"],
        "max_violation": res.report["max_violation"],
        "probes": res.report["probes"],
    }


def _cmd_decompose(args) -> dict:
    g, cs = load_instance(args.instance)
    if args.point:
        with open(args.point) as fh:
            raw = json.load(fh)
        x = FractionalEdgeVector({int(k): float(v) for k, v in raw.items()})
    else:
        res = solve_feasibility(g, cs, args.eps, args.seed)
        if not res.feasible:
            raise _Infeasible({"feasible": False, "value": res.value})
        x = res.marginals
    dres = implicit_decompose(g, x, args.eps, args.seed)
    if not dres.in_polytope:
        raise _Infeasible({"in_polytope": False,
                           "reason": dres.report.get("reason")})
    d = dres.decomposition
    return {"in_polytope": True, "h": d.h, "gamma": d.gamma,
            "decomposition": d.to_text(),
            "max_overshoot": dres.report["max_overshoot"]}


def _cmd_round(args) -> dict:
    g, cs = load_instance(args.instance)
    if args.decomp:
        with open(args.decomp) as fh:
            d = ImplicitDecomposition.from_text(fh.read())
    else:
        res = solve_feasibility(g, cs, args.eps, args.seed)
        if not res.feasible:
            raise _Infeasible({"feasible": False, "value": res.value})
        d = res.decomposition
    counts: dict[int, int] = {}
    trees = []
    for i in range(args.trials):
        rng = random.Random(args.seed * 1000003 + i)
        t = fast_swap(g, d, rng)
        ids = _check_tree(g, t.edge_ids)
        trees.append(ids)
        for eid in ids:
            counts[eid] = counts.get(eid, 0) + 1
    marg = {str(eid): c / args.trials for eid, c in sorted(counts.items())}
    out = {"trials": args.trials, "empirical_marginals": marg,
           "merge_backend": "naive"}
    if args.trials <= 10:
        out["trees"] = trees
    else:
        out["first_tree"] = trees[0]
    return out


def _cmd_sparsify(args) -> dict:
    g, cs = load_instance(args.instance)
    res = solve_feasibility(g, cs, args.eps, args.seed)
    if not res.feasible:
        raise _Infeasible({"feasible": False, "value": res.value})
    g_sub, report = sparsify(g, res.marginals, cs, args.eps, args.seed)
    verify = verify_sparsified(g_sub, cs, args.eps, args.seed)
    out = report.to_json_dict()
    out["verify"] = verify
    return out


def _cmd_min_degree(args) -> dict:
    g, _ = load_instance(args.instance)
    tree, witness = fr_min_degree(g)
    return {
        "tree": _check_tree(g, tree.edge_ids),
        "max_degree": tree.max_degree(),
        "witness": sorted(witness.blocked),
        "witness_components": witness.components,
        "lower_bound": witness.lower_bound(),
    }


def _cmd_estimate_degree(args) -> dict:
    g, _ = load_instance(args.instance)
    b = estimate_min_degree(g, args.eps, args.seed)
    return {"B": b, "upper_form": f"ceil((1+c*{args.eps})*{b})+1"}


def _cmd_bdst(args) -> dict:
    g, _ = load_instance(args.instance)
    res = bdst_sparse_pipeline(g, None, args.eps, args.seed)
    out = dict(res.report)
    out["tree"] = _check_tree(g, res.tree.edge_ids)
    out["max_degree"] = res.max_degree
    return out


def _cmd_crossing(args) -> dict:
    g, cs = load_instance(args.instance)
    costs = {e.eid: e.cost for e in g.edges}
    use_costs = any(c > 0 for c in costs.values())
    res = crossing_pipeline(g, cs, costs if use_costs else None,
                            args.eps, args.seed,
                            args.trials if args.trials > 1 else None)
    out = dict(res.stats)
    out["tree"] = _check_tree(g, res.tree.edge_ids)
    return out


def _cmd_gen(args) -> dict:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise InstanceError(f"bad --param {item!r}, expected KEY=VALUE")
        key, val = item.split("=", 1)
        try:
            params[key] = int(val)
        except ValueError:
            params[key] = float(val)
    g, cs = generate_instance(args.kind, params, args.seed)
    return {"instance": format_instance(g, cs)}


def _cmd_oracle(args) -> dict:
    g, cs = load_instance(args.instance)
    kirchhoff = spanning_tree_count(g)
    count = 0
    best_degree = None
    for ids in enumerate_spanning_trees(g, limit=args.limit):
        count += 1
        deg = max(sum(1 for eid in ids
                      for x in (g.edge(eid).u, g.edge(eid).v) if x == v)
                  for v in range(g.n))
        if best_degree is None or deg < best_degree:
            best_degree = deg
    return {
        "kirchhoff_count": kirchhoff,
        "enumerated_count": count,
        "counts_agree": kirchhoff == count,
        "min_max_degree": best_degree,
        "k": cs.k,
    }


def _cmd_bench(args) -> dict:
    import time

    g, cs = load_instance(args.instance)
    t0 = time.perf_counter()
    res = solve_feasibility(g, cs, args.eps, args.seed)
    elapsed = time.perf_counter() - t0
    return {"feasible": res.feasible, "value": res.value,
            "iterations": res.report["iterations"],
            "wall_time_s": elapsed, "n": g.n, "m": g.m, "k": cs.k}


_COMMANDS = {
    "solve-lp": _cmd_solve_lp,
    "solve-mincost": _cmd_solve_mincost,
    "decompose": _cmd_decompose,
    "round": _cmd_round,
    "sparsify": _cmd_sparsify,
    "min-degree": _cmd_min_degree,
    "estimate-degree": _cmd_estimate_degree,
    "bdst": _cmd_bdst,
    "crossing": _cmd_crossing,
    "gen": _cmd_gen,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if hasattr(args, "eps") and not (0.0 < args.eps < 1.0):
        print("error: --eps must be in (0,1)", file=sys.stderr)
        return 2
    if hasattr(args, "trials") and args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return 2
    try:
        report = _COMMANDS[args.verb](args)
    except _Infeasible as exc:
        _emit(exc.report, getattr(args, "format", "json"))
        return 1
    except InfeasibleError as exc:
        _emit({"feasible": False, "reason": str(exc)},
              getattr(args, "format", "json"))
        return 1
    except (InstanceError, GraphError, DecompositionError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, SwapRoundError, FrError, PipelineError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    _emit(report, getattr(args, "format", "json"),
          scrub=args.verb != "bench")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
