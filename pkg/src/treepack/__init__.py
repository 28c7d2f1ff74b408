"""Approximation algorithms for bounded-degree and crossing spanning trees.

Core pieces: a randomized multiplicative-weights LP solver over the spanning
tree polytope, implicit convex decompositions, randomized swap rounding,
LP-guided sparsification, and local search for low-degree trees.
"""

from .graphs import (
    DisconnectedError,
    Edge,
    FractionalEdgeVector,
    Graph,
    GraphError,
    SpanningTree,
    enumerate_spanning_trees,
    is_spanning_tree,
    mst,
    spanning_tree_count,
)
from .instances import (
    ConstraintSystem,
    InstanceError,
    cut_constraints,
    degree_constraints,
    format_instance,
    generate_instance,
    instance_from_json,
    instance_to_json,
    load_instance,
    parse_instance,
    save_instance,
    uniform_fractional_tree,
)
from .dsu import DisjointSet
from .forest import ContractibleForest, ForestError
from .decompose import (
    DecomposeResult,
    DecompositionError,
    ImplicitDecomposition,
    implicit_decompose,
    marginals,
)
from .mwu import (
    NaiveDynamicMst,
    RowLoadIndex,
    SolveResult,
    SolverError,
    solve_feasibility,
    solve_mincost,
)
from .swapround import (
    RoundResult,
    SwapRoundError,
    fast_swap,
    merge_bases,
    shrink_intersection,
    swap_round_point,
)
from .sparsify import (SparsifyReport, keep_probabilities, sparsify,
                       verify_sparsified)
from .fr import (
    DegreeWitness,
    FrError,
    dfs_tree,
    fr_min_degree,
    fr_nonuniform,
    fr_reduce,
)
from .pipeline import (
    BdstResult,
    CrossingResult,
    InfeasibleError,
    PipelineError,
    bdst_sparse_pipeline,
    crossing_pipeline,
    estimate_min_degree,
)

__version__ = "0.1.0"
