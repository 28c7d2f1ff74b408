"""Direct reference implementation of sequential swap rounding (test oracle).

Folds merge over explicitly materialized trees, reusing the library's merge
loop so both implementations share the exchange-pair selection rules.
"""

from treepack.swapround import _merge


def swap_round_reference(g, deltas, trees, rng):
    """Sequential fold: C_{k+1} = merge(sum deltas so far, C_k, d_{k+1}, B_{k+1})."""
    endpoints = {e.eid: (e.u, e.v) for e in g.edges}
    cur = set(trees[0])
    acc = deltas[0]
    for delta, tree in zip(deltas[1:], trees[1:]):
        cur = _merge(acc, cur, delta, set(tree), endpoints, rng)
        acc += delta
    return frozenset(cur)
