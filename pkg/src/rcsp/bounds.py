"""Search initialization: heuristic lower bounds and network reduction.

Builds the per-direction heuristic tables h^f / h^b from k rounds of
single-criterion one-to-all searches, run from the last cost component
down to the primary one.  After each resource round the bidirectional
bounds are used to kill states that cannot lie on any feasible path
(their cheapest possible through-path already violates that resource's
budget); later rounds then run on the reduced graph, which sharpens the
remaining bounds.  The primary-cost round never kills states because no
upper bound on the primary cost is known yet.

Killed states are flagged in a separate alive mask rather than removed,
so state ids stay stable and the shared graph stays immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Direction, MultiCostGraph, ProblemInstance
from .vectors import INF, CostVector

HeuristicTable = list[CostVector]


def one_to_all_bound(
    graph: MultiCostGraph,
    root: int,
    component: int,
    direction: Direction,
    alive: bytearray | None = None,
) -> list[int]:
    """Exact minimum of one cost component from root to every state.

    The search runs on the graph of the opposite direction, so the result
    lower-bounds the remaining consumption of labels travelling in
    ``direction`` toward ``root``.  Unreachable (or dead) states get INF.
    """
    if alive is None:
        alive = bytearray(b"\x01") * graph.state_count
    indptr, targets, weights = graph.csr(direction.opposite)
    col = np.ascontiguousarray(weights[:, component])
    return kernels.dijkstra_csr(indptr, targets, col, alive, root)


@dataclass
class InitResult:
    """Heuristic tables plus the post-reduction alive mask."""

    hf: HeuristicTable
    hb: HeuristicTable
    alive: bytearray
    feasible: bool


def initialize(problem: ProblemInstance, reduce: bool = True) -> InitResult:
    """Compute h^f / h^b and, optionally, apply resource-based reduction.

    With ``reduce`` the rounds run from component k-1 down to 0 and every
    resource round kills states u with h^f_i(u) + h^b_i(u) > R_i before
    the next round.  A killed start or goal makes the instance infeasible
    outright.  Without ``reduce`` (the conventional initialization used by
    the baseline solver) all states stay alive.
    """
    graph = problem.graph
    n = graph.state_count
    k = graph.k
    fbar = problem.upper_bound()
    alive = bytearray(b"\x01") * n
    cols_f: list[list[int]] = [None] * k  # type: ignore[list-item]
    cols_b: list[list[int]] = [None] * k  # type: ignore[list-item]

    feasible = True
    for i in range(k - 1, -1, -1):
        df = one_to_all_bound(graph, problem.goal, i, Direction.FORWARD, alive)
        db = one_to_all_bound(graph, problem.start, i, Direction.BACKWARD, alive)
        cols_f[i] = df
        cols_b[i] = db
        if reduce and i >= 1:
            budget = fbar[i]
            for u in range(n):
                if alive[u]:
                    s = df[u] + db[u]  # python ints: no overflow, INF sentinels exceed any budget
                    if s > budget:
                        alive[u] = 0
            if not (alive[problem.start] and alive[problem.goal]):
                feasible = False
                break

    if not feasible:
        inf_vec = (INF,) * k
        return InitResult([inf_vec] * n, [inf_vec] * n, alive, False)

    inf_vec = (INF,) * k
    hf: HeuristicTable = [inf_vec] * n
    hb: HeuristicTable = [inf_vec] * n
    for u in range(n):
        if alive[u]:
            hf[u] = tuple(cols_f[i][u] for i in range(k))
            hb[u] = tuple(cols_b[i][u] for i in range(k))
    return InitResult(hf, hb, alive, True)
