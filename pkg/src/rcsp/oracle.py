"""Brute-force ground truth for small instances.

Depth-first enumeration of start-goal paths with exact cost vectors,
entirely independent of the search machinery (its own inline arithmetic
and dominance filtering) so it can arbitrate the solvers' answers.  A
partial path is abandoned as soon as any resource exceeds its limit,
which is safe because edge costs are non-negative.  Never intended for
road-network scale.
"""

from __future__ import annotations

from .graph import Direction, ProblemInstance
from .status import SolveStatus
from .vectors import INF, CostVector

ENUMERATION_BUDGET = 10**6


class EnumerationBudgetExceeded(RuntimeError):
    """The instance is too large for exhaustive enumeration; shrink it."""


def enumerate_feasible(
    problem: ProblemInstance,
    simple_paths_only: bool = True,
    cost1_ceiling: int | None = None,
    budget: int = ENUMERATION_BUDGET,
) -> list[tuple[list[int], CostVector]]:
    """All feasible start-goal paths with their exact cost vectors.

    In simple mode a path never revisits a state; otherwise a primary-cost
    ceiling must be supplied to keep the enumeration finite on graphs with
    zero-primary-cost cycles.
    """
    if not simple_paths_only and cost1_ceiling is None:
        raise ValueError("non-simple enumeration requires a cost1 ceiling")
    graph = problem.graph
    adj = graph.adjacency(Direction.FORWARD)
    limits = problem.limits
    k = graph.k
    found: list[tuple[list[int], CostVector]] = []
    visited = [False] * graph.state_count
    counter = [0]

    def visit(u: int, g: list[int], path: list[int]) -> None:
        counter[0] += 1
        if counter[0] > budget:
            raise EnumerationBudgetExceeded(
                f"more than {budget} partial paths; use a smaller instance"
            )
        if u == problem.goal:
            found.append((path.copy(), tuple(g)))
            # goal may still be an interior state of a longer feasible path
        if simple_paths_only:
            visited[u] = True
        for v, cost in adj[u]:
            if simple_paths_only and visited[v]:
                continue
            ok = True
            for i in range(1, k):
                if g[i] + cost[i] > limits[i - 1]:
                    ok = False
                    break
            if not ok:
                continue
            g2 = [g[i] + cost[i] for i in range(k)]
            if cost1_ceiling is not None and g2[0] > cost1_ceiling:
                continue
            path.append(v)
            visit(v, g2, path)
            path.pop()
        if simple_paths_only:
            visited[u] = False

    visit(problem.start, [0] * k, [problem.start])
    return found


def oracle_answer(
    problem: ProblemInstance,
    simple_paths_only: bool = True,
    cost1_ceiling: int | None = None,
) -> tuple[SolveStatus, int, set[CostVector]]:
    """(status, optimal cost1, resource-unique non-dominated optimal vectors).

    Filters the enumeration down to minimum primary cost, then drops
    vectors whose resources are weakly dominated by another optimal
    vector (duplicates collapse to one representative).
    """
    feasible = enumerate_feasible(problem, simple_paths_only, cost1_ceiling)
    if not feasible:
        return SolveStatus.INFEASIBLE, INF, set()
    best = min(cost[0] for _, cost in feasible)
    optimal = {cost for _, cost in feasible if cost[0] == best}
    front = {
        v
        for v in optimal
        if not any(w != v and all(w[i] <= v[i] for i in range(1, len(v))) for w in optimal)
    }
    return SolveStatus.OPTIMAL, best, front
