"""Instance construction: the tightness protocol and test-suite generators.

Budgets are placed between two bounds per resource: the smallest possible
consumption over any start-goal path, and the consumption of the
unconstrained cost1-optimal path.  The interpolation factor delta in
[0,1] then fixes each budget (0 = tightest, 1 = the optimal path's own
usage).  The cost1-optimal path is made deterministic by minimising
(distance, hop count) lexicographically and keeping the smallest-id
predecessor among ties; the hop component rules out cycles even with
zero-cost edges.

The random generators are seeded; every suite is reproducible from its
seed, which callers should echo into their output.
"""

from __future__ import annotations

import heapq
import random
from fractions import Fraction

from .bounds import one_to_all_bound
from .graph import Direction, MultiCostGraph, ProblemInstance, TightnessSpec, compute_budget
from .vectors import INF

DELTA_GRID = (Fraction(1, 10), Fraction(3, 10), Fraction(5, 10), Fraction(7, 10), Fraction(9, 10))


def cost1_optimal_path(graph: MultiCostGraph, start: int, goal: int) -> list[int] | None:
    """A deterministic primary-cost-optimal start-goal path, or None."""
    adj = graph.adjacency(Direction.FORWARD)
    n = graph.state_count
    dist = [INF] * n
    hops = [INF] * n
    pred = [-1] * n
    dist[start] = 0
    hops[start] = 0
    heap = [(0, 0, start)]
    while heap:
        d, hp, u = heapq.heappop(heap)
        if (d, hp) > (dist[u], hops[u]):
            continue
        for v, cost in adj[u]:
            nd = d + cost[0]
            nh = hp + 1
            if (nd, nh) < (dist[v], hops[v]):
                dist[v] = nd
                hops[v] = nh
                pred[v] = u
                heapq.heappush(heap, (nd, nh, v))
            elif (nd, nh) == (dist[v], hops[v]) and u < pred[v]:
                pred[v] = u
    if dist[goal] >= INF:
        return None
    path = [goal]
    while path[-1] != start:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def path_cost(graph: MultiCostGraph, path: list[int]) -> tuple[int, ...]:
    """Cost vector of a concrete path, taking the cheapest-primary parallel arc."""
    adj = graph.adjacency(Direction.FORWARD)
    total = [0] * graph.k
    for u, v in zip(path, path[1:]):
        best = None
        for t, cost in adj[u]:
            if t == v and (best is None or cost[0] < best[0] or (cost[0] == best[0] and cost < best)):
                best = cost
        if best is None:
            raise ValueError(f"path uses missing edge ({u},{v})")
        for i in range(graph.k):
            total[i] += best[i]
    return tuple(total)


def tightness_limits(
    graph: MultiCostGraph, start: int, goal: int, delta: Fraction
) -> tuple[int, ...] | None:
    """Resource budgets for one pair at the given tightness, or None if unreachable."""
    path = cost1_optimal_path(graph, start, goal)
    if path is None:
        return None
    consumed = path_cost(graph, path)
    alive = bytearray(b"\x01") * graph.state_count
    mins = []
    for i in range(1, graph.k):
        bound = one_to_all_bound(graph, goal, i, Direction.FORWARD, alive)[start]
        mins.append(bound)
    spec = TightnessSpec(delta, tuple(mins), tuple(consumed[1:]))
    return tuple(compute_budget(spec, i) for i in range(graph.k - 1))


def random_instance(seed: int) -> ProblemInstance:
    """One seeded random instance: 6-14 states, 1.5-3 edges per state,
    integer costs 0-10 with at least one strictly positive resource per
    edge, k in {3,4}, tightness drawn from the usual delta grid."""
    rng = random.Random(seed)
    n = rng.randint(6, 14)
    k = rng.choice((3, 4))
    m = max(1, round(n * rng.uniform(1.5, 3.0)))
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        cost = [rng.randint(0, 10) for _ in range(k)]
        if all(c == 0 for c in cost[1:]):
            cost[rng.randint(1, k - 1)] = rng.randint(1, 10)
        edges.append((u, v, tuple(cost)))
    graph = MultiCostGraph(n, edges)
    start = rng.randrange(n)
    goal = rng.randrange(n)
    delta = rng.choice(DELTA_GRID)
    limits = tightness_limits(graph, start, goal, delta)
    if limits is None:
        limits = tuple(rng.randint(0, 30) for _ in range(k - 1))
    return ProblemInstance(graph, start, goal, limits)


def grid_graph(side: int, seed: int, k: int = 3) -> MultiCostGraph:
    """4-connected side x side grid; every directed arc gets independent
    random integer costs in 1-10."""
    rng = random.Random(seed)
    edges = []
    for r in range(side):
        for c in range(side):
            u = r * side + c
            for dr, dc in ((0, 1), (1, 0)):
                r2, c2 = r + dr, c + dc
                if r2 >= side or c2 >= side:
                    continue
                v = r2 * side + c2
                edges.append((u, v, tuple(rng.randint(1, 10) for _ in range(k))))
                edges.append((v, u, tuple(rng.randint(1, 10) for _ in range(k))))
    return MultiCostGraph(side * side, edges)


def grid_instance(
    graph: MultiCostGraph, seed: int, delta: Fraction
) -> ProblemInstance | None:
    """Random start/goal pair on a prebuilt grid with tightness-based limits."""
    rng = random.Random(seed)
    n = graph.state_count
    start = rng.randrange(n)
    goal = rng.randrange(n)
    while goal == start:
        goal = rng.randrange(n)
    limits = tightness_limits(graph, start, goal, delta)
    if limits is None:
        return None
    return ProblemInstance(graph, start, goal, limits)
