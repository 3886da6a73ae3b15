"""Baseline bidirectional constrained A* (the improved RCBDA*).

Interleaved best-first search over two priority queues, guided by the
direction whose front label has the smaller f1.  Labels are dominance-
checked eagerly at generation time against the explored lists and never
re-checked at extraction, so dominated labels can still be expanded -
that inefficiency is a property of this algorithm and is left intact for
honest benchmarking against the enhanced variant.

Each direction only expands labels that have consumed at most half of the
critical resource budget; complete paths arise by joining forward and
backward labels meeting at a state.  Only the optimal primary cost is
reported (no path reconstruction).
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from heapq import heappop, heappush

from . import kernels
from .bounds import InitResult
from .graph import Direction, ProblemInstance
from .status import DirectionStats, SearchStats, SolveStatus
from .vectors import INF

TIMEOUT_CHECK_INTERVAL = 4096  # extractions between deadline polls


@dataclass
class SearchConfig:
    """Knobs shared by both solvers.

    kappa is the 1-based index of the critical resource whose budget is
    split between the directions; it defaults to the last attribute.
    Queue tie-breaking is fixed (larger g1 first, then smaller state id)
    so runs are deterministic; forward_first picks the direction preferred
    on equal front f1-values.
    """

    kappa: int | None = None
    forward_first: bool = True
    timeout: float | None = None

    def kappa_index(self, k: int) -> int:
        kappa = self.kappa if self.kappa is not None else k
        if not 2 <= kappa <= k:
            raise ValueError(f"critical resource index must be in [2,{k}], got {kappa}")
        return kappa - 1


@dataclass
class BaselineResult:
    status: SolveStatus
    cost1: int  # INF when infeasible
    stats: SearchStats = field(default_factory=SearchStats)


def solve_rcbda(
    problem: ProblemInstance,
    heuristics: InitResult,
    config: SearchConfig | None = None,
) -> BaselineResult:
    """Optimal primary cost of the instance, or INF if no path fits the limits."""
    config = config or SearchConfig()
    graph = problem.graph
    n = graph.state_count
    k = graph.k
    ki = config.kappa_index(k)
    stats = SearchStats()
    t0 = _time.perf_counter()

    if not heuristics.feasible:
        stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
        return BaselineResult(SolveStatus.INFEASIBLE, INF, stats)

    fbar = [INF, *problem.limits]
    h = (heuristics.hf, heuristics.hb)
    adj = (
        graph.alive_adjacency(Direction.FORWARD, heuristics.alive),
        graph.alive_adjacency(Direction.BACKWARD, heuristics.alive),
    )
    # explored g-vectors per (direction, state)
    xgs: tuple[list, list] = ([None] * n, [None] * n)
    dir_stats = (stats.fwd, stats.bwd)

    zero = (0,) * k
    # queue entries: (f1, -g1, state, seq, g)
    queues = ([], [])
    seqs = [0, 0]
    for d, root in ((0, problem.start), (1, problem.goal)):
        f_root = h[d][root]
        heappush(queues[d], (f_root[0], 0, root, 0, zero))
        seqs[d] = 1
        dir_stats[d].generated += 1

    deadline = None if config.timeout is None else t0 + config.timeout
    countdown = TIMEOUT_CHECK_INTERVAL
    status = SolveStatus.OPTIMAL
    prev_f1 = [0, 0]  # extracted f1 must be non-decreasing per direction

    while queues[0] or queues[1]:
        if queues[0] and queues[1]:
            d = 0 if _front_le(queues[0][0], queues[1][0], config.forward_first) else 1
        else:
            d = 0 if queues[0] else 1
        f1, _, state, _, g = heappop(queues[d])
        if f1 >= fbar[0]:
            break
        assert prev_f1[d] <= f1, "extraction order must be f1-monotone"
        prev_f1[d] = f1
        ds = dir_stats[d]
        ds.extracted += 1

        countdown -= 1
        if countdown == 0:
            countdown = TIMEOUT_CHECK_INTERVAL
            if deadline is not None and _time.perf_counter() > deadline:
                status = SolveStatus.TIMEOUT
                break

        if 2 * g[ki] <= fbar[ki]:
            children, n_bound, n_dom, n_scans = kernels.expand_baseline(
                adj[d][state], g, h[d], tuple(fbar), xgs[d]
            )
            ds.expanded += 1
            ds.pruned_bound += n_bound
            ds.pruned_dominated += n_dom
            ds.dominance_checks += n_scans
            q = queues[d]
            seq = seqs[d]
            for t, gc, fc in children:
                heappush(q, (fc[0], -gc[0], t, seq, gc))
                seq += 1
            seqs[d] = seq
            ds.generated += len(children)

        opp = xgs[1 - d][state]
        if opp:
            ds.matches += len(opp)
            _, inbound = kernels.match_scan(opp, g, tuple(fbar))
            for idx in inbound:
                j1 = g[0] + opp[idx][0]
                if j1 < fbar[0]:
                    fbar[0] = j1

        mine = xgs[d][state]
        if mine is None:
            xgs[d][state] = [g]
        else:
            mine.append(g)

    stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
    if status is SolveStatus.OPTIMAL and fbar[0] == INF:
        status = SolveStatus.INFEASIBLE
    return BaselineResult(status, fbar[0], stats)


def _front_le(front_f, front_b, forward_first: bool) -> bool:
    """Pick the forward queue iff its front wins the direction tie-break."""
    if front_f[0] != front_b[0]:
        return front_f[0] < front_b[0]
    return forward_first
